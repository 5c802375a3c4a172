//! ZDT_1 and ZDT_3 on `[0, 1]^n`.

use std::f64::consts::PI;

use super::{power_derivative, BoxBounds, Jacobian, Problem};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZdtKind {
    /// Convex front `f2 = 1 - sqrt(f1)`.
    Zdt1,
    /// Disconnected front with the `sin(10 pi f1)` term.
    Zdt3,
}

#[derive(Debug, Clone)]
pub struct Zdt {
    kind: ZdtKind,
    name: &'static str,
    bounds: BoxBounds,
}

impl Zdt {
    pub fn new(kind: ZdtKind, n: usize) -> Result<Self> {
        let name = match kind {
            ZdtKind::Zdt1 => "ZDT_1",
            ZdtKind::Zdt3 => "ZDT_3",
        };
        if n < 2 {
            return Err(Error::UnsupportedDimension {
                name: name.into(),
                min: 2,
                n,
            });
        }
        Ok(Self {
            kind,
            name,
            bounds: BoxBounds::uniform(n, 0.0, 1.0)?,
        })
    }

    fn g(&self, x: &[f64]) -> f64 {
        let n = x.len();
        1.0 + 9.0 / (n - 1) as f64 * x[1..].iter().sum::<f64>()
    }
}

impl Problem for Zdt {
    fn name(&self) -> &str {
        self.name
    }

    fn bounds(&self) -> &BoxBounds {
        &self.bounds
    }

    fn num_objectives(&self) -> usize {
        2
    }

    fn objectives(&self, x: &[f64]) -> Vec<f64> {
        let f1 = x[0];
        let g = self.g(x);
        let mut f2 = g - (f1 * g).sqrt();
        if self.kind == ZdtKind::Zdt3 {
            f2 -= f1 * (10.0 * PI * f1).sin();
        }
        vec![f1, f2]
    }

    fn jacobian(&self, x: &[f64]) -> Option<Jacobian> {
        let n = x.len();
        let g = self.g(x);
        let mut jac = Jacobian::zeros(2, n);
        jac[(0, 0)] = 1.0;
        // d/dx1 of -sqrt(x1 g)
        let mut d1 = -g.sqrt() * power_derivative(x[0], 0.5);
        if self.kind == ZdtKind::Zdt3 {
            let w = 10.0 * PI * x[0];
            d1 -= w.sin() + w * w.cos();
        }
        jac[(1, 0)] = d1;
        let dg = 1.0 - 0.5 * (x[0] / g).sqrt();
        let scale = 9.0 / (n - 1) as f64;
        for i in 1..n {
            jac[(1, i)] = dg * scale;
        }
        Some(jac)
    }

    fn initial_points(&self) -> Vec<Vec<f64>> {
        vec![vec![0.5; self.bounds.dim()]]
    }
}
