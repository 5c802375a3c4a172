//! JOS_1: two shifted spheres, `f1 = mean(x_i^2)`, `f2 = mean((x_i - 2)^2)`, on `[0, 100]^n`.

use super::{BoxBounds, Jacobian, Problem};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Jos1 {
    bounds: BoxBounds,
}

impl Jos1 {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::UnsupportedDimension {
                name: "JOS_1".into(),
                min: 1,
                n,
            });
        }
        Ok(Self {
            bounds: BoxBounds::uniform(n, 0.0, 100.0)?,
        })
    }
}

impl Problem for Jos1 {
    fn name(&self) -> &str {
        "JOS_1"
    }

    fn bounds(&self) -> &BoxBounds {
        &self.bounds
    }

    fn num_objectives(&self) -> usize {
        2
    }

    fn objectives(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len() as f64;
        let f1 = x.iter().map(|v| v * v).sum::<f64>() / n;
        let f2 = x.iter().map(|v| (v - 2.0) * (v - 2.0)).sum::<f64>() / n;
        vec![f1, f2]
    }

    fn jacobian(&self, x: &[f64]) -> Option<Jacobian> {
        let n = x.len();
        let scale = 2.0 / n as f64;
        Some(Jacobian::from_fn(2, n, |j, i| match j {
            0 => scale * x[i],
            _ => scale * (x[i] - 2.0),
        }))
    }

    fn initial_points(&self) -> Vec<Vec<f64>> {
        vec![vec![50.0; self.bounds.dim()]]
    }
}
