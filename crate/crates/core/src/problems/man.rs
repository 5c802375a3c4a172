//! MAN_1: `f1 = sum (x_i - i)^2 / n^2`, `f2 = sum (exp(-x_i) + x_i)`, on `[-10, 100]^n`.
//!
//! The Pareto set is `{x : 0 <= x_i <= i}`; the box contains it for `n <= 100`.

use super::{BoxBounds, Jacobian, Problem};
use crate::error::{Error, Result};

pub const MAN_LOWER: f64 = -10.0;
pub const MAN_UPPER: f64 = 100.0;

#[derive(Debug, Clone)]
pub struct Man1 {
    bounds: BoxBounds,
}

impl Man1 {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::UnsupportedDimension {
                name: "MAN".into(),
                min: 1,
                n,
            });
        }
        Ok(Self {
            bounds: BoxBounds::uniform(n, MAN_LOWER, MAN_UPPER)?,
        })
    }
}

impl Problem for Man1 {
    fn name(&self) -> &str {
        "MAN"
    }

    fn bounds(&self) -> &BoxBounds {
        &self.bounds
    }

    fn num_objectives(&self) -> usize {
        2
    }

    fn objectives(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len() as f64;
        let f1 = x
            .iter()
            .enumerate()
            .map(|(i, v)| (v - (i + 1) as f64).powi(2))
            .sum::<f64>()
            / (n * n);
        let f2 = x.iter().map(|v| (-v).exp() + v).sum();
        vec![f1, f2]
    }

    fn jacobian(&self, x: &[f64]) -> Option<Jacobian> {
        let n = x.len();
        let scale = 2.0 / (n * n) as f64;
        Some(Jacobian::from_fn(2, n, |j, i| match j {
            0 => scale * (x[i] - (i + 1) as f64),
            _ => 1.0 - (-x[i]).exp(),
        }))
    }

    fn initial_points(&self) -> Vec<Vec<f64>> {
        vec![vec![-10.0; self.bounds.dim()]]
    }
}
