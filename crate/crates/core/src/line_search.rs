//! Armijo-type backtracking searches on the grid `α0 δ^h`.
//!
//! All three searches evaluate each trial point exactly once and hand the
//! accepted trial back so the caller never re-evaluates it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pareto::{leq, FrontSet, PointId};
use crate::problems::Instance;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArmijoParams {
    pub alpha0: f64,
    pub delta: f64,
    pub gamma: f64,
    pub max_backtracks: usize,
}

impl Default for ArmijoParams {
    fn default() -> Self {
        Self {
            alpha0: 1.0,
            delta: 0.5,
            gamma: 1e-4,
            max_backtracks: 60,
        }
    }
}

impl ArmijoParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.alpha0 > 0.0
            && self.alpha0 <= 1.0
            && self.delta > 0.0
            && self.delta < 1.0
            && self.gamma > 0.0
            && self.gamma < 1.0;
        if !ok {
            return Err(Error::InvalidParameter(format!("{self:?}")));
        }
        Ok(())
    }

    /// Step size of backtrack `h`.
    pub fn step(&self, h: usize) -> f64 {
        self.alpha0 * self.delta.powi(h as i32)
    }
}

/// Outcome of one search.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    /// Accepted step, or `0` when the search gave up.
    pub alpha: f64,
    /// Objective evaluations performed.
    pub trials: usize,
    /// Reference point that accepted the step (nonmonotone search only).
    pub reference_id: Option<PointId>,
    /// Accepted trial point and its objective values.
    pub trial: Option<(Vec<f64>, Vec<f64>)>,
    /// Set when the exploration search ran out of backtracks.
    pub exhausted: bool,
}

fn trial_point(instance: &Instance, x: &[f64], v: &[f64], alpha: f64) -> Vec<f64> {
    let mut y: Vec<f64> = x.iter().zip(v).map(|(xi, vi)| xi + alpha * vi).collect();
    // a no-op for steps inside the step bounds; guards user-supplied directions
    instance.bounds().clamp(&mut y);
    y
}

fn check_direction(x: &[f64], v: &[f64], d_value: f64) -> Result<()> {
    if x.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: v.len(),
        });
    }
    if !(d_value < 0.0) {
        return Err(Error::NotDescent { d_value });
    }
    Ok(())
}

/// Sufficient decrease against `base`: `F(y) ≤ base + γ α D` in every component.
fn armijo_ok(fy: &[f64], base: &[f64], gamma: f64, alpha: f64, d_value: f64) -> bool {
    fy.iter()
        .zip(base)
        .all(|(f, b)| *f <= b + gamma * alpha * d_value)
}

/// Classical multiobjective Armijo search from `x` along `v`.
pub fn monotone(
    instance: &Instance,
    x: &[f64],
    fx: &[f64],
    v: &[f64],
    d_value: f64,
    params: &ArmijoParams,
) -> Result<SearchResult> {
    check_direction(x, v, d_value)?;
    for h in 0..=params.max_backtracks {
        let alpha = params.step(h);
        let y = trial_point(instance, x, v, alpha);
        let fy = instance.evaluate(&y)?;
        if armijo_ok(&fy, fx, params.gamma, alpha, d_value) {
            return Ok(SearchResult {
                alpha,
                trials: h + 1,
                reference_id: None,
                trial: Some((y, fy)),
                exhausted: false,
            });
        }
    }
    Err(Error::MaxBacktracks {
        max_backtracks: params.max_backtracks,
    })
}

/// Nonmonotone search: the decrease is measured against any member `c` of
/// `candidates` with `F(x) ≤ F(c)`, re-chosen at every trial step. The first
/// such member in set order that accepts is recorded.
pub fn nonmonotone(
    instance: &Instance,
    x: &[f64],
    fx: &[f64],
    v: &[f64],
    d_value: f64,
    candidates: &FrontSet,
    params: &ArmijoParams,
) -> Result<SearchResult> {
    check_direction(x, v, d_value)?;
    let eligible: Vec<_> = candidates.iter().filter(|c| leq(fx, c.fx())).collect();
    if eligible.is_empty() {
        return Err(Error::NoEligibleReference);
    }
    for h in 0..=params.max_backtracks {
        let alpha = params.step(h);
        let y = trial_point(instance, x, v, alpha);
        let fy = instance.evaluate(&y)?;
        if let Some(c) = eligible
            .iter()
            .find(|c| armijo_ok(&fy, c.fx(), params.gamma, alpha, d_value))
        {
            return Ok(SearchResult {
                alpha,
                trials: h + 1,
                reference_id: Some(c.id()),
                trial: Some((y, fy)),
                exhausted: false,
            });
        }
    }
    Err(Error::MaxBacktracks {
        max_backtracks: params.max_backtracks,
    })
}

/// Exploration search from `z` along a partial direction: the trial must be
/// strictly better than every member of `set` in at least one objective.
///
/// Running out of backtracks is reported through `exhausted`, not an error.
pub fn exploration(
    instance: &Instance,
    z: &[f64],
    v: &[f64],
    set: &FrontSet,
    params: &ArmijoParams,
) -> Result<SearchResult> {
    if z.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: z.len(),
            got: v.len(),
        });
    }
    for h in 0..=params.max_backtracks {
        let alpha = params.step(h);
        let y = trial_point(instance, z, v, alpha);
        let fy = instance.evaluate(&y)?;
        let ok = set
            .iter()
            .all(|c| fy.iter().zip(c.fx()).any(|(a, b)| a < b));
        if ok {
            return Ok(SearchResult {
                alpha,
                trials: h + 1,
                reference_id: None,
                trial: Some((y, fy)),
                exhausted: false,
            });
        }
    }
    Ok(SearchResult {
        alpha: 0.0,
        trials: params.max_backtracks + 1,
        reference_id: None,
        trial: None,
        exhausted: true,
    })
}
