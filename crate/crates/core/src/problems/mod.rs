//! Benchmark problems behind a uniform interface with evaluation counting.
//!
//! Shipped problems provide analytic Jacobians. User problems implementing
//! [`Problem`] may omit [`Problem::jacobian`]; [`Instance::jacobian`] then falls
//! back to central differences whose objective calls are not counted.

mod cec09;
mod jos;
mod man;
mod zdt;

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub use cec09::{Cec09, Cec09Kind};
pub use jos::Jos1;
pub use man::Man1;
pub use zdt::{Zdt, ZdtKind};

/// Row-major m x n Jacobian of the objective map.
pub type Jacobian = DMatrix<f64>;

/// Box `[lower, upper]`; infinite entries mean the side is unconstrained.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxBounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoxBounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        for (index, (&l, &u)) in lower.iter().zip(&upper).enumerate() {
            if l.is_nan() || u.is_nan() || l > u || l == f64::INFINITY || u == f64::NEG_INFINITY {
                return Err(Error::InvalidBounds {
                    index,
                    lower: l,
                    upper: u,
                });
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn uniform(n: usize, lower: f64, upper: f64) -> Result<Self> {
        Self::new(vec![lower; n], vec![upper; n])
    }

    pub fn unbounded(n: usize) -> Self {
        Self {
            lower: vec![f64::NEG_INFINITY; n],
            upper: vec![f64::INFINITY; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn is_finite(&self) -> bool {
        self.lower.iter().chain(&self.upper).all(|v| v.is_finite())
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&v, (&l, &u))| l <= v && v <= u)
    }

    /// Validates length, finiteness and membership.
    pub fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        for (index, &value) in x.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index });
            }
            let (lower, upper) = (self.lower[index], self.upper[index]);
            if value < lower || value > upper {
                return Err(Error::OutOfBounds {
                    index,
                    value,
                    lower,
                    upper,
                });
            }
        }
        Ok(())
    }

    pub fn clamp(&self, x: &mut [f64]) {
        for ((v, &l), &u) in x.iter_mut().zip(&self.lower).zip(&self.upper) {
            *v = v.max(l).min(u);
        }
    }

    /// Step bounds `lo <= d <= hi` such that `x + d` stays inside the box
    /// after floating-point rounding.
    pub fn step_bounds(&self, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut lo = Vec::with_capacity(x.len());
        let mut hi = Vec::with_capacity(x.len());
        for ((&xi, &l), &u) in x.iter().zip(&self.lower).zip(&self.upper) {
            let mut a = l - xi;
            while a.is_finite() && xi + a < l {
                a = a.next_up();
            }
            let mut b = u - xi;
            while b.is_finite() && xi + b > u {
                b = b.next_down();
            }
            lo.push(a.min(0.0));
            hi.push(b.max(0.0));
        }
        (lo, hi)
    }

    /// Points `l + t (u - l)` for `t = i / (count - 1)`; a single point is the box midpoint.
    pub fn diagonal(&self, count: usize) -> Vec<Vec<f64>> {
        let at = |t: f64| -> Vec<f64> {
            self.lower
                .iter()
                .zip(&self.upper)
                .map(|(&l, &u)| if t == 1.0 { u } else { l + t * (u - l) })
                .collect()
        };
        match count {
            0 => Vec::new(),
            1 => vec![at(0.5)],
            _ => (0..count)
                .map(|i| at(i as f64 / (count - 1) as f64))
                .collect(),
        }
    }
}

/// A box-constrained vector objective `F: R^n -> R^m`.
pub trait Problem: Send + Sync {
    fn name(&self) -> &str;

    fn bounds(&self) -> &BoxBounds;

    fn num_objectives(&self) -> usize;

    fn dim(&self) -> usize {
        self.bounds().dim()
    }

    /// Raw objective values; callers go through [`Instance::evaluate`].
    fn objectives(&self, x: &[f64]) -> Vec<f64>;

    /// Analytic Jacobian, if available.
    fn jacobian(&self, _x: &[f64]) -> Option<Jacobian> {
        None
    }

    /// Starting points of the benchmark protocol.
    fn initial_points(&self) -> Vec<Vec<f64>> {
        let b = self.bounds();
        let mid = b
            .lower()
            .iter()
            .zip(b.upper())
            .map(|(&l, &u)| match (l.is_finite(), u.is_finite()) {
                (true, true) => 0.5 * (l + u),
                (true, false) => l,
                (false, true) => u,
                (false, false) => 0.0,
            })
            .collect();
        vec![mid]
    }
}

/// Function and Jacobian evaluation counts for one run.
#[derive(Debug, Default)]
pub struct EvalCounter {
    objective: AtomicU64,
    jacobian: AtomicU64,
}

impl EvalCounter {
    pub fn objective_evals(&self) -> u64 {
        self.objective.load(Ordering::Relaxed)
    }

    pub fn jacobian_evals(&self) -> u64 {
        self.jacobian.load(Ordering::Relaxed)
    }
}

/// A problem handle carrying its own evaluation counter.
///
/// Cloning shares the counter; [`Instance::new`] always starts from zero.
#[derive(Clone)]
pub struct Instance {
    problem: Arc<dyn Problem>,
    counter: Arc<EvalCounter>,
}

impl fmt::Debug for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Instance")
            .field("name", &self.problem.name())
            .field("n", &self.problem.dim())
            .field("m", &self.problem.num_objectives())
            .field("counter", &self.counter)
            .finish()
    }
}

const FD_STEP: f64 = 1e-6;

impl Instance {
    pub fn new(problem: Arc<dyn Problem>) -> Self {
        Self {
            problem,
            counter: Arc::new(EvalCounter::default()),
        }
    }

    pub fn problem(&self) -> &Arc<dyn Problem> {
        &self.problem
    }

    pub fn name(&self) -> &str {
        self.problem.name()
    }

    pub fn dim(&self) -> usize {
        self.problem.dim()
    }

    pub fn num_objectives(&self) -> usize {
        self.problem.num_objectives()
    }

    pub fn bounds(&self) -> &BoxBounds {
        self.problem.bounds()
    }

    pub fn counter(&self) -> &EvalCounter {
        &self.counter
    }

    pub fn initial_points(&self) -> Vec<Vec<f64>> {
        self.problem.initial_points()
    }

    /// Evaluates `F(x)`, counting one objective evaluation.
    pub fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.bounds().check(x)?;
        self.counter.objective.fetch_add(1, Ordering::Relaxed);
        Ok(self.problem.objectives(x))
    }

    /// Evaluates `J_F(x)`, counting one Jacobian evaluation.
    pub fn jacobian(&self, x: &[f64]) -> Result<Jacobian> {
        self.bounds().check(x)?;
        self.counter.jacobian.fetch_add(1, Ordering::Relaxed);
        Ok(self
            .problem
            .jacobian(x)
            .unwrap_or_else(|| self.finite_difference_jacobian(x)))
    }

    fn finite_difference_jacobian(&self, x: &[f64]) -> Jacobian {
        let (n, m) = (self.dim(), self.num_objectives());
        let bounds = self.bounds();
        let mut jac = Jacobian::zeros(m, n);
        let mut probe = x.to_vec();
        for i in 0..n {
            let h = FD_STEP * x[i].abs().max(1.0);
            let up = (x[i] + h).min(bounds.upper()[i]);
            let down = (x[i] - h).max(bounds.lower()[i]);
            probe[i] = up;
            let f_up = self.problem.objectives(&probe);
            probe[i] = down;
            let f_down = self.problem.objectives(&probe);
            probe[i] = x[i];
            for j in 0..m {
                jac[(j, i)] = (f_up[j] - f_down[j]) / (up - down);
            }
        }
        jac
    }
}

/// Names accepted by [`by_name`].
pub const NAMES: &[&str] = &[
    "CEC09_1", "CEC09_2", "CEC09_3", "CEC09_4", "CEC09_5", "CEC09_6", "CEC09_7", "CEC09_8",
    "CEC09_9", "CEC09_10", "JOS_1", "MAN", "ZDT_1", "ZDT_3",
];

/// Builds a shipped problem by registry name at dimension `n`.
pub fn by_name(name: &str, n: usize) -> Result<Arc<dyn Problem>> {
    let upper = name.to_ascii_uppercase();
    let problem: Arc<dyn Problem> = match upper.as_str() {
        "ZDT_1" | "ZDT1" => Arc::new(Zdt::new(ZdtKind::Zdt1, n)?),
        "ZDT_3" | "ZDT3" => Arc::new(Zdt::new(ZdtKind::Zdt3, n)?),
        "JOS_1" | "JOS1" => Arc::new(Jos1::new(n)?),
        "MAN" | "MAN_1" | "MAN1" => Arc::new(Man1::new(n)?),
        other => {
            let index = other
                .strip_prefix("CEC09_")
                .or_else(|| other.strip_prefix("UF"))
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(|| Error::UnknownProblem(name.to_string()))?;
            let kind = Cec09Kind::from_index(index)
                .ok_or_else(|| Error::UnknownProblem(name.to_string()))?;
            Arc::new(Cec09::new(kind, n)?)
        }
    };
    Ok(problem)
}

/// Derivative of `t^p` for `0 < p < 1`, with `t` floored so the value stays
/// finite on the lower bound `t = 0`.
pub(crate) fn power_derivative(t: f64, p: f64) -> f64 {
    p * t.max(SINGULAR_FLOOR).powf(p - 1.0)
}

/// Floor applied to `x_1` where a shipped gradient contains `x_1^p`, `p < 1`.
pub const SINGULAR_FLOOR: f64 = 1e-10;

#[cfg(test)]
mod tests {
    use super::*;

    struct HalfSquare;

    impl Problem for HalfSquare {
        fn name(&self) -> &str {
            "half_square"
        }
        fn bounds(&self) -> &BoxBounds {
            static B: std::sync::OnceLock<BoxBounds> = std::sync::OnceLock::new();
            B.get_or_init(|| BoxBounds::uniform(1, -10.0, 10.0).unwrap())
        }
        fn num_objectives(&self) -> usize {
            1
        }
        fn objectives(&self, x: &[f64]) -> Vec<f64> {
            vec![0.5 * x[0] * x[0]]
        }
    }

    #[test]
    fn finite_difference_fallback() {
        let inst = Instance::new(Arc::new(HalfSquare));
        let jac = inst.jacobian(&[3.0]).unwrap();
        assert!((jac[(0, 0)] - 3.0).abs() < 1e-6);
        assert_eq!(inst.counter().jacobian_evals(), 1);
        assert_eq!(inst.counter().objective_evals(), 0);
    }

    #[test]
    fn evaluate_counts_exactly() {
        let inst = Instance::new(by_name("ZDT_1", 5).unwrap());
        for k in 1..=7 {
            inst.evaluate(&[0.5; 5]).unwrap();
            assert_eq!(inst.counter().objective_evals(), k);
        }
    }

    #[test]
    fn evaluate_rejects_bad_input() {
        let inst = Instance::new(by_name("ZDT_1", 3).unwrap());
        assert!(matches!(
            inst.evaluate(&[0.5, 0.5]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            inst.evaluate(&[0.5, f64::NAN, 0.5]),
            Err(Error::NonFinite { index: 1 })
        ));
        assert!(matches!(
            inst.evaluate(&[0.5, 1.5, 0.5]),
            Err(Error::OutOfBounds { index: 1, .. })
        ));
        assert!(inst.jacobian(&[-0.1, 0.0, 0.0]).is_err());
        assert_eq!(inst.counter().objective_evals(), 0);
    }

    #[test]
    fn bounds_validation() {
        assert!(BoxBounds::new(vec![1.0], vec![0.0]).is_err());
        assert!(BoxBounds::new(vec![0.0, 0.0], vec![1.0]).is_err());
        let b = BoxBounds::unbounded(2);
        assert!(b.contains(&[1e300, -1e300]));
        assert!(!b.is_finite());
    }

    #[test]
    fn step_bounds_keep_rounded_point_inside() {
        let b = BoxBounds::uniform(3, 0.1, 0.3).unwrap();
        let x = [0.1, 0.2, 0.30000000000000004f64.min(0.3)];
        let (lo, hi) = b.step_bounds(&x);
        for i in 0..3 {
            assert!(x[i] + lo[i] >= 0.1);
            assert!(x[i] + hi[i] <= 0.3);
        }
        let inf = BoxBounds::unbounded(1);
        let (lo, hi) = inf.step_bounds(&[2.0]);
        assert_eq!(lo[0], f64::NEG_INFINITY);
        assert_eq!(hi[0], f64::INFINITY);
    }

    #[test]
    fn registry_names_resolve() {
        for name in NAMES {
            let p = by_name(name, 5).unwrap();
            assert_eq!(p.dim(), 5);
        }
        assert!(matches!(by_name("ZDT_9", 5), Err(Error::UnknownProblem(_))));
        assert!(matches!(by_name("CEC09_11", 5), Err(Error::UnknownProblem(_))));
    }
}
