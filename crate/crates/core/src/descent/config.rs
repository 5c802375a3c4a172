use serde::{Deserialize, Serialize};

use crate::direction::SolverSettings;
use crate::error::{Error, Result};
use crate::exec::Parallelism;
use crate::line_search::ArmijoParams;

/// Which driver to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    /// Front projected descent with the classical Armijo search.
    Monotone,
    /// The nonmonotone extension with a hypervolume memory of `memory` past sets.
    Nonmonotone { memory: usize },
}

impl Variant {
    /// Solver label used in artifacts: `FPD` or `FPD_NMT`.
    pub fn label(&self) -> &'static str {
        match self {
            Variant::Monotone => "FPD",
            Variant::Nonmonotone { .. } => "FPD_NMT",
        }
    }

    pub fn memory(&self) -> Option<usize> {
        match self {
            Variant::Monotone => None,
            Variant::Nonmonotone { memory } => Some(*memory),
        }
    }
}

/// Stationarity threshold sequence `σ_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SigmaSchedule {
    Constant(f64),
    /// `σ_k = sigma0 * rho^k`.
    Geometric { sigma0: f64, rho: f64 },
}

impl Default for SigmaSchedule {
    fn default() -> Self {
        SigmaSchedule::Geometric {
            sigma0: 1e-2,
            rho: 0.9,
        }
    }
}

impl SigmaSchedule {
    pub fn at(&self, k: usize) -> f64 {
        match *self {
            SigmaSchedule::Constant(s) => s,
            SigmaSchedule::Geometric { sigma0, rho } => sigma0 * rho.powi(k.min(i32::MAX as usize) as i32),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StoppingRule {
    pub max_iterations: usize,
    /// Wall-clock budget in seconds, checked between iterations.
    pub wall_clock_secs: Option<f64>,
    /// With a constant `σ`, stop after this many consecutive sets with `Θ ≥ -σ`.
    pub stall_window: usize,
}

impl Default for StoppingRule {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            wall_clock_secs: None,
            stall_window: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriverConfig {
    pub variant: Variant,
    pub armijo: ArmijoParams,
    pub sigma: SigmaSchedule,
    /// Cap applied to every new iterate set by crowding pruning; `None` disables it.
    pub crowding_cap: Option<usize>,
    /// Nonmonotone only: pruning keeps a cover of `C^k` and the merge partner,
    /// exceeding the cap when that cover alone is larger. Off by default since
    /// a full reference set then pins the whole iterate set.
    pub protect_reference: bool,
    pub stop: StoppingRule,
    pub solver: SolverSettings,
    /// How the per-iteration direction sweep is executed.
    pub parallelism: Parallelism,
    /// Check the set invariants every iteration and count violations in the trace.
    pub certify: bool,
    /// Keep the image sets of `X^k` and `C^k` every this many iterations.
    pub snapshot_every: Option<usize>,
}

impl Default for DriverConfig {
    fn default() -> Self {
        Self {
            variant: Variant::Monotone,
            armijo: ArmijoParams::default(),
            sigma: SigmaSchedule::default(),
            crowding_cap: Some(100),
            protect_reference: false,
            stop: StoppingRule::default(),
            solver: SolverSettings::default(),
            parallelism: Parallelism::default(),
            certify: cfg!(debug_assertions),
            snapshot_every: None,
        }
    }
}

impl DriverConfig {
    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.stop.max_iterations = max_iterations;
        self
    }

    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.armijo.validate()?;
        self.solver.validate()?;
        if let Variant::Nonmonotone { memory: 0 } = self.variant {
            return Err(Error::InvalidParameter("memory must be at least 1".into()));
        }
        match self.sigma {
            SigmaSchedule::Constant(s) if !(s >= 0.0) => {
                return Err(Error::InvalidParameter(format!("sigma {s} must be >= 0")));
            }
            SigmaSchedule::Geometric { sigma0, rho } if !(sigma0 >= 0.0 && rho > 0.0 && rho < 1.0) => {
                return Err(Error::InvalidParameter(format!(
                    "geometric schedule needs sigma0 >= 0 and rho in (0, 1), got {sigma0}, {rho}"
                )));
            }
            _ => {}
        }
        if let Some(cap) = self.crowding_cap {
            if cap < 2 {
                return Err(Error::InvalidCap(cap));
            }
        }
        if self.snapshot_every == Some(0) {
            return Err(Error::InvalidParameter("snapshot interval must be positive".into()));
        }
        Ok(())
    }
}
