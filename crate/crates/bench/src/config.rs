//! Flat `key = value` experiment configuration.
//!
//! ```text
//! # comments start with '#'
//! problems = ZDT_1, JOS_1
//! dims = 5, 10
//! solvers = FPD, FPD_NMT, FPD_NMT:20
//! memory = 4
//! max_iterations = 200
//! sigma = geometric        # or a number for a constant threshold
//! output_dir = runs
//! ```
//!
//! A bare `FPD_NMT` uses `memory`; `FPD_NMT:M` pins its own window.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use front_descent::problems::by_name;
use front_descent::{DriverConfig, Parallelism, SigmaSchedule, Variant};

use crate::error::{BenchError, Result};

/// How often iterate and reference images are kept for `front-dump`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnapshotPolicy {
    /// Every iteration for `n <= 10`, every tenth otherwise.
    Auto,
    Every(usize),
    Never,
}

impl SnapshotPolicy {
    pub fn interval(self, n: usize) -> Option<usize> {
        match self {
            SnapshotPolicy::Auto if n <= 10 => Some(1),
            SnapshotPolicy::Auto => Some(10),
            SnapshotPolicy::Every(e) => Some(e),
            SnapshotPolicy::Never => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverSpec {
    pub variant: Variant,
}

impl SolverSpec {
    /// `FPD`, `FPD_NMT` for the default window of 4, `FPD_NMT_M{M}` otherwise.
    pub fn label(&self) -> String {
        match self.variant {
            Variant::Monotone => "FPD".into(),
            Variant::Nonmonotone { memory: 4 } => "FPD_NMT".into(),
            Variant::Nonmonotone { memory } => format!("FPD_NMT_M{memory}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub problems: Vec<String>,
    pub dims: Vec<usize>,
    /// Raw solver tokens; see [`ExperimentConfig::solvers`].
    pub solver_names: Vec<String>,
    /// Window length for bare `FPD_NMT` tokens.
    pub memory: usize,
    pub driver: DriverConfig,
    /// Reserved for randomized starts; every shipped algorithm is deterministic.
    pub seed: u64,
    pub output_dir: PathBuf,
    pub snapshots: SnapshotPolicy,
    /// Worker threads for the cell pool; `None` uses every core.
    pub workers: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let mut driver = DriverConfig::default();
        driver.parallelism = Parallelism::Sequential;
        Self {
            problems: vec!["ZDT_1".into()],
            dims: vec![5],
            solver_names: vec!["FPD".into(), "FPD_NMT".into()],
            memory: 4,
            driver,
            seed: 0,
            output_dir: PathBuf::from("runs"),
            snapshots: SnapshotPolicy::Auto,
            workers: None,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e: T::Err| BenchError::InvalidValue {
        key: key.into(),
        value: value.into(),
        reason: e.to_string(),
    })
}

fn list(value: &str) -> Vec<String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

fn optional<T: FromStr>(key: &str, value: &str) -> Result<Option<T>>
where
    T::Err: std::fmt::Display,
{
    match value {
        "none" | "off" => Ok(None),
        v => parse(key, v).map(Some),
    }
}

impl ExperimentConfig {
    /// Parses a config file body on top of the defaults.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut config = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| BenchError::Parse {
                line: i + 1,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            config.set(key.trim(), value.trim())?;
        }
        Ok(config)
    }

    /// Applies one setting; CLI overrides go through here too.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let d = &mut self.driver;
        match key {
            "problems" => self.problems = list(value),
            "dims" => {
                self.dims = list(value)
                    .iter()
                    .map(|v| parse(key, v))
                    .collect::<Result<_>>()?
            }
            "solvers" => self.solver_names = list(value),
            "memory" => self.memory = parse(key, value)?,
            "max_iterations" => d.stop.max_iterations = parse(key, value)?,
            "wall_clock_secs" => d.stop.wall_clock_secs = optional(key, value)?,
            "stall_window" => d.stop.stall_window = parse(key, value)?,
            "sigma" => {
                d.sigma = match value {
                    "geometric" => match d.sigma {
                        g @ SigmaSchedule::Geometric { .. } => g,
                        SigmaSchedule::Constant(_) => SigmaSchedule::default(),
                    },
                    v => SigmaSchedule::Constant(parse(key, v)?),
                }
            }
            "sigma0" | "rho" => {
                let (mut sigma0, mut rho) = match (d.sigma, SigmaSchedule::default()) {
                    (SigmaSchedule::Geometric { sigma0, rho }, _) => (sigma0, rho),
                    (_, SigmaSchedule::Geometric { sigma0, rho }) => (sigma0, rho),
                    _ => unreachable!("the default schedule is geometric"),
                };
                if key == "sigma0" {
                    sigma0 = parse(key, value)?;
                } else {
                    rho = parse(key, value)?;
                }
                d.sigma = SigmaSchedule::Geometric { sigma0, rho };
            }
            "alpha0" => d.armijo.alpha0 = parse(key, value)?,
            "delta" => d.armijo.delta = parse(key, value)?,
            "gamma" => d.armijo.gamma = parse(key, value)?,
            "max_backtracks" => d.armijo.max_backtracks = parse(key, value)?,
            "crowding_cap" => d.crowding_cap = optional(key, value)?,
            "dual_tolerance" => d.solver.dual_tolerance = parse(key, value)?,
            "max_dual_iters" => d.solver.max_dual_iters = parse(key, value)?,
            "certify" => d.certify = parse(key, value)?,
            "protect_reference" => d.protect_reference = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "output_dir" | "out" => self.output_dir = PathBuf::from(value),
            "snapshot_every" => {
                self.snapshots = match value {
                    "auto" => SnapshotPolicy::Auto,
                    "none" | "never" | "0" => SnapshotPolicy::Never,
                    v => SnapshotPolicy::Every(parse(key, v)?),
                }
            }
            "workers" => self.workers = optional(key, value)?,
            other => return Err(BenchError::UnknownKey(other.into())),
        }
        Ok(())
    }

    /// Solver specs resolved from the raw tokens.
    pub fn solvers(&self) -> Result<Vec<SolverSpec>> {
        self.solver_names
            .iter()
            .map(|name| {
                let upper = name.to_ascii_uppercase();
                let (base, memory) = match upper.split_once(':') {
                    Some((b, m)) => (b.to_string(), Some(parse::<usize>("solvers", m)?)),
                    None => (upper.clone(), None),
                };
                let variant = match base.as_str() {
                    "FPD" if memory.is_none() => Variant::Monotone,
                    "FPD_NMT" => Variant::Nonmonotone {
                        memory: memory.unwrap_or(self.memory),
                    },
                    _ => {
                        return Err(BenchError::InvalidValue {
                            key: "solvers".into(),
                            value: name.clone(),
                            reason: "expected FPD, FPD_NMT or FPD_NMT:M".into(),
                        })
                    }
                };
                Ok(SolverSpec { variant })
            })
            .collect()
    }

    /// Checks everything a run needs before any cell starts, including that
    /// every problem exists at every dimension.
    pub fn validate(&self) -> Result<()> {
        if self.problems.is_empty() || self.dims.is_empty() {
            return Err(BenchError::Config("problems and dims must be nonempty".into()));
        }
        let solvers = self.solvers()?;
        if solvers.is_empty() {
            return Err(BenchError::Config("solvers must be nonempty".into()));
        }
        if solvers.iter().any(|s| s.variant.memory() == Some(0)) {
            return Err(BenchError::Config("memory must be at least 1".into()));
        }
        let mut labels: Vec<String> = solvers.iter().map(SolverSpec::label).collect();
        labels.sort();
        labels.dedup();
        if labels.len() != solvers.len() {
            return Err(BenchError::Config("duplicate solver entries".into()));
        }
        if self.snapshots == SnapshotPolicy::Every(0) || self.workers == Some(0) {
            return Err(BenchError::Config("snapshot_every and workers must be positive".into()));
        }
        self.driver.validate()?;
        for p in &self.problems {
            for &n in &self.dims {
                by_name(p, n).map_err(|reason| BenchError::BadCell {
                    problem: p.clone(),
                    n,
                    reason,
                })?;
            }
        }
        Ok(())
    }

    /// Canonical text form; [`Self::from_text`] reads it back unchanged.
    pub fn to_text(&self) -> String {
        let d = &self.driver;
        let join = |v: &[String]| v.join(", ");
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("problems", join(&self.problems));
        kv(
            "dims",
            self.dims.iter().map(usize::to_string).collect::<Vec<_>>().join(", "),
        );
        kv("solvers", join(&self.solver_names));
        kv("memory", self.memory.to_string());
        kv("max_iterations", d.stop.max_iterations.to_string());
        kv(
            "wall_clock_secs",
            d.stop.wall_clock_secs.map_or("none".into(), |v| v.to_string()),
        );
        kv("stall_window", d.stop.stall_window.to_string());
        match d.sigma {
            SigmaSchedule::Constant(v) => kv("sigma", v.to_string()),
            SigmaSchedule::Geometric { sigma0, rho } => {
                kv("sigma", "geometric".into());
                kv("sigma0", sigma0.to_string());
                kv("rho", rho.to_string());
            }
        }
        kv("alpha0", d.armijo.alpha0.to_string());
        kv("delta", d.armijo.delta.to_string());
        kv("gamma", d.armijo.gamma.to_string());
        kv("max_backtracks", d.armijo.max_backtracks.to_string());
        kv("crowding_cap", d.crowding_cap.map_or("none".into(), |v| v.to_string()));
        kv("dual_tolerance", d.solver.dual_tolerance.to_string());
        kv("max_dual_iters", d.solver.max_dual_iters.to_string());
        kv("certify", d.certify.to_string());
        kv("protect_reference", d.protect_reference.to_string());
        kv("seed", self.seed.to_string());
        kv("output_dir", self.output_dir.display().to_string());
        kv(
            "snapshot_every",
            match self.snapshots {
                SnapshotPolicy::Auto => "auto".into(),
                SnapshotPolicy::Every(e) => e.to_string(),
                SnapshotPolicy::Never => "none".into(),
            },
        );
        kv("workers", self.workers.map_or("none".into(), |v| v.to_string()));
        s
    }
}
