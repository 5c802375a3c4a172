//! Front projected descent for box-constrained multiobjective optimization.
//!
//! The crate provides the monotone front projected descent iteration
//! ([`Variant::Monotone`]) and its nonmonotone extension driven by a
//! reference set and a hypervolume memory window ([`Variant::Nonmonotone`]).
//! Around the drivers sit the building blocks they need: a benchmark problem
//! registry with analytic Jacobians, Pareto set utilities, a dual solver for
//! the projected min-max direction subproblems, the three Armijo-type
//! searches, exact hypervolume for up to three objectives, and post-run
//! metrics with performance profiles.
//!
//! ```
//! use front_descent::{problems, run, DriverConfig, Instance, Variant};
//!
//! let problem = problems::by_name("ZDT_1", 5).unwrap();
//! let instance = Instance::new(problem);
//! let config = DriverConfig {
//!     variant: Variant::Nonmonotone { memory: 4 },
//!     ..DriverConfig::default()
//! }
//! .with_max_iterations(10);
//! let output = run(&instance, &config).unwrap();
//! assert!(!output.front.is_empty());
//! ```

pub mod descent;
pub mod direction;
mod error;
pub mod exec;
pub mod hypervolume;
pub mod line_search;
pub mod metrics;
pub mod pareto;
pub mod problems;

pub use descent::{
    run, DriverConfig, IterationRecord, RunOutput, RunTrace, SigmaSchedule, Snapshot, StopReason,
    StoppingRule, Variant, Violations,
};
pub use direction::{DirectionOutcome, ObjectiveSubset, SolverSettings};
pub use error::{Error, Result};
pub use exec::Parallelism;
pub use hypervolume::{hypervolume, ReferenceTracker};
pub use line_search::{ArmijoParams, SearchResult};
pub use pareto::{DecisionPoint, FrontSet, ParetoOrdering, PointId};
pub use problems::{BoxBounds, EvalCounter, Instance, Jacobian, Problem};
