//! Experiment runner around `front-descent`: config parsing, per-cell
//! artifacts, metrics with performance profiles and snapshot dumps.

pub mod artifact;
pub mod config;
mod error;
pub mod experiment;
pub mod report;

pub use artifact::{front_dump, write_front_dump, CellId, CellSummary, FrontDump};
pub use config::{ExperimentConfig, SnapshotPolicy, SolverSpec};
pub use error::{BenchError, Result};
pub use experiment::{cmd_run, plan, CellOutcome, RunReport};
pub use report::{cmd_metrics, DimFilter, MetricRow, MetricsOptions, MetricsReport};

use front_descent::problems::{by_name, NAMES};

/// One line per shipped problem: name, objectives, smallest dimension.
pub fn list_problems() -> Vec<String> {
    NAMES
        .iter()
        .map(|name| {
            let (n, problem) = (1..=10)
                .find_map(|n| by_name(name, n).ok().map(|p| (n, p)))
                .expect("every shipped problem exists for some small n");
            format!("{name:<9} m={} n>={n}", problem.num_objectives())
        })
        .collect()
}
