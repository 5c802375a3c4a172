//! Front projected descent drivers.
//!
//! [`Variant::Monotone`] runs the two-phase iteration with the classical Armijo
//! search. [`Variant::Nonmonotone`] adds the reference set `C^k` built from a
//! hypervolume memory window, measures phase 1 decrease against reference
//! points that are weakly worse than the current point, and merges the
//! smallest-hypervolume remembered set back into the new iterate set.
//!
//! Implementation choices worth knowing when reading traces:
//!
//! * Points are processed in ascending order of their cached `θ`, so the first
//!   processed point always attains `Θ(X^k)`.
//! * The memory set used to build `C^k` is the one picked by the previous final
//!   merge whenever it is still in the window.
//! * The hypervolume reference point only grows with points that enter the
//!   working set; rejected line-search trials never move it.
//! * Crowding pruning runs once per iteration on the new iterate set. When it
//!   removes points, the reference set and the window forget every point that
//!   only the removed points covered.

mod config;
mod driver;
pub mod memory;
mod trace;

pub use config::{DriverConfig, SigmaSchedule, StoppingRule, Variant};
pub use driver::{run, run_from, RunOutput};
pub use trace::{IterationRecord, RunTrace, Snapshot, StopReason, Violations, TRACE_VERSION};
