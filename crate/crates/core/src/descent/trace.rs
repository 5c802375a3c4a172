use serde::{Deserialize, Serialize};

/// Schema version written into every trace record.
pub const TRACE_VERSION: u32 = 1;

/// Invariant violations found while certifying one iteration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violations {
    /// Inserted points outside the box.
    pub infeasible: u64,
    /// New iterate sets that are not mutually nondominated.
    pub nondominance: u64,
    /// Phase 1 points refused by the working set because a member dominated them.
    pub insertion_rejected: u64,
    /// Reference set not mutually nondominated.
    pub reference_a: u64,
    /// Reference members not covered by any point of `X^k`.
    pub reference_b: u64,
    /// Points of `X^k` not covered by any reference member.
    pub reference_c: u64,
    /// `V(C^k) < max(V(X^{l(k)}), V(C^{k-1}))`.
    pub reference_growth: u64,
    /// Phase 1 point missing from the working set right after insertion.
    pub phase1_membership: u64,
    /// Phase 1 point not covered by the new iterate set.
    pub phase1_cover: u64,
    /// First processed point does not attain `Θ(X^k)`.
    pub processing_order: u64,
    /// Previous memory argmin missing from the window.
    pub memory_carry: u64,
    /// Monotone driver only: new iterate dominated by an old one.
    pub monotone_regress: u64,
}

impl Violations {
    pub fn total(&self) -> u64 {
        self.infeasible
            + self.nondominance
            + self.insertion_rejected
            + self.reference_a
            + self.reference_b
            + self.reference_c
            + self.reference_growth
            + self.phase1_membership
            + self.phase1_cover
            + self.processing_order
            + self.memory_carry
            + self.monotone_regress
    }

    pub fn accumulate(&mut self, other: &Violations) {
        self.infeasible += other.infeasible;
        self.nondominance += other.nondominance;
        self.insertion_rejected += other.insertion_rejected;
        self.reference_a += other.reference_a;
        self.reference_b += other.reference_b;
        self.reference_c += other.reference_c;
        self.reference_growth += other.reference_growth;
        self.phase1_membership += other.phase1_membership;
        self.phase1_cover += other.phase1_cover;
        self.processing_order += other.processing_order;
        self.memory_carry += other.memory_carry;
        self.monotone_regress += other.monotone_regress;
    }
}

/// Statistics of `X^k` and, when iteration `k` ran, of the iteration itself.
///
/// The last record of a run describes the final set only (`completed = false`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub version: u32,
    pub k: usize,
    /// `|X^k|`.
    pub size: usize,
    /// `V(X^k)` against the reference point at the start of iteration `k`.
    pub hv: Option<f64>,
    /// `Θ(X^k)`.
    pub big_theta: f64,
    pub sigma: f64,
    pub zeta: Vec<f64>,
    pub completed: bool,
    /// `|C^k|` (nonmonotone driver).
    pub reference_size: Option<usize>,
    /// `V(C^k)` (nonmonotone driver).
    pub hv_reference: Option<f64>,
    /// Iteration index `l(k)` of the memory set used to build `C^k`.
    pub memory_index: Option<usize>,
    /// Iteration index of the set chosen in the final merge.
    pub merge_index: Option<usize>,
    /// Points that passed the domination guard.
    pub processed: usize,
    /// Points skipped by the domination guard.
    pub skipped: usize,
    /// Phase 1 searches run (each accepted a positive step).
    pub searches: usize,
    /// Of those, searches measured against a reference point.
    pub nonmonotone_searches: usize,
    /// Sum of accepted phase 1 steps.
    pub alpha_sum: f64,
    /// Objective evaluations spent inside all searches.
    pub ls_trials: usize,
    pub exploration_points: usize,
    pub exploration_failures: usize,
    /// Phase 1 searches that ran out of backtracks; the point is kept as is.
    #[serde(default)]
    pub phase1_failures: usize,
    /// Points removed by crowding pruning.
    pub pruned: usize,
    /// Cumulative evaluation counts when the record was closed.
    pub objective_evals: u64,
    pub jacobian_evals: u64,
    /// Seconds since the run started, when the record was closed.
    pub wall_time_s: f64,
    pub violations: Violations,
}

impl IterationRecord {
    pub(crate) fn open(k: usize, size: usize, hv: Option<f64>, big_theta: f64, sigma: f64, zeta: Vec<f64>) -> Self {
        Self {
            version: TRACE_VERSION,
            k,
            size,
            hv,
            big_theta,
            sigma,
            zeta,
            completed: false,
            reference_size: None,
            hv_reference: None,
            memory_index: None,
            merge_index: None,
            processed: 0,
            skipped: 0,
            searches: 0,
            nonmonotone_searches: 0,
            alpha_sum: 0.0,
            ls_trials: 0,
            exploration_points: 0,
            exploration_failures: 0,
            phase1_failures: 0,
            pruned: 0,
            objective_evals: 0,
            jacobian_evals: 0,
            wall_time_s: 0.0,
            violations: Violations::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StopReason {
    MaxIterations,
    WallClock,
    /// `Θ(X^k) ≥ -σ` held for the whole stall window.
    Stalled,
}

/// Append-only per-iteration log of one run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub records: Vec<IterationRecord>,
}

impl RunTrace {
    /// Iterations actually executed.
    pub fn iterations(&self) -> usize {
        self.records.iter().filter(|r| r.completed).count()
    }

    pub fn processed_points(&self) -> usize {
        self.records.iter().map(|r| r.processed).sum()
    }

    pub fn phase1_searches(&self) -> usize {
        self.records.iter().map(|r| r.searches).sum()
    }

    pub fn alpha_sum(&self) -> f64 {
        self.records.iter().map(|r| r.alpha_sum).sum()
    }

    /// Objective evaluations at the end of the run, including the initial set.
    pub fn objective_evals(&self) -> u64 {
        self.records.last().map_or(0, |r| r.objective_evals)
    }

    pub fn violations(&self) -> Violations {
        let mut v = Violations::default();
        for r in &self.records {
            v.accumulate(&r.violations);
        }
        v
    }
}

/// Image sets of `X^k` and, for the nonmonotone driver, `C^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub k: usize,
    pub iterate: Vec<Vec<f64>>,
    pub reference: Option<Vec<Vec<f64>>>,
}
