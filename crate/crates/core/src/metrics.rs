//! Post-run metrics and Dolan–Moré performance profiles.

use serde::{Deserialize, Serialize};

use crate::descent::RunTrace;
use crate::error::{Error, Result};
use crate::pareto::dominates;

/// Cost assigned to a zero purity after inversion.
pub const ZERO_PURITY_SENTINEL: f64 = 1e12;

/// Offset added to hypervolume differences so the best solver keeps a positive cost.
pub const HV_OFFSET: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Metric {
    Purity,
    Hypervolume,
    NfMean,
    AlphaMean,
}

impl Metric {
    pub const ALL: [Metric; 4] = [
        Metric::Purity,
        Metric::Hypervolume,
        Metric::NfMean,
        Metric::AlphaMean,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Purity => "purity",
            Metric::Hypervolume => "hv",
            Metric::NfMean => "nf_mean",
            Metric::AlphaMean => "alpha_mean",
        }
    }

    /// Maps a raw value to a positive cost where lower is better.
    ///
    /// Purity and mean step are inverted, hypervolume becomes its distance to
    /// `reference_hv` (the hypervolume of the combined front) plus
    /// [`HV_OFFSET`], and evaluations per point are already a cost.
    pub fn cost(self, raw: f64, reference_hv: f64) -> f64 {
        match self {
            Metric::Purity if raw == 0.0 => ZERO_PURITY_SENTINEL,
            Metric::Purity | Metric::AlphaMean => 1.0 / raw,
            Metric::Hypervolume => reference_hv - raw + HV_OFFSET,
            Metric::NfMean => raw,
        }
    }
}

/// Nondominated union of several fronts with duplicate images collapsed.
pub fn reference_front(fronts: &[Vec<Vec<f64>>]) -> Vec<Vec<f64>> {
    let all: Vec<&Vec<f64>> = fronts.iter().flatten().collect();
    let mut out: Vec<Vec<f64>> = Vec::new();
    for (i, p) in all.iter().enumerate() {
        let beaten = all.iter().any(|q| dominates(q, p));
        let repeated = all[..i].iter().any(|q| q == p);
        if !beaten && !repeated {
            out.push((*p).clone());
        }
    }
    out
}

/// Fraction of `front` whose images appear in `reference`.
pub fn purity(front: &[Vec<f64>], reference: &[Vec<f64>]) -> Result<f64> {
    if front.is_empty() {
        return Err(Error::EmptySet);
    }
    let hits = front.iter().filter(|p| reference.contains(p)).count();
    Ok(hits as f64 / front.len() as f64)
}

/// Objective evaluations per point processed by the main loop.
pub fn nf_mean(trace: &RunTrace) -> Result<f64> {
    let processed = trace.processed_points();
    if processed == 0 {
        return Err(Error::UndefinedMetric("no point was processed"));
    }
    Ok(trace.objective_evals() as f64 / processed as f64)
}

/// Mean accepted step of the phase 1 searches.
pub fn alpha_mean(trace: &RunTrace) -> Result<f64> {
    let n = trace.phase1_searches();
    if n == 0 {
        return Err(Error::UndefinedMetric("no line search was executed"));
    }
    Ok(trace.alpha_sum() / n as f64)
}

/// Step function `ρ_s(τ)` given by its breakpoints: `ρ(τ) = rho` for
/// `τ ∈ [tau_i, tau_{i+1})`, and `0` before the first breakpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub breakpoints: Vec<(f64, f64)>,
}

impl Profile {
    pub fn rho(&self, tau: f64) -> f64 {
        self.breakpoints
            .iter()
            .take_while(|(t, _)| *t <= tau)
            .last()
            .map_or(0.0, |(_, r)| *r)
    }
}

/// Dolan–Moré profiles of a cost matrix `costs[problem][solver]`.
///
/// Non-finite costs mark failures: their ratio is infinite and never counted.
pub fn performance_profiles(costs: &[Vec<f64>]) -> Result<Vec<Profile>> {
    let solvers = costs.first().map_or(0, Vec::len);
    if solvers == 0 {
        return Err(Error::EmptySet);
    }
    for row in costs {
        if row.len() != solvers {
            return Err(Error::DimensionMismatch {
                expected: solvers,
                got: row.len(),
            });
        }
        if row.iter().any(|&c| c <= 0.0 || c.is_nan()) {
            return Err(Error::Precondition("profile costs must be positive".into()));
        }
    }
    let problems = costs.len() as f64;
    let ratios: Vec<Vec<f64>> = costs
        .iter()
        .map(|row| {
            let best = row.iter().copied().fold(f64::INFINITY, f64::min);
            row.iter()
                .map(|&c| if best.is_finite() { c / best } else { f64::INFINITY })
                .collect()
        })
        .collect();
    Ok((0..solvers)
        .map(|s| {
            let mut r: Vec<f64> = ratios
                .iter()
                .map(|row| row[s])
                .filter(|v| v.is_finite())
                .collect();
            r.sort_by(f64::total_cmp);
            let mut breakpoints: Vec<(f64, f64)> = Vec::new();
            for (i, &tau) in r.iter().enumerate() {
                let rho = (i + 1) as f64 / problems;
                match breakpoints.last_mut() {
                    Some(last) if last.0 == tau => last.1 = rho,
                    _ => breakpoints.push((tau, rho)),
                }
            }
            Profile { breakpoints }
        })
        .collect())
}
