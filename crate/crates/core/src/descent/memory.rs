//! Hypervolume memory window and reference set construction of the
//! nonmonotone driver.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::hypervolume::front_hypervolume;
use crate::pareto::{leq, DecisionPoint, FrontSet};

#[derive(Debug, Clone, PartialEq)]
pub struct WindowEntry {
    /// Iteration index `j` of the stored set `X^j`.
    pub index: usize,
    pub set: FrontSet,
}

/// The last `memory + 1` iterate sets, plus the identity of the set picked by
/// the previous final merge.
#[derive(Debug, Clone, PartialEq)]
pub struct MemoryWindow {
    memory: usize,
    entries: VecDeque<WindowEntry>,
    prev_argmin: Option<usize>,
}

/// A set chosen from the window.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub index: usize,
    pub set: FrontSet,
    pub hv: f64,
    /// Whether the choice came from the previous merge rather than a fresh argmin.
    pub carried: bool,
}

impl MemoryWindow {
    pub fn new(memory: usize) -> Self {
        Self {
            memory,
            entries: VecDeque::with_capacity(memory + 1),
            prev_argmin: None,
        }
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn entries(&self) -> impl Iterator<Item = &WindowEntry> {
        self.entries.iter()
    }

    pub fn prev_argmin(&self) -> Option<usize> {
        self.prev_argmin
    }

    /// Stores `X^index`, dropping sets older than `index - memory`.
    pub fn push(&mut self, index: usize, set: FrontSet) {
        self.entries.push_back(WindowEntry { index, set });
        while self.entries.len() > self.memory + 1 {
            self.entries.pop_front();
        }
    }

    /// `X^{l(k)}`: the set picked by the previous merge when it is still in the
    /// window, otherwise the smallest-hypervolume set with ties to the oldest.
    pub fn select_reference_source(&self, zeta: &[f64]) -> Result<Selection> {
        if let Some(prev) = self.prev_argmin {
            if let Some(e) = self.entries.iter().find(|e| e.index == prev) {
                return Ok(Selection {
                    index: e.index,
                    hv: front_hypervolume(&e.set, zeta)?,
                    set: e.set.clone(),
                    carried: true,
                });
            }
        }
        let mut best: Option<(usize, f64)> = None;
        for (pos, e) in self.entries.iter().enumerate() {
            let hv = front_hypervolume(&e.set, zeta)?;
            if best.map_or(true, |(_, b)| hv < b) {
                best = Some((pos, hv));
            }
        }
        let (pos, hv) = best.ok_or(Error::EmptySet)?;
        Ok(Selection {
            index: self.entries[pos].index,
            set: self.entries[pos].set.clone(),
            hv,
            carried: false,
        })
    }

    /// `X̄^{l(k)}`: the smallest-hypervolume set among `working` (identity
    /// `k + 1`) and the last `memory` stored sets. Ties go to the oldest set.
    /// The choice is remembered for the next [`Self::select_reference_source`].
    pub fn select_merge_partner(&mut self, working: &FrontSet, k: usize, zeta: &[f64]) -> Result<Selection> {
        let skip = self.entries.len().saturating_sub(self.memory);
        let mut best: Option<Selection> = None;
        for e in self.entries.iter().skip(skip) {
            let hv = front_hypervolume(&e.set, zeta)?;
            if best.as_ref().map_or(true, |b| hv < b.hv) {
                best = Some(Selection {
                    index: e.index,
                    set: e.set.clone(),
                    hv,
                    carried: false,
                });
            }
        }
        let hv = front_hypervolume(working, zeta)?;
        if best.as_ref().map_or(true, |b| hv < b.hv) {
            best = Some(Selection {
                index: k + 1,
                set: working.clone(),
                hv,
                carried: false,
            });
        }
        let best = best.expect("working set is always a candidate");
        self.prev_argmin = Some(best.index);
        Ok(best)
    }

    /// Keeps only the points of every stored set that satisfy `keep`.
    pub fn restrict<F: Fn(&DecisionPoint) -> bool>(&mut self, keep: F) {
        for e in &mut self.entries {
            e.set.retain(|p| keep(p));
        }
    }
}

/// `C^k` from `X^k`, the memory set `X^{l(k)}` and `C^{k-1}`.
///
/// `C̄` is the nondominated part of `X^{l(k)} ∪ C^{k-1}`; `C^k` adds every point
/// of `X^k` that is not weakly better than some member of `C̄`.
pub fn build_reference_set(x: &FrontSet, x_l: &FrontSet, c_prev: &FrontSet) -> FrontSet {
    let c_bar = FrontSet::filter_nondominated(x_l.iter().chain(c_prev.iter()).cloned());
    let mut points = c_bar.points().to_vec();
    for p in x {
        if !c_bar.iter().any(|y| leq(p.fx(), y.fx())) {
            points.push(p.clone());
        }
    }
    FrontSet::from_points_unchecked(points)
}

/// Reference set predicates of `c` against `x`: counts of failures of (a)
/// mutual nondominance, (b) members of `c` not covered by `x`, (c) members of
/// `x` not covered by `c`.
pub fn reference_set_violations(c: &FrontSet, x: &FrontSet) -> (u64, u64, u64) {
    let a = u64::from(!c.is_stable());
    let b = c.iter().filter(|y| !x.covers(y.fx())).count() as u64;
    let cc = x
        .iter()
        .filter(|p| !c.iter().any(|y| leq(p.fx(), y.fx())))
        .count() as u64;
    (a, b, cc)
}
