//! Pareto order on objective vectors, nondominated sets and crowding pruning.

use std::cmp::Ordering;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Identity token of a generated point, unique within one run.
pub type PointId = u64;

/// A feasible decision vector with its cached objective values.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionPoint {
    id: PointId,
    x: Arc<[f64]>,
    fx: Arc<[f64]>,
}

impl DecisionPoint {
    pub fn new(id: PointId, x: Vec<f64>, fx: Vec<f64>) -> Self {
        Self {
            id,
            x: x.into(),
            fx: fx.into(),
        }
    }

    pub fn id(&self) -> PointId {
        self.id
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn fx(&self) -> &[f64] {
        &self.fx
    }
}

/// Classification of `a` against `b` under the componentwise order.
///
/// `Less` means `a ⪇ b` without being strictly smaller in every component;
/// `StrictlyLess` means `a < b` componentwise. The `Greater` variants mirror them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParetoOrdering {
    Equal,
    StrictlyLess,
    Less,
    StrictlyGreater,
    Greater,
    Incomparable,
}

impl ParetoOrdering {
    pub fn compare(a: &[f64], b: &[f64]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: a.len(),
                got: b.len(),
            });
        }
        let (mut lt, mut gt, mut eq) = (0, 0, 0);
        for (x, y) in a.iter().zip(b) {
            match x.partial_cmp(y) {
                Some(Ordering::Less) => lt += 1,
                Some(Ordering::Greater) => gt += 1,
                Some(Ordering::Equal) => eq += 1,
                None => return Ok(ParetoOrdering::Incomparable),
            }
        }
        Ok(match (lt, gt) {
            (0, 0) => ParetoOrdering::Equal,
            (_, 0) if eq == 0 => ParetoOrdering::StrictlyLess,
            (_, 0) => ParetoOrdering::Less,
            (0, _) if eq == 0 => ParetoOrdering::StrictlyGreater,
            (0, _) => ParetoOrdering::Greater,
            _ => ParetoOrdering::Incomparable,
        })
    }

    /// `a ≤ b`.
    pub fn is_leq(self) -> bool {
        matches!(
            self,
            ParetoOrdering::Equal | ParetoOrdering::Less | ParetoOrdering::StrictlyLess
        )
    }

    /// `a ⪇ b`.
    pub fn is_dominating(self) -> bool {
        matches!(self, ParetoOrdering::Less | ParetoOrdering::StrictlyLess)
    }

    /// `a < b`.
    pub fn is_strictly_less(self) -> bool {
        self == ParetoOrdering::StrictlyLess
    }
}

/// `a ≤ b` componentwise.
#[inline]
pub fn leq(a: &[f64], b: &[f64]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// `a ⪇ b`: `a ≤ b` and `a ≠ b`.
#[inline]
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    leq(a, b) && a != b
}

/// `a < b` componentwise.
#[inline]
pub fn strictly_less(a: &[f64], b: &[f64]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).all(|(x, y)| x < y)
}

/// Outcome of [`FrontSet::insert`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Insertion {
    /// Added; the field counts members removed because the new point dominates them.
    Added(usize),
    /// A member already has the same objective vector; nothing changed.
    Duplicate,
    /// A member dominates the new point; nothing changed.
    Dominated,
}

/// An ordered collection of mutually nondominated points with distinct images.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FrontSet {
    points: Vec<DecisionPoint>,
}

impl FrontSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Keeps the points no other point dominates. Among equal images the
    /// earliest id survives (position breaks id ties). Input order is preserved.
    pub fn filter_nondominated<I>(points: I) -> Self
    where
        I: IntoIterator<Item = DecisionPoint>,
    {
        let all: Vec<DecisionPoint> = points.into_iter().collect();
        let keep: Vec<bool> = (0..all.len())
            .map(|i| {
                let p = &all[i];
                !all.iter().enumerate().any(|(j, q)| {
                    j != i
                        && (dominates(q.fx(), p.fx())
                            || (q.fx() == p.fx() && (q.id, j) < (p.id, i)))
                })
            })
            .collect();
        Self {
            points: all
                .into_iter()
                .zip(keep)
                .filter_map(|(p, k)| k.then_some(p))
                .collect(),
        }
    }

    /// Wraps points the caller knows to be mutually nondominated.
    pub(crate) fn from_points_unchecked(points: Vec<DecisionPoint>) -> Self {
        Self { points }
    }

    /// Adds `z` and drops every member it dominates, unless a member dominates
    /// or equals it.
    pub fn insert(&mut self, z: DecisionPoint) -> Insertion {
        for y in &self.points {
            if y.fx() == z.fx() {
                return Insertion::Duplicate;
            }
            if dominates(y.fx(), z.fx()) {
                return Insertion::Dominated;
            }
        }
        let before = self.points.len();
        self.points.retain(|y| !dominates(z.fx(), y.fx()));
        let removed = before - self.points.len();
        self.points.push(z);
        Insertion::Added(removed)
    }

    /// Whether some member `y` has `F(y) ⪇ fx`.
    pub fn is_dominated(&self, fx: &[f64]) -> bool {
        self.points.iter().any(|y| dominates(y.fx(), fx))
    }

    /// Whether some member `y` has `F(y) ≤ fx`.
    pub fn covers(&self, fx: &[f64]) -> bool {
        self.points.iter().any(|y| leq(y.fx(), fx))
    }

    /// Whether some member has exactly this objective vector.
    pub fn contains_value(&self, fx: &[f64]) -> bool {
        self.points.iter().any(|y| y.fx() == fx)
    }

    pub fn contains_id(&self, id: PointId) -> bool {
        self.points.iter().any(|y| y.id == id)
    }

    /// Mutual nondominance with distinct images.
    pub fn is_stable(&self) -> bool {
        let p = &self.points;
        (0..p.len()).all(|i| (0..p.len()).all(|j| i == j || !leq(p[i].fx(), p[j].fx())))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, DecisionPoint> {
        self.points.iter()
    }

    pub fn points(&self) -> &[DecisionPoint] {
        &self.points
    }

    pub fn into_points(self) -> Vec<DecisionPoint> {
        self.points
    }

    pub fn objectives(&self) -> Vec<&[f64]> {
        self.points.iter().map(|p| p.fx()).collect()
    }

    /// Keeps the members satisfying `keep`, preserving order.
    pub fn retain<F: FnMut(&DecisionPoint) -> bool>(&mut self, keep: F) {
        self.points.retain(keep);
    }

    /// Keeps the `cap` members with the largest crowding distance.
    ///
    /// Distances are computed once on the whole set; per-objective extremes get
    /// an infinite distance. Ties go to the earlier member and the survivors
    /// keep their relative order.
    pub fn crowding_prune(&self, cap: usize) -> Result<FrontSet> {
        self.crowding_prune_protecting(cap, &vec![false; self.len()])
    }

    /// Like [`Self::crowding_prune`], but members flagged in `protected` always
    /// survive and only the remaining slots are filled by crowding distance.
    /// The result exceeds `cap` when more than `cap` members are protected.
    pub fn crowding_prune_protecting(&self, cap: usize, protected: &[bool]) -> Result<FrontSet> {
        if cap < 2 {
            return Err(Error::InvalidCap(cap));
        }
        if protected.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: protected.len(),
            });
        }
        if self.len() <= cap {
            return Ok(self.clone());
        }
        let dist = crowding_distances(&self.objectives());
        let mut order: Vec<usize> = (0..self.len()).filter(|&i| !protected[i]).collect();
        order.sort_by(|&a, &b| dist[b].total_cmp(&dist[a]).then(a.cmp(&b)));
        let mut keep = protected.to_vec();
        let free_slots = cap.saturating_sub(protected.iter().filter(|&&p| p).count());
        for &i in order.iter().take(free_slots) {
            keep[i] = true;
        }
        Ok(Self {
            points: self
                .points
                .iter()
                .zip(keep)
                .filter_map(|(p, k)| k.then(|| p.clone()))
                .collect(),
        })
    }
}

impl<'a> IntoIterator for &'a FrontSet {
    type Item = &'a DecisionPoint;
    type IntoIter = std::slice::Iter<'a, DecisionPoint>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// NSGA-II crowding distances of a set of objective vectors.
pub fn crowding_distances(fx: &[&[f64]]) -> Vec<f64> {
    let n = fx.len();
    let mut dist = vec![0.0; n];
    if n == 0 {
        return dist;
    }
    let m = fx[0].len();
    let mut idx: Vec<usize> = (0..n).collect();
    for j in 0..m {
        idx.sort_by(|&a, &b| fx[a][j].total_cmp(&fx[b][j]).then(a.cmp(&b)));
        let (lo, hi) = (fx[idx[0]][j], fx[idx[n - 1]][j]);
        dist[idx[0]] = f64::INFINITY;
        dist[idx[n - 1]] = f64::INFINITY;
        let range = hi - lo;
        if range > 0.0 {
            for w in 1..n.saturating_sub(1) {
                dist[idx[w]] += (fx[idx[w + 1]][j] - fx[idx[w - 1]][j]) / range;
            }
        }
    }
    dist
}
