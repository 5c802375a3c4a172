//! Projected common and partial descent directions.
//!
//! For a row subset `G` of the Jacobian and step bounds `lo <= d <= hi`, the
//! direction is the minimizer of `max_i (G d)_i + ½‖d‖²`. The solver works on
//! the dual: maximize `q(λ) = λᵀG d(λ) + ½‖d(λ)‖²` over the simplex, where
//! `d(λ) = clip(-Gᵀλ, lo, hi)`. Every `d(λ)` is primal feasible, so the gap
//! `max(G d) - λᵀG d` certifies optimality. Accelerated projected gradient
//! ascent does the bulk of the work and an equality-constrained solve on the
//! current clipping pattern finishes it exactly in the common case.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, Parallelism};
use crate::pareto::{DecisionPoint, FrontSet};
use crate::problems::{BoxBounds, Jacobian};

/// Largest objective count supported by subset enumeration.
pub const MAX_OBJECTIVES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverSettings {
    pub dual_tolerance: f64,
    pub max_dual_iters: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            dual_tolerance: 1e-8,
            max_dual_iters: 10_000,
        }
    }
}

impl SolverSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.dual_tolerance > 0.0) || self.max_dual_iters == 0 {
            return Err(Error::InvalidParameter(format!("{self:?}")));
        }
        Ok(())
    }
}

/// A nonempty set of objective indices stored as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ObjectiveSubset(u32);

impl ObjectiveSubset {
    pub fn full(m: usize) -> Self {
        Self((1u32 << m) - 1)
    }

    pub fn singleton(j: usize) -> Self {
        Self(1 << j)
    }

    pub fn from_bits(bits: u32) -> Self {
        Self(bits)
    }

    pub fn from_indices(indices: &[usize]) -> Result<Self> {
        let mut bits = 0u32;
        for &j in indices {
            if j >= MAX_OBJECTIVES {
                return Err(Error::InvalidSubset);
            }
            bits |= 1 << j;
        }
        if bits == 0 {
            return Err(Error::InvalidSubset);
        }
        Ok(Self(bits))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, j: usize) -> bool {
        j < 32 && self.0 & (1 << j) != 0
    }

    pub fn is_full(self, m: usize) -> bool {
        self == Self::full(m)
    }

    /// Indices in increasing order.
    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|&j| self.contains(j)).collect()
    }

    /// Proper nonempty subsets of `{0..m}` in increasing bitmask order.
    pub fn proper_subsets(m: usize) -> impl Iterator<Item = ObjectiveSubset> {
        let full = if m == 0 { 0 } else { (1u32 << m) - 1 };
        (1..full).map(ObjectiveSubset)
    }
}

/// Solution of a direction subproblem.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionOutcome {
    pub v: Vec<f64>,
    /// Optimal value `D(x, v) + ½‖v‖²`, never positive.
    pub theta: f64,
    /// `max_{j ∈ subset} ∇f_j(x)ᵀv`.
    pub d_value: f64,
    pub subset: ObjectiveSubset,
}

/// Projected common descent direction over all objectives.
pub fn common_direction(
    x: &[f64],
    jac: &Jacobian,
    bounds: &BoxBounds,
    settings: &SolverSettings,
) -> Result<DirectionOutcome> {
    partial_direction(x, jac, ObjectiveSubset::full(jac.nrows()), bounds, settings)
}

/// Projected partial descent direction over the objectives in `subset`.
pub fn partial_direction(
    x: &[f64],
    jac: &Jacobian,
    subset: ObjectiveSubset,
    bounds: &BoxBounds,
    settings: &SolverSettings,
) -> Result<DirectionOutcome> {
    let (m, n) = jac.shape();
    if subset.is_empty() || m > MAX_OBJECTIVES || subset.indices().iter().any(|&j| j >= m) {
        return Err(Error::InvalidSubset);
    }
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.len(),
        });
    }
    if bounds.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: bounds.dim(),
        });
    }
    let rows = subset.indices();
    let g = jac.select_rows(rows.iter());
    let (lo, hi) = bounds.step_bounds(x);
    let d = solve_min_max(&g, &lo, &hi, settings)?;
    let gd = &g * DVector::from_column_slice(&d);
    let d_value = gd.max();
    let theta = d_value + 0.5 * norm_sq(&d);
    if theta >= 0.0 {
        return Ok(DirectionOutcome {
            v: vec![0.0; n],
            theta: 0.0,
            d_value: 0.0,
            subset,
        });
    }
    Ok(DirectionOutcome {
        v: d,
        theta,
        d_value,
        subset,
    })
}

/// All proper subsets whose partial direction has `θ^I < -dual_tolerance`,
/// in increasing bitmask order.
pub fn proper_subsets_with_descent(
    z: &[f64],
    jac: &Jacobian,
    bounds: &BoxBounds,
    settings: &SolverSettings,
) -> Result<Vec<DirectionOutcome>> {
    let mut out = Vec::new();
    for subset in ObjectiveSubset::proper_subsets(jac.nrows()) {
        let o = partial_direction(z, jac, subset, bounds, settings)?;
        if o.theta < -settings.dual_tolerance {
            out.push(o);
        }
    }
    Ok(out)
}

/// Common directions of every member of a set, with their Jacobians kept for reuse.
#[derive(Debug, Clone)]
pub struct ThetaSweep {
    /// One entry per member, in set order.
    pub entries: Vec<(DirectionOutcome, Jacobian)>,
    /// `Θ(X) = min θ`.
    pub min_theta: f64,
    /// Position of the first member attaining the minimum.
    pub argmin: usize,
}

impl ThetaSweep {
    /// Member positions sorted by ascending `θ`, ties by position.
    pub fn processing_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.entries.len()).collect();
        order.sort_by(|&a, &b| {
            self.entries[a]
                .0
                .theta
                .total_cmp(&self.entries[b].0.theta)
                .then(a.cmp(&b))
        });
        order
    }
}

/// Solves the common subproblem at every member of `set` and returns `Θ(set)`.
pub fn big_theta<F>(
    set: &FrontSet,
    jacobian: F,
    bounds: &BoxBounds,
    settings: &SolverSettings,
    mode: Parallelism,
) -> Result<ThetaSweep>
where
    F: Fn(&DecisionPoint) -> Result<Jacobian> + Sync + Send,
{
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let entries = exec::try_map(set.points(), mode, |p| {
        let jac = jacobian(p)?;
        let out = common_direction(p.x(), &jac, bounds, settings)?;
        Ok((out, jac))
    })?;
    let mut argmin = 0;
    for (i, e) in entries.iter().enumerate() {
        if e.0.theta < entries[argmin].0.theta {
            argmin = i;
        }
    }
    Ok(ThetaSweep {
        min_theta: entries[argmin].0.theta,
        argmin,
        entries,
    })
}

fn norm_sq(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum()
}

/// Dual evaluation at one `λ`.
struct DualPoint {
    lambda: Vec<f64>,
    d: Vec<f64>,
    /// Primal objective at `d`.
    primal: f64,
    /// Dual objective `q(λ)`.
    dual: f64,
    /// `∇q(λ) = G d(λ)`.
    grad: Vec<f64>,
}

struct Dual<'a> {
    g: &'a DMatrix<f64>,
    lo: &'a [f64],
    hi: &'a [f64],
}

impl Dual<'_> {
    /// Exact maximizer `λ = (t, 1 - t)` for two rows, plus the primal point
    /// rebuilt on its active set.
    ///
    /// `q'(t) = -bᵀd(t)` with `b = g_2 - g_1` is nonincreasing and piecewise
    /// linear between the points where a coordinate of `d` meets its bound.
    fn two_rows(&self) -> (f64, Vec<Vec<f64>>) {
        let n = self.g.ncols();
        let a: Vec<f64> = (0..n).map(|i| -self.g[(1, i)]).collect();
        let b: Vec<f64> = (0..n).map(|i| self.g[(1, i)] - self.g[(0, i)]).collect();
        let d_at = |t: f64| -> Vec<f64> {
            (0..n)
                .map(|i| (a[i] + t * b[i]).max(self.lo[i]).min(self.hi[i]))
                .collect()
        };
        let slope = |t: f64| -> f64 { -d_at(t).iter().zip(&b).map(|(d, b)| d * b).sum::<f64>() };
        if slope(0.0) <= 0.0 {
            return (0.0, Vec::new());
        }
        if slope(1.0) >= 0.0 {
            return (1.0, Vec::new());
        }
        let mut knots: Vec<f64> = vec![0.0, 1.0];
        for i in 0..n {
            if b[i] != 0.0 {
                for bound in [self.lo[i], self.hi[i]] {
                    let t = (bound - a[i]) / b[i];
                    if t.is_finite() && t > 0.0 && t < 1.0 {
                        knots.push(t);
                    }
                }
            }
        }
        knots.sort_by(f64::total_cmp);
        knots.dedup();
        // the slope changes sign inside exactly one bracket
        let (mut lo, mut hi) = (0, knots.len() - 1);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if slope(knots[mid]) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (tl, tr) = (knots[lo], knots[hi]);
        let (ql, qr) = (slope(tl), slope(tr));
        let t = if ql <= qr {
            tl
        } else {
            (tl + ql * (tr - tl) / (ql - qr)).clamp(tl, tr)
        };

        // A knot can sit within rounding of t, so the neighbouring brackets
        // are rebuilt as well and the caller keeps the best primal value.
        let rebuilt = (lo.saturating_sub(1)..(hi + 1).min(knots.len() - 1))
            .filter_map(|j| self.rebuild_two_rows(&a, &b, 0.5 * (knots[j] + knots[j + 1])))
            .collect();
        (t, rebuilt)
    }

    /// Primal point on the free set of `d(probe)` with both rows active:
    /// `d_F = a_F + t b_F` and `b_Fᵀ d_F = -b_Xᵀ d_X`. Eliminating `t` through
    /// the largest `|b_i|` keeps coordinates that balance huge gradient
    /// entries from being formed by cancellation.
    fn rebuild_two_rows(&self, a: &[f64], b: &[f64], probe: f64) -> Option<Vec<f64>> {
        let n = a.len();
        let mut d: Vec<f64> = (0..n)
            .map(|i| (a[i] + probe * b[i]).max(self.lo[i]).min(self.hi[i]))
            .collect();
        let free: Vec<usize> = (0..n)
            .filter(|&i| d[i] > self.lo[i] && d[i] < self.hi[i])
            .collect();
        let &p = free
            .iter()
            .filter(|&&i| b[i] != 0.0)
            .max_by(|&&i, &&j| b[i].abs().total_cmp(&b[j].abs()))?;
        let c: f64 = -(0..n)
            .filter(|i| free.binary_search(i).is_err())
            .map(|i| b[i] * d[i])
            .sum::<f64>();
        let (mut num, mut den) = (c, b[p]);
        for &i in free.iter().filter(|&&i| i != p) {
            let beta = b[i] / b[p];
            num -= b[i] * (a[i] - beta * a[p]);
            den += b[i] * beta;
        }
        let dp = num / den;
        for &i in &free {
            let value = if i == p {
                dp
            } else {
                a[i] - b[i] / b[p] * a[p] + b[i] / b[p] * dp
            };
            d[i] = value.max(self.lo[i]).min(self.hi[i]);
        }
        Some(d)
    }

    fn eval(&self, lambda: Vec<f64>) -> DualPoint {
        let n = self.g.ncols();
        let mut d = vec![0.0; n];
        for (i, di) in d.iter_mut().enumerate() {
            let mut u = 0.0;
            for (k, l) in lambda.iter().enumerate() {
                u -= self.g[(k, i)] * l;
            }
            *di = u.max(self.lo[i]).min(self.hi[i]);
        }
        let grad: Vec<f64> = (0..self.g.nrows())
            .map(|k| (0..n).map(|i| self.g[(k, i)] * d[i]).sum())
            .collect();
        let half = 0.5 * norm_sq(&d);
        let max = grad.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let dual = lambda.iter().zip(&grad).map(|(l, g)| l * g).sum::<f64>() + half;
        DualPoint {
            lambda,
            d,
            primal: max + half,
            dual,
            grad,
        }
    }

    /// Active-set Newton step: for every support, solves the stationarity
    /// system on the clipping pattern of `at`, moves towards the solution
    /// while staying on the simplex, and line-searches the concave dual along
    /// that segment. Returns the best point found if it beats `at`.
    fn newton(&self, at: &DualPoint) -> Option<DualPoint> {
        let (s, n) = self.g.shape();
        let free: Vec<usize> = (0..n)
            .filter(|&i| at.d[i] > self.lo[i] && at.d[i] < self.hi[i])
            .collect();
        let mut best: Option<DualPoint> = None;
        for mask in 1u32..(1 << s) {
            let support: Vec<usize> = (0..s).filter(|&k| mask & (1 << k) != 0).collect();
            let r = support.len();
            // [A 1; 1ᵀ 0][λ; t] = [b; 1] with A = G_F G_Fᵀ, b = G_fixed d_fixed
            let mut kkt = DMatrix::<f64>::zeros(r + 1, r + 1);
            let mut rhs = DVector::<f64>::zeros(r + 1);
            for (a, &ka) in support.iter().enumerate() {
                for (b, &kb) in support.iter().enumerate() {
                    kkt[(a, b)] = free.iter().map(|&i| self.g[(ka, i)] * self.g[(kb, i)]).sum();
                }
                kkt[(a, r)] = 1.0;
                kkt[(r, a)] = 1.0;
                rhs[a] = (0..n)
                    .filter(|i| free.binary_search(i).is_err())
                    .map(|i| self.g[(ka, i)] * at.d[i])
                    .sum();
            }
            rhs[r] = 1.0;
            let Some(sol) = kkt.lu().solve(&rhs) else {
                continue;
            };
            if sol.iter().any(|v| !v.is_finite()) {
                continue;
            }
            let mut target = vec![0.0; s];
            for (a, &k) in support.iter().enumerate() {
                target[k] = sol[a];
            }
            // longest step along at -> target that keeps λ ≥ 0
            let mut t_max = 1.0f64;
            for k in 0..s {
                if target[k] < 0.0 {
                    t_max = t_max.min(at.lambda[k] / (at.lambda[k] - target[k]));
                }
            }
            if !(t_max > 0.0) {
                continue;
            }
            let point = |t: f64| -> Vec<f64> {
                let l: Vec<f64> = at
                    .lambda
                    .iter()
                    .zip(&target)
                    .map(|(a, b)| (a + t * (b - a)).max(0.0))
                    .collect();
                let total: f64 = l.iter().sum();
                l.into_iter().map(|v| v / total).collect()
            };
            let mut p = self.eval(point(t_max));
            if p.dual <= at.dual {
                p = self.line_search(t_max, &point);
            }
            if best.as_ref().map_or(true, |b| p.dual > b.dual) {
                best = Some(p);
            }
        }
        best.filter(|b| b.dual > at.dual)
    }

    /// Primal candidates from the unreduced stationarity system on the
    /// clipping pattern of `at`, one per support:
    /// `d_F + G_SFᵀ λ = 0`, `G_SF d_F - t 1 = -G_S,fixed d_fixed`, `1ᵀλ = 1`.
    ///
    /// `d(λ)` amplifies errors in `λ` by the gradient scale, so near the
    /// optimum of badly scaled problems the dual iterates alone cannot certify
    /// the primal value; this system keeps the conditioning of `G` itself.
    fn primal_candidates(&self, at: &DualPoint) -> Vec<Vec<f64>> {
        let (s, n) = self.g.shape();
        let free: Vec<usize> = (0..n)
            .filter(|&i| at.d[i] > self.lo[i] && at.d[i] < self.hi[i])
            .collect();
        let f = free.len();
        let mut out = Vec::new();
        for mask in 1u32..(1 << s) {
            let support: Vec<usize> = (0..s).filter(|&k| mask & (1 << k) != 0).collect();
            let r = support.len();
            let size = f + r + 1;
            let mut sys = DMatrix::<f64>::zeros(size, size);
            let mut rhs = DVector::<f64>::zeros(size);
            for (a, &i) in free.iter().enumerate() {
                sys[(a, a)] = 1.0;
                for (b, &k) in support.iter().enumerate() {
                    sys[(a, f + b)] = self.g[(k, i)];
                    sys[(f + b, a)] = self.g[(k, i)];
                }
            }
            for (b, &k) in support.iter().enumerate() {
                sys[(f + b, f + r)] = -1.0;
                sys[(f + r, f + b)] = 1.0;
                rhs[f + b] = -(0..n)
                    .filter(|i| free.binary_search(i).is_err())
                    .map(|i| self.g[(k, i)] * at.d[i])
                    .sum::<f64>();
            }
            rhs[f + r] = 1.0;
            let Some(sol) = sys.lu().solve(&rhs) else {
                continue;
            };
            if sol.iter().any(|v| !v.is_finite()) {
                continue;
            }
            let mut d = at.d.clone();
            for (a, &i) in free.iter().enumerate() {
                d[i] = sol[a].max(self.lo[i]).min(self.hi[i]);
            }
            out.push(d);
        }
        out
    }

    /// Golden-section maximization of the concave dual over `t ∈ [0, t_max]`.
    fn line_search<F: Fn(f64) -> Vec<f64>>(&self, t_max: f64, point: &F) -> DualPoint {
        const RATIO: f64 = 0.618_033_988_749_895;
        let (mut a, mut b) = (0.0, t_max);
        let mut c = b - RATIO * (b - a);
        let mut e = a + RATIO * (b - a);
        let mut fc = self.eval(point(c));
        let mut fe = self.eval(point(e));
        for _ in 0..GOLDEN_STEPS {
            if fc.dual >= fe.dual {
                b = e;
                e = c;
                fe = fc;
                c = b - RATIO * (b - a);
                fc = self.eval(point(c));
            } else {
                a = c;
                c = e;
                fc = fe;
                e = a + RATIO * (b - a);
                fe = self.eval(point(e));
            }
        }
        if fc.dual >= fe.dual {
            fc
        } else {
            fe
        }
    }
}

/// `max_i (G d)_i + ½‖d‖²`.
fn primal_value(g: &DMatrix<f64>, d: &[f64]) -> f64 {
    let gd = g * DVector::from_column_slice(d);
    gd.max() + 0.5 * norm_sq(d)
}

/// Euclidean projection onto the probability simplex.
fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut tau = 0.0;
    for (i, ui) in u.iter().enumerate() {
        cumsum += ui;
        let t = (cumsum - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            tau = t;
        }
    }
    v.iter().map(|vi| (vi - tau).max(0.0)).collect()
}

/// Simplex grid with spacing `1 / res` in `s` dimensions.
fn simplex_grid(s: usize, res: usize) -> Vec<Vec<f64>> {
    fn rec(s: usize, left: usize, res: usize, cur: &mut Vec<f64>, out: &mut Vec<Vec<f64>>) {
        if s == 1 {
            cur.push(left as f64 / res as f64);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in 0..=left {
            cur.push(k as f64 / res as f64);
            rec(s - 1, left - k, res, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(s, res, res, &mut Vec::new(), &mut out);
    out
}

const POLISH_EVERY: usize = 10;
const POLISH_REPEATS: usize = 8;
const GOLDEN_STEPS: usize = 60;
const GRID_RES: usize = 10;

/// Minimizes `max_i (G d)_i + ½‖d‖²` over `lo <= d <= hi`.
pub fn solve_min_max(
    g: &DMatrix<f64>,
    lo: &[f64],
    hi: &[f64],
    settings: &SolverSettings,
) -> Result<Vec<f64>> {
    let (s, n) = g.shape();
    if s == 0 {
        return Err(Error::InvalidSubset);
    }
    let dual = Dual { g, lo, hi };
    if s == 1 {
        return Ok(dual.eval(vec![1.0]).d);
    }
    let lipschitz = g.iter().map(|v| v * v).sum::<f64>();
    if lipschitz == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let tol = settings.dual_tolerance;

    // d = 0 is always feasible with primal value 0
    let mut best_primal = (0.0, vec![0.0; n]);
    let mut best_dual = f64::NEG_INFINITY;
    let track = |p: &DualPoint, best_primal: &mut (f64, Vec<f64>), best_dual: &mut f64| {
        if p.primal < best_primal.0 {
            *best_primal = (p.primal, p.d.clone());
        }
        *best_dual = best_dual.max(p.dual);
    };
    let converged = |bp: f64, bd: f64| bp - bd <= tol * (1.0 + bp.abs());

    if s == 2 {
        let (t, rebuilt) = dual.two_rows();
        let exact = dual.eval(vec![t, 1.0 - t]);
        track(&exact, &mut best_primal, &mut best_dual);
        for d in dual.primal_candidates(&exact).into_iter().chain(rebuilt) {
            let value = primal_value(g, &d);
            if value < best_primal.0 {
                best_primal = (value, d);
            }
        }
        if converged(best_primal.0, best_dual) {
            return Ok(best_primal.1);
        }
    }

    let starts = if s <= 3 {
        simplex_grid(s, GRID_RES)
    } else {
        vec![vec![1.0 / s as f64; s]]
    };
    let mut current = starts
        .into_iter()
        .map(|l| dual.eval(l))
        .max_by(|a, b| a.dual.total_cmp(&b.dual))
        .expect("grid is nonempty");
    track(&current, &mut best_primal, &mut best_dual);

    let mut previous = current.lambda.clone();
    let mut momentum = 1.0f64;
    for iter in 0..settings.max_dual_iters {
        if iter % POLISH_EVERY == 0 {
            // each step may change the clipping pattern, so repeat while it helps
            for _ in 0..POLISH_REPEATS {
                let Some(p) = dual.newton(&current) else { break };
                track(&p, &mut best_primal, &mut best_dual);
                current = p;
                if converged(best_primal.0, best_dual) {
                    return Ok(best_primal.1);
                }
            }
            for d in dual.primal_candidates(&current) {
                let value = primal_value(g, &d);
                if value < best_primal.0 {
                    best_primal = (value, d);
                }
            }
            previous = current.lambda.clone();
            momentum = 1.0;
        }
        if converged(best_primal.0, best_dual) {
            return Ok(best_primal.1);
        }
        // FISTA step with restart whenever the dual objective drops
        let next_momentum = 0.5 * (1.0 + (1.0 + 4.0 * momentum * momentum).sqrt());
        let beta = (momentum - 1.0) / next_momentum;
        let y: Vec<f64> = current
            .lambda
            .iter()
            .zip(&previous)
            .map(|(c, p)| c + beta * (c - p))
            .collect();
        let at_y = dual.eval(project_simplex(&y));
        let stepped: Vec<f64> = at_y
            .lambda
            .iter()
            .zip(&at_y.grad)
            .map(|(l, g)| l + g / lipschitz)
            .collect();
        let candidate = dual.eval(project_simplex(&stepped));
        track(&candidate, &mut best_primal, &mut best_dual);
        if candidate.dual < current.dual {
            momentum = 1.0;
            previous = current.lambda.clone();
            let plain: Vec<f64> = current
                .lambda
                .iter()
                .zip(&current.grad)
                .map(|(l, g)| l + g / lipschitz)
                .collect();
            let p = dual.eval(project_simplex(&plain));
            track(&p, &mut best_primal, &mut best_dual);
            if p.dual >= current.dual {
                current = p;
            }
        } else {
            momentum = next_momentum;
            previous = std::mem::replace(&mut current, candidate).lambda;
        }
    }
    if converged(best_primal.0, best_dual) {
        return Ok(best_primal.1);
    }
    Err(Error::DualNonConvergence {
        iterations: settings.max_dual_iters,
        gap: best_primal.0 - best_dual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn jac(rows: &[&[f64]]) -> Jacobian {
        let n = rows[0].len();
        Jacobian::from_fn(rows.len(), n, |i, j| rows[i][j])
    }

    fn settings() -> SolverSettings {
        SolverSettings::default()
    }

    #[test]
    fn badly_scaled_rows_converge() {
        // one gradient carries a floored x^p derivative at its lower bound
        let g = DMatrix::from_row_slice(2, 5, &[
            1.70653426079538, 0.0, 0.01683280115194704, 0.0, 1.1723554797067472,
            -49999.99778909793, -0.0030201797050648477, 0.0, -0.0013822653739109711, 0.0,
        ]);
        let lo = [0.0, -0.9984899101474676, -1.0084164005759735, -0.9993088673130445, -1.5861777398533736];
        let hi = [1.0, 1.0015100898525324, 0.9915835994240265, 1.0006911326869554, 0.4138222601466264];
        let d = solve_min_max(&g, &lo, &hi, &settings()).unwrap();
        // q(λ) at λ = (0.999965869928404, 3.413007159591743e-5) bounds the optimum from below
        let dual_bound = -0.6873034395411982;
        let value = primal_value(&g, &d);
        assert!(value >= dual_bound - 1e-12 && value - dual_bound <= 1e-7, "{value}");
    }

    #[test]
    fn cancelling_rows_recover_a_tiny_free_coordinate() {
        // floored x^0.2 derivatives of opposite sign; the first coordinate of
        // the minimizer is the difference of two terms of size 2e7
        let cases: [([f64; 10], [f64; 5], [f64; 5], f64, f64); 2] = [
            (
                [
                    19999995.860594746, 0.0, -0.06725454450416257, 0.0, -0.1988194731885163,
                    -20000000.676533807, 0.06268551802488442, 0.0, -0.020420265116839698, 0.0,
                ],
                [0.0, -1.9823992753075959, -1.9174292440430722, -1.5775751197340533, -0.900590263405742],
                [1.0, 0.017600724692404257, 0.08257075595692764, 0.4224248802659466, 1.0994097365942581],
                -0.006049853454246475,
                4.963238067810869e-10,
            ),
            (
                [
                    19999997.94102307, 0.0, -0.032198510474469755, 0.0, -0.09928223282052655,
                    -19999999.85773446, 0.0566900710626872, 0.0, 0.030982807350926844, 0.0,
                ],
                [0.0, -1.9794015518264971, -1.9349572610579187, -1.6032766559679366, -0.9503588835897369],
                [1.0, 0.02059844817350287, 0.06504273894208124, 0.39672334403206333, 1.0496411164102633],
                -0.0018834256228820933,
                8.400010517465603e-11,
            ),
        ];
        // optimal values and first coordinates from exact rational bisection
        for (rows, lo, hi, optimum, d1) in cases {
            let g = DMatrix::from_row_slice(2, 5, &rows);
            let d = solve_min_max(&g, &lo, &hi, &settings()).unwrap();
            assert!((primal_value(&g, &d) - optimum).abs() <= 1e-10, "{}", primal_value(&g, &d));
            assert!((d[0] - d1).abs() <= 1e-6 * d1);
        }
    }

    #[test]
    fn single_gradient_unbounded() {
        let b = BoxBounds::unbounded(2);
        let o = common_direction(&[0.0, 0.0], &jac(&[&[2.0, -1.0]]), &b, &settings()).unwrap();
        assert_eq!(o.v, vec![-2.0, 1.0]);
        assert_abs_diff_eq!(o.theta, -2.5, epsilon = 1e-12);
    }

    #[test]
    fn lower_bound_blocks_descent() {
        let b = BoxBounds::uniform(1, 0.0, 1.0).unwrap();
        let o = common_direction(&[0.0], &jac(&[&[1.0]]), &b, &settings()).unwrap();
        assert_eq!(o.v, vec![0.0]);
        assert_eq!(o.theta, 0.0);
        let o = partial_direction(
            &[1.0],
            &jac(&[&[-1.0]]),
            ObjectiveSubset::singleton(0),
            &b,
            &settings(),
        )
        .unwrap();
        assert_eq!((o.v[0], o.theta), (0.0, 0.0));
    }

    #[test]
    fn opposing_gradients_are_stationary() {
        let b = BoxBounds::uniform(2, -10.0, 10.0).unwrap();
        let o = common_direction(&[0.0, 0.0], &jac(&[&[1.0, 0.0], &[-1.0, 0.0]]), &b, &settings())
            .unwrap();
        assert!(o.v.iter().all(|v| v.abs() < 1e-6));
        assert!(o.theta.abs() < 1e-8);
    }

    #[test]
    fn two_quadratics() {
        // F = (x², (x-2)²) at x = 3: gradients 6 and 2, minimizer d = -2
        let b = BoxBounds::uniform(1, -5.0, 5.0).unwrap();
        let o = common_direction(&[3.0], &jac(&[&[6.0], &[2.0]]), &b, &settings()).unwrap();
        assert_abs_diff_eq!(o.v[0], -2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(o.theta, -2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(o.d_value, -4.0, epsilon = 1e-9);
    }

    #[test]
    fn full_subset_matches_common() {
        let b = BoxBounds::uniform(3, -1.0, 1.0).unwrap();
        let j = jac(&[&[1.0, 2.0, -1.0], &[-0.5, 1.0, 3.0]]);
        let x = [0.2, -0.3, 0.9];
        let a = common_direction(&x, &j, &b, &settings()).unwrap();
        let p = partial_direction(&x, &j, ObjectiveSubset::full(2), &b, &settings()).unwrap();
        assert_eq!(a, p);
    }

    #[test]
    fn singleton_is_clipped_negative_gradient() {
        let b = BoxBounds::uniform(3, -1.0, 1.0).unwrap();
        let j = jac(&[&[1.0, 2.0, -1.0], &[-0.5, 1.0, 3.0]]);
        let x = [0.2, -0.3, 0.9];
        let o = partial_direction(&x, &j, ObjectiveSubset::singleton(1), &b, &settings()).unwrap();
        let expect: Vec<f64> = [0.5f64, -1.0, -3.0]
            .iter()
            .zip(&x)
            .map(|(g, xi): (&f64, &f64)| g.max(-1.0 - xi).min(1.0 - xi))
            .collect();
        assert_eq!(o.v, expect);
    }

    #[test]
    fn subset_enumeration() {
        let all: Vec<u32> = ObjectiveSubset::proper_subsets(2).map(|s| s.bits()).collect();
        assert_eq!(all, vec![1, 2]);
        assert_eq!(ObjectiveSubset::proper_subsets(3).count(), 6);
        assert_eq!(ObjectiveSubset::proper_subsets(1).count(), 0);
        let b = BoxBounds::unbounded(2);
        let zero = jac(&[&[0.0, 0.0], &[0.0, 0.0]]);
        assert!(proper_subsets_with_descent(&[0.0, 0.0], &zero, &b, &settings())
            .unwrap()
            .is_empty());
        assert!(partial_direction(&[0.0, 0.0], &zero, ObjectiveSubset::from_bits(0), &b, &settings())
            .is_err());
        assert!(ObjectiveSubset::from_indices(&[]).is_err());
    }

    #[test]
    fn simplex_projection() {
        let p = project_simplex(&[0.5, 0.5, 0.5]);
        for v in &p {
            assert_abs_diff_eq!(*v, 1.0 / 3.0, epsilon = 1e-15);
        }
        assert_eq!(project_simplex(&[3.0, -1.0]), vec![1.0, 0.0]);
        assert_eq!(simplex_grid(3, 10).len(), 66);
    }

    #[test]
    fn big_theta_picks_first_minimum() {
        let b = BoxBounds::unbounded(1);
        let set = FrontSet::filter_nondominated(vec![
            DecisionPoint::new(0, vec![2.0], vec![0.0, 1.0]),
            DecisionPoint::new(1, vec![1.0], vec![1.0, 0.0]),
        ]);
        // θ = -½ g² for a single objective: g = 2 -> -2, g = 1 -> -0.5
        let sweep = big_theta(
            &set,
            |p| Ok(jac(&[&[p.x()[0]]])),
            &b,
            &settings(),
            Parallelism::Sequential,
        )
        .unwrap();
        assert_eq!(sweep.min_theta, -2.0);
        assert_eq!(sweep.argmin, 0);
        assert_eq!(sweep.processing_order(), vec![0, 1]);
        assert!(matches!(
            big_theta(&FrontSet::new(), |_| unreachable!(), &b, &settings(), Parallelism::Sequential),
            Err(Error::EmptySet)
        ));
    }
}
