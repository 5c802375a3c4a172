//! Independent brute-force oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use rand::Rng;

/// `max_i g_i·d + ½‖d‖²`.
pub fn min_max_objective(g: &[Vec<f64>], d: &[f64]) -> f64 {
    let max = g
        .iter()
        .map(|row| row.iter().zip(d).map(|(a, b)| a * b).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max);
    max + 0.5 * d.iter().map(|v| v * v).sum::<f64>()
}

/// Result of [`grid_min_max`]: `lower ≤ min P ≤ upper`, with `d` attaining `upper`.
#[derive(Debug, Clone)]
pub struct GridBound {
    pub upper: f64,
    pub lower: f64,
    pub d: Vec<f64>,
}

/// Weak-duality value of a multiplier `lambda` and its primal candidate
/// `clip(-Gᵀλ, lo, hi)`.
fn dual_point(g: &[Vec<f64>], lo: &[f64], hi: &[f64], lambda: &[f64]) -> (f64, Vec<f64>) {
    let n = lo.len();
    let mut q = 0.0;
    let mut d = vec![0.0; n];
    for i in 0..n {
        let c: f64 = g.iter().zip(lambda).map(|(row, l)| row[i] * l).sum();
        d[i] = (-c).clamp(lo[i], hi[i]);
        q += c * d[i] + 0.5 * d[i] * d[i];
    }
    (q, d)
}

/// Brute-force bounds on `min_{lo ≤ d ≤ hi} max_i g_i·d + ½‖d‖²` from a
/// zooming grid over the multiplier simplex (at most two free coordinates for
/// three rows). Every grid multiplier gives a lower bound through weak duality
/// and a primal candidate whose value is an upper bound; `d = 0` is always a
/// candidate.
pub fn grid_min_max(g: &[Vec<f64>], lo: &[f64], hi: &[f64]) -> GridBound {
    const FIRST: usize = 401;
    const POINTS: usize = 41;
    const BEAM: usize = 4;
    const FINAL_CELL: f64 = 1e-12;
    let m = g.len();
    assert!((1..=3).contains(&m), "the grid oracle handles up to three rows");
    let free = m - 1;
    let mut best = GridBound {
        upper: min_max_objective(g, &vec![0.0; lo.len()]),
        lower: f64::NEG_INFINITY,
        d: vec![0.0; lo.len()],
    };
    let mut windows: Vec<(Vec<f64>, Vec<f64>, usize)> = vec![(vec![0.0; free], vec![1.0; free], FIRST)];
    loop {
        let mut found: Vec<(f64, Vec<f64>, f64)> = Vec::new();
        let mut max_cell: f64 = 0.0;
        for (wlo, whi, points) in &windows {
            let cells: Vec<f64> = wlo.iter().zip(whi).map(|(a, b)| (b - a) / (*points - 1) as f64).collect();
            max_cell = cells.iter().copied().fold(max_cell, f64::max);
            let mut idx = vec![0usize; free];
            loop {
                let coords: Vec<f64> = (0..free).map(|i| wlo[i] + idx[i] as f64 * cells[i]).collect();
                let rest = 1.0 - coords.iter().sum::<f64>();
                if rest >= -1e-15 {
                    let mut lambda = coords.clone();
                    lambda.push(rest.max(0.0));
                    let (q, d) = dual_point(g, lo, hi, &lambda);
                    let p = min_max_objective(g, &d);
                    if p < best.upper {
                        best.upper = p;
                        best.d = d;
                    }
                    best.lower = best.lower.max(q);
                    found.push((q, coords, cells.iter().copied().fold(0.0, f64::max)));
                }
                let mut c = 0;
                while c < free {
                    idx[c] += 1;
                    if idx[c] < *points {
                        break;
                    }
                    idx[c] = 0;
                    c += 1;
                }
                if c == free {
                    break;
                }
            }
        }
        if free == 0 || max_cell < FINAL_CELL {
            return best;
        }
        found.sort_by(|a, b| b.0.total_cmp(&a.0));
        found.dedup_by(|a, b| a.1 == b.1);
        windows = found
            .iter()
            .take(BEAM)
            .map(|(_, c, cell)| {
                let wlo = c.iter().map(|v| (v - 4.0 * cell).max(0.0)).collect();
                let whi = c.iter().map(|v| (v + 4.0 * cell).min(1.0)).collect();
                (wlo, whi, POINTS)
            })
            .collect();
    }
}

/// Monte-Carlo hypervolume over the box between the componentwise minimum
/// of the points and `zeta`: returns the estimate and its standard error.
pub fn hv_monte_carlo<R: Rng>(points: &[Vec<f64>], zeta: &[f64], samples: usize, rng: &mut R) -> (f64, f64) {
    let m = zeta.len();
    let kept: Vec<&Vec<f64>> = points
        .iter()
        .filter(|p| p.iter().zip(zeta).all(|(a, z)| a <= z))
        .collect();
    if kept.is_empty() {
        return (0.0, 0.0);
    }
    let low: Vec<f64> = (0..m)
        .map(|j| kept.iter().map(|p| p[j]).fold(f64::INFINITY, f64::min))
        .collect();
    let volume: f64 = (0..m).map(|j| zeta[j] - low[j]).product();
    let mut y = vec![0.0; m];
    let mut hits = 0usize;
    for _ in 0..samples {
        for j in 0..m {
            y[j] = rng.gen_range(low[j]..=zeta[j]);
        }
        if kept.iter().any(|p| p.iter().zip(&y).all(|(a, b)| a <= b)) {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    (volume * p, volume * (p * (1.0 - p) / samples as f64).sqrt())
}

/// Exact hypervolume by inclusion–exclusion over all nonempty subsets.
pub fn hv_inclusion_exclusion(points: &[Vec<f64>], zeta: &[f64]) -> f64 {
    let kept: Vec<&Vec<f64>> = points
        .iter()
        .filter(|p| p.iter().zip(zeta).all(|(a, z)| a <= z))
        .collect();
    let k = kept.len();
    let mut total = 0.0;
    for mask in 1u32..(1 << k) {
        let mut corner = vec![f64::NEG_INFINITY; zeta.len()];
        for (i, p) in kept.iter().enumerate() {
            if mask & (1 << i) != 0 {
                for (c, v) in corner.iter_mut().zip(p.iter()) {
                    *c = c.max(*v);
                }
            }
        }
        let vol: f64 = corner.iter().zip(zeta).map(|(c, z)| z - c).product();
        if mask.count_ones() % 2 == 1 {
            total += vol;
        } else {
            total -= vol;
        }
    }
    total
}

/// `count` points of the analytic ZDT_1 front `f2 = 1 - sqrt(f1)`, `f1 ∈ [0, 1]`.
pub fn zdt1_front(count: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|i| {
            let t = i as f64 / (count - 1) as f64;
            vec![t, 1.0 - t.sqrt()]
        })
        .collect()
}

/// Exact 2D hypervolume by sorting: independent of the library's sweep.
pub fn hv_2d_staircase(points: &[Vec<f64>], zeta: &[f64]) -> f64 {
    let mut pts: Vec<&Vec<f64>> = points
        .iter()
        .filter(|p| p[0] <= zeta[0] && p[1] <= zeta[1])
        .collect();
    // sweep along f2 this time: strips of constant f2 height
    pts.sort_by(|a, b| a[1].total_cmp(&b[1]).then(a[0].total_cmp(&b[0])));
    let mut right = zeta[0];
    let mut total = 0.0;
    for p in pts {
        if p[0] < right {
            total += (right - p[0]) * (zeta[1] - p[1]);
            right = p[0];
        }
    }
    total
}
