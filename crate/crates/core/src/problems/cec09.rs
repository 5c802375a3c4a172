//! The CEC 2009 unconstrained suite UF1..UF10, registered as `CEC09_1..CEC09_10`.
//!
//! Every objective has the shape `head_k(x_1[, x_2]) + 2/|J_k| * agg_k(y_J)`,
//! where `y_j` is a per-coordinate residual against the Pareto set and `J_k`
//! splits the tail coordinates by index parity (two objectives) or index
//! modulo three (three objectives). Empty groups contribute nothing.
//!
//! Formulas follow the CEC 2009 competition technical report (Zhang et al.,
//! "Multiobjective optimization test instances for the CEC 2009 special
//! session and competition"), including its per-instance boxes.

use std::f64::consts::PI;

use super::{power_derivative, BoxBounds, Jacobian, Problem};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cec09Kind {
    Uf1,
    Uf2,
    Uf3,
    Uf4,
    Uf5,
    Uf6,
    Uf7,
    Uf8,
    Uf9,
    Uf10,
}

impl Cec09Kind {
    pub fn from_index(index: usize) -> Option<Self> {
        use Cec09Kind::*;
        [Uf1, Uf2, Uf3, Uf4, Uf5, Uf6, Uf7, Uf8, Uf9, Uf10]
            .get(index.checked_sub(1)?)
            .copied()
    }

    fn name(self) -> &'static str {
        use Cec09Kind::*;
        match self {
            Uf1 => "CEC09_1",
            Uf2 => "CEC09_2",
            Uf3 => "CEC09_3",
            Uf4 => "CEC09_4",
            Uf5 => "CEC09_5",
            Uf6 => "CEC09_6",
            Uf7 => "CEC09_7",
            Uf8 => "CEC09_8",
            Uf9 => "CEC09_9",
            Uf10 => "CEC09_10",
        }
    }

    fn num_objectives(self) -> usize {
        match self {
            Cec09Kind::Uf8 | Cec09Kind::Uf9 | Cec09Kind::Uf10 => 3,
            _ => 2,
        }
    }

    fn aggregate(self) -> Aggregate {
        use Cec09Kind::*;
        match self {
            Uf1 | Uf2 | Uf7 | Uf8 | Uf9 => Aggregate::Squares,
            Uf3 | Uf6 => Aggregate::CosProduct,
            Uf4 => Aggregate::Sigmoidal,
            Uf5 => Aggregate::Cosine(4.0 * PI, 2.0),
            Uf10 => Aggregate::Cosine(8.0 * PI, 4.0),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Aggregate {
    /// `sum y^2`
    Squares,
    /// `4 sum y^2 - 2 prod cos(20 pi y_j / sqrt(j)) + 2`
    CosProduct,
    /// `sum |y| / (1 + exp(2|y|))`
    Sigmoidal,
    /// `sum c y^2 - cos(w y) + 1` for `(w, c)`
    Cosine(f64, f64),
}

/// Residual value with partials w.r.t. `x_1` and `x_2` (`d/dx_j = 1`).
#[derive(Debug, Clone, Copy)]
struct Residual {
    j: usize,
    value: f64,
    d1: f64,
    d2: f64,
}

#[derive(Debug, Clone)]
pub struct Cec09 {
    kind: Cec09Kind,
    bounds: BoxBounds,
    /// 1-based tail indices per objective.
    groups: Vec<Vec<usize>>,
}

impl Cec09 {
    pub fn new(kind: Cec09Kind, n: usize) -> Result<Self> {
        let m = kind.num_objectives();
        let min = match kind {
            Cec09Kind::Uf3 | Cec09Kind::Uf8 | Cec09Kind::Uf9 | Cec09Kind::Uf10 => 3,
            _ => 2,
        };
        if n < min {
            return Err(Error::UnsupportedDimension {
                name: kind.name().into(),
                min,
                n,
            });
        }
        let (head, tail) = match kind {
            Cec09Kind::Uf3 => (1, (0.0, 1.0)),
            Cec09Kind::Uf4 => (1, (-2.0, 2.0)),
            Cec09Kind::Uf8 | Cec09Kind::Uf9 | Cec09Kind::Uf10 => (2, (0.0, 0.0)),
            _ => (1, (-1.0, 1.0)),
        };
        let (tail_lo, tail_hi) = if m == 3 { (-2.0, 2.0) } else { tail };
        let lower = (0..n)
            .map(|i| if i < head { 0.0 } else { tail_lo })
            .collect();
        let upper = (0..n)
            .map(|i| if i < head { 1.0 } else { tail_hi })
            .collect();
        let mut groups = vec![Vec::new(); m];
        if m == 2 {
            for j in 2..=n {
                groups[if j % 2 == 1 { 0 } else { 1 }].push(j);
            }
        } else {
            for j in 3..=n {
                groups[match j % 3 {
                    1 => 0,
                    2 => 1,
                    _ => 2,
                }]
                .push(j);
            }
        }
        Ok(Self {
            kind,
            bounds: BoxBounds::new(lower, upper)?,
            groups,
        })
    }

    fn residual(&self, x: &[f64], j: usize) -> Residual {
        use Cec09Kind::*;
        let n = x.len() as f64;
        let jf = j as f64;
        let xj = x[j - 1];
        let x1 = x[0];
        match self.kind {
            Uf3 => {
                let p = 0.5 * (1.0 + 3.0 * (jf - 2.0) / (n - 2.0));
                Residual {
                    j,
                    value: xj - x1.powf(p),
                    d1: -power_derivative(x1, p),
                    d2: 0.0,
                }
            }
            Uf2 => {
                let phase = 24.0 * PI * x1 + 4.0 * jf * PI / n;
                let amp = 0.3 * x1 * x1 * phase.cos() + 0.6 * x1;
                let amp_d = 0.6 * x1 * phase.cos() - 0.3 * x1 * x1 * 24.0 * PI * phase.sin() + 0.6;
                let t = 6.0 * PI * x1 + jf * PI / n;
                let (trig, trig_d) = if j % 2 == 1 {
                    (t.cos(), -6.0 * PI * t.sin())
                } else {
                    (t.sin(), 6.0 * PI * t.cos())
                };
                Residual {
                    j,
                    value: xj - amp * trig,
                    d1: -(amp_d * trig + amp * trig_d),
                    d2: 0.0,
                }
            }
            Uf8 | Uf9 | Uf10 => {
                let x2 = x[1];
                let t = 2.0 * PI * x1 + jf * PI / n;
                Residual {
                    j,
                    value: xj - 2.0 * x2 * t.sin(),
                    d1: -2.0 * x2 * 2.0 * PI * t.cos(),
                    d2: -2.0 * t.sin(),
                }
            }
            Uf1 | Uf4 | Uf5 | Uf6 | Uf7 => {
                let t = 6.0 * PI * x1 + jf * PI / n;
                Residual {
                    j,
                    value: xj - t.sin(),
                    d1: -6.0 * PI * t.cos(),
                    d2: 0.0,
                }
            }
        }
    }

    /// Aggregate value and its derivative w.r.t. each residual.
    fn aggregate(&self, ys: &[Residual]) -> (f64, Vec<f64>) {
        match self.kind.aggregate() {
            Aggregate::Squares => (
                ys.iter().map(|r| r.value * r.value).sum(),
                ys.iter().map(|r| 2.0 * r.value).collect(),
            ),
            Aggregate::Sigmoidal => {
                let mut value = 0.0;
                let grads = ys
                    .iter()
                    .map(|r| {
                        let a = r.value.abs();
                        let e = (2.0 * a).exp();
                        value += a / (1.0 + e);
                        let da = ((1.0 + e) - 2.0 * a * e) / ((1.0 + e) * (1.0 + e));
                        signum0(r.value) * da
                    })
                    .collect();
                (value, grads)
            }
            Aggregate::Cosine(w, c) => (
                ys.iter()
                    .map(|r| c * r.value * r.value - (w * r.value).cos() + 1.0)
                    .sum(),
                ys.iter()
                    .map(|r| 2.0 * c * r.value + w * (w * r.value).sin())
                    .collect(),
            ),
            Aggregate::CosProduct => {
                let freq: Vec<f64> = ys.iter().map(|r| 20.0 * PI / (r.j as f64).sqrt()).collect();
                let cos: Vec<f64> = ys.iter().zip(&freq).map(|(r, w)| (w * r.value).cos()).collect();
                // prod over all but one, without dividing by a possibly-zero cosine
                let k = cos.len();
                let mut prefix = vec![1.0; k + 1];
                for i in 0..k {
                    prefix[i + 1] = prefix[i] * cos[i];
                }
                let mut suffix = vec![1.0; k + 1];
                for i in (0..k).rev() {
                    suffix[i] = suffix[i + 1] * cos[i];
                }
                let squares: f64 = ys.iter().map(|r| r.value * r.value).sum();
                let value = 4.0 * squares - 2.0 * prefix[k] + 2.0;
                let grads = (0..k)
                    .map(|i| {
                        let others = prefix[i] * suffix[i + 1];
                        8.0 * ys[i].value + 2.0 * freq[i] * (freq[i] * ys[i].value).sin() * others
                    })
                    .collect();
                (value, grads)
            }
        }
    }

    /// Head terms and their gradients w.r.t. `(x_1, x_2)`.
    fn heads(&self, x: &[f64]) -> Vec<(f64, f64, f64)> {
        use Cec09Kind::*;
        let x1 = x[0];
        match self.kind {
            Uf1 | Uf2 | Uf3 => vec![
                (x1, 1.0, 0.0),
                (1.0 - x1.sqrt(), -power_derivative(x1, 0.5), 0.0),
            ],
            Uf4 => vec![(x1, 1.0, 0.0), (1.0 - x1 * x1, -2.0 * x1, 0.0)],
            Uf5 => {
                let (big_n, eps) = (10.0, 0.1);
                let w = 2.0 * big_n * PI;
                let s = (w * x1).sin();
                let c = 1.0 / (2.0 * big_n) + eps;
                let e = c * s.abs();
                let de = c * signum0(s) * w * (w * x1).cos();
                vec![(x1 + e, 1.0 + de, 0.0), (1.0 - x1 + e, -1.0 + de, 0.0)]
            }
            Uf6 => {
                let (big_n, eps) = (2.0, 0.1);
                let w = 2.0 * big_n * PI;
                let c = 2.0 * (1.0 / (2.0 * big_n) + eps);
                let s = (w * x1).sin();
                let (e, de) = if s > 0.0 {
                    (c * s, c * w * (w * x1).cos())
                } else {
                    (0.0, 0.0)
                };
                vec![(x1 + e, 1.0 + de, 0.0), (1.0 - x1 + e, -1.0 + de, 0.0)]
            }
            Uf7 => {
                let p = x1.powf(0.2);
                let dp = power_derivative(x1, 0.2);
                vec![(p, dp, 0.0), (1.0 - p, -dp, 0.0)]
            }
            Uf8 | Uf10 => {
                let x2 = x[1];
                let (a, b) = (0.5 * PI * x1, 0.5 * PI * x2);
                let h = 0.5 * PI;
                vec![
                    (a.cos() * b.cos(), -h * a.sin() * b.cos(), -h * a.cos() * b.sin()),
                    (a.cos() * b.sin(), -h * a.sin() * b.sin(), h * a.cos() * b.cos()),
                    (a.sin(), h * a.cos(), 0.0),
                ]
            }
            Uf9 => {
                let x2 = x[1];
                let eps = 0.1;
                let q = 2.0 * x1 - 1.0;
                let raw = (1.0 + eps) * (1.0 - 4.0 * q * q);
                let (w, dw) = if raw > 0.0 {
                    (raw, -(1.0 + eps) * 16.0 * q)
                } else {
                    (0.0, 0.0)
                };
                vec![
                    (0.5 * (w + 2.0 * x1) * x2, 0.5 * (dw + 2.0) * x2, 0.5 * (w + 2.0 * x1)),
                    (
                        0.5 * (w - 2.0 * x1 + 2.0) * x2,
                        0.5 * (dw - 2.0) * x2,
                        0.5 * (w - 2.0 * x1 + 2.0),
                    ),
                    (1.0 - x2, 0.0, -1.0),
                ]
            }
        }
    }

    fn evaluate(&self, x: &[f64], jac: Option<&mut Jacobian>) -> Vec<f64> {
        let heads = self.heads(x);
        let mut values: Vec<f64> = heads.iter().map(|h| h.0).collect();
        let mut jac = jac;
        if let Some(jac) = jac.as_deref_mut() {
            jac.fill(0.0);
            for (k, h) in heads.iter().enumerate() {
                jac[(k, 0)] = h.1;
                if x.len() > 1 {
                    jac[(k, 1)] += h.2;
                }
            }
        }
        for (k, group) in self.groups.iter().enumerate() {
            if group.is_empty() {
                continue;
            }
            let ys: Vec<Residual> = group.iter().map(|&j| self.residual(x, j)).collect();
            let (agg, grads) = self.aggregate(&ys);
            let scale = 2.0 / group.len() as f64;
            values[k] += scale * agg;
            if let Some(jac) = jac.as_deref_mut() {
                for (r, g) in ys.iter().zip(&grads) {
                    let g = scale * g;
                    jac[(k, r.j - 1)] += g;
                    jac[(k, 0)] += g * r.d1;
                    jac[(k, 1)] += g * r.d2;
                }
            }
        }
        values
    }
}

fn signum0(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

impl Problem for Cec09 {
    fn name(&self) -> &str {
        self.kind.name()
    }

    fn bounds(&self) -> &BoxBounds {
        &self.bounds
    }

    fn num_objectives(&self) -> usize {
        self.kind.num_objectives()
    }

    fn objectives(&self, x: &[f64]) -> Vec<f64> {
        self.evaluate(x, None)
    }

    fn jacobian(&self, x: &[f64]) -> Option<Jacobian> {
        let mut jac = Jacobian::zeros(self.num_objectives(), x.len());
        self.evaluate(x, Some(&mut jac));
        Some(jac)
    }

    /// `n` points evenly spaced on the box diagonal.
    fn initial_points(&self) -> Vec<Vec<f64>> {
        self.bounds.diagonal(self.bounds.dim())
    }
}
