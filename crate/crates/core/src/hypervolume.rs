//! Exact hypervolume of the region dominated by a point set and bounded by a
//! reference point, for one to three objectives.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pareto::{leq, strictly_less, FrontSet};

/// Componentwise running maximum of every objective vector it has seen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceTracker {
    zeta: Vec<f64>,
}

impl ReferenceTracker {
    /// A fresh tracker; every component starts at `-inf`.
    pub fn new(m: usize) -> Self {
        Self {
            zeta: vec![f64::NEG_INFINITY; m],
        }
    }

    pub fn update<'a, I>(&mut self, points: I)
    where
        I: IntoIterator<Item = &'a [f64]>,
    {
        for p in points {
            debug_assert_eq!(p.len(), self.zeta.len());
            for (z, &v) in self.zeta.iter_mut().zip(p) {
                *z = z.max(v);
            }
        }
    }

    pub fn zeta(&self) -> &[f64] {
        &self.zeta
    }
}

/// Volume of `{y : p ≤ y ≤ zeta for some p}`. Points not below `zeta` add nothing.
pub fn hypervolume<'a, I>(points: I, zeta: &[f64]) -> Result<f64>
where
    I: IntoIterator<Item = &'a [f64]>,
{
    let m = zeta.len();
    if !(1..=3).contains(&m) {
        return Err(Error::UnsupportedObjectives(m));
    }
    let mut kept: Vec<&[f64]> = Vec::new();
    for p in points {
        if p.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: p.len(),
            });
        }
        if leq(p, zeta) {
            kept.push(p);
        }
    }
    Ok(match m {
        1 => kept
            .iter()
            .map(|p| zeta[0] - p[0])
            .fold(0.0, f64::max),
        2 => {
            let mut pts: Vec<[f64; 2]> = kept.iter().map(|p| [p[0], p[1]]).collect();
            sweep_2d(&mut pts, [zeta[0], zeta[1]])
        }
        _ => slice_3d(&kept, zeta),
    })
}

/// Hypervolume of a front's image.
pub fn front_hypervolume(front: &FrontSet, zeta: &[f64]) -> Result<f64> {
    hypervolume(front.iter().map(|p| p.fx()), zeta)
}

/// Sorts by the first objective and adds one horizontal strip per new minimum
/// of the second. Every point must already lie below `zeta`.
fn sweep_2d(pts: &mut [[f64; 2]], zeta: [f64; 2]) -> f64 {
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut level = zeta[1];
    let mut volume = 0.0;
    for p in pts.iter() {
        if p[1] < level {
            volume += (zeta[0] - p[0]) * (level - p[1]);
            level = p[1];
        }
    }
    volume
}

/// Slabs between consecutive third-objective levels, each with the 2D volume
/// of the points already at or below the slab.
fn slice_3d(kept: &[&[f64]], zeta: &[f64]) -> f64 {
    let mut order: Vec<&[f64]> = kept.to_vec();
    order.sort_by(|a, b| a[2].total_cmp(&b[2]));
    let mut volume = 0.0;
    let mut active: Vec<[f64; 2]> = Vec::with_capacity(order.len());
    for (i, p) in order.iter().enumerate() {
        active.push([p[0], p[1]]);
        let top = order.get(i + 1).map_or(zeta[2], |q| q[2]);
        let height = top - p[2];
        if height > 0.0 {
            let mut slab = active.clone();
            volume += height * sweep_2d(&mut slab, [zeta[0], zeta[1]]);
        }
    }
    volume
}

/// Lower bound `prod_j (f_j(replaced) - f_j(mu))` on the hypervolume gain of
/// swapping `replaced` for `mu` inside `front`.
///
/// Requires `F(mu) < F(replaced)` componentwise, `replaced` a member of the
/// front (by value), `replaced ≤ zeta`, and a stable front.
pub fn replacement_gain_bound(front: &FrontSet, replaced: &[f64], mu: &[f64], zeta: &[f64]) -> Result<f64> {
    if mu.len() != replaced.len() || zeta.len() != replaced.len() {
        return Err(Error::DimensionMismatch {
            expected: replaced.len(),
            got: mu.len().min(zeta.len()),
        });
    }
    if !strictly_less(mu, replaced) {
        return Err(Error::Precondition(
            "the new point must be strictly better in every objective".into(),
        ));
    }
    if !front.contains_value(replaced) {
        return Err(Error::Precondition("replaced point is not in the front".into()));
    }
    if !leq(replaced, zeta) {
        return Err(Error::Precondition("replaced point lies beyond the reference".into()));
    }
    if !front.is_stable() {
        return Err(Error::Precondition("front is not a stable set".into()));
    }
    Ok(replaced.iter().zip(mu).map(|(r, u)| r - u).product())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pareto::DecisionPoint;

    fn hv(points: &[&[f64]], zeta: &[f64]) -> f64 {
        hypervolume(points.iter().copied(), zeta).unwrap()
    }

    fn front(fx: &[&[f64]]) -> FrontSet {
        FrontSet::filter_nondominated(
            fx.iter()
                .enumerate()
                .map(|(i, f)| DecisionPoint::new(i as u64, vec![], f.to_vec())),
        )
    }

    #[test]
    fn tracker_examples() {
        let mut t = ReferenceTracker::new(2);
        t.update([&[1.0, 1.0][..]]);
        t.update([&[0.0, 5.0][..]]);
        assert_eq!(t.zeta(), &[1.0, 5.0]);
        t.update(std::iter::empty());
        assert_eq!(t.zeta(), &[1.0, 5.0]);
        let mut t = ReferenceTracker::new(2);
        t.update([&[2.0, 3.0][..], &[4.0, 1.0][..]]);
        assert_eq!(t.zeta(), &[4.0, 3.0]);
    }

    #[test]
    fn hv_examples() {
        assert_eq!(hv(&[&[1.0, 1.0]], &[2.0, 2.0]), 1.0);
        assert_eq!(hv(&[&[1.0, 2.0], &[2.0, 1.0]], &[3.0, 3.0]), 3.0);
        assert_eq!(hv(&[&[4.0, 4.0]], &[3.0, 3.0]), 0.0);
        assert_eq!(hv(&[&[0.0, 0.0, 0.0]], &[1.0, 1.0, 1.0]), 1.0);
        assert_eq!(hv(&[], &[1.0, 1.0]), 0.0);
        assert_eq!(hv(&[&[0.5], &[0.25]], &[1.0]), 0.75);
        // a point beyond zeta in one objective only is dropped entirely
        assert_eq!(hv(&[&[1.0, 1.0], &[0.0, 3.0]], &[2.0, 2.0]), 1.0);
    }

    #[test]
    fn hv_3d_two_boxes() {
        // boxes [0,2]x[1,2]x[1,2] and [1,2]x[0,2]x[0,2], overlap [1,2]x[1,2]x[1,2]
        let v = hv(&[&[0.0, 1.0, 1.0], &[1.0, 0.0, 0.0]], &[2.0, 2.0, 2.0]);
        assert_eq!(v, 2.0 + 4.0 - 1.0);
    }

    #[test]
    fn unsupported_m() {
        assert!(matches!(
            hypervolume([&[0.0; 4][..]], &[1.0; 4]),
            Err(Error::UnsupportedObjectives(4))
        ));
    }

    #[test]
    fn replacement_gain_examples() {
        let f = front(&[&[2.0, 2.0]]);
        let b = replacement_gain_bound(&f, &[2.0, 2.0], &[1.0, 1.0], &[3.0, 3.0]).unwrap();
        assert_eq!(b, 1.0);
        let before = front_hypervolume(&f, &[3.0, 3.0]).unwrap();
        let after = hv(&[&[1.0, 1.0]], &[3.0, 3.0]);
        assert_eq!((before, after), (1.0, 4.0));
        assert!(after - before >= b);

        let f = front(&[&[2.0, 2.0], &[0.0, 4.0]]);
        assert_eq!(
            replacement_gain_bound(&f, &[2.0, 2.0], &[1.0, 1.0], &[3.0, 3.0]).unwrap(),
            1.0
        );
        assert!(replacement_gain_bound(&f, &[2.0, 2.0], &[2.0, 2.0], &[3.0, 3.0]).is_err());
    }
}
