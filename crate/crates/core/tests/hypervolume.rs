mod oracles;

use front_descent::hypervolume::{front_hypervolume, hypervolume, replacement_gain_bound};
use front_descent::{DecisionPoint, FrontSet};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_points(rng: &mut ChaCha8Rng, count: usize, m: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| (0..m).map(|_| rng.gen_range(0.0..10.0)).collect())
        .collect()
}

fn hv(points: &[Vec<f64>], zeta: &[f64]) -> f64 {
    hypervolume(points.iter().map(Vec::as_slice), zeta).unwrap()
}

fn front_of(points: &[Vec<f64>]) -> FrontSet {
    FrontSet::filter_nondominated(
        points
            .iter()
            .enumerate()
            .map(|(i, f)| DecisionPoint::new(i as u64, vec![], f.clone())),
    )
}

#[test]
fn sweep_2d_agrees_with_monte_carlo() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for i in 0..50 {
        let size = rng.gen_range(1..=20);
        let pts = random_points(&mut rng, size, 2);
        let zeta = vec![rng.gen_range(8.0..12.0), rng.gen_range(8.0..12.0)];
        let exact = hv(&pts, &zeta);
        let (estimate, stderr) = oracles::hv_monte_carlo(&pts, &zeta, 1_000_000, &mut rng);
        assert!(
            (exact - estimate).abs() <= 3.0 * stderr + 1e-12,
            "front {i}: {exact} vs {estimate} ± {stderr}"
        );
        let staircase = oracles::hv_2d_staircase(&pts, &zeta);
        assert!((exact - staircase).abs() <= 1e-10 * staircase.max(1.0), "front {i}");
    }
}

#[test]
fn slicing_3d_agrees_with_inclusion_exclusion() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..200 {
        let size = rng.gen_range(1..=6);
        let pts = random_points(&mut rng, size, 3);
        let zeta: Vec<f64> = (0..3).map(|_| rng.gen_range(7.0..11.0)).collect();
        let exact = oracles::hv_inclusion_exclusion(&pts, &zeta);
        let got = hv(&pts, &zeta);
        assert!((got - exact).abs() <= 1e-10, "front {i}: {got} vs {exact}");
    }
}

#[test]
fn inclusion_exclusion_also_matches_in_2d() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let size = rng.gen_range(1..=8);
        let pts = random_points(&mut rng, size, 2);
        let zeta = vec![9.0, 9.0];
        assert!((hv(&pts, &zeta) - oracles::hv_inclusion_exclusion(&pts, &zeta)).abs() <= 1e-10);
    }
}

#[test]
fn gain_bound_holds_on_random_replacements() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut cases = 0;
    while cases < 100 {
        let m = rng.gen_range(2..=3);
        let size = rng.gen_range(1..=8);
        let y = front_of(&random_points(&mut rng, size, m));
        let mut zeta = vec![f64::NEG_INFINITY; m];
        for p in &y {
            for (z, v) in zeta.iter_mut().zip(p.fx()) {
                *z = z.max(*v);
            }
        }
        for z in zeta.iter_mut() {
            *z += rng.gen_range(0.0..1.0);
        }
        let pick = rng.gen_range(0..y.len());
        let replaced = y.points()[pick].fx().to_vec();
        let mu: Vec<f64> = replaced.iter().map(|r| r - rng.gen_range(0.01..2.0)).collect();
        let bound = replacement_gain_bound(&y, &replaced, &mu, &zeta).unwrap();
        let mut z: Vec<Vec<f64>> = y
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != pick)
            .map(|(_, p)| p.fx().to_vec())
            .collect();
        z.push(mu);
        let gain = hv(&z, &zeta) - front_hypervolume(&y, &zeta).unwrap();
        assert!(gain >= bound - 1e-12, "gain {gain} < bound {bound}");
        assert!(bound > 0.0);
        cases += 1;
    }
}

fn point_set(m: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(0.0..10.0f64, m), 0..15)
}

proptest! {
    #[test]
    fn adding_points_never_lowers_hv(pts in point_set(3), extra in prop::collection::vec(0.0..10.0f64, 3)) {
        let zeta = [10.0; 3];
        let before = hv(&pts, &zeta);
        let mut more = pts.clone();
        more.push(extra);
        let after = hv(&more, &zeta);
        prop_assert!(after >= before - 1e-12 * before, "{} < {}", after, before);
    }

    #[test]
    fn dominated_points_add_nothing(pts in point_set(2)) {
        let zeta = [10.0; 2];
        let filtered = front_of(&pts);
        prop_assert_eq!(front_hypervolume(&filtered, &zeta).unwrap(), hv(&pts, &zeta));
    }

    #[test]
    fn hv_grows_with_the_reference(pts in point_set(3), shift in 0.0..3.0f64) {
        let low = hv(&pts, &[10.0; 3]);
        let high = hv(&pts, &[10.0 + shift; 3]);
        prop_assert!(high >= low);
    }

    #[test]
    fn hv_is_order_independent(mut pts in point_set(3)) {
        let zeta = [10.0; 3];
        let a = hv(&pts, &zeta);
        pts.reverse();
        prop_assert!((a - hv(&pts, &zeta)).abs() <= 1e-9);
    }
}
