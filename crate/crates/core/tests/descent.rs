use std::sync::Arc;

use front_descent::descent::{run_from, StopReason};
use front_descent::metrics::{alpha_mean, nf_mean};
use front_descent::pareto::leq;
use front_descent::problems::by_name;
use front_descent::{
    run, BoxBounds, DriverConfig, Instance, Jacobian, Problem, SigmaSchedule, Variant,
};

/// `F(x) = (x², (x - 2)²)` on `[-5, 5]`.
struct TwoWells {
    bounds: BoxBounds,
}

impl Problem for TwoWells {
    fn name(&self) -> &str {
        "two_wells"
    }
    fn bounds(&self) -> &BoxBounds {
        &self.bounds
    }
    fn num_objectives(&self) -> usize {
        2
    }
    fn objectives(&self, x: &[f64]) -> Vec<f64> {
        vec![x[0] * x[0], (x[0] - 2.0) * (x[0] - 2.0)]
    }
    fn jacobian(&self, x: &[f64]) -> Option<Jacobian> {
        Some(Jacobian::from_row_slice(2, 1, &[2.0 * x[0], 2.0 * (x[0] - 2.0)]))
    }
}

/// `f(x) = ½x²` on `[-1, 1]`.
struct HalfSquare {
    bounds: BoxBounds,
}

impl Problem for HalfSquare {
    fn name(&self) -> &str {
        "half_square"
    }
    fn bounds(&self) -> &BoxBounds {
        &self.bounds
    }
    fn num_objectives(&self) -> usize {
        1
    }
    fn objectives(&self, x: &[f64]) -> Vec<f64> {
        vec![0.5 * x[0] * x[0]]
    }
    fn jacobian(&self, x: &[f64]) -> Option<Jacobian> {
        Some(Jacobian::from_row_slice(1, 1, &[x[0]]))
    }
}

/// `f(x) = |x|` on `[-1, 1]` with the one-sided derivative `-1` at the kink.
struct Kink {
    bounds: BoxBounds,
}

impl Problem for Kink {
    fn name(&self) -> &str {
        "kink"
    }
    fn bounds(&self) -> &BoxBounds {
        &self.bounds
    }
    fn num_objectives(&self) -> usize {
        1
    }
    fn objectives(&self, x: &[f64]) -> Vec<f64> {
        vec![x[0].abs()]
    }
    fn jacobian(&self, x: &[f64]) -> Option<Jacobian> {
        Some(Jacobian::from_row_slice(1, 1, &[if x[0] > 0.0 { 1.0 } else { -1.0 }]))
    }
}

fn two_wells() -> Instance {
    Instance::new(Arc::new(TwoWells {
        bounds: BoxBounds::uniform(1, -5.0, 5.0).unwrap(),
    }))
}

fn sorted(mut v: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

fn fixture_config(variant: Variant) -> DriverConfig {
    let mut c = DriverConfig::default().with_variant(variant).with_max_iterations(1);
    c.sigma = SigmaSchedule::Constant(1e-6);
    c.certify = true;
    c
}

#[test]
fn hand_traced_iteration() {
    for variant in [Variant::Monotone, Variant::Nonmonotone { memory: 4 }] {
        let inst = two_wells();
        let out = run_from(&inst, &fixture_config(variant), &[vec![3.0]]).unwrap();
        // phase 1: v = -2, α = 1 fails on f2, α = 0.5 lands on z = 2;
        // phase 2: only I = {1} descends (∇f2(2) = 0), v = -4, α = 0.5 reaches 0
        let xs = sorted(out.front.iter().map(|p| p.x().to_vec()).collect());
        assert_eq!(xs, vec![vec![0.0], vec![2.0]], "{variant:?}");
        let rec = &out.trace.records[0];
        assert_eq!(rec.big_theta, -2.0);
        assert_eq!((rec.processed, rec.searches, rec.alpha_sum), (1, 1, 0.5));
        assert_eq!((rec.ls_trials, rec.exploration_points), (4, 1));
        // one evaluation for X^0 plus two per search
        assert_eq!(out.objective_evals, 5);
        assert_eq!(nf_mean(&out.trace).unwrap(), 5.0);
        assert_eq!(alpha_mean(&out.trace).unwrap(), 0.5);
        assert_eq!(out.trace.violations().total(), 0);
        assert_eq!(out.zeta, vec![9.0, 4.0]);
    }
    let inst = two_wells();
    let out = run_from(&inst, &fixture_config(Variant::Nonmonotone { memory: 4 }), &[vec![3.0]]).unwrap();
    let rec = &out.trace.records[0];
    // C^0 = X^0, so the first point always has an eligible reference
    assert_eq!(rec.nonmonotone_searches, 1);
    assert_eq!((rec.memory_index, rec.merge_index), (Some(0), Some(0)));
}

#[test]
fn stationary_single_objective_point_is_a_fixed_point() {
    let inst = Instance::new(Arc::new(HalfSquare {
        bounds: BoxBounds::uniform(1, -1.0, 1.0).unwrap(),
    }));
    let mut config = DriverConfig::default().with_max_iterations(3);
    config.sigma = SigmaSchedule::Constant(1e-6);
    config.stop.stall_window = 10;
    let out = run_from(&inst, &config, &[vec![0.0]]).unwrap();
    assert_eq!(out.front.len(), 1);
    assert_eq!(out.front.points()[0].x(), &[0.0]);
    assert_eq!(out.trace.phase1_searches(), 0);
    assert_eq!(out.objective_evals, 1);
}

#[test]
fn zero_iterations_reports_only_the_start() {
    let inst = Instance::new(by_name("ZDT_1", 5).unwrap());
    let out = run(&inst, &DriverConfig::default().with_max_iterations(0)).unwrap();
    assert_eq!(out.trace.records.len(), 1);
    assert_eq!(out.trace.iterations(), 0);
    assert!(!out.trace.records[0].completed);
    assert_eq!(out.stop_reason, StopReason::MaxIterations);
    assert_eq!(out.front.len(), 1);
    assert!(nf_mean(&out.trace).is_err());
    assert!(alpha_mean(&out.trace).is_err());
}

#[test]
fn stationary_start_stalls() {
    for variant in [Variant::Monotone, Variant::Nonmonotone { memory: 4 }] {
        let inst = two_wells();
        let mut config = DriverConfig::default().with_variant(variant);
        config.sigma = SigmaSchedule::Constant(1e-4);
        let out = run_from(&inst, &config, &[vec![1.0]]).unwrap();
        assert_eq!(out.stop_reason, StopReason::Stalled);
        assert!(out.trace.records.len() <= config.stop.stall_window);
        assert!(out.trace.records.last().unwrap().big_theta >= -1e-4);
    }
}

#[test]
fn drivers_keep_their_invariants() {
    for name in ["ZDT_1", "ZDT_3", "JOS_1", "MAN", "CEC09_2", "CEC09_8"] {
        for variant in [Variant::Monotone, Variant::Nonmonotone { memory: 4 }] {
            let inst = Instance::new(by_name(name, 5).unwrap());
            let mut config = DriverConfig::default().with_variant(variant).with_max_iterations(20);
            config.certify = true;
            let out = run(&inst, &config).unwrap();
            let v = out.trace.violations();
            assert_eq!(v.total(), 0, "{name} {variant:?}: {v:?}");
            assert!(out.front.is_stable());
            assert!(out.front.iter().all(|p| inst.bounds().contains(p.x())));
            // sizes and counts line up with the trace
            assert_eq!(out.trace.records.len(), out.trace.iterations() + 1);
            assert_eq!(out.trace.records.last().unwrap().size, out.front.len());
            assert!(out.front.len() <= 100, "{name} {variant:?}: {}", out.front.len());
        }
    }
}

#[test]
fn protected_pruning_keeps_every_reference_member_covered() {
    let inst = Instance::new(by_name("ZDT_1", 5).unwrap());
    let mut config = DriverConfig::default()
        .with_variant(Variant::Nonmonotone { memory: 4 })
        .with_max_iterations(30);
    config.crowding_cap = Some(10);
    config.protect_reference = true;
    config.certify = true;
    config.snapshot_every = Some(1);
    let out = run(&inst, &config).unwrap();
    assert_eq!(out.trace.violations().total(), 0);
    assert!(out.trace.records.iter().any(|r| r.pruned > 0));
    // C^k is never thinned, so each member is covered by C^{k+1}
    for pair in out.snapshots.windows(2) {
        let (Some(c), Some(next)) = (&pair[0].reference, &pair[1].reference) else { continue };
        for y in c {
            assert!(next.iter().any(|x| leq(x, y)), "C^{} member {y:?} lost", pair[0].k);
            assert!(pair[1].iterate.iter().any(|x| leq(x, y)));
        }
    }
}

#[test]
fn reference_members_stay_covered_for_two_iterations() {
    let inst = Instance::new(by_name("ZDT_1", 5).unwrap());
    let mut config = DriverConfig::default()
        .with_variant(Variant::Nonmonotone { memory: 4 })
        .with_max_iterations(8);
    config.crowding_cap = None;
    config.snapshot_every = Some(1);
    let out = run(&inst, &config).unwrap();
    let snaps = &out.snapshots;
    assert_eq!(snaps.len(), 9);
    let mut checked = 0;
    for (k, s) in snaps.iter().enumerate() {
        assert_eq!(s.k, k);
        let Some(c) = &s.reference else { continue };
        for y in c {
            for later in snaps.iter().skip(k).take(3) {
                assert!(later.iterate.iter().any(|x| leq(x, y)), "C^{k} member {y:?} uncovered at {}", later.k);
                checked += 1;
            }
        }
    }
    assert!(checked > 0);
    assert_eq!(snaps[0].reference.as_ref(), Some(&snaps[0].iterate));
}

#[test]
fn parallel_and_sequential_sweeps_agree() {
    use front_descent::Parallelism;
    let inst = || Instance::new(by_name("CEC09_1", 10).unwrap());
    let mut config = DriverConfig::default()
        .with_variant(Variant::Nonmonotone { memory: 4 })
        .with_max_iterations(15);
    config.parallelism = Parallelism::Sequential;
    let a = run(&inst(), &config).unwrap();
    config.parallelism = Parallelism::default();
    let b = run(&inst(), &config).unwrap();
    let fx = |o: &front_descent::RunOutput| o.front.iter().map(|p| p.fx().to_vec()).collect::<Vec<_>>();
    assert_eq!(fx(&a), fx(&b));
    assert_eq!(a.objective_evals, b.objective_evals);
}

#[test]
fn zdt1_front_quality() {
    let inst = Instance::new(by_name("ZDT_1", 5).unwrap());
    let config = DriverConfig::default()
        .with_variant(Variant::Nonmonotone { memory: 4 })
        .with_max_iterations(100);
    let out = run(&inst, &config).unwrap();
    let reference: Vec<Vec<f64>> = (0..10_000)
        .map(|i| {
            let t = i as f64 / 9_999.0;
            vec![t, 1.0 - t.sqrt()]
        })
        .collect();
    let hv = |pts: &[Vec<f64>]| {
        front_descent::hypervolume(pts.iter().map(Vec::as_slice), &out.zeta).unwrap()
    };
    let got = hv(&out.front.iter().map(|p| p.fx().to_vec()).collect::<Vec<_>>());
    let want = hv(&reference);
    assert!((want - got).abs() <= 0.02 * want, "hv {got} vs reference {want}");
}

#[test]
fn exhausted_refinement_keeps_the_point() {
    for variant in [Variant::Monotone, Variant::Nonmonotone { memory: 4 }] {
        let inst = Instance::new(Arc::new(Kink {
            bounds: BoxBounds::uniform(1, -1.0, 1.0).unwrap(),
        }));
        let out = run_from(&inst, &fixture_config(variant), &[vec![0.0]]).unwrap();
        let r = &out.trace.records[0];
        assert!(r.completed);
        assert_eq!((r.phase1_failures, r.searches, r.ls_trials), (1, 0, 61));
        assert_eq!(r.violations.total(), 0);
        assert_eq!(out.front.points()[0].x(), &[0.0]);
        assert_eq!(inst.counter().objective_evals(), 62);
    }
}
