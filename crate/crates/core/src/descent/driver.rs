use std::borrow::Cow;
use std::time::Instant;

use super::config::{DriverConfig, SigmaSchedule, Variant};
use super::memory::{build_reference_set, reference_set_violations, MemoryWindow};
use super::trace::{IterationRecord, RunTrace, Snapshot, StopReason, Violations};
use crate::direction::{big_theta, proper_subsets_with_descent, ThetaSweep};
use crate::error::{Error, Result};
use crate::hypervolume::{front_hypervolume, ReferenceTracker};
use crate::line_search;
use crate::pareto::{dominates, leq, DecisionPoint, FrontSet, Insertion, PointId};
use crate::problems::{Instance, Jacobian};

/// Relative slack on hypervolume comparisons in the certification checks.
const HV_REL_TOL: f64 = 1e-12;

/// Result of [`run`].
#[derive(Debug, Clone)]
pub struct RunOutput {
    /// The last iterate set `X^K`.
    pub front: FrontSet,
    /// The last reference set built (nonmonotone driver).
    pub reference: Option<FrontSet>,
    pub trace: RunTrace,
    pub snapshots: Vec<Snapshot>,
    pub stop_reason: StopReason,
    pub objective_evals: u64,
    pub jacobian_evals: u64,
    /// Final reference point of the hypervolume.
    pub zeta: Vec<f64>,
}

/// Runs the configured driver on `instance` from its initial points.
pub fn run(instance: &Instance, config: &DriverConfig) -> Result<RunOutput> {
    config.validate()?;
    let starts = instance.initial_points();
    run_from(instance, config, &starts)
}

/// Runs the configured driver from explicit starting points.
pub fn run_from(instance: &Instance, config: &DriverConfig, starts: &[Vec<f64>]) -> Result<RunOutput> {
    config.validate()?;
    Driver::new(instance, config, starts)?.run()
}

struct Driver<'a> {
    instance: &'a Instance,
    config: &'a DriverConfig,
    next_id: PointId,
    tracker: ReferenceTracker,
    start: Instant,
    x: FrontSet,
    window: Option<MemoryWindow>,
    c_prev: FrontSet,
    last_reference: Option<FrontSet>,
    trace: RunTrace,
    snapshots: Vec<Snapshot>,
}

impl<'a> Driver<'a> {
    fn new(instance: &'a Instance, config: &'a DriverConfig, starts: &[Vec<f64>]) -> Result<Self> {
        if starts.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut points = Vec::with_capacity(starts.len());
        for (i, x) in starts.iter().enumerate() {
            let fx = instance.evaluate(x)?;
            points.push(DecisionPoint::new(i as PointId, x.clone(), fx));
        }
        let x0 = FrontSet::filter_nondominated(points);
        let mut tracker = ReferenceTracker::new(instance.num_objectives());
        tracker.update(x0.iter().map(|p| p.fx()));
        let window = config.variant.memory().map(|m| {
            let mut w = MemoryWindow::new(m);
            w.push(0, x0.clone());
            w
        });
        Ok(Self {
            instance,
            config,
            next_id: starts.len() as PointId,
            tracker,
            start: Instant::now(),
            x: x0,
            window,
            c_prev: FrontSet::new(),
            last_reference: None,
            trace: RunTrace::default(),
            snapshots: Vec::new(),
        })
    }

    fn hv(&self, set: &FrontSet) -> Option<f64> {
        front_hypervolume(set, self.tracker.zeta()).ok()
    }

    fn run(mut self) -> Result<RunOutput> {
        let stop = self.config.stop;
        let mut stalled = 0usize;
        let mut k = 0usize;
        let reason = loop {
            let sigma = self.config.sigma.at(k);
            let sweep = self.sweep().map_err(|e| at(k, e))?;
            let mut rec = IterationRecord::open(
                k,
                self.x.len(),
                self.hv(&self.x),
                sweep.min_theta,
                sigma,
                self.tracker.zeta().to_vec(),
            );
            if let SigmaSchedule::Constant(s) = self.config.sigma {
                stalled = if sweep.min_theta >= -s { stalled + 1 } else { 0 };
            }
            let reason = if stalled >= stop.stall_window.max(1)
                && matches!(self.config.sigma, SigmaSchedule::Constant(_))
            {
                Some(StopReason::Stalled)
            } else if k >= stop.max_iterations {
                Some(StopReason::MaxIterations)
            } else if stop
                .wall_clock_secs
                .is_some_and(|budget| self.start.elapsed().as_secs_f64() >= budget)
            {
                Some(StopReason::WallClock)
            } else {
                None
            };
            if let Some(reason) = reason {
                self.snapshots.push(Snapshot {
                    k,
                    iterate: objectives(&self.x),
                    reference: None,
                });
                self.close(rec);
                break reason;
            }
            self.iterate(k, sigma, &sweep, &mut rec).map_err(|e| at(k, e))?;
            rec.completed = true;
            self.close(rec);
            k += 1;
        };
        let counter = self.instance.counter();
        Ok(RunOutput {
            front: self.x,
            reference: self.last_reference,
            trace: self.trace,
            snapshots: self.snapshots,
            stop_reason: reason,
            objective_evals: counter.objective_evals(),
            jacobian_evals: counter.jacobian_evals(),
            zeta: self.tracker.zeta().to_vec(),
        })
    }

    fn close(&mut self, mut rec: IterationRecord) {
        let counter = self.instance.counter();
        rec.objective_evals = counter.objective_evals();
        rec.jacobian_evals = counter.jacobian_evals();
        rec.wall_time_s = self.start.elapsed().as_secs_f64();
        self.trace.records.push(rec);
    }

    /// Common directions at every point of `X^k`; the Jacobians are kept for phase 2.
    fn sweep(&self) -> Result<ThetaSweep> {
        let instance = self.instance;
        big_theta(
            &self.x,
            |p| instance.jacobian(p.x()),
            instance.bounds(),
            &self.config.solver,
            self.config.parallelism,
        )
    }

    fn new_point(&mut self, x: Vec<f64>, fx: Vec<f64>) -> DecisionPoint {
        let id = self.next_id;
        self.next_id += 1;
        DecisionPoint::new(id, x, fx)
    }

    /// Inserts into the working set and feeds the reference tracker with
    /// every point that actually enters it.
    fn insert(&mut self, working: &mut FrontSet, p: DecisionPoint, v: &mut Violations) -> Insertion {
        if self.config.certify && !self.instance.bounds().contains(p.x()) {
            v.infeasible += 1;
        }
        let fx = p.fx().to_vec();
        let outcome = working.insert(p);
        if let Insertion::Added(_) = outcome {
            self.tracker.update([&fx[..]]);
        }
        outcome
    }

    fn iterate(&mut self, k: usize, sigma: f64, sweep: &ThetaSweep, rec: &mut IterationRecord) -> Result<()> {
        let certify = self.config.certify;
        let nonmonotone = matches!(self.config.variant, Variant::Nonmonotone { .. });
        let m = self.instance.num_objectives();
        let instance = self.instance;
        let bounds = instance.bounds();
        let armijo = self.config.armijo;
        let mut v = Violations::default();

        // reference set C^k, which also seeds the working set
        let mut reference = None;
        let mut working = if let Some(window) = &self.window {
            let zeta = self.tracker.zeta().to_vec();
            if certify && k > 0 {
                let prev = window.prev_argmin();
                if prev.is_none_or(|p| !window.entries().any(|e| e.index == p)) {
                    v.memory_carry += 1;
                }
            }
            let source = window.select_reference_source(&zeta)?;
            let c = build_reference_set(&self.x, &source.set, &self.c_prev);
            let hv_c = front_hypervolume(&c, &zeta)?;
            if certify {
                let (a, b, cc) = reference_set_violations(&c, &self.x);
                v.reference_a += a;
                v.reference_b += b;
                v.reference_c += cc;
                let floor = source.hv.max(front_hypervolume(&self.c_prev, &zeta)?);
                if hv_c < floor - HV_REL_TOL * floor.abs() {
                    v.reference_growth += 1;
                }
            }
            rec.reference_size = Some(c.len());
            rec.hv_reference = Some(hv_c);
            rec.memory_index = Some(source.index);
            reference = Some(c.clone());
            c
        } else {
            self.x.clone()
        };
        if self.config.snapshot_every.is_some_and(|e| k % e == 0) {
            self.snapshots.push(Snapshot {
                k,
                iterate: objectives(&self.x),
                reference: reference.as_ref().map(objectives),
            });
        }

        let order = sweep.processing_order();
        if certify && sweep.entries[order[0]].0.theta != sweep.min_theta {
            v.processing_order += 1;
        }
        let x_k = self.x.clone();
        let mut phase1_points: Vec<Vec<f64>> = Vec::new();
        for &pos in &order {
            let xp = &x_k.points()[pos];
            let (out, jac) = &sweep.entries[pos];
            if working.is_dominated(xp.fx()) {
                rec.skipped += 1;
                continue;
            }
            rec.processed += 1;

            // phase 1: refinement along the common direction
            let mut accepted = None;
            if out.theta < -sigma {
                let use_reference = nonmonotone && working.iter().any(|c| leq(xp.fx(), c.fx()));
                let res = if use_reference {
                    line_search::nonmonotone(
                        self.instance,
                        xp.x(),
                        xp.fx(),
                        &out.v,
                        out.d_value,
                        &working,
                        &armijo,
                    )
                } else {
                    line_search::monotone(self.instance, xp.x(), xp.fx(), &out.v, out.d_value, &armijo)
                };
                match res {
                    Ok(res) => {
                        rec.searches += 1;
                        rec.nonmonotone_searches += usize::from(use_reference);
                        rec.alpha_sum += res.alpha;
                        rec.ls_trials += res.trials;
                        accepted = res.trial;
                    }
                    // a kink or a floored singular derivative can defeat every
                    // trial step; the point then stays as it is
                    Err(Error::MaxBacktracks { max_backtracks }) => {
                        rec.phase1_failures += 1;
                        rec.ls_trials += max_backtracks + 1;
                    }
                    Err(e) => return Err(e),
                }
            }
            let (z, z_jac): (DecisionPoint, Option<Cow<'_, Jacobian>>) = match accepted {
                Some((y, fy)) => (self.new_point(y, fy), None),
                None => (xp.clone(), Some(Cow::Borrowed(jac))),
            };
            if self.insert(&mut working, z.clone(), &mut v) == Insertion::Dominated {
                v.insertion_rejected += 1;
            }
            if certify {
                if !working.contains_value(z.fx()) {
                    v.phase1_membership += 1;
                }
                phase1_points.push(z.fx().to_vec());
            }

            // phase 2: exploration along partial directions
            if m < 2 || !working.contains_value(z.fx()) {
                continue;
            }
            let z_jac = match z_jac {
                Some(j) => j,
                None => Cow::Owned(self.instance.jacobian(z.x())?),
            };
            let partial = proper_subsets_with_descent(z.x(), &z_jac, bounds, &self.config.solver)?;
            for dir in partial {
                if !working.contains_value(z.fx()) {
                    break;
                }
                let res = line_search::exploration(self.instance, z.x(), &dir.v, &working, &armijo)?;
                rec.ls_trials += res.trials;
                let Some((y, fy)) = res.trial else {
                    rec.exploration_failures += 1;
                    continue;
                };
                let p = self.new_point(y, fy);
                if let Insertion::Added(_) = self.insert(&mut working, p, &mut v) {
                    rec.exploration_points += 1;
                }
            }
        }

        // final merge with the remembered set, or X^{k+1} = X̂^k
        let mut partner_set = None;
        let merged = if let Some(window) = &mut self.window {
            let partner = window.select_merge_partner(&working, k, self.tracker.zeta())?;
            rec.merge_index = Some(partner.index);
            let merged = FrontSet::filter_nondominated(working.iter().chain(partner.set.iter()).cloned());
            partner_set = Some(partner.set);
            merged
        } else {
            working
        };
        if certify {
            if !merged.is_stable() {
                v.nondominance += 1;
            }
            v.phase1_cover += phase1_points.iter().filter(|z| !merged.covers(z)).count() as u64;
            if !nonmonotone {
                v.monotone_regress += merged
                    .iter()
                    .filter(|p| x_k.iter().any(|old| dominates(old.fx(), p.fx())))
                    .count() as u64;
            }
        }

        let next = match self.config.crowding_cap {
            Some(cap) if merged.len() > cap => {
                // C^k and the merge partner seed the next reference set, so a
                // cover of each of them survives the cap
                let protected = match (&reference, &partner_set) {
                    (Some(c), Some(partner)) if self.config.protect_reference => {
                        cover_protection(&merged, c.iter().chain(partner.iter()))
                    }
                    _ => vec![false; merged.len()],
                };
                merged.crowding_prune_protecting(cap, &protected)?
            }
            _ => merged.clone(),
        };
        rec.pruned = merged.len() - next.len();

        if let Some(window) = &mut self.window {
            let mut c = reference.expect("nonmonotone iterations build a reference set");
            if rec.pruned > 0 {
                // forget memory that only the pruned points vouched for, so every
                // remembered point stays covered by the new iterate set
                let keep = |p: &DecisionPoint| next.covers(p.fx()) || !merged.covers(p.fx());
                c.retain(keep);
                window.restrict(keep);
            }
            window.push(k + 1, next.clone());
            self.last_reference = Some(c.clone());
            self.c_prev = c;
        }
        self.x = next;
        rec.violations = v;
        Ok(())
    }
}

/// Flags a small set of members of `set` that together weakly dominate every
/// point of `required`, reusing already flagged members where possible.
fn cover_protection<'a>(set: &FrontSet, required: impl Iterator<Item = &'a DecisionPoint>) -> Vec<bool> {
    let points = set.points();
    let mut flagged = vec![false; points.len()];
    for y in required {
        let covered = points
            .iter()
            .zip(&flagged)
            .any(|(x, &f)| f && leq(x.fx(), y.fx()));
        if !covered {
            if let Some(i) = points.iter().position(|x| leq(x.fx(), y.fx())) {
                flagged[i] = true;
            }
        }
    }
    flagged
}

fn objectives(set: &FrontSet) -> Vec<Vec<f64>> {
    set.iter().map(|p| p.fx().to_vec()).collect()
}

fn at(iteration: usize, e: Error) -> Error {
    match e {
        Error::AtIteration { .. } => e,
        other => Error::AtIteration {
            iteration,
            source: Box::new(other),
        },
    }
}
