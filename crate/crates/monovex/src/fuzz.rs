//! Randomized instance generation and the monovex-implies-acyclic property
//! harness.
//!
//! Complexes are drawn on a quarter-step lattice as chains of overlapping
//! or touching boxes (a shape family with a practical monovexity
//! acceptance rate), then filtered through the exact monovexity decision.
//! In `closed` mode every accepted instance must be acyclic (first Betti
//! numbers all zero): contractibility of closed monovex sets makes any
//! other outcome a hard violation. In `half-open` mode, non-acyclic
//! monovex instances are possible and are logged as discoveries, never
//! failures.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geom::{BoxRegion, Interval, Lattice, Point, SpanComplex};
use crate::homology::betti_report;
use crate::num::{dy, Dyadic};
use crate::path::is_monovex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosednessMode {
    Closed,
    Open,
    HalfOpen,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub seed: u64,
    pub dim: usize,
    pub box_budget: usize,
    pub mode: ClosednessMode,
    pub trials: usize,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            seed: 0,
            dim: 2,
            box_budget: 4,
            mode: ClosednessMode::Closed,
            trials: 100,
        }
    }
}

/// The coordinate lattice instances are drawn on.
pub fn fuzz_step() -> Dyadic {
    dy(1, 2)
}

/// One accepted trial: the instance plus how many candidates were
/// rejected before it passed the monovexity filter.
#[derive(Clone, Debug)]
pub struct AcceptedInstance {
    pub trial: usize,
    pub rejected_candidates: usize,
    pub complex: SpanComplex<Dyadic>,
}

/// Draws one random candidate complex (not yet filtered).
pub fn random_candidate(
    rng: &mut ChaCha8Rng,
    dim: usize,
    box_budget: usize,
    mode: ClosednessMode,
) -> SpanComplex<Dyadic> {
    assert!((1..=3).contains(&dim));
    assert!(box_budget >= 1);
    let step = fuzz_step();
    let range = 16i64; // coordinates in [0, 4] at quarter steps
    let count = rng.gen_range(1..=box_budget);
    let mut boxes: Vec<BoxRegion<Dyadic>> = Vec::with_capacity(count);
    let mut anchor: Vec<i64> = (0..dim).map(|_| rng.gen_range(0..range / 2)).collect();
    for _ in 0..count {
        let mut lo = Vec::with_capacity(dim);
        let mut hi = Vec::with_capacity(dim);
        for &a in &anchor {
            let min_len = match mode {
                ClosednessMode::Closed => 0,
                _ => 1, // open ends cannot bound a point interval
            };
            let len = rng.gen_range(min_len..=4.max(min_len));
            let l = a.clamp(0, range);
            let h = (a + len).clamp(l, range);
            lo.push(l);
            hi.push(h.max(l + min_len));
        }
        let intervals = (0..dim)
            .map(|axis| {
                let l = step.mul_int(lo[axis]);
                let h = step.mul_int(hi[axis]);
                match mode {
                    ClosednessMode::Closed => Interval::closed(l, h),
                    ClosednessMode::Open => {
                        Interval::new(l, h, false, false).expect("open candidates are fat")
                    }
                    ClosednessMode::HalfOpen => {
                        let point = l == h;
                        let lo_closed = point || rng.gen_bool(0.5);
                        let hi_closed = point || rng.gen_bool(0.5);
                        Interval::new(l, h, lo_closed, hi_closed).expect("ordered ends")
                    }
                }
            })
            .collect();
        boxes.push(BoxRegion::new(intervals));
        // chain the next box near the previous one, moving weakly up
        for slot in anchor.iter_mut() {
            *slot = (*slot + rng.gen_range(0..=3)).clamp(0, range - 1);
        }
    }
    SpanComplex::new(dim, boxes).expect("candidate boxes share the dimension")
}

/// Rejection-samples monovex instances. Trials run in a parallel worker
/// pool; each trial owns its generator, so the result is deterministic
/// and ordered by trial index regardless of the schedule.
pub fn monovex_instances(config: &FuzzConfig) -> Vec<AcceptedInstance> {
    (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(
                config.seed ^ (trial as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15),
            );
            let mut rejected = 0usize;
            loop {
                let candidate =
                    random_candidate(&mut rng, config.dim, config.box_budget, config.mode);
                if is_monovex(&candidate).is_monovex {
                    return AcceptedInstance {
                        trial,
                        rejected_candidates: rejected,
                        complex: candidate,
                    };
                }
                rejected += 1;
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct TrialOutcome {
    pub trial: usize,
    pub rejected_candidates: usize,
    pub boxes: usize,
    pub betti: Option<Vec<usize>>,
    pub acyclic: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FuzzReport {
    pub config: FuzzConfig,
    pub trials: Vec<TrialOutcome>,
    /// closed-mode monovex instances that failed acyclicity (violations)
    pub violations: usize,
    /// half-open monovex instances with nontrivial homology of their
    /// closures (logged, not failures)
    pub discoveries: usize,
}

/// Runs the property harness. In closed mode every accepted instance is
/// pushed through the homology oracle and must come out acyclic.
pub fn run_fuzz(config: &FuzzConfig) -> FuzzReport {
    let instances = monovex_instances(config);
    let grid = Lattice::uniform(config.dim, fuzz_step());
    let trials: Vec<TrialOutcome> = instances
        .par_iter()
        .map(|inst| outcome_of(inst, config, &grid))
        .collect();
    let violations = trials
        .iter()
        .filter(|t| config.mode == ClosednessMode::Closed && t.acyclic == Some(false))
        .count();
    let discoveries = trials
        .iter()
        .filter(|t| config.mode != ClosednessMode::Closed && t.acyclic == Some(false))
        .count();
    FuzzReport {
        config: config.clone(),
        trials,
        violations,
        discoveries,
    }
}

fn outcome_of(
    inst: &AcceptedInstance,
    config: &FuzzConfig,
    grid: &Lattice<Dyadic>,
) -> TrialOutcome {
    let (betti, acyclic) = match config.mode {
        ClosednessMode::Closed => {
            let report = betti_report(&inst.complex, grid).expect("closed aligned instances");
            let acyclic = report.betti[0] == 1 && report.betti[1..].iter().all(|&b| b == 0);
            (Some(report.betti), Some(acyclic))
        }
        _ => {
            // half-open and open instances have no direct cubical model;
            // their closures are a coarse probe for surprises
            let closure = SpanComplex::new(
                inst.complex.dim(),
                inst.complex
                    .boxes()
                    .iter()
                    .map(BoxRegion::to_closed)
                    .collect(),
            )
            .expect("closure keeps dimensions");
            match betti_report(&closure, grid) {
                Ok(report) => {
                    let acyclic = report.betti[0] == 1 && report.betti[1..].iter().all(|&b| b == 0);
                    (Some(report.betti), Some(acyclic))
                }
                Err(_) => (None, None),
            }
        }
    };
    TrialOutcome {
        trial: inst.trial,
        rejected_candidates: inst.rejected_candidates,
        boxes: inst.complex.boxes().len(),
        betti,
        acyclic,
    }
}

/// Deterministic interior sample points of a complex: representatives of
/// arrangement cells, shuffled reproducibly.
pub fn sample_points(complex: &SpanComplex<Dyadic>, count: usize, seed: u64) -> Vec<Point<Dyadic>> {
    use rand::seq::SliceRandom;
    let mut cells = complex.arrangement_cells();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    cells.shuffle(&mut rng);
    cells.into_iter().take(count).map(|c| c.center()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_reproducible() {
        let config = FuzzConfig {
            seed: 7,
            dim: 2,
            box_budget: 4,
            mode: ClosednessMode::HalfOpen,
            trials: 5,
        };
        let a = monovex_instances(&config);
        let b = monovex_instances(&config);
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.complex, y.complex);
        }
    }

    #[test]
    fn closed_mode_is_acyclic_on_a_small_run() {
        let config = FuzzConfig {
            seed: 11,
            dim: 2,
            box_budget: 4,
            mode: ClosednessMode::Closed,
            trials: 10,
        };
        let report = run_fuzz(&config);
        assert_eq!(report.violations, 0);
        assert_eq!(report.trials.len(), 10);
    }

    #[test]
    fn accepted_instances_are_monovex() {
        let config = FuzzConfig {
            seed: 3,
            dim: 3,
            box_budget: 3,
            mode: ClosednessMode::Closed,
            trials: 5,
        };
        for inst in monovex_instances(&config) {
            assert!(is_monovex(&inst.complex).is_monovex);
        }
    }
}
