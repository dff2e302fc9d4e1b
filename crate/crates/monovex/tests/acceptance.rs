//! Acceptance suite: one test per gate criterion, each printing a
//! single summary line (run with `--nocapture` to see the details; the
//! harness result line itself is the pass/fail record). Every tolerance
//! is exact and every runtime budget is asserted.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use monovex::extension::{extend, LatticeSample};
use monovex::fuzz::{monovex_instances, run_fuzz, sample_points, ClosednessMode, FuzzConfig};
use monovex::geom::{BoxRegion, Lattice, Point, SpanComplex};
use monovex::homology::betti_report;
use monovex::homotopy::{build_path_field, cantor_homotopy, cantor_schedule, ContractionParams};
use monovex::instances;
use monovex::num::{dy, Dyadic};
use monovex::path::{grid_oracle_reachable, is_monovex, monotone_reachable};
use monovex::raster::rasterize_minkowski;
use monovex::retraction::iterate_retraction;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type P = Point<Dyadic>;

fn finish(name: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    println!("{name}: PASS in {elapsed:?} (budget {budget:?})");
    assert!(
        elapsed < budget,
        "{name} exceeded its runtime budget: {elapsed:?}"
    );
}

#[test]
fn criterion_01_staircase_monovex_and_acyclic() {
    let started = Instant::now();
    let a = instances::example1(3);
    let verdict = is_monovex(&a);
    assert!(
        verdict.is_monovex,
        "the truncated staircase must be monovex"
    );

    let grid = Lattice::uniform(2, dy(1, 3));
    let report = betti_report(&a, &grid).unwrap();
    assert_eq!(report.betti[0], 1);
    assert!(
        report.betti[1..].iter().all(|&b| b == 0),
        "betti {:?}",
        report.betti
    );
    finish(
        "criterion 01 (staircase monovex, betti (1,0))",
        started,
        Duration::from_secs(5),
    );
}

#[test]
fn criterion_02_half_open_ring_monovex_closed_model_not() {
    let started = Instant::now();
    let exact = instances::example2();
    assert!(
        is_monovex(&exact).is_monovex,
        "the half-open set is monovex"
    );

    let eps = dy(1, 2);
    let closed = instances::example2_closed(&eps);
    let verdict = is_monovex(&closed);
    assert!(!verdict.is_monovex, "the closed model must fail monovexity");
    let (x, y) = verdict.witness.expect("an explicit witness pair");
    assert!(monotone_reachable(&closed, &x, &y).unwrap().is_none());

    let grid = Lattice::uniform(3, dy(1, 2));
    let report = betti_report(&closed, &grid).unwrap();
    assert_eq!(
        report.betti[1], 1,
        "the circle class must appear: {:?}",
        report.betti
    );
    finish(
        "criterion 02 (half-open monovex; closed model: witness + betti_1 = 1)",
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_03_segment_sum_raster_splits_the_frozen_line() {
    let started = Instant::now();
    let (a, b) = instances::example3_segments();
    let window =
        BoxRegion::closed_from_corners(&P::from_ints(&[-2, -2, -1]), &P::from_ints(&[2, 2, 5]));
    let grid = rasterize_minkowski(&a, &b, &dy(1, 3), &window).unwrap();
    let complex = grid.to_complex();
    let from = P::from_ints(&[0, 0, 0]);
    let to = P::from_ints(&[0, 0, 4]);
    assert!(complex.contains(&from) && complex.contains(&to));
    let verdict = monotone_reachable(&complex, &from, &to).unwrap();
    assert!(
        verdict.is_none(),
        "no monotone path may join the two line points"
    );
    finish(
        "criterion 03 (segment-sum raster: unreachable pair)",
        started,
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_04_diagonal_sum_raster_has_one_loop() {
    let started = Instant::now();
    let (a, b) = instances::example4_segments(&Dyadic::from(1));
    let window =
        BoxRegion::closed_from_corners(&P::from_ints(&[-3, -3, -3]), &P::from_ints(&[3, 3, 3]));
    let h = dy(1, 4);
    let grid = rasterize_minkowski(&a, &b, &h, &window).unwrap();
    let report = betti_report(&grid.to_complex(), &Lattice::uniform(3, h)).unwrap();
    assert_eq!(report.betti[1], 1, "betti: {:?}", report.betti);
    finish(
        "criterion 04 (diagonal-sum raster: betti_1 = 1)",
        started,
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_05_extension_hull_and_halving_on_random_instances() {
    let started = Instant::now();
    let mut tested = 0usize;
    for (dim, trials, domain_dim, seed) in [
        (1usize, 7usize, 2usize, 101u64),
        (2, 7, 2, 202),
        (3, 6, 1, 303),
    ] {
        let config = FuzzConfig {
            seed,
            dim,
            box_budget: 3,
            mode: ClosednessMode::Closed,
            trials,
        };
        for inst in monovex_instances(&config) {
            let lattice = Lattice::uniform(domain_dim, Dyadic::from(1));
            let domain = SpanComplex::from_box(BoxRegion::closed_from_corners(
                &Point::new(vec![Dyadic::from(0); domain_dim]),
                &Point::new(vec![Dyadic::from(1); domain_dim]),
            ));
            let corners = domain.boxes()[0].vertices();
            let pool = sample_points(&inst.complex, corners.len(), seed ^ inst.trial as u64);
            let values: BTreeMap<_, _> = corners
                .iter()
                .enumerate()
                .map(|(i, c)| (c.clone(), pool[i % pool.len()].clone()))
                .collect();
            let sample = LatticeSample::new(lattice, domain, values, &inst.complex).unwrap();
            let field = extend(&sample, 6, &inst.complex).unwrap();
            let hull = field.hull_property_report();
            assert!(
                hull.violations.is_empty(),
                "hull violations on trial {}",
                inst.trial
            );
            let spread = field.spread_report();
            assert!(
                spread.violations.is_empty(),
                "halving violations on trial {}: {:?}",
                inst.trial,
                spread.violations
            );
            tested += 1;
        }
    }
    assert_eq!(tested, 20);
    finish(
        "criterion 05 (20 random extensions, depth 6: zero hull/halving violations)",
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_06_two_point_field_bounds() {
    let started = Instant::now();
    let a = instances::example1(3);
    for (delta, depth) in [(dy(1, 1), 3u32), (dy(1, 2), 4)] {
        let field = build_path_field(&a, &delta, depth).unwrap();
        let audit = field.audit();
        assert!(
            audit.violations.is_empty(),
            "bounds failed at delta {delta}: {:?}",
            audit.violations.first()
        );
        assert!(audit.samples > 0);
    }
    finish(
        "criterion 06 (two-point field bounds at delta 1/2 and 1/4)",
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_07_ternary_homotopy_slices_and_junctions() {
    let started = Instant::now();
    let a = instances::example1(3);
    let x0 = P::from_ints(&[1, 1]);
    let delta0 = dy(1, 2);
    let levels = 3;
    let params = ContractionParams {
        levels,
        delta0: delta0.clone(),
        time_depth: 2,
    };
    let schedule = cantor_schedule(levels, &delta0);
    let field = cantor_homotopy(&a, &x0, &schedule, &params).unwrap();
    let audit = field.audit(&a, &schedule);
    assert_eq!(
        audit.identity_violations, 0,
        "t = 0 must be the identity exactly"
    );
    assert_eq!(
        audit.base_violations, 0,
        "t = 1 must be the base point exactly"
    );
    assert_eq!(audit.range_violations, 0, "all samples must lie in the set");
    assert_eq!(
        audit.junction_violations, 0,
        "junction defects must be within delta_k exactly"
    );
    assert!(!audit.junction_defects.is_empty());
    finish(
        "criterion 07 (ternary homotopy: exact slices, junction defects within delta_k)",
        started,
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_08_retraction_decay_on_random_exterior_points() {
    let started = Instant::now();
    let a = instances::example1(3);
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let mut tested = 0;
    while tested < 50 {
        let x = Point::new(vec![
            dy(rng.gen_range(-8..24), 3),
            dy(rng.gen_range(-8..24), 3),
        ]);
        if a.contains(&x) {
            continue;
        }
        // iterate_retraction hard-fails on any per-step violation of the
        // 1/9 decay or the 4/3 step bound
        let trajectory = iterate_retraction(&a, &x, 4).unwrap();
        assert!(
            trajectory.decay_certified(),
            "cumulative decay failed at {x:?}"
        );
        tested += 1;
    }
    finish(
        "criterion 08 (50 retraction trajectories, certified 1/9 decay and 4/3 steps)",
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_09_monovex_implies_acyclic_fuzz() {
    let started = Instant::now();
    for dim in [3usize, 2] {
        let config = FuzzConfig {
            seed: 0xACCE97,
            dim,
            box_budget: 6,
            mode: ClosednessMode::Closed,
            trials: 100,
        };
        let report = run_fuzz(&config);
        assert_eq!(report.trials.len(), 100);
        assert_eq!(
            report.violations, 0,
            "monovex closed instances must be acyclic in dim {dim}"
        );
    }
    finish(
        "criterion 09 (200 random closed monovex instances, all acyclic)",
        started,
        Duration::from_secs(300),
    );
}

#[test]
fn criterion_10_engine_matches_the_grid_oracle() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut checked = 0usize;
    while checked < 200 {
        let dim = rng.gen_range(1..=3);
        let mode = if checked % 2 == 0 {
            ClosednessMode::Closed
        } else {
            ClosednessMode::HalfOpen
        };
        let candidate = monovex::fuzz::random_candidate(&mut rng, dim, 6, mode);
        let points = sample_points(&candidate, 2, rng.gen());
        if points.len() < 2 || points[0] == points[1] {
            continue;
        }
        let (x, y) = (&points[0], &points[1]);
        let engine = monotone_reachable(&candidate, x, y).unwrap().is_some();
        // instances live on the quarter grid; the 1/8 grid contains every
        // breakpoint and both representatives
        let oracle = grid_oracle_reachable(&candidate, x, y, &dy(1, 3));
        assert_eq!(
            engine, oracle,
            "disagreement on {candidate:?} at {x:?} -> {y:?}"
        );
        checked += 1;
    }
    finish(
        "criterion 10 (engine vs grid oracle on 200 instances)",
        started,
        Duration::from_secs(120),
    );
}
