//! Pipeline-level audits of the retraction machinery on the staircase
//! instance: thickening gaps, ball bounds, neighborhood monovexity,
//! selection bounds, graph-inclusion witnesses, containment ordering, and
//! path repair, all at randomized exterior queries.

use monovex::geom::{BoxRegion, Interval, Point, SpanComplex};
use monovex::instances;
use monovex::num::{dy, Dyadic};
use monovex::path::{is_monovex, monotone_reachable, validate_monotone};
use monovex::retraction::{
    ball_bound_holds, iterate_retraction, local_radius, nearest_point_map, neighborhood_map,
    q_order_report, repair_path, retraction_step, sandwich_audit, selection_modulus, thicken,
};
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type P = Point<Dyadic>;

/// Deterministic exterior query points around the staircase.
fn exterior_points(a: &SpanComplex<Dyadic>, count: usize, seed: u64) -> Vec<P> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = Point::new(vec![
            dy(rng.gen_range(-8..24), 3),
            dy(rng.gen_range(-8..24), 3),
        ]);
        if !a.contains(&p) {
            out.push(p);
        }
    }
    out
}

#[test]
fn nearest_set_of_the_staircase_is_monovex() {
    let a = instances::example1(3);
    let f = nearest_point_map(&a, &P::from_ints(&[1, 0])).unwrap();
    assert!(!f.is_empty());
    assert!(is_monovex(&f).is_monovex);
}

#[test]
fn thickening_gap_is_within_eta_at_random_queries() {
    let a = instances::example1(3);
    for x in exterior_points(&a, 100, 1) {
        let entry = thicken(&a, &x).unwrap();
        assert!(entry.scales.invariant_holds());
        // audit via distances: every vertex and center of every
        // thickened cell is within eta of the nearest set
        for cell in entry.thickened.boxes() {
            let mut probes = cell.vertices();
            probes.push(cell.center());
            for p in probes {
                let d = entry.nearest.cheb_distance(&p).unwrap().value;
                assert!(d <= *entry.eta(), "gap {d} exceeds eta {}", entry.eta());
            }
        }
        assert!(entry.gap_within_eta());
    }
}

#[test]
fn neighborhood_ball_bound_at_random_queries() {
    let a = instances::example1(3);
    for x in exterior_points(&a, 100, 2) {
        let entry = thicken(&a, &x).unwrap();
        let g = entry.inflated();
        assert!(ball_bound_holds(&x, &entry.scales.dist, &g));
    }
}

#[test]
fn neighborhood_is_monovex_at_random_queries() {
    let a = instances::example1(3);
    for x in exterior_points(&a, 20, 3) {
        let g = neighborhood_map(&a, &x, std::slice::from_ref(&x), 5).unwrap();
        assert!(
            is_monovex(&g.complex).is_monovex,
            "neighborhood of {x:?} not monovex"
        );
        let entry = thicken(&a, &x).unwrap();
        assert!(entry.nearest.subset_of(&g.complex).unwrap());
    }
}

#[test]
fn selection_bounds_hold_pointwise() {
    let a = instances::example1(3);
    for x in exterior_points(&a, 50, 4) {
        let d = a.cheb_distance(&x).unwrap().value;
        let (g, _) = retraction_step(&a, &x).unwrap();
        let moved = g.cheb(&x);
        assert!(moved.mul_int(3) <= d.mul_int(4), "step too long at {x:?}");
        let after = a.cheb_distance(&g).unwrap().value;
        assert!(after.mul_int(9) <= d, "decay failed at {x:?}");
    }
}

#[test]
fn graph_inclusion_witnesses_at_random_queries() {
    let a = instances::example1(3);
    for x in exterior_points(&a, 30, 5) {
        let audit = sandwich_audit(&a, &x).unwrap();
        assert!(audit.nearest_inside);
        assert!(audit.ball_bound);
        for w in &audit.witnesses {
            assert!(w.ok, "witness gap too large: {w:?}");
        }
    }
}

#[test]
fn far_query_accepts_the_first_radius_candidate() {
    let interval = SpanComplex::from_box(BoxRegion::closed_from_corners(
        &P::from_ints(&[0]),
        &P::from_ints(&[1]),
    ));
    let x = P::from_ints(&[100]);
    let r = local_radius(&interval, &x, 30).unwrap();
    assert!(r.probe_verified);
    let entry = thicken(&interval, &x).unwrap();
    assert_eq!(r.delta, entry.eta().half());
}

#[test]
fn containment_order_of_nearby_thickenings() {
    let a = instances::example1(3);
    let x = P::from_ints(&[2, 2]);
    // nearby queries in a small ball around x
    let mut sample = vec![x.clone()];
    for i in 1..6 {
        sample.push(Point::new(vec![
            Dyadic::from(2) + dy(i, 12),
            Dyadic::from(2) - dy(i, 12),
        ]));
    }
    let g = neighborhood_map(&a, &x, &sample, 5).unwrap();
    let report = q_order_report(&a, &g.contributors).unwrap();
    assert!(
        report.incomparable.is_empty(),
        "incomparable thickenings among close queries: {:?}",
        report.incomparable
    );
}

#[test]
fn selection_modulus_is_recorded() {
    let a = instances::example1(3);
    let x = P::from_ints(&[2, 2]);
    let pairs = selection_modulus(&a, &x, &dy(1, 5), 20).unwrap();
    assert!(!pairs.is_empty());
    for (input, output) in pairs {
        assert!(input.is_positive() || output == Dyadic::from(0));
    }
}

#[test]
fn repaired_path_on_a_staircase_thickening() {
    let a = instances::example1(3);
    let x = P::from_ints(&[2, 0]);
    // the nearest set is the segment {1} x [1/2, 1]
    let entry = thicken(&a, &x).unwrap();
    let y_prime = Point::new(vec![Dyadic::from(1), dy(1, 1)]);
    let z_prime = P::from_ints(&[1, 1]);
    assert!(entry.nearest.contains(&y_prime));
    assert!(entry.nearest.contains(&z_prime));
    let gamma = monotone_reachable(&entry.nearest, &y_prime, &z_prime)
        .unwrap()
        .expect("nearest set is monovex");
    let eta = entry.eta().clone();
    let y = Point::new(vec![Dyadic::from(1) - eta.clone(), dy(1, 1) - eta.clone()]);
    let z = Point::new(vec![
        Dyadic::from(1) + eta.clone(),
        Dyadic::from(1) + eta.clone(),
    ]);
    assert!(entry.thickened.contains(&y));
    assert!(entry.thickened.contains(&z));
    let repaired = repair_path(&entry, &y, &z, &y_prime, &z_prime, &gamma).unwrap();
    assert!(validate_monotone(&repaired, &entry.thickened.to_rational()));
    assert_eq!(repaired.start(), &y.to_rational());
    assert_eq!(repaired.end(), &z.to_rational());
}

#[test]
fn repair_requires_shared_cells() {
    let a = instances::example1(3);
    let x = P::from_ints(&[2, 0]);
    let entry = thicken(&a, &x).unwrap();
    let near = P::from_ints(&[1, 1]);
    let gamma = monovex::path::MonotonePath::constant(near.clone());
    // a far-away thickened point does not share a cell with (1, 1)
    let far = Point::new(vec![Dyadic::from(1), dy(1, 1)]);
    let err = repair_path(&entry, &far, &near, &near, &near, &gamma).unwrap_err();
    assert!(matches!(
        err,
        monovex::retraction::RetractionError::CellSharingViolated(_)
    ));
}

#[test]
fn trajectory_boundary_step_contracts_by_nine() {
    let a = instances::example1(3);
    let x = Point::new(vec![Dyadic::from(1) + dy(1, 4), Dyadic::from(1)]);
    assert!(!a.contains(&x));
    let t = iterate_retraction(&a, &x, 1).unwrap();
    assert!(t.dists[1].mul_int(9) <= t.dists[0]);
}

#[test]
fn decay_csv_has_one_row_per_step() {
    let interval = SpanComplex::from_box(BoxRegion::new(vec![Interval::closed(
        Dyadic::from(0),
        Dyadic::from(1),
    )]));
    let t = iterate_retraction(&interval, &P::from_ints(&[2]), 3).unwrap();
    let csv = t.to_decay_csv();
    assert_eq!(csv.lines().count(), 5); // header + k = 0..=3
    assert!(csv.starts_with("k,distance,bound\n"));
}
