//! Extension fields over the staircase codomain: hull confinement and
//! spread halving at depth, value stability, and violation detection on a
//! corrupted field.

use std::collections::BTreeMap;

use monovex::extension::{extend, ExtensionField, LatticeSample};
use monovex::fuzz::sample_points;
use monovex::geom::{BoxRegion, Lattice, Point, SpanComplex};
use monovex::instances;
use monovex::num::{dy, Dyadic};

type P = Point<Dyadic>;

fn unit_square_domain() -> (Lattice<Dyadic>, SpanComplex<Dyadic>) {
    let lat = Lattice::uniform(2, Dyadic::from(1));
    let domain = SpanComplex::from_box(BoxRegion::closed_from_corners(
        &P::from_ints(&[0, 0]),
        &P::from_ints(&[1, 1]),
    ));
    (lat, domain)
}

fn staircase_seed(k: u32, seed: u64) -> (LatticeSample, SpanComplex<Dyadic>) {
    let a = instances::example1(k);
    let (lat, domain) = unit_square_domain();
    let corners = domain.boxes()[0].vertices();
    let pool = sample_points(&a, corners.len(), seed);
    let values: BTreeMap<_, _> = corners
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), pool[i % pool.len()].clone()))
        .collect();
    (LatticeSample::new(lat, domain, values, &a).unwrap(), a)
}

#[test]
fn square_seed_over_the_staircase_passes_both_reports() {
    let (seed, a) = staircase_seed(3, 5);
    let field = extend(&seed, 4, &a).unwrap();
    let hull = field.hull_property_report();
    assert!(
        hull.violations.is_empty(),
        "hull violations: {:?}",
        hull.violations
    );
    assert!(hull.boxes_checked > 0);
    let spread = field.spread_report();
    assert!(
        spread.violations.is_empty(),
        "spread violations: {:?}",
        spread.violations
    );
    // the rotation alternates between the two codomain axes
    assert_eq!(spread.levels[0].rotation_axis, 0);
    assert_eq!(spread.levels[1].rotation_axis, 1);
    assert_eq!(spread.levels[2].rotation_axis, 0);
}

#[test]
fn level_one_field_from_corner_snapped_seed() {
    let (seed, a) = staircase_seed(3, 9);
    let field = extend(&seed, 1, &a).unwrap();
    assert!(field.hull_property_report().violations.is_empty());
    // values live in the codomain
    for v in field.samples().values() {
        assert!(a.contains(v));
    }
}

#[test]
fn depth_zero_is_the_seed() {
    let (seed, a) = staircase_seed(2, 1);
    let field = extend(&seed, 0, &a).unwrap();
    assert_eq!(field.samples().len(), seed.values().len());
    for (k, v) in seed.values() {
        assert_eq!(field.value(k), Some(v));
    }
}

#[test]
fn corrupted_midpoint_is_flagged_exactly_once() {
    // 1-D domain, convex codomain [0, 1]: f(0) = 0, f(1) = 1/2, so the
    // hull is [0, 1/2]; planting f(1/2) = 1 lands outside it
    let lat = Lattice::uniform(1, Dyadic::from(1));
    let domain = SpanComplex::from_box(BoxRegion::closed_from_corners(
        &P::from_ints(&[0]),
        &P::from_ints(&[1]),
    ));
    let a = SpanComplex::from_box(BoxRegion::closed_from_corners(
        &P::from_ints(&[0]),
        &P::from_ints(&[1]),
    ));
    let mut values = BTreeMap::new();
    values.insert(P::from_ints(&[0]), P::from_ints(&[0]));
    values.insert(P::from_ints(&[1]), Point::new(vec![dy(1, 1)]));
    let seed = LatticeSample::new(lat, domain, values, &a).unwrap();

    let mut samples = extend(&seed, 1, &a).unwrap().samples().clone();
    samples.insert(Point::new(vec![dy(1, 1)]), P::from_ints(&[1]));
    let corrupted = ExtensionField::from_samples(seed, a, 1, samples);
    let report = corrupted.hull_property_report();
    assert_eq!(report.violations.len(), 1);
    assert_eq!(report.violations[0].point, Point::new(vec![dy(1, 1)]));
}

#[test]
fn mid_range_point_pins_only_the_requested_axis() {
    // L-shape, extremes (2, 0) and (0, 2) on axis 0: the mid-range pin is
    // at coordinate 1; the rest of the point depends on the path choice
    use monovex::extension::mid_range_point;
    use monovex::path::PathFinder;
    let finder = PathFinder::new(instances::lshape());
    let pts = vec![P::from_ints(&[2, 0]), P::from_ints(&[0, 2])];
    let z = mid_range_point(&pts, 0, &finder).unwrap();
    assert_eq!(z.coord(0), &Dyadic::from(1));
    assert!(instances::lshape().contains(&z));
}

#[test]
fn depth_six_staircase_field_halves_on_rotation_axes() {
    let (seed, a) = staircase_seed(3, 17);
    let field = extend(&seed, 6, &a).unwrap();
    let report = field.spread_report();
    assert!(report.violations.is_empty());
    assert_eq!(report.levels.len(), 6);
    // with both axes rotated three times each, the overall spread decays;
    // the measured exponent is recorded
    if let Some(estimate) = report.holder_exponent_estimate {
        assert!(
            estimate > 0.0,
            "spread must shrink across levels, got {estimate}"
        );
    }
    assert!(field.hull_property_report().violations.is_empty());
}
