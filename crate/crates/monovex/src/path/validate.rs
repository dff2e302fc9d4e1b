use num_traits::{One, Zero};

use super::{MonotonePath, SignPattern};
use crate::geom::{Point, SpanComplex};
use crate::num::{Coord, Rational};

/// Exact validation of a monotone path against a complex: the declared
/// sign pattern must match the endpoints, every coordinate sequence must
/// follow it, and every waypoint and segment interior must lie in the
/// complex. Segment containment is decided per arrangement-cell crossing:
/// a segment is split at every hyperplane crossing (rational parameters)
/// and each crossing point and open piece midpoint is tested.
pub fn validate_monotone<S: Coord>(path: &MonotonePath<S>, complex: &SpanComplex<S>) -> bool {
    let wps = path.waypoints();
    let Some(first) = wps.first() else {
        return false;
    };
    if first.dim() != complex.dim() {
        return false;
    }
    if path.direction() != &SignPattern::between(path.start(), path.end()) {
        return false;
    }
    let dim = complex.dim();
    for axis in 0..dim {
        let sign = path.direction().sign(axis);
        for pair in wps.windows(2) {
            let ord = pair[1].coord(axis).cmp(pair[0].coord(axis));
            let ok = match sign {
                0 => ord == std::cmp::Ordering::Equal,
                1 => ord != std::cmp::Ordering::Less,
                _ => ord != std::cmp::Ordering::Greater,
            };
            if !ok {
                return false;
            }
        }
    }

    let rc = complex.to_rational();
    let mut breakpoints: Vec<Vec<Rational>> = vec![Vec::new(); dim];
    for b in rc.boxes() {
        for (axis, iv) in b.intervals().iter().enumerate() {
            breakpoints[axis].push(iv.lo().clone());
            breakpoints[axis].push(iv.hi().clone());
        }
    }
    for bp in &mut breakpoints {
        bp.sort();
        bp.dedup();
    }

    let rational_wps: Vec<Point<Rational>> = wps.iter().map(Point::to_rational).collect();
    for p in &rational_wps {
        if !rc.contains(p) {
            return false;
        }
    }
    for pair in rational_wps.windows(2) {
        if !segment_inside(&pair[0], &pair[1], &rc, &breakpoints) {
            return false;
        }
    }
    true
}

fn segment_inside(
    p: &Point<Rational>,
    q: &Point<Rational>,
    complex: &SpanComplex<Rational>,
    breakpoints: &[Vec<Rational>],
) -> bool {
    if p == q {
        return true;
    }
    // Parameters where the segment crosses an endpoint hyperplane.
    let mut cuts: Vec<Rational> = vec![Rational::zero(), Rational::one()];
    for axis in 0..p.dim() {
        let a = p.coord(axis);
        let b = q.coord(axis);
        if a == b {
            continue;
        }
        let run = b.clone() - a.clone();
        for bp in &breakpoints[axis] {
            let t = (bp.clone() - a.clone()) / run.clone();
            if t > Rational::zero() && t < Rational::one() {
                cuts.push(t);
            }
        }
    }
    cuts.sort();
    cuts.dedup();

    let at = |t: &Rational| -> Point<Rational> {
        Point::new(
            p.coords()
                .iter()
                .zip(q.coords())
                .map(|(a, b)| a.clone() + t.clone() * (b.clone() - a.clone()))
                .collect(),
        )
    };

    // Interior crossing points, and a representative inside every piece
    // between consecutive crossings; membership is constant there.
    for t in &cuts[1..cuts.len() - 1] {
        if !complex.contains(&at(t)) {
            return false;
        }
    }
    for pair in cuts.windows(2) {
        let mid = (pair[0].clone() + pair[1].clone()).half();
        if !complex.contains(&at(&mid)) {
            return false;
        }
    }
    true
}
