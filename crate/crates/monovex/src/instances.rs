//! Built-in example sets.
//!
//! Each generator reproduces a construction documented in the module docs
//! or a named surrogate for it. The truncated staircase keeps the first
//! `k` squares and omits the isolated accumulation point at the origin
//! (with the point and a finite truncation the set would be disconnected);
//! the full set is the `k -> infinity` limit.

use num_traits::{One, Signed};

use crate::geom::{BoxRegion, Interval, Point, SpanComplex};
use crate::num::Dyadic;
use crate::raster::SegmentSet;

type P = Point<Dyadic>;

/// Staircase of touching squares `[1/2^(j+1), 1/2^j]^2`, `j = 0..k`.
/// Monovex, and not a CW-complex in the untruncated limit.
pub fn example1(k: u32) -> SpanComplex<Dyadic> {
    assert!(k >= 1, "the staircase needs at least one square");
    let boxes = (0..k)
        .map(|j| {
            let hi = Dyadic::pow2(-(j as i32));
            let lo = hi.half();
            BoxRegion::new(vec![
                Interval::closed(lo.clone(), hi.clone()),
                Interval::closed(lo, hi),
            ])
        })
        .collect();
    SpanComplex::new(2, boxes).expect("squares are 2-dimensional")
}

/// The points of `[-1,1]^3` having at least one negative and at least one
/// nonnegative coordinate: a monovex set, neither open nor closed, that is
/// homotopy equivalent to the circle. Exactly the union of the six
/// half-open boxes `{ x_i in [-1,0), x_j in [0,1] }`, `i != j`.
pub fn example2() -> SpanComplex<Dyadic> {
    let one = Dyadic::one();
    let mut boxes = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            let intervals = (0..3)
                .map(|axis| {
                    if axis == i {
                        Interval::new(-one.clone(), Dyadic::from(0), true, false)
                            .expect("[-1,0) is nonempty")
                    } else if axis == j {
                        Interval::closed(Dyadic::from(0), one.clone())
                    } else {
                        Interval::closed(-one.clone(), one.clone())
                    }
                })
                .collect();
            boxes.push(BoxRegion::new(intervals));
        }
    }
    SpanComplex::new(3, boxes).expect("boxes are 3-dimensional")
}

/// Closed model of the half-open example: at least one coordinate at most
/// `-eps` and at least one nonnegative. A closed box complex (aligned to
/// the `eps`-grid when `eps` is dyadic); not monovex, with the same
/// circle obstruction.
pub fn example2_closed(eps: &Dyadic) -> SpanComplex<Dyadic> {
    assert!(eps > &Dyadic::from(0) && eps <= &Dyadic::one());
    let one = Dyadic::one();
    let mut boxes = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            let intervals = (0..3)
                .map(|axis| {
                    if axis == i {
                        Interval::closed(-one.clone(), -eps.clone())
                    } else if axis == j {
                        Interval::closed(Dyadic::from(0), one.clone())
                    } else {
                        Interval::closed(-one.clone(), one.clone())
                    }
                })
                .collect();
            boxes.push(BoxRegion::new(intervals));
        }
    }
    SpanComplex::new(3, boxes).expect("boxes are 3-dimensional")
}

/// Two joined segments whose Minkowski sum with a third segment meets the
/// line `x1 = x2 = 0` in exactly two points, so the sum is not monovex.
pub fn example3_segments() -> (SegmentSet, SegmentSet) {
    let a = SegmentSet::new(vec![
        (P::from_ints(&[0, 0, 0]), P::from_ints(&[0, 1, 1])),
        (P::from_ints(&[0, 1, 1]), P::from_ints(&[1, 1, 2])),
    ]);
    let b = SegmentSet::new(vec![(P::from_ints(&[0, 0, 0]), P::from_ints(&[-1, -1, 2]))]);
    (a, b)
}

/// Monovex three-segment staircase and the diagonal line (truncated to
/// parameter `[-t, t]`); their Minkowski sum is homotopy equivalent to the
/// circle.
pub fn example4_segments(t: &Dyadic) -> (SegmentSet, SegmentSet) {
    assert!(t.is_positive());
    let a = SegmentSet::new(vec![
        (P::from_ints(&[0, 0, 0]), P::from_ints(&[1, 0, 0])),
        (P::from_ints(&[1, 0, 0]), P::from_ints(&[1, 1, 0])),
        (P::from_ints(&[1, 1, 0]), P::from_ints(&[1, 1, 1])),
    ]);
    let lo = Point::new(vec![-t.clone(), -t.clone(), -t.clone()]);
    let hi = Point::new(vec![t.clone(), t.clone(), t.clone()]);
    let b = SegmentSet::new(vec![(lo, hi)]);
    (a, b)
}

/// L-shaped union of two rectangles: monovex but not convex.
pub fn lshape() -> SpanComplex<Dyadic> {
    SpanComplex::new(
        2,
        vec![
            BoxRegion::closed_from_corners(&P::from_ints(&[0, 0]), &P::from_ints(&[2, 1])),
            BoxRegion::closed_from_corners(&P::from_ints(&[0, 0]), &P::from_ints(&[1, 2])),
        ],
    )
    .expect("rectangles are 2-dimensional")
}

/// S-shaped union of three slabs: connected but not monovex (the slice
/// through x = 1/2 is disconnected).
pub fn sshape() -> SpanComplex<Dyadic> {
    SpanComplex::new(
        2,
        vec![
            BoxRegion::closed_from_corners(&P::from_ints(&[0, 0]), &P::from_ints(&[3, 1])),
            BoxRegion::closed_from_corners(&P::from_ints(&[2, 1]), &P::from_ints(&[3, 2])),
            BoxRegion::closed_from_corners(&P::from_ints(&[0, 2]), &P::from_ints(&[3, 3])),
        ],
    )
    .expect("slabs are 2-dimensional")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::dy;
    use crate::path::is_monovex;

    #[test]
    fn example1_is_monovex() {
        assert!(is_monovex(&example1(3)).is_monovex);
    }

    #[test]
    fn example2_membership_with_flags() {
        let a = example2();
        assert!(a.contains(&P::from_ints(&[-1, 1, 1])));
        assert!(!a.contains(&P::from_ints(&[1, 1, 1])));
        assert!(!a.contains(&P::from_ints(&[-1, -1, -1])));
        // boundary case: x_i = 0 is nonnegative, never negative
        assert!(!a.contains(&Point::new(vec![dy(0, 0), dy(1, 0), dy(1, 0)])));
    }

    #[test]
    fn example2_is_monovex_but_closed_model_is_not() {
        assert!(is_monovex(&example2()).is_monovex);
        let eps = dy(1, 2);
        let verdict = is_monovex(&example2_closed(&eps));
        assert!(!verdict.is_monovex);
        assert!(verdict.witness.is_some());
    }

    #[test]
    fn shapes() {
        assert!(is_monovex(&lshape()).is_monovex);
        assert!(!is_monovex(&sshape()).is_monovex);
    }
}
