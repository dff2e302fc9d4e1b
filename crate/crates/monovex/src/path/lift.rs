use num_traits::Zero;

use super::{MonotonePath, PathError};
use crate::geom::{BoxRegion, Point};
use crate::num::{Coord, Rational};

/// Lifts a monotone path through a Minkowski sum with a box.
///
/// Given a monotone path `gamma_prime` between `x'` and `y'` in a set `A`
/// and points `a'`, `b'` of the box `r`, returns the monotone path
/// `gamma = gamma' + delta` from `x' + a'` to `y' + b'` inside `A + r`.
/// On the moving axes, `delta` is the affine image `D gamma' + v` solved
/// from the endpoint conditions; on frozen axes it interpolates linearly
/// from `a'` to `b'`. The diagonal entries of `D` are genuine quotients,
/// so the lifted path has rational waypoints.
pub fn lift_minkowski_path<S: Coord>(
    gamma_prime: &MonotonePath<S>,
    a_prime: &Point<S>,
    b_prime: &Point<S>,
    r: &BoxRegion<S>,
) -> Result<MonotonePath<Rational>, PathError> {
    let dim = gamma_prime.dim();
    r.check_dim(dim).map_err(PathError::Geometry)?;
    if !r.contains(a_prime) {
        return Err(PathError::EndpointOutsideBox(format!("{a_prime:?}")));
    }
    if !r.contains(b_prime) {
        return Err(PathError::EndpointOutsideBox(format!("{b_prime:?}")));
    }

    let x = gamma_prime.start().to_rational();
    let y = gamma_prime.end().to_rational();
    let a = a_prime.to_rational();
    let b = b_prime.to_rational();

    // Per-axis affine maps on the moving axes: scale * coord + offset
    // sends x'_i to a'_i and y'_i to b'_i.
    let mut scale: Vec<Option<(Rational, Rational)>> = Vec::with_capacity(dim);
    for axis in 0..dim {
        let run = y.coord(axis).clone() - x.coord(axis).clone();
        if run.is_zero() {
            scale.push(None);
        } else {
            let d = (b.coord(axis).clone() - a.coord(axis).clone()) / run;
            let v = a.coord(axis).clone() - d.clone() * x.coord(axis).clone();
            scale.push(Some((d, v)));
        }
    }

    let mut source: Vec<Point<Rational>> = gamma_prime
        .waypoints()
        .iter()
        .map(Point::to_rational)
        .collect();
    if source.len() == 1 {
        source.push(source[0].clone());
    }
    let segments = (source.len() - 1) as i64;

    let mut waypoints = Vec::with_capacity(source.len());
    for (k, wp) in source.iter().enumerate() {
        let t = Rational::new(
            num_bigint::BigInt::from(k as i64),
            num_bigint::BigInt::from(segments),
        );
        let coords = (0..dim)
            .map(|axis| {
                let shift = match &scale[axis] {
                    Some((d, v)) => d.clone() * wp.coord(axis).clone() + v.clone(),
                    None => {
                        a.coord(axis).clone()
                            + t.clone() * (b.coord(axis).clone() - a.coord(axis).clone())
                    }
                };
                wp.coord(axis).clone() + shift
            })
            .collect();
        waypoints.push(Point::new(coords));
    }
    waypoints.dedup();
    MonotonePath::new(waypoints)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Interval, SpanComplex};
    use crate::num::Dyadic;
    use crate::path::validate_monotone;

    type P = Point<Dyadic>;

    #[test]
    fn point_box_shifts_the_path() {
        let gamma = MonotonePath::new(vec![P::from_ints(&[0, 0]), P::from_ints(&[1, 1])]).unwrap();
        let shift = P::from_ints(&[2, 3]);
        let r = BoxRegion::point_box(&shift);
        let lifted = lift_minkowski_path(&gamma, &shift, &shift, &r).unwrap();
        assert_eq!(lifted.start(), &P::from_ints(&[2, 3]).to_rational());
        assert_eq!(lifted.end(), &P::from_ints(&[3, 4]).to_rational());
    }

    #[test]
    fn constant_path_with_equal_shifts_stays_constant() {
        let gamma = MonotonePath::constant(P::from_ints(&[1, 1]));
        let r = BoxRegion::closed_from_corners(&P::from_ints(&[0, 0]), &P::from_ints(&[1, 1]));
        let corner = P::from_ints(&[1, 0]);
        let lifted = lift_minkowski_path(&gamma, &corner, &corner, &r).unwrap();
        assert_eq!(lifted.waypoints().len(), 1);
        assert_eq!(lifted.start(), &P::from_ints(&[2, 1]).to_rational());
    }

    #[test]
    fn staircase_lift_is_valid_in_the_sum() {
        // two unit squares joined at a corner and the corner path
        let a = SpanComplex::new(
            2,
            vec![
                BoxRegion::closed_from_corners(&P::from_ints(&[0, 0]), &P::from_ints(&[1, 1])),
                BoxRegion::closed_from_corners(&P::from_ints(&[1, 1]), &P::from_ints(&[2, 2])),
            ],
        )
        .unwrap();
        let gamma = MonotonePath::new(vec![
            P::from_ints(&[0, 0]),
            P::from_ints(&[1, 1]),
            P::from_ints(&[2, 2]),
        ])
        .unwrap();
        let r = BoxRegion::new(vec![
            Interval::closed(Dyadic::from(0), Dyadic::new(1.into(), 2)),
            Interval::closed(Dyadic::from(0), Dyadic::new(1.into(), 2)),
        ]);
        let a0 = P::from_ints(&[0, 0]);
        let b0 = Point::new(vec![Dyadic::new(1.into(), 2), Dyadic::new(1.into(), 2)]);
        let lifted = lift_minkowski_path(&gamma, &a0, &b0, &r).unwrap();
        let sum = a.minkowski_box(&r).unwrap().to_rational();
        assert!(validate_monotone(&lifted, &sum));
    }
}
