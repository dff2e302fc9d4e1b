//! Brute-force reachability oracle, independent of the cell-walk engine.
//!
//! Reachability is re-decided by breadth-first search over a fine uniform
//! sample grid anchored at the b-hull corner of the two query points, with
//! single- and multi-axis unit hops restricted to the sign pattern of the
//! endpoints. Membership is tested directly against the boxes, never
//! through the arrangement, so agreement between the two engines is a
//! meaningful cross-check. The grid step must be fine enough that every
//! breakpoint of the complex lies on the grid; `oracle_step` picks half
//! the minimal endpoint gap and the caller is responsible for using
//! instances whose endpoint differences the step divides (complexes drawn
//! on a uniform lattice qualify).

use std::collections::{HashSet, VecDeque};

use num_traits::Signed;

use super::SignPattern;
use crate::geom::{Point, SpanComplex};
use crate::num::{Coord, Dyadic};

/// Half the smallest positive gap between endpoint values on any axis, or
/// `None` for complexes with fewer than two distinct endpoint values.
pub fn oracle_step(complex: &SpanComplex<Dyadic>) -> Option<Dyadic> {
    let mut min_gap: Option<Dyadic> = None;
    for axis in 0..complex.dim() {
        let mut values: Vec<Dyadic> = complex
            .boxes()
            .iter()
            .flat_map(|b| [b.interval(axis).lo().clone(), b.interval(axis).hi().clone()])
            .collect();
        values.sort();
        values.dedup();
        for pair in values.windows(2) {
            let gap = pair[1].clone() - pair[0].clone();
            min_gap = Some(match min_gap {
                None => gap,
                Some(g) => g.min(gap),
            });
        }
    }
    min_gap.map(|g| g.half())
}

/// Monotone reachability by grid BFS. A hop from `p` moves a nonempty set
/// of axes by one step each, every axis in its endpoint direction; the hop
/// is taken when both the target and the hop midpoint lie in the set.
pub fn grid_oracle_reachable(
    complex: &SpanComplex<Dyadic>,
    x: &Point<Dyadic>,
    y: &Point<Dyadic>,
    step: &Dyadic,
) -> bool {
    assert!(step.is_positive());
    if !complex.contains(x) || !complex.contains(y) {
        return false;
    }
    if x == y {
        return true;
    }
    let dim = complex.dim();
    let sigma = SignPattern::between(x, y);

    // integer grid coordinates relative to x
    let spans: Vec<i64> = (0..dim)
        .map(|axis| {
            let diff = y.coord(axis).clone() - x.coord(axis).clone();
            let quot = diff.to_rational() / step.to_rational();
            assert!(
                quot.is_integer(),
                "oracle grid must reach the second endpoint exactly"
            );
            use num_traits::ToPrimitive;
            quot.to_integer().to_i64().expect("grid span overflow")
        })
        .collect();

    let to_point = |idx: &[i64]| -> Point<Dyadic> {
        Point::new(
            (0..dim)
                .map(|axis| x.coord(axis).clone() + step.mul_int(idx[axis]))
                .collect(),
        )
    };

    let goal: Vec<i64> = spans.clone();
    let start = vec![0i64; dim];
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    seen.insert(start.clone());
    let mut queue = VecDeque::new();
    queue.push_back(start);

    let half = step.half();
    let moves = 3u32.pow(dim as u32);
    while let Some(cur) = queue.pop_front() {
        if cur == goal {
            return true;
        }
        let cur_point = to_point(&cur);
        'hop: for m in 1..moves {
            let mut next = cur.clone();
            let mut rest = m;
            let mut midpoint = Vec::with_capacity(dim);
            let mut moved = false;
            for axis in 0..dim {
                let digit = rest % 3;
                rest /= 3;
                let dir = match digit {
                    0 => 0i64,
                    1 => 1,
                    _ => -1,
                };
                if dir != 0 {
                    if dir != sigma.sign(axis) as i64 {
                        continue 'hop;
                    }
                    next[axis] += dir;
                    // b-hull confinement
                    if next[axis] < 0.min(spans[axis]) || next[axis] > 0.max(spans[axis]) {
                        continue 'hop;
                    }
                    moved = true;
                    midpoint.push(
                        cur_point.coord(axis).clone()
                            + if dir > 0 { half.clone() } else { -half.clone() },
                    );
                } else {
                    midpoint.push(cur_point.coord(axis).clone());
                }
            }
            if !moved || seen.contains(&next) {
                continue;
            }
            if complex.contains(&to_point(&next)) && complex.contains(&Point::new(midpoint)) {
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::BoxRegion;

    type P = Point<Dyadic>;

    fn boxes_2d(spec: &[(i64, i64, i64, i64)]) -> SpanComplex<Dyadic> {
        SpanComplex::new(
            2,
            spec.iter()
                .map(|&(x0, y0, x1, y1)| {
                    BoxRegion::closed_from_corners(
                        &P::from_ints(&[x0, y0]),
                        &P::from_ints(&[x1, y1]),
                    )
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn oracle_finds_the_corner_crossing() {
        let c = boxes_2d(&[(0, 0, 1, 1), (1, 1, 2, 2)]);
        let step = oracle_step(&c).unwrap();
        assert!(grid_oracle_reachable(
            &c,
            &P::from_ints(&[0, 0]),
            &P::from_ints(&[2, 2]),
            &step
        ));
    }

    #[test]
    fn oracle_rejects_the_s_shape_detour() {
        let s = boxes_2d(&[(0, 0, 3, 1), (2, 1, 3, 2), (0, 2, 3, 3)]);
        let step = oracle_step(&s).unwrap();
        // signs (-1, +1) cannot pass the middle bar at x >= 2
        let x = Point::new(vec![Dyadic::new(1.into(), 1), Dyadic::new(1.into(), 1)]);
        let y = Point::new(vec![Dyadic::from(0), Dyadic::new(5.into(), 1)]);
        assert!(!grid_oracle_reachable(&s, &x, &y, &step));
        // with both signs positive the staircase through the bar works
        let y2 = Point::new(vec![Dyadic::new(5.into(), 1), Dyadic::new(5.into(), 1)]);
        assert!(grid_oracle_reachable(&s, &x, &y2, &step));
    }
}
