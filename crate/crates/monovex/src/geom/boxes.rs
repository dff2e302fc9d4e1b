use serde::Serialize;

use super::{GeomError, Interval, Point};
use crate::num::{Coord, Rational};

/// An axis-aligned box: a product of per-axis intervals, possibly
/// degenerate (point factors) and with independently open or closed ends.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct BoxRegion<S> {
    intervals: Vec<Interval<S>>,
}

impl<S: Coord> BoxRegion<S> {
    pub fn new(intervals: Vec<Interval<S>>) -> Self {
        BoxRegion { intervals }
    }

    /// Closed box spanned by two opposite corners given per axis.
    pub fn closed_from_corners(lo: &Point<S>, hi: &Point<S>) -> Self {
        assert_eq!(lo.dim(), hi.dim());
        BoxRegion {
            intervals: lo
                .coords()
                .iter()
                .zip(hi.coords())
                .map(|(a, b)| Interval::closed(a.clone(), b.clone()))
                .collect(),
        }
    }

    /// The closed Chebyshev ball of radius `r` around `center`.
    pub fn cheb_ball(center: &Point<S>, r: &S, closed: bool) -> Self {
        BoxRegion {
            intervals: center
                .coords()
                .iter()
                .map(|c| {
                    Interval::new(c.clone() - r.clone(), c.clone() + r.clone(), closed, closed)
                        .expect("ball radius must be nonnegative")
                })
                .collect(),
        }
    }

    pub fn point_box(p: &Point<S>) -> Self {
        BoxRegion {
            intervals: p.coords().iter().cloned().map(Interval::point).collect(),
        }
    }

    /// Ambient dimension (number of axis factors).
    pub fn ambient_dim(&self) -> usize {
        self.intervals.len()
    }

    /// Geometric dimension: number of non-point factors.
    pub fn dimension(&self) -> usize {
        self.intervals.iter().filter(|iv| !iv.is_point()).count()
    }

    pub fn intervals(&self) -> &[Interval<S>] {
        &self.intervals
    }

    pub fn interval(&self, axis: usize) -> &Interval<S> {
        &self.intervals[axis]
    }

    pub fn is_closed(&self) -> bool {
        self.intervals.iter().all(Interval::is_closed)
    }

    pub fn contains(&self, p: &Point<S>) -> bool {
        assert_eq!(p.dim(), self.ambient_dim());
        self.intervals
            .iter()
            .zip(p.coords())
            .all(|(iv, c)| iv.contains(c))
    }

    pub fn intersect(&self, other: &BoxRegion<S>) -> Option<BoxRegion<S>> {
        assert_eq!(self.ambient_dim(), other.ambient_dim());
        let mut intervals = Vec::with_capacity(self.intervals.len());
        for (a, b) in self.intervals.iter().zip(&other.intervals) {
            intervals.push(a.intersect(b)?);
        }
        Some(BoxRegion { intervals })
    }

    /// Minkowski sum, componentwise.
    pub fn sum(&self, other: &BoxRegion<S>) -> BoxRegion<S> {
        assert_eq!(self.ambient_dim(), other.ambient_dim());
        BoxRegion {
            intervals: self
                .intervals
                .iter()
                .zip(&other.intervals)
                .map(|(a, b)| a.sum(b))
                .collect(),
        }
    }

    /// All corner points (2^dimension of them; point factors contribute a
    /// single choice).
    pub fn vertices(&self) -> Vec<Point<S>> {
        let mut out = vec![Vec::with_capacity(self.intervals.len())];
        for iv in &self.intervals {
            if iv.is_point() {
                for v in &mut out {
                    v.push(iv.lo().clone());
                }
            } else {
                let mut next = Vec::with_capacity(out.len() * 2);
                for v in out {
                    let mut with_hi = v.clone();
                    let mut with_lo = v;
                    with_lo.push(iv.lo().clone());
                    with_hi.push(iv.hi().clone());
                    next.push(with_lo);
                    next.push(with_hi);
                }
                out = next;
            }
        }
        out.into_iter().map(Point::new).collect()
    }

    pub fn center(&self) -> Point<S> {
        Point::new(self.intervals.iter().map(Interval::midpoint).collect())
    }

    pub fn to_closed(&self) -> BoxRegion<S> {
        BoxRegion {
            intervals: self.intervals.iter().map(Interval::to_closed).collect(),
        }
    }

    pub fn project(&self, axes: &[usize]) -> BoxRegion<S> {
        BoxRegion {
            intervals: axes.iter().map(|&a| self.intervals[a].clone()).collect(),
        }
    }

    pub fn to_rational(&self) -> BoxRegion<Rational> {
        BoxRegion {
            intervals: self
                .intervals
                .iter()
                .map(|iv| {
                    Interval::new(
                        iv.lo().to_rational(),
                        iv.hi().to_rational(),
                        iv.lo_closed(),
                        iv.hi_closed(),
                    )
                    .expect("rational embedding preserves order")
                })
                .collect(),
        }
    }

    pub fn check_dim(&self, expected: usize) -> Result<(), GeomError> {
        if self.ambient_dim() != expected {
            Err(GeomError::DimensionMismatch {
                expected,
                got: self.ambient_dim(),
            })
        } else {
            Ok(())
        }
    }
}

impl<S: Coord> std::fmt::Debug for BoxRegion<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, iv) in self.intervals.iter().enumerate() {
            if i > 0 {
                write!(f, " x ")?;
            }
            write!(f, "{iv:?}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::Dyadic;

    #[test]
    fn vertices_of_unit_cube() {
        let b: BoxRegion<Dyadic> = BoxRegion::closed_from_corners(
            &Point::from_ints(&[0, 0, 0]),
            &Point::from_ints(&[1, 1, 1]),
        );
        assert_eq!(b.vertices().len(), 8);
        assert_eq!(b.dimension(), 3);
    }

    #[test]
    fn degenerate_axes_reduce_dimension() {
        let b: BoxRegion<Dyadic> = BoxRegion::new(vec![
            Interval::point(Dyadic::from(1)),
            Interval::closed(Dyadic::from(0), Dyadic::from(2)),
        ]);
        assert_eq!(b.dimension(), 1);
        assert_eq!(b.vertices().len(), 2);
    }
}
