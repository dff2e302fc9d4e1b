use serde::Serialize;

use super::{Arrangement, BoxRegion, GeomError, Interval, Point};
use crate::num::{Coord, Rational};

/// A finite union of axis-aligned boxes with set semantics. The empty
/// complex (no boxes) is representable.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct SpanComplex<S> {
    dim: usize,
    boxes: Vec<BoxRegion<S>>,
}

/// Result of a Chebyshev point-to-set distance query. The value is the
/// infimum (the distance to the closure); `attained` records whether some
/// point of the set realizes it, which can fail only across open facets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChebDistance<S> {
    pub value: S,
    pub attained: bool,
}

impl<S: Coord> SpanComplex<S> {
    pub fn new(dim: usize, boxes: Vec<BoxRegion<S>>) -> Result<Self, GeomError> {
        for b in &boxes {
            b.check_dim(dim)?;
        }
        Ok(SpanComplex { dim, boxes })
    }

    pub fn empty(dim: usize) -> Self {
        SpanComplex {
            dim,
            boxes: Vec::new(),
        }
    }

    pub fn from_box(b: BoxRegion<S>) -> Self {
        SpanComplex {
            dim: b.ambient_dim(),
            boxes: vec![b],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn boxes(&self) -> &[BoxRegion<S>] {
        &self.boxes
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.boxes.iter().all(BoxRegion::is_closed)
    }

    pub fn try_contains(&self, p: &Point<S>) -> Result<bool, GeomError> {
        if p.dim() != self.dim {
            return Err(GeomError::DimensionMismatch {
                expected: self.dim,
                got: p.dim(),
            });
        }
        Ok(self.boxes.iter().any(|b| b.contains(p)))
    }

    /// Exact set membership; panics on dimension mismatch.
    pub fn contains(&self, p: &Point<S>) -> bool {
        self.try_contains(p)
            .expect("point/complex dimension mismatch")
    }

    /// Chebyshev distance from `p` to the union.
    pub fn cheb_distance(&self, p: &Point<S>) -> Result<ChebDistance<S>, GeomError> {
        if p.dim() != self.dim {
            return Err(GeomError::DimensionMismatch {
                expected: self.dim,
                got: p.dim(),
            });
        }
        if self.boxes.is_empty() {
            return Err(GeomError::EmptyComplex);
        }
        let mut best: Option<ChebDistance<S>> = None;
        for b in &self.boxes {
            let r = b
                .intervals()
                .iter()
                .zip(p.coords())
                .map(|(iv, c)| iv.dist_to_closure(c))
                .max()
                .unwrap_or_else(S::zero);
            let attained = if r.is_zero() {
                b.contains(p)
            } else {
                b.intervals().iter().zip(p.coords()).all(|(iv, c)| {
                    if iv.dist_to_closure(c) == r {
                        // the binding axes must offer their nearest endpoint
                        if *c < *iv.lo() {
                            iv.lo_closed()
                        } else {
                            iv.hi_closed()
                        }
                    } else {
                        true
                    }
                })
            };
            best = match best {
                None => Some(ChebDistance { value: r, attained }),
                Some(cur) => {
                    if r < cur.value || (r == cur.value && attained && !cur.attained) {
                        Some(ChebDistance { value: r, attained })
                    } else {
                        Some(cur)
                    }
                }
            };
        }
        Ok(best.expect("nonempty complex"))
    }

    /// Nearest point of a closed complex together with its distance; the
    /// per-box clamp of `p`, lexicographically smallest across minimizing
    /// boxes so the choice is deterministic.
    pub fn nearest_point(&self, p: &Point<S>) -> Result<(Point<S>, S), GeomError> {
        if self.boxes.is_empty() {
            return Err(GeomError::EmptyComplex);
        }
        let mut best: Option<(Point<S>, S)> = None;
        for b in &self.boxes {
            debug_assert!(b.is_closed(), "nearest_point expects a closed complex");
            let q = Point::new(
                b.intervals()
                    .iter()
                    .zip(p.coords())
                    .map(|(iv, c)| {
                        if *c < *iv.lo() {
                            iv.lo().clone()
                        } else if *c > *iv.hi() {
                            iv.hi().clone()
                        } else {
                            c.clone()
                        }
                    })
                    .collect(),
            );
            let d = q.cheb(p);
            best = match best {
                None => Some((q, d)),
                Some((bq, bd)) => {
                    if d < bd || (d == bd && q < bq) {
                        Some((q, d))
                    } else {
                        Some((bq, bd))
                    }
                }
            };
        }
        Ok(best.expect("nonempty complex"))
    }

    /// Projection onto the listed coordinate axes; union semantics are
    /// preserved exactly.
    pub fn project(&self, axes: &[usize]) -> Result<SpanComplex<S>, GeomError> {
        if axes.is_empty() {
            return Err(GeomError::EmptyInput("project"));
        }
        for &a in axes {
            if a >= self.dim {
                return Err(GeomError::AxisOutOfRange {
                    axis: a,
                    dim: self.dim,
                });
            }
        }
        Ok(SpanComplex {
            dim: axes.len(),
            boxes: self.boxes.iter().map(|b| b.project(axes)).collect(),
        })
    }

    /// Minkowski sum with a single box, distributed over the union.
    pub fn minkowski_box(&self, r: &BoxRegion<S>) -> Result<SpanComplex<S>, GeomError> {
        r.check_dim(self.dim)?;
        Ok(SpanComplex {
            dim: self.dim,
            boxes: self.boxes.iter().map(|b| b.sum(r)).collect(),
        })
    }

    /// Intersection with a single box; may return an empty complex.
    pub fn intersect_box(&self, r: &BoxRegion<S>) -> Result<SpanComplex<S>, GeomError> {
        r.check_dim(self.dim)?;
        Ok(SpanComplex {
            dim: self.dim,
            boxes: self.boxes.iter().filter_map(|b| b.intersect(r)).collect(),
        })
    }

    /// The slice `{ y : (..., v at axis, ...) in self }` as a complex one
    /// dimension down.
    pub fn slice(&self, axis: usize, v: &S) -> Result<SpanComplex<S>, GeomError> {
        if axis >= self.dim {
            return Err(GeomError::AxisOutOfRange {
                axis,
                dim: self.dim,
            });
        }
        let keep: Vec<usize> = (0..self.dim).filter(|&a| a != axis).collect();
        Ok(SpanComplex {
            dim: self.dim - 1,
            boxes: self
                .boxes
                .iter()
                .filter(|b| b.interval(axis).contains(v))
                .map(|b| b.project(&keep))
                .collect(),
        })
    }

    /// Partition of the union into points and open-interval products
    /// induced by all per-axis endpoints. Every returned cell lies entirely
    /// inside the union.
    pub fn arrangement_cells(&self) -> Vec<BoxRegion<S>> {
        let arr = Arrangement::build(self);
        arr.cells().iter().map(|c| arr.cell_box(c)).collect()
    }

    /// Smallest closed box containing the whole union (`None` when empty).
    pub fn bounding_box(&self) -> Option<BoxRegion<S>> {
        let mut boxes = self.boxes.iter();
        let first = boxes.next()?.to_closed();
        Some(boxes.fold(first, |acc, b| {
            BoxRegion::new(
                acc.intervals()
                    .iter()
                    .zip(b.intervals())
                    .map(|(a, c)| {
                        Interval::closed(
                            a.lo().clone().min(c.lo().clone()),
                            a.hi().clone().max(c.hi().clone()),
                        )
                    })
                    .collect(),
            )
        }))
    }

    /// True when every point of `self` lies in `other`, decided exactly on
    /// the combined arrangement.
    pub fn subset_of(&self, other: &SpanComplex<S>) -> Result<bool, GeomError> {
        if other.dim != self.dim {
            return Err(GeomError::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut combined = self.clone();
        combined.boxes.extend(other.boxes.iter().cloned());
        let arr = Arrangement::build(&combined);
        for cell in arr.cells() {
            let rep = arr.representative(cell);
            if self.contains(&rep) && !other.contains(&rep) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_rational(&self) -> SpanComplex<Rational> {
        SpanComplex {
            dim: self.dim,
            boxes: self.boxes.iter().map(BoxRegion::to_rational).collect(),
        }
    }

    pub fn push_box(&mut self, b: BoxRegion<S>) -> Result<(), GeomError> {
        b.check_dim(self.dim)?;
        self.boxes.push(b);
        Ok(())
    }
}

impl<S: Coord> std::fmt::Debug for SpanComplex<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "SpanComplex(dim {}, {} boxes)",
            self.dim,
            self.boxes.len()
        )?;
        for b in &self.boxes {
            writeln!(f, "  {b:?}")?;
        }
        Ok(())
    }
}

/// Smallest closed box containing all the points.
pub fn bhull<S: Coord>(points: &[Point<S>]) -> Result<BoxRegion<S>, GeomError> {
    let first = points.first().ok_or(GeomError::EmptyInput("bhull"))?;
    let dim = first.dim();
    for p in points {
        if p.dim() != dim {
            return Err(GeomError::DimensionMismatch {
                expected: dim,
                got: p.dim(),
            });
        }
    }
    let intervals = (0..dim)
        .map(|axis| {
            let lo = points
                .iter()
                .map(|p| p.coord(axis).clone())
                .min()
                .expect("nonempty");
            let hi = points
                .iter()
                .map(|p| p.coord(axis).clone())
                .max()
                .expect("nonempty");
            Interval::closed(lo, hi)
        })
        .collect();
    Ok(BoxRegion::new(intervals))
}
