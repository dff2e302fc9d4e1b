use serde::Serialize;

use super::{BoxRegion, GeomError, Interval, Point};
use crate::num::Coord;

/// An axis-scaled integer lattice `{ origin + (a_1 k_1, ..., a_n k_n) }`
/// with positive steps.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct Lattice<S> {
    steps: Vec<S>,
    origin: Point<S>,
}

impl<S: Coord> std::fmt::Debug for Lattice<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Lattice(steps ")?;
        for (i, s) in self.steps.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "; origin {:?})", self.origin)
    }
}

impl<S: Coord> Lattice<S> {
    pub fn new(steps: Vec<S>, origin: Point<S>) -> Result<Self, GeomError> {
        if steps.len() != origin.dim() {
            return Err(GeomError::DimensionMismatch {
                expected: steps.len(),
                got: origin.dim(),
            });
        }
        if steps.iter().any(|s| !s.is_positive()) {
            return Err(GeomError::NonPositiveStep);
        }
        Ok(Lattice { steps, origin })
    }

    /// Uniform lattice with one step on every axis and zero origin.
    pub fn uniform(dim: usize, step: S) -> Self {
        Lattice::new(vec![step; dim], Point::new(vec![S::zero(); dim]))
            .expect("uniform lattice step must be positive")
    }

    pub fn dim(&self) -> usize {
        self.steps.len()
    }

    pub fn steps(&self) -> &[S] {
        &self.steps
    }

    pub fn origin(&self) -> &Point<S> {
        &self.origin
    }

    pub fn step(&self, axis: usize) -> &S {
        &self.steps[axis]
    }

    /// The lattice refined by `2^levels` on every axis.
    pub fn refined(&self, levels: u32) -> Lattice<S> {
        let mut steps = self.steps.clone();
        for _ in 0..levels {
            steps = steps.iter().map(Coord::half).collect();
        }
        Lattice {
            steps,
            origin: self.origin.clone(),
        }
    }

    pub fn coordinate(&self, axis: usize, index: i64) -> S {
        self.origin.coord(axis).clone() + self.steps[axis].clone() * S::from_int(index)
    }

    /// True when `v` lies on the lattice on the given axis.
    pub fn on_axis(&self, axis: usize, v: &S) -> bool {
        let rel = (v.clone() - self.origin.coord(axis).clone()).to_rational();
        (rel / self.steps[axis].to_rational()).is_integer()
    }

    pub fn on_lattice(&self, p: &Point<S>) -> bool {
        (0..self.dim()).all(|axis| self.on_axis(axis, p.coord(axis)))
    }

    /// Largest lattice index with coordinate `<= v` on the axis.
    pub fn floor_index(&self, axis: usize, v: &S) -> i64 {
        use num_traits::ToPrimitive;
        let rel = (v.clone() - self.origin.coord(axis).clone()).to_rational();
        (rel / self.steps[axis].to_rational())
            .floor()
            .to_integer()
            .to_i64()
            .expect("lattice index overflow")
    }

    pub fn ceil_index(&self, axis: usize, v: &S) -> i64 {
        use num_traits::ToPrimitive;
        let rel = (v.clone() - self.origin.coord(axis).clone()).to_rational();
        (rel / self.steps[axis].to_rational())
            .ceil()
            .to_integer()
            .to_i64()
            .expect("lattice index overflow")
    }

    /// The full-dimensional elementary cell with the given anchor indices.
    pub fn cell(&self, anchor: &[i64]) -> BoxRegion<S> {
        BoxRegion::new(
            anchor
                .iter()
                .enumerate()
                .map(|(axis, &k)| {
                    Interval::closed(self.coordinate(axis, k), self.coordinate(axis, k + 1))
                })
                .collect(),
        )
    }
}

/// All `l`-dimensional elementary boxes of the lattice whose relative
/// interior meets the closed window.
pub fn elementary_boxes<S: Coord>(
    lat: &Lattice<S>,
    l: usize,
    window: &BoxRegion<S>,
) -> Result<Vec<BoxRegion<S>>, GeomError> {
    let n = lat.dim();
    window.check_dim(n)?;
    if l > n {
        return Err(GeomError::BadBoxDimension { l, n });
    }

    // Per axis: the candidate point coordinates and unit intervals meeting
    // the window.
    let mut points: Vec<Vec<i64>> = Vec::with_capacity(n);
    let mut segments: Vec<Vec<i64>> = Vec::with_capacity(n);
    for axis in 0..n {
        let lo = window.interval(axis).lo();
        let hi = window.interval(axis).hi();
        let p_lo = lat.ceil_index(axis, lo);
        let p_hi = lat.floor_index(axis, hi);
        points.push((p_lo..=p_hi).collect());
        let s_lo = lat.floor_index(axis, lo) - if lat.on_axis(axis, lo) { 1 } else { 0 };
        let s_hi = lat.floor_index(axis, hi);
        // a segment factor counts only when its interior meets the window,
        // so boxes touching the window by a lower-dimensional face are out
        segments.push(
            (s_lo..=s_hi)
                .filter(|&k| lat.coordinate(axis, k + 1) > *lo && lat.coordinate(axis, k) < *hi)
                .collect(),
        );
    }

    let mut out = Vec::new();
    // Choose which axes are extended (exactly l of them).
    let mut mask = vec![false; n];
    fn rec<S: Coord>(
        axis: usize,
        remaining: usize,
        mask: &mut Vec<bool>,
        lat: &Lattice<S>,
        points: &[Vec<i64>],
        segments: &[Vec<i64>],
        out: &mut Vec<BoxRegion<S>>,
    ) {
        let n = mask.len();
        if n - axis < remaining {
            return;
        }
        if axis == n {
            if remaining == 0 {
                emit(mask, lat, points, segments, out);
            }
            return;
        }
        mask[axis] = false;
        rec(axis + 1, remaining, mask, lat, points, segments, out);
        if remaining > 0 {
            mask[axis] = true;
            rec(axis + 1, remaining - 1, mask, lat, points, segments, out);
            mask[axis] = false;
        }
    }
    fn emit<S: Coord>(
        mask: &[bool],
        lat: &Lattice<S>,
        points: &[Vec<i64>],
        segments: &[Vec<i64>],
        out: &mut Vec<BoxRegion<S>>,
    ) {
        let n = mask.len();
        let choices: Vec<&Vec<i64>> = (0..n)
            .map(|a| if mask[a] { &segments[a] } else { &points[a] })
            .collect();
        if choices.iter().any(|c| c.is_empty()) {
            return;
        }
        let mut idx = vec![0usize; n];
        'outer: loop {
            let intervals = (0..n)
                .map(|a| {
                    let k = choices[a][idx[a]];
                    if mask[a] {
                        Interval::closed(lat.coordinate(a, k), lat.coordinate(a, k + 1))
                    } else {
                        Interval::point(lat.coordinate(a, k))
                    }
                })
                .collect();
            out.push(BoxRegion::new(intervals));
            for a in (0..n).rev() {
                if idx[a] + 1 < choices[a].len() {
                    idx[a] += 1;
                    for slot in idx.iter_mut().skip(a + 1) {
                        *slot = 0;
                    }
                    continue 'outer;
                }
            }
            break;
        }
    }
    rec(0, l, &mut mask, lat, &points, &segments, &mut out);
    Ok(out)
}
