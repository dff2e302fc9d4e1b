//! Exact voxelization of Minkowski sums of segment sets.
//!
//! The sum of two segments is a (possibly degenerate) parallelogram
//! `a0 + s*da + u*db`, `(s, u) in [0,1]^2`. A voxel cube intersects it iff
//! the linear system `v <= a0 + s*da + u*db <= v + h` has a solution in
//! the unit parameter square, which is decided exactly by clipping the
//! square with the 2n halfplanes in rational arithmetic. Occupancy is
//! therefore exact, not merely conservative: a voxel is occupied iff its
//! closed cube meets the modeled set (within the window).

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::geom::{BoxRegion, GeomError, Interval, Point, SpanComplex};
use crate::num::{Coord, Dyadic, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RasterError {
    #[error("segment sets must be nonempty")]
    EmptyInput,
    #[error("resolution must be positive")]
    NonPositiveResolution,
    #[error(transparent)]
    Geometry(#[from] GeomError),
}

/// A finite set of straight segments (point segments allowed).
#[derive(Clone, Debug)]
pub struct SegmentSet {
    dim: usize,
    segments: Vec<(Point<Dyadic>, Point<Dyadic>)>,
}

impl SegmentSet {
    pub fn new(segments: Vec<(Point<Dyadic>, Point<Dyadic>)>) -> Self {
        let dim = segments.first().map(|(p, _)| p.dim()).unwrap_or(0);
        for (p, q) in &segments {
            assert_eq!(p.dim(), dim);
            assert_eq!(q.dim(), dim);
        }
        SegmentSet { dim, segments }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn segments(&self) -> &[(Point<Dyadic>, Point<Dyadic>)] {
        &self.segments
    }
}

/// Occupancy set over the absolute `h`-grid (voxel `k` spans
/// `[k*h, (k+1)*h]` per axis), clipped to a window.
#[derive(Clone, Debug, Serialize)]
pub struct VoxelGrid {
    resolution: Dyadic,
    #[serde(skip)]
    window: BoxRegion<Dyadic>,
    occupancy: BTreeSet<Vec<i64>>,
}

impl VoxelGrid {
    pub fn resolution(&self) -> &Dyadic {
        &self.resolution
    }

    pub fn window(&self) -> &BoxRegion<Dyadic> {
        &self.window
    }

    pub fn occupancy(&self) -> &BTreeSet<Vec<i64>> {
        &self.occupancy
    }

    pub fn len(&self) -> usize {
        self.occupancy.len()
    }

    pub fn is_empty(&self) -> bool {
        self.occupancy.is_empty()
    }

    pub fn voxel_box(&self, idx: &[i64]) -> BoxRegion<Dyadic> {
        BoxRegion::new(
            idx.iter()
                .map(|&k| {
                    Interval::closed(self.resolution.mul_int(k), self.resolution.mul_int(k + 1))
                })
                .collect(),
        )
    }

    /// The occupied voxels as a closed box complex.
    pub fn to_complex(&self) -> SpanComplex<Dyadic> {
        let dim = self.window.ambient_dim();
        SpanComplex::new(
            dim,
            self.occupancy
                .iter()
                .map(|idx| self.voxel_box(idx))
                .collect(),
        )
        .expect("voxels share the window dimension")
    }

    /// OFF mesh of the occupied voxel cubes (quad faces), for figures.
    pub fn to_off(&self) -> String {
        assert_eq!(self.window.ambient_dim(), 3, "OFF export is for 3-D grids");
        let mut vertices = Vec::new();
        let mut faces = Vec::new();
        for idx in &self.occupancy {
            let base = vertices.len();
            for corner in 0..8u32 {
                let coords: Vec<f64> = (0..3)
                    .map(|a| {
                        let k = idx[a] + ((corner >> a) & 1) as i64;
                        self.resolution.mul_int(k).to_f64()
                    })
                    .collect();
                vertices.push(coords);
            }
            // six quads, outward order not needed for diagnostics
            for quad in [
                [0, 1, 3, 2],
                [4, 5, 7, 6],
                [0, 1, 5, 4],
                [2, 3, 7, 6],
                [0, 2, 6, 4],
                [1, 3, 7, 5],
            ] {
                faces.push([
                    base + quad[0],
                    base + quad[1],
                    base + quad[2],
                    base + quad[3],
                ]);
            }
        }
        let mut out = format!("OFF\n{} {} 0\n", vertices.len(), faces.len());
        for v in &vertices {
            out.push_str(&format!("{} {} {}\n", v[0], v[1], v[2]));
        }
        for f in &faces {
            out.push_str(&format!("4 {} {} {} {}\n", f[0], f[1], f[2], f[3]));
        }
        out
    }
}

/// Exact voxel cover of `{ a + b : a in A, b in B }` clipped to the
/// window.
pub fn rasterize_minkowski(
    a: &SegmentSet,
    b: &SegmentSet,
    h: &Dyadic,
    window: &BoxRegion<Dyadic>,
) -> Result<VoxelGrid, RasterError> {
    if a.segments.is_empty() || b.segments.is_empty() {
        return Err(RasterError::EmptyInput);
    }
    if !h.is_positive() {
        return Err(RasterError::NonPositiveResolution);
    }
    let dim = a.dim;
    window.check_dim(dim).map_err(RasterError::Geometry)?;
    if b.dim != dim {
        return Err(RasterError::Geometry(GeomError::DimensionMismatch {
            expected: dim,
            got: b.dim,
        }));
    }

    let mut occupancy = BTreeSet::new();
    for (p0, p1) in &a.segments {
        for (q0, q1) in &b.segments {
            let origin = p0.add(q0);
            let da = p1.sub(p0);
            let db = q1.sub(q0);
            rasterize_pair(&origin, &da, &db, h, window, &mut occupancy);
        }
    }
    Ok(VoxelGrid {
        resolution: h.clone(),
        window: window.clone(),
        occupancy,
    })
}

fn rasterize_pair(
    origin: &Point<Dyadic>,
    da: &Point<Dyadic>,
    db: &Point<Dyadic>,
    h: &Dyadic,
    window: &BoxRegion<Dyadic>,
    occupancy: &mut BTreeSet<Vec<i64>>,
) {
    let dim = origin.dim();
    // per-axis value range of the parallelogram, intersected with the window
    let mut lo_idx = Vec::with_capacity(dim);
    let mut hi_idx = Vec::with_capacity(dim);
    for axis in 0..dim {
        let base = origin.coord(axis).clone();
        let mut lo = base.clone();
        let mut hi = base;
        for d in [da.coord(axis), db.coord(axis)] {
            if d.is_positive() {
                hi = hi + d.clone();
            } else {
                lo = lo + d.clone();
            }
        }
        let wlo = window.interval(axis).lo();
        let whi = window.interval(axis).hi();
        let lo = if &lo < wlo { wlo.clone() } else { lo };
        let hi = if &hi > whi { whi.clone() } else { hi };
        if lo > hi {
            return;
        }
        // voxel k meets [lo, hi] iff k*h <= hi and (k+1)*h >= lo; boundary
        // touches count (closed cubes)
        let from = lo.ceil_div(h) - num_bigint::BigInt::from(1);
        let to = hi.floor_div(h);
        use num_traits::ToPrimitive;
        lo_idx.push(from.to_i64().expect("window indices fit machine integers"));
        hi_idx.push(to.to_i64().expect("window indices fit machine integers"));
    }

    // exact plane prefilter in 3-D: the parallelogram lies in the plane
    // normal . x = normal . origin when the normal is nonzero
    let normal: Option<Vec<Dyadic>> = if dim == 3 {
        let n = vec![
            da.coord(1).clone() * db.coord(2).clone() - da.coord(2).clone() * db.coord(1).clone(),
            da.coord(2).clone() * db.coord(0).clone() - da.coord(0).clone() * db.coord(2).clone(),
            da.coord(0).clone() * db.coord(1).clone() - da.coord(1).clone() * db.coord(0).clone(),
        ];
        if n.iter().all(Dyadic::is_zero) {
            None
        } else {
            Some(n)
        }
    } else {
        None
    };
    let plane_rhs = normal.as_ref().map(|n| {
        (0..dim)
            .map(|a| n[a].clone() * origin.coord(a).clone())
            .fold(Dyadic::zero(), |s, v| s + v)
    });

    let mut idx = lo_idx.clone();
    'outer: loop {
        let mut candidate = true;
        if let (Some(n), Some(rhs)) = (&normal, &plane_rhs) {
            // interval evaluation of normal . x over the voxel cube
            let mut lo = Dyadic::zero();
            let mut hi = Dyadic::zero();
            for axis in 0..dim {
                let a = n[axis].clone() * h.mul_int(idx[axis]);
                let b = n[axis].clone() * h.mul_int(idx[axis] + 1);
                if a <= b {
                    lo = lo + a;
                    hi = hi + b;
                } else {
                    lo = lo + b;
                    hi = hi + a;
                }
            }
            if *rhs < lo || *rhs > hi {
                candidate = false;
            }
        }
        if candidate && !occupancy.contains(&idx) && voxel_meets_pair(origin, da, db, h, &idx) {
            occupancy.insert(idx.clone());
        }
        for axis in (0..dim).rev() {
            if idx[axis] < hi_idx[axis] {
                idx[axis] += 1;
                for (a, slot) in idx.iter_mut().enumerate().skip(axis + 1) {
                    *slot = lo_idx[a];
                }
                continue 'outer;
            }
        }
        break;
    }
}

/// Exact feasibility of `v <= origin + s*da + u*db <= v + h` over the unit
/// parameter square, by rational halfplane clipping.
fn voxel_meets_pair(
    origin: &Point<Dyadic>,
    da: &Point<Dyadic>,
    db: &Point<Dyadic>,
    h: &Dyadic,
    idx: &[i64],
) -> bool {
    let dim = origin.dim();
    // polygon in (s, u) space
    let mut poly: Vec<(Rational, Rational)> = vec![
        (Rational::zero(), Rational::zero()),
        (Rational::one(), Rational::zero()),
        (Rational::one(), Rational::one()),
        (Rational::zero(), Rational::one()),
    ];
    for axis in 0..dim {
        let alpha = da.coord(axis).to_rational();
        let beta = db.coord(axis).to_rational();
        let base = origin.coord(axis).to_rational();
        let lo = h.mul_int(idx[axis]).to_rational() - base.clone();
        let hi = h.mul_int(idx[axis] + 1).to_rational() - base;
        // alpha*s + beta*u >= lo  and  -(alpha*s + beta*u) >= -hi
        poly = clip(&poly, &alpha, &beta, &lo);
        if poly.is_empty() {
            return false;
        }
        poly = clip(&poly, &(-alpha), &(-beta), &(-hi));
        if poly.is_empty() {
            return false;
        }
    }
    true
}

/// Sutherland-Hodgman step: keep `alpha*s + beta*u >= gamma`.
fn clip(
    poly: &[(Rational, Rational)],
    alpha: &Rational,
    beta: &Rational,
    gamma: &Rational,
) -> Vec<(Rational, Rational)> {
    if poly.is_empty() {
        return Vec::new();
    }
    let value = |p: &(Rational, Rational)| {
        alpha.clone() * p.0.clone() + beta.clone() * p.1.clone() - gamma.clone()
    };
    let mut out = Vec::with_capacity(poly.len() + 2);
    for i in 0..poly.len() {
        let cur = &poly[i];
        let next = &poly[(i + 1) % poly.len()];
        let fc = value(cur);
        let fn_ = value(next);
        if !fc.is_negative() {
            out.push(cur.clone());
        }
        if (fc.is_negative() && fn_.is_positive()) || (fc.is_positive() && fn_.is_negative()) {
            let t = fc.clone() / (fc - fn_.clone());
            out.push((
                cur.0.clone() + t.clone() * (next.0.clone() - cur.0.clone()),
                cur.1.clone() + t * (next.1.clone() - cur.1.clone()),
            ));
        }
    }
    // a single-vertex polygon (point contact) still witnesses nonemptiness
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::dy;

    type P = Point<Dyadic>;

    fn window3(lo: i64, hi: i64) -> BoxRegion<Dyadic> {
        BoxRegion::closed_from_corners(&P::from_ints(&[lo, lo, lo]), &P::from_ints(&[hi, hi, hi]))
    }

    #[test]
    fn identity_summand_covers_the_segment() {
        let a = SegmentSet::new(vec![(P::from_ints(&[0, 0, 0]), P::from_ints(&[0, 0, 0]))]);
        let b = SegmentSet::new(vec![(P::from_ints(&[0, 0, 0]), P::from_ints(&[1, 0, 0]))]);
        let g = rasterize_minkowski(&a, &b, &dy(1, 1), &window3(-1, 2)).unwrap();
        // the segment runs along the x-axis: every voxel touching it is
        // occupied, including the corner-touching rows below
        assert!(g.occupancy().contains(&vec![0, 0, 0]));
        assert!(g.occupancy().contains(&vec![1, 0, 0]));
        assert!(g.occupancy().contains(&vec![0, -1, -1]));
        assert!(!g.occupancy().contains(&vec![0, 1, 1]));
        let c = g.to_complex();
        assert!(c.contains(&Point::new(vec![
            dy(1, 1),
            Dyadic::from(0),
            Dyadic::from(0)
        ])));
    }

    #[test]
    fn single_voxel_to_complex() {
        let a = SegmentSet::new(vec![(P::from_ints(&[0, 0, 0]), P::from_ints(&[0, 0, 0]))]);
        let b = SegmentSet::new(vec![(P::from_ints(&[0, 0, 0]), P::from_ints(&[0, 0, 0]))]);
        let g = rasterize_minkowski(&a, &b, &Dyadic::one(), &window3(-2, 2)).unwrap();
        // the origin is a corner of 8 unit voxels
        assert_eq!(g.len(), 8);
    }

    #[test]
    fn conservativeness_on_a_parameter_grid() {
        let a = SegmentSet::new(vec![(P::from_ints(&[0, 0, 0]), P::from_ints(&[0, 1, 1]))]);
        let b = SegmentSet::new(vec![(P::from_ints(&[0, 0, 0]), P::from_ints(&[-1, -1, 2]))]);
        let h = dy(1, 2);
        let g = rasterize_minkowski(&a, &b, &h, &window3(-2, 4)).unwrap();
        let complex = g.to_complex();
        // dense dyadic parameter grid: every exact sum point is covered
        for i in 0..=8 {
            for j in 0..=8 {
                let s = dy(i, 3);
                let u = dy(j, 3);
                let p = Point::new(vec![
                    -u.clone(),
                    s.clone() - u.clone(),
                    s.clone() + u.clone() + u.clone(),
                ]);
                assert!(complex.contains(&p), "uncovered sum point {p:?}");
            }
        }
    }

    #[test]
    fn resolution_halving_keeps_sum_points_covered() {
        let (a, b) = crate::instances::example3_segments();
        let coarse = rasterize_minkowski(&a, &b, &dy(1, 1), &window3(-2, 4))
            .unwrap()
            .to_complex();
        let fine = rasterize_minkowski(&a, &b, &dy(1, 2), &window3(-2, 4))
            .unwrap()
            .to_complex();
        for i in 0..=4 {
            for j in 0..=4 {
                let s = dy(i, 2);
                let u = dy(j, 2);
                // first segment pair of the example
                let p = Point::new(vec![
                    -u.clone(),
                    s.clone() - u.clone(),
                    s.clone() + u.clone() + u.clone(),
                ]);
                assert!(coarse.contains(&p));
                assert!(fine.contains(&p));
            }
        }
    }
}
