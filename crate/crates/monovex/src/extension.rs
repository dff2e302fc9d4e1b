//! Extension of lattice samples into a monovex set by iterated dyadic
//! refinement.
//!
//! A map from the lattice vertices of a box domain `X` into a monovex set
//! `A` is refined level by level: every new point of the halved lattice is
//! the center of a unique elementary box of the previous level, and its
//! value is taken on a monotone path between the vertex images attaining
//! the minimal and maximal coordinate on the current rotation axis, at the
//! exact mid-range of that coordinate. Two diagnostics certify the
//! construction at finite depth: every value stays in the b-hull of the
//! enclosing boxes' vertex images, and the per-box image spread halves on
//! the rotation axis at every level.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::geom::{bhull, elementary_boxes, BoxRegion, GeomError, Lattice, Point, SpanComplex};
use crate::num::{Coord, Dyadic};
use crate::path::{PathError, PathFinder};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtensionError {
    #[error("sample key {0} is not on the lattice")]
    KeyOffLattice(String),
    #[error("sample key {0} lies outside the domain")]
    KeyOutsideDomain(String),
    #[error("sample value {0} lies outside the codomain")]
    ValueOutsideCodomain(String),
    #[error("missing seed value at domain vertex {0}")]
    MissingSeedValue(String),
    #[error("query point {0} lies outside the domain")]
    PointOutsideDomain(String),
    #[error("query point {0} is not dyadic relative to the lattice")]
    PointOffGrid(String),
    #[error("no monotone path between {from} and {to}: codomain is not monovex")]
    NotMonovex { from: String, to: String },
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error(transparent)]
    Path(#[from] PathError),
}

/// A map from the lattice vertices of a box domain into a codomain set.
#[derive(Clone, Debug)]
pub struct LatticeSample {
    lattice: Lattice<Dyadic>,
    domain: SpanComplex<Dyadic>,
    values: BTreeMap<Point<Dyadic>, Point<Dyadic>>,
}

impl LatticeSample {
    /// Validates that the domain is a closed lattice-aligned box union,
    /// every key is a domain vertex, every domain vertex has a value, and
    /// every value lies in the codomain.
    pub fn new(
        lattice: Lattice<Dyadic>,
        domain: SpanComplex<Dyadic>,
        values: BTreeMap<Point<Dyadic>, Point<Dyadic>>,
        codomain: &SpanComplex<Dyadic>,
    ) -> Result<Self, ExtensionError> {
        for b in domain.boxes() {
            for (axis, iv) in b.intervals().iter().enumerate() {
                if !iv.is_closed()
                    || !lattice.on_axis(axis, iv.lo())
                    || !lattice.on_axis(axis, iv.hi())
                {
                    return Err(ExtensionError::KeyOutsideDomain(format!(
                        "domain box {b:?} is not lattice-aligned and closed"
                    )));
                }
            }
        }
        let sample = LatticeSample {
            lattice,
            domain,
            values,
        };
        for key in sample.values.keys() {
            if !sample.lattice.on_lattice(key) {
                return Err(ExtensionError::KeyOffLattice(format!("{key:?}")));
            }
            if !sample.domain.contains(key) {
                return Err(ExtensionError::KeyOutsideDomain(format!("{key:?}")));
            }
        }
        for v in sample.vertices() {
            if !sample.values.contains_key(&v) {
                return Err(ExtensionError::MissingSeedValue(format!("{v:?}")));
            }
        }
        for value in sample.values.values() {
            if !codomain.contains(value) {
                return Err(ExtensionError::ValueOutsideCodomain(format!("{value:?}")));
            }
        }
        Ok(sample)
    }

    pub fn lattice(&self) -> &Lattice<Dyadic> {
        &self.lattice
    }

    pub fn domain(&self) -> &SpanComplex<Dyadic> {
        &self.domain
    }

    pub fn values(&self) -> &BTreeMap<Point<Dyadic>, Point<Dyadic>> {
        &self.values
    }

    /// All lattice vertices of the domain.
    pub fn vertices(&self) -> BTreeSet<Point<Dyadic>> {
        lattice_points_in(&self.lattice, &self.domain)
    }
}

/// Lattice points lying in the (closed) union.
pub(crate) fn lattice_points_in(
    lat: &Lattice<Dyadic>,
    domain: &SpanComplex<Dyadic>,
) -> BTreeSet<Point<Dyadic>> {
    let mut out = BTreeSet::new();
    let dim = lat.dim();
    for b in domain.boxes() {
        let ranges: Vec<(i64, i64)> = (0..dim)
            .map(|axis| {
                (
                    lat.ceil_index(axis, b.interval(axis).lo()),
                    lat.floor_index(axis, b.interval(axis).hi()),
                )
            })
            .collect();
        if ranges.iter().any(|&(lo, hi)| lo > hi) {
            continue;
        }
        let mut idx: Vec<i64> = ranges.iter().map(|&(lo, _)| lo).collect();
        'outer: loop {
            out.insert(Point::new(
                (0..dim)
                    .map(|axis| lat.coordinate(axis, idx[axis]))
                    .collect(),
            ));
            for axis in (0..dim).rev() {
                if idx[axis] < ranges[axis].1 {
                    idx[axis] += 1;
                    for (a, slot) in idx.iter_mut().enumerate().skip(axis + 1) {
                        *slot = ranges[a].0;
                    }
                    continue 'outer;
                }
            }
            break;
        }
    }
    out
}

/// What the lazy evaluator needs from a domain: its base lattice, exact
/// membership, and the seed values on the base vertices.
pub trait ExtensionDomain {
    fn lattice(&self) -> &Lattice<Dyadic>;
    fn contains(&self, q: &Point<Dyadic>) -> bool;
    fn seed_value(&self, q: &Point<Dyadic>) -> Option<Point<Dyadic>>;
}

impl ExtensionDomain for LatticeSample {
    fn lattice(&self) -> &Lattice<Dyadic> {
        &self.lattice
    }

    fn contains(&self, q: &Point<Dyadic>) -> bool {
        self.domain.contains(q)
    }

    fn seed_value(&self, q: &Point<Dyadic>) -> Option<Point<Dyadic>> {
        self.values.get(q).cloned()
    }
}

/// Lazy evaluator of the refined extension: values at any dyadic
/// refinement of the base lattice are computed recursively and memoized.
/// Refining level `k` to `k+1` rotates through the codomain axes,
/// `k mod n`.
pub struct Extender<D> {
    seed: D,
    finder: PathFinder<Dyadic>,
    memo: HashMap<Point<Dyadic>, Point<Dyadic>>,
}

impl<D: ExtensionDomain> Extender<D> {
    pub fn new(seed: D, codomain: SpanComplex<Dyadic>) -> Self {
        Extender {
            seed,
            finder: PathFinder::new(codomain),
            memo: HashMap::new(),
        }
    }

    pub fn seed(&self) -> &D {
        &self.seed
    }

    pub fn codomain(&self) -> &SpanComplex<Dyadic> {
        self.finder.complex()
    }

    pub fn rotation_axis(&self, level_from: u32) -> usize {
        level_from as usize % self.codomain().dim()
    }

    /// The refinement level a point first appears at: the smallest `d`
    /// with `q` on the `2^-d`-refined lattice.
    pub fn level_of(&self, q: &Point<Dyadic>) -> Result<u32, ExtensionError> {
        let (level, _) = self.grid_coords(q)?;
        Ok(level)
    }

    /// Level plus the integer grid coordinates at that level.
    fn grid_coords(&self, q: &Point<Dyadic>) -> Result<(u32, Vec<BigInt>), ExtensionError> {
        let lat = self.seed.lattice();
        let mut exponents = Vec::with_capacity(lat.dim());
        let mut numerators = Vec::with_capacity(lat.dim());
        let mut level = 0u32;
        for axis in 0..lat.dim() {
            let rel = (q.coord(axis).clone() - lat.origin().coord(axis).clone()).to_rational()
                / lat.step(axis).to_rational();
            let denom = rel.denom();
            let bits = denom.bits() as u32;
            if *denom != (BigInt::from(1) << (bits as usize - 1)) {
                return Err(ExtensionError::PointOffGrid(format!("{q:?}")));
            }
            let exp = bits - 1;
            exponents.push(exp);
            numerators.push(rel.numer().clone());
            level = level.max(exp);
        }
        let scaled = numerators
            .into_iter()
            .zip(exponents)
            .map(|(num, exp)| num << (level - exp) as usize)
            .collect();
        Ok((level, scaled))
    }

    /// Value of the extension at any dyadic refinement point of the
    /// domain.
    pub fn eval(&mut self, q: &Point<Dyadic>) -> Result<Point<Dyadic>, ExtensionError> {
        if let Some(v) = self.memo.get(q) {
            return Ok(v.clone());
        }
        if !self.seed.contains(q) {
            return Err(ExtensionError::PointOutsideDomain(format!("{q:?}")));
        }
        let (level, scaled) = self.grid_coords(q)?;
        let value = if level == 0 {
            self.seed
                .seed_value(q)
                .ok_or_else(|| ExtensionError::MissingSeedValue(format!("{q:?}")))?
        } else {
            // q is the center of a unique elementary box one level up;
            // its vertices sit one fine step away on the odd axes
            let lat = self.seed.lattice();
            let odd_axes: Vec<usize> = (0..lat.dim()).filter(|&a| scaled[a].is_odd()).collect();
            debug_assert!(
                !odd_axes.is_empty(),
                "deeper-level points are odd somewhere"
            );

            let fine = Dyadic::pow2(-(level as i32));
            let mut vertices = vec![q.clone()];
            for &axis in &odd_axes {
                let step = lat.step(axis).clone() * fine.clone();
                let mut next = Vec::with_capacity(vertices.len() * 2);
                for v in vertices {
                    let mut lo = v.coords().to_vec();
                    let mut hi = lo.clone();
                    lo[axis] = lo[axis].clone() - step.clone();
                    hi[axis] = hi[axis].clone() + step.clone();
                    next.push(Point::new(lo));
                    next.push(Point::new(hi));
                }
                vertices = next;
            }
            let images = vertices
                .iter()
                .map(|v| self.eval(v))
                .collect::<Result<Vec<_>, _>>()?;
            let axis = self.rotation_axis(level - 1);
            mid_range_point(&images, axis, &self.finder)?
        };
        self.memo.insert(q.clone(), value.clone());
        Ok(value)
    }
}

/// A point of the codomain whose coordinate on `axis` is exactly the
/// mid-range of the given points' coordinates, found on the deterministic
/// monotone path between the smallest-index points attaining the minimum
/// and the maximum.
pub fn mid_range_point(
    points: &[Point<Dyadic>],
    axis: usize,
    finder: &PathFinder<Dyadic>,
) -> Result<Point<Dyadic>, ExtensionError> {
    assert!(!points.is_empty());
    let min = points
        .iter()
        .map(|p| p.coord(axis))
        .min()
        .expect("nonempty")
        .clone();
    let max = points
        .iter()
        .map(|p| p.coord(axis))
        .max()
        .expect("nonempty")
        .clone();
    if min == max {
        return Ok(points[0].clone());
    }
    let from = points
        .iter()
        .find(|p| *p.coord(axis) == min)
        .expect("attained");
    let to = points
        .iter()
        .find(|p| *p.coord(axis) == max)
        .expect("attained");
    let path = finder
        .reachable(from, to)?
        .ok_or_else(|| ExtensionError::NotMonovex {
            from: format!("{from:?}"),
            to: format!("{to:?}"),
        })?;
    let mid = Dyadic::midpoint(&min, &max);

    let wps = path.waypoints();
    for (k, w) in wps.iter().enumerate() {
        if *w.coord(axis) == mid {
            return Ok(w.clone());
        }
        if *w.coord(axis) > mid {
            // the crossing lies inside the previous segment; the mixed
            // point below stays on that segment's cell and in the span of
            // its endpoints
            let prev = &wps[k - 1];
            let coords = (0..w.dim())
                .map(|a| {
                    if a == axis {
                        mid.clone()
                    } else {
                        Dyadic::midpoint(prev.coord(a), w.coord(a))
                    }
                })
                .collect();
            let z = Point::new(coords);
            debug_assert!(finder.contains(&z));
            return Ok(z);
        }
    }
    unreachable!("monotone coordinate must cross its mid-range")
}

/// Dense sampling of the extension at a fixed depth.
#[derive(Clone, Debug)]
pub struct ExtensionField {
    seed: LatticeSample,
    codomain: SpanComplex<Dyadic>,
    depth: u32,
    samples: BTreeMap<Point<Dyadic>, Point<Dyadic>>,
}

/// Extends the seed to depth `k`: all values on the `2^-k`-refined lattice
/// inside the domain. Deterministic given the path tie-breaking.
pub fn extend(
    seed: &LatticeSample,
    depth: u32,
    codomain: &SpanComplex<Dyadic>,
) -> Result<ExtensionField, ExtensionError> {
    let mut extender = Extender::new(seed.clone(), codomain.clone());
    let fine = seed.lattice().refined(depth);
    let mut samples = BTreeMap::new();
    for q in lattice_points_in(&fine, seed.domain()) {
        let v = extender.eval(&q)?;
        samples.insert(q, v);
    }
    Ok(ExtensionField {
        seed: seed.clone(),
        codomain: codomain.clone(),
        depth,
        samples,
    })
}

/// One more level of refinement; previously computed values are stable.
pub fn refine_once(field: &ExtensionField) -> Result<ExtensionField, ExtensionError> {
    extend(&field.seed, field.depth + 1, &field.codomain)
}

impl ExtensionField {
    /// Wraps externally supplied samples (for checking hand-built or
    /// imported fields); the reports treat them exactly like computed
    /// ones.
    pub fn from_samples(
        seed: LatticeSample,
        codomain: SpanComplex<Dyadic>,
        depth: u32,
        samples: BTreeMap<Point<Dyadic>, Point<Dyadic>>,
    ) -> Self {
        ExtensionField {
            seed,
            codomain,
            depth,
            samples,
        }
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn seed(&self) -> &LatticeSample {
        &self.seed
    }

    pub fn samples(&self) -> &BTreeMap<Point<Dyadic>, Point<Dyadic>> {
        &self.samples
    }

    pub fn value(&self, q: &Point<Dyadic>) -> Option<&Point<Dyadic>> {
        self.samples.get(q)
    }

    /// Elementary boxes of every dimension `1..=m` at a level, inside the
    /// domain.
    fn level_boxes(&self, k: u32) -> Vec<BoxRegion<Dyadic>> {
        let m = self.seed.lattice().dim();
        let window = self.seed.domain().bounding_box().expect("nonempty domain");
        let lat = self.seed.lattice().refined(k);
        let mut boxes = Vec::new();
        for l in 1..=m {
            for b in elementary_boxes(&lat, l, &window).expect("window is bounded") {
                // the domain is a closed union of full base cells, so the
                // center decides containment of the whole elementary box
                if self.seed.domain().contains(&b.center()) {
                    boxes.push(b);
                }
            }
        }
        boxes
    }

    /// Checks that every sample inside every elementary box of every
    /// coarser level lies in the b-hull of that box's vertex images.
    pub fn hull_property_report(&self) -> HullReport {
        let mut violations = Vec::new();
        let mut boxes_checked = 0usize;
        let fine = self.seed.lattice().refined(self.depth);
        for level in 0..self.depth {
            for b in self.level_boxes(level) {
                let vertex_images: Vec<Point<Dyadic>> = b
                    .vertices()
                    .iter()
                    .map(|v| self.samples.get(v).expect("vertices are sampled").clone())
                    .collect();
                let hull = bhull(&vertex_images).expect("boxes have vertices");
                boxes_checked += 1;
                let inside = lattice_points_in(&fine, &SpanComplex::from_box(b.clone()));
                for q in inside {
                    let image = self.samples.get(&q).expect("box points are sampled");
                    if !hull.contains(image) {
                        violations.push(HullViolation {
                            level,
                            point: q.clone(),
                            image: image.clone(),
                        });
                    }
                }
            }
        }
        HullReport {
            boxes_checked,
            violations,
        }
    }

    /// Per-level image spreads: `M` over a box's vertices, `N` over its
    /// immediate full-dimensional sub-boxes. Checks halving on the
    /// rotation axis and non-increase elsewhere.
    pub fn spread_report(&self) -> SpreadReport {
        let n = self.codomain.dim();
        let m = self.seed.lattice().dim();
        let window = self.seed.domain().bounding_box().expect("nonempty domain");
        let mut levels = Vec::new();
        let mut violations = Vec::new();
        for k in 0..self.depth {
            let rotation_axis = k as usize % n;
            let lat = self.seed.lattice().refined(k);
            let fine = lat.refined(1);
            let mut max_m = vec![Dyadic::zero(); n];
            let mut max_n = vec![Dyadic::zero(); n];
            for b in elementary_boxes(&lat, m, &window).expect("window is bounded") {
                if !self.seed.domain().contains(&b.center()) {
                    continue;
                }
                let spread_m = self.vertex_spread(&b);
                let mut spread_n = vec![Dyadic::zero(); n];
                for sub in elementary_boxes(&fine, m, &b).expect("window is bounded") {
                    let s = self.vertex_spread(&sub);
                    for axis in 0..n {
                        if s[axis] > spread_n[axis] {
                            spread_n[axis] = s[axis].clone();
                        }
                    }
                }
                for axis in 0..n {
                    let bound = if axis == rotation_axis {
                        spread_m[axis].half()
                    } else {
                        spread_m[axis].clone()
                    };
                    if spread_n[axis] > bound {
                        violations.push(SpreadViolation {
                            level: k,
                            axis,
                            spread: spread_n[axis].clone(),
                            bound,
                        });
                    }
                    if spread_m[axis] > max_m[axis] {
                        max_m[axis] = spread_m[axis].clone();
                    }
                    if spread_n[axis] > max_n[axis] {
                        max_n[axis] = spread_n[axis].clone();
                    }
                }
            }
            levels.push(LevelSpread {
                level: k,
                rotation_axis,
                max_m,
                max_n,
            });
        }

        // empirical exponent: decay of the max spread across n levels
        let mut estimates = Vec::new();
        for (i, row) in levels.iter().enumerate() {
            if i + n < levels.len() {
                let later = &levels[i + n];
                let a = row.max_m.iter().max().cloned().unwrap_or_else(Dyadic::zero);
                let b = later
                    .max_m
                    .iter()
                    .max()
                    .cloned()
                    .unwrap_or_else(Dyadic::zero);
                if a.is_positive() && b.is_positive() {
                    estimates.push((a.to_f64() / b.to_f64()).log2() / n as f64);
                }
            }
        }
        let holder_exponent_estimate = if estimates.is_empty() {
            None
        } else {
            Some(estimates.iter().sum::<f64>() / estimates.len() as f64)
        };
        SpreadReport {
            levels,
            violations,
            holder_exponent_estimate,
        }
    }

    fn vertex_spread(&self, b: &BoxRegion<Dyadic>) -> Vec<Dyadic> {
        let n = self.codomain.dim();
        let images: Vec<&Point<Dyadic>> = b
            .vertices()
            .iter()
            .map(|v| self.samples.get(v).expect("sampled"))
            .collect();
        (0..n)
            .map(|axis| {
                let lo = images
                    .iter()
                    .map(|p| p.coord(axis))
                    .min()
                    .expect("nonempty");
                let hi = images
                    .iter()
                    .map(|p| p.coord(axis))
                    .max()
                    .expect("nonempty");
                hi.clone() - lo.clone()
            })
            .collect()
    }

    /// CSV rows `(domain point, image point, level)` for plotting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("point,image,level\n");
        let ext = Extender::new(self.seed.clone(), self.codomain.clone());
        for (q, v) in &self.samples {
            let level = ext.level_of(q).expect("sampled points are on the grid");
            let qs: Vec<String> = q.coords().iter().map(|c| c.to_string()).collect();
            let vs: Vec<String> = v.coords().iter().map(|c| c.to_string()).collect();
            out.push_str(&format!(
                "\"{}\",\"{}\",{}\n",
                qs.join(";"),
                vs.join(";"),
                level
            ));
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HullViolation {
    pub level: u32,
    pub point: Point<Dyadic>,
    pub image: Point<Dyadic>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HullReport {
    pub boxes_checked: usize,
    pub violations: Vec<HullViolation>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelSpread {
    pub level: u32,
    pub rotation_axis: usize,
    pub max_m: Vec<Dyadic>,
    pub max_n: Vec<Dyadic>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpreadViolation {
    pub level: u32,
    pub axis: usize,
    pub spread: Dyadic,
    pub bound: Dyadic,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpreadReport {
    pub levels: Vec<LevelSpread>,
    pub violations: Vec<SpreadViolation>,
    pub holder_exponent_estimate: Option<f64>,
}
