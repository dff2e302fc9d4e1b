//! The approximate two-point path field and the ternary-scheduled
//! homotopy contracting a closed monovex set at finite depth.
//!
//! For a tolerance `delta`, every ordered pair of points is assigned a
//! sampled path `g(x, y, .)` by extending a boundary seed over the product
//! domain `X x X x [0,1]`: at the endpoints the seed lands within
//! `delta/2` of the respective argument, and the hull-confinement of the
//! extension turns that into the three pointwise bounds checked by the
//! audit. Interleaving the fields `g(delta_k)` over the middle-thirds
//! interval hierarchy yields a sampled homotopy whose `t = 0` slice is the
//! identity and whose `t = 1` slice is the base point, exactly; the
//! junction mismatches between consecutive levels are bounded by
//! `delta_k = delta_0 / 2^k`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::extension::{Extender, ExtensionDomain, ExtensionError};
use crate::geom::{bhull, Arrangement, BoxRegion, GeomError, Lattice, Point, SpanComplex};
use crate::num::{rational_to_dyadic, Dyadic, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HomotopyError {
    #[error("the set must be nonempty and bounded")]
    EmptySet,
    #[error("the set must be closed for the boundary seed")]
    NotClosed,
    #[error("tolerance must be positive")]
    NonPositiveDelta,
    #[error("tolerance {0} must be a power of two so refined arguments stay on the field lattice")]
    NonPowerOfTwoDelta(String),
    #[error("base point {0} lies outside the set")]
    BasePointOutside(String),
    #[error("parameter {0} is not on the sampled schedule")]
    UnscheduledParameter(String),
    #[error(transparent)]
    Extension(#[from] ExtensionError),
    #[error(transparent)]
    Geometry(#[from] GeomError),
}

/// The product domain `X x X x [0,1]` with endpoint anchors as seed.
struct ProductDomain {
    lattice: Lattice<Dyadic>,
    x_membership: Arrangement<Dyadic>,
    anchors: BTreeMap<Point<Dyadic>, Point<Dyadic>>,
    n: usize,
}

impl ExtensionDomain for ProductDomain {
    fn lattice(&self) -> &Lattice<Dyadic> {
        &self.lattice
    }

    fn contains(&self, q: &Point<Dyadic>) -> bool {
        let n = self.n;
        if q.dim() != 2 * n + 1 {
            return false;
        }
        let x = Point::new(q.coords()[..n].to_vec());
        let y = Point::new(q.coords()[n..2 * n].to_vec());
        let t = q.coord(2 * n);
        self.x_membership.contains_point(&x)
            && self.x_membership.contains_point(&y)
            && !t.is_negative()
            && *t <= Dyadic::one()
    }

    fn seed_value(&self, q: &Point<Dyadic>) -> Option<Point<Dyadic>> {
        let n = self.n;
        let t = q.coord(2 * n);
        if t.is_zero() {
            self.anchors
                .get(&Point::new(q.coords()[..n].to_vec()))
                .cloned()
        } else if *t == Dyadic::one() {
            self.anchors
                .get(&Point::new(q.coords()[n..2 * n].to_vec()))
                .cloned()
        } else {
            None
        }
    }
}

/// The grid companion of a set: the union `X` of elementary cells of the
/// `delta/2` lattice meeting it, and for every vertex of `X` a point of
/// the set within `delta/2` (the vertex itself when it already lies
/// inside).
pub struct BoundarySeed {
    delta: Dyadic,
    grid: Lattice<Dyadic>,
    x_complex: SpanComplex<Dyadic>,
    anchors: BTreeMap<Point<Dyadic>, Point<Dyadic>>,
}

impl BoundarySeed {
    pub fn x_complex(&self) -> &SpanComplex<Dyadic> {
        &self.x_complex
    }

    pub fn grid(&self) -> &Lattice<Dyadic> {
        &self.grid
    }

    pub fn delta(&self) -> &Dyadic {
        &self.delta
    }

    pub fn anchors(&self) -> &BTreeMap<Point<Dyadic>, Point<Dyadic>> {
        &self.anchors
    }

    /// Vertices of `X` on the grid.
    pub fn vertices(&self) -> Vec<Point<Dyadic>> {
        self.anchors.keys().cloned().collect()
    }
}

/// Builds the grid companion of a closed nonempty set.
pub fn boundary_seed(
    a: &SpanComplex<Dyadic>,
    delta: &Dyadic,
) -> Result<BoundarySeed, HomotopyError> {
    if a.is_empty() {
        return Err(HomotopyError::EmptySet);
    }
    if !a.is_closed() {
        return Err(HomotopyError::NotClosed);
    }
    if !delta.is_positive() {
        return Err(HomotopyError::NonPositiveDelta);
    }
    let n = a.dim();
    let step = delta.half();
    let grid = Lattice::uniform(n, step.clone());
    let hull = a.bounding_box().expect("nonempty");

    // cells of the grid meeting the set
    let mut cells = Vec::new();
    let ranges: Vec<(i64, i64)> = (0..n)
        .map(|axis| {
            (
                grid.floor_index(axis, hull.interval(axis).lo()),
                grid.floor_index(axis, hull.interval(axis).hi()),
            )
        })
        .collect();
    let mut idx: Vec<i64> = ranges.iter().map(|&(lo, _)| lo).collect();
    'outer: loop {
        let cell = grid.cell(&idx);
        if !a.intersect_box(&cell)?.is_empty() {
            cells.push(cell);
        }
        for axis in (0..n).rev() {
            if idx[axis] < ranges[axis].1 {
                idx[axis] += 1;
                for (a2, slot) in idx.iter_mut().enumerate().skip(axis + 1) {
                    *slot = ranges[a2].0;
                }
                continue 'outer;
            }
        }
        break;
    }
    let x_complex = SpanComplex::new(n, cells)?;

    // anchor every vertex of X to a set point in an incident cell
    let mut anchors = BTreeMap::new();
    for v in crate::extension::lattice_points_in(&grid, &x_complex) {
        let anchor = if a.contains(&v) {
            v.clone()
        } else {
            let ball = BoxRegion::cheb_ball(&v, &step, true);
            let near = a.intersect_box(&ball)?;
            if near.is_empty() {
                // vertex of X whose incident cells meet the set farther
                // than one step never happens: some incident cell meets
                // the set by construction
                unreachable!("every X vertex has a set point within one cell");
            }
            let (p, d) = near.nearest_point(&v)?;
            debug_assert!(d <= step);
            p
        };
        anchors.insert(v, anchor);
    }
    Ok(BoundarySeed {
        delta: delta.clone(),
        grid,
        x_complex,
        anchors,
    })
}

/// Lazy evaluator of the two-point field `g(x, y, t)` at tolerance
/// `delta`: any dyadic arguments in `X` and dyadic `t` in `[0,1]`.
pub struct TwoPointField {
    delta: Dyadic,
    n: usize,
    extender: Extender<ProductDomain>,
}

impl TwoPointField {
    pub fn new(a: &SpanComplex<Dyadic>, delta: &Dyadic) -> Result<Self, HomotopyError> {
        let seed = boundary_seed(a, delta)?;
        Ok(Self::from_seed(a, seed))
    }

    pub fn from_seed(a: &SpanComplex<Dyadic>, seed: BoundarySeed) -> Self {
        let n = a.dim();
        let mut steps = vec![seed.grid.step(0).clone(); 2 * n];
        steps.push(Dyadic::one());
        let lattice = Lattice::new(steps, Point::new(vec![Dyadic::zero(); 2 * n + 1]))
            .expect("positive steps");
        let domain = ProductDomain {
            lattice,
            x_membership: Arrangement::build(&seed.x_complex),
            anchors: seed.anchors,
            n,
        };
        TwoPointField {
            delta: seed.delta,
            n,
            extender: Extender::new(domain, a.clone()),
        }
    }

    pub fn delta(&self) -> &Dyadic {
        &self.delta
    }

    pub fn eval(
        &mut self,
        x: &Point<Dyadic>,
        y: &Point<Dyadic>,
        t: &Dyadic,
    ) -> Result<Point<Dyadic>, HomotopyError> {
        let mut coords = Vec::with_capacity(2 * self.n + 1);
        coords.extend(x.coords().iter().cloned());
        coords.extend(y.coords().iter().cloned());
        coords.push(t.clone());
        Ok(self.extender.eval(&Point::new(coords))?)
    }
}

/// Sample map of a two-point field: `(x, y, t)` to the field value.
pub type PathSamples = BTreeMap<(Point<Dyadic>, Point<Dyadic>, Dyadic), Point<Dyadic>>;

/// Dense sampling of a two-point field over the grid vertices of `X` and
/// a dyadic time grid.
#[derive(Clone, Debug)]
pub struct PathField {
    delta: Dyadic,
    depth: u32,
    samples: PathSamples,
}

/// One bound violation in a path-field audit.
#[derive(Clone, Debug, Serialize)]
pub struct PathFieldViolation {
    pub kind: &'static str,
    pub x: Point<Dyadic>,
    pub y: Point<Dyadic>,
    pub t: Dyadic,
    pub distance: Dyadic,
    pub bound: Dyadic,
}

#[derive(Clone, Debug, Serialize)]
pub struct PathFieldAudit {
    pub samples: usize,
    pub violations: Vec<PathFieldViolation>,
}

/// Samples `g` at every ordered vertex pair of `X` and `t = j / 2^depth`.
pub fn build_path_field(
    a: &SpanComplex<Dyadic>,
    delta: &Dyadic,
    depth: u32,
) -> Result<PathField, HomotopyError> {
    let seed = boundary_seed(a, delta)?;
    let vertices = seed.vertices();
    let mut field = TwoPointField::from_seed(a, seed);
    let mut samples = BTreeMap::new();
    for x in &vertices {
        for y in &vertices {
            for j in 0..=(1u64 << depth) {
                let t = Dyadic::from(j as i64) * Dyadic::pow2(-(depth as i32));
                let v = field.eval(x, y, &t)?;
                samples.insert((x.clone(), y.clone(), t), v);
            }
        }
    }
    Ok(PathField {
        delta: delta.clone(),
        depth,
        samples,
    })
}

impl PathField {
    pub fn delta(&self) -> &Dyadic {
        &self.delta
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn samples(&self) -> &PathSamples {
        &self.samples
    }

    /// Exact check of the three pointwise bounds at every sample: the
    /// endpoint bounds at `t = 0` and `t = 1`, and the b-hull bound for
    /// all `t`.
    pub fn audit(&self) -> PathFieldAudit {
        let mut violations = Vec::new();
        for ((x, y, t), g) in &self.samples {
            if t.is_zero() {
                let d = g.cheb(x);
                if d > self.delta {
                    violations.push(PathFieldViolation {
                        kind: "endpoint_t0",
                        x: x.clone(),
                        y: y.clone(),
                        t: t.clone(),
                        distance: d,
                        bound: self.delta.clone(),
                    });
                }
            }
            if *t == Dyadic::one() {
                let d = g.cheb(y);
                if d > self.delta {
                    violations.push(PathFieldViolation {
                        kind: "endpoint_t1",
                        x: x.clone(),
                        y: y.clone(),
                        t: t.clone(),
                        distance: d,
                        bound: self.delta.clone(),
                    });
                }
            }
            let hull = bhull(&[x.clone(), y.clone()]).expect("two points");
            let d = hull
                .intervals()
                .iter()
                .zip(g.coords())
                .map(|(iv, c)| iv.dist_to_closure(c))
                .max()
                .unwrap_or_else(Dyadic::zero);
            if d > self.delta {
                violations.push(PathFieldViolation {
                    kind: "hull",
                    x: x.clone(),
                    y: y.clone(),
                    t: t.clone(),
                    distance: d,
                    bound: self.delta.clone(),
                });
            }
        }
        PathFieldAudit {
            samples: self.samples.len(),
            violations,
        }
    }
}

/// The middle-thirds interval hierarchy with a summable tolerance
/// sequence `delta_k = delta_0 / 2^k`. Interval endpoints are exact
/// rationals with power-of-three denominators.
#[derive(Clone, Debug)]
pub struct CantorSchedule {
    levels: Vec<Vec<(Rational, Rational)>>,
    deltas: Vec<Dyadic>,
}

pub fn cantor_schedule(levels: u32, delta0: &Dyadic) -> CantorSchedule {
    assert!(levels >= 1);
    assert!(delta0.is_positive());
    let third = Rational::new(BigInt::one(), BigInt::from(3));
    let mut out = Vec::new();
    for k in 1..=levels {
        let base = third.clone().pow(k as i32);
        let mut intervals = Vec::new();
        for choice in 0u64..(1 << (k - 1)) {
            let mut s = base.clone();
            for (slot, j) in (1..k).enumerate() {
                if choice & (1 << slot) != 0 {
                    s += third.clone().pow(j as i32) * Rational::from_integer(BigInt::from(2));
                }
            }
            let s_end = s.clone() + base.clone();
            intervals.push((s, s_end));
        }
        intervals.sort();
        out.push(intervals);
    }
    let deltas = (1..=levels)
        .map(|k| delta0.clone() * Dyadic::pow2(-(k as i32)))
        .collect();
    CantorSchedule {
        levels: out,
        deltas,
    }
}

impl CantorSchedule {
    pub fn level_count(&self) -> u32 {
        self.levels.len() as u32
    }

    /// Intervals of `C_k` (1-based level).
    pub fn intervals(&self, k: u32) -> &[(Rational, Rational)] {
        &self.levels[(k - 1) as usize]
    }

    pub fn delta(&self, k: u32) -> &Dyadic {
        &self.deltas[(k - 1) as usize]
    }

    /// The level and interval containing `t`, if scheduled.
    fn locate(&self, t: &Rational) -> Option<(u32, &(Rational, Rational))> {
        for (i, intervals) in self.levels.iter().enumerate() {
            for iv in intervals {
                if *t >= iv.0 && *t <= iv.1 {
                    return Some((i as u32 + 1, iv));
                }
            }
        }
        None
    }

    /// The coarser parameters a level-`k` interval `[s, s']` bridges:
    /// `t- = s - 3^-k` and `t+ = s' + 3^-k`.
    pub fn junctions(&self, k: u32, interval: &(Rational, Rational)) -> (Rational, Rational) {
        let third = Rational::new(BigInt::one(), BigInt::from(3)).pow(k as i32);
        (
            interval.0.clone() - third.clone(),
            interval.1.clone() + third,
        )
    }
}

/// Sampled homotopy sliding every sample point to the base point.
#[derive(Clone, Debug)]
pub struct HomotopyField {
    base_point: Point<Dyadic>,
    truncation: u32,
    samples: BTreeMap<(Point<Dyadic>, Rational), Point<Dyadic>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct JunctionDefect {
    pub level: u32,
    pub x: Point<Dyadic>,
    pub side: &'static str,
    pub defect: Dyadic,
    pub bound: Dyadic,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomotopyAudit {
    pub samples: usize,
    pub range_violations: usize,
    pub identity_violations: usize,
    pub base_violations: usize,
    pub junction_defects: Vec<JunctionDefect>,
    pub junction_violations: usize,
}

impl HomotopyField {
    pub fn base_point(&self) -> &Point<Dyadic> {
        &self.base_point
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn samples(&self) -> &BTreeMap<(Point<Dyadic>, Rational), Point<Dyadic>> {
        &self.samples
    }

    pub fn value(&self, x: &Point<Dyadic>, t: &Rational) -> Option<&Point<Dyadic>> {
        self.samples.get(&(x.clone(), t.clone()))
    }

    /// Exactness of the end slices, range containment, and the junction
    /// defect bounds `delta_k` per level.
    pub fn audit(&self, a: &SpanComplex<Dyadic>, schedule: &CantorSchedule) -> HomotopyAudit {
        let mut range_violations = 0;
        let mut identity_violations = 0;
        let mut base_violations = 0;
        for ((x, t), v) in &self.samples {
            if !a.contains(v) {
                range_violations += 1;
            }
            if t.is_zero() && v != x {
                identity_violations += 1;
            }
            if t.is_one() && v != &self.base_point {
                base_violations += 1;
            }
        }
        let mut junction_defects = Vec::new();
        let mut junction_violations = 0;
        let xs: std::collections::BTreeSet<&Point<Dyadic>> =
            self.samples.keys().map(|(x, _)| x).collect();
        for k in 1..=schedule.level_count() {
            let bound = schedule.delta(k).clone();
            for interval in schedule.intervals(k) {
                let (t_before, t_after) = schedule.junctions(k, interval);
                for &x in &xs {
                    let checks = [
                        ("left", &interval.0, &t_before),
                        ("right", &interval.1, &t_after),
                    ];
                    for (side, end, outer) in checks {
                        let (Some(inner_v), Some(outer_v)) =
                            (self.value(x, end), self.value(x, outer))
                        else {
                            continue;
                        };
                        let defect = inner_v.cheb(outer_v);
                        if defect > bound {
                            junction_violations += 1;
                        }
                        junction_defects.push(JunctionDefect {
                            level: k,
                            x: x.clone(),
                            side,
                            defect,
                            bound: bound.clone(),
                        });
                    }
                }
            }
        }
        HomotopyAudit {
            samples: self.samples.len(),
            range_violations,
            identity_violations,
            base_violations,
            junction_defects,
            junction_violations,
        }
    }

    /// CSV rows `(x, t, value)`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,t,phi\n");
        for ((x, t), v) in &self.samples {
            let xs: Vec<String> = x.coords().iter().map(|c| c.to_string()).collect();
            let vs: Vec<String> = v.coords().iter().map(|c| c.to_string()).collect();
            out.push_str(&format!(
                "\"{}\",\"{}\",\"{}\"\n",
                xs.join(";"),
                t,
                vs.join(";")
            ));
        }
        out
    }

    /// OFF polylines of the sampled trajectories (3-D sets only draw the
    /// first three coordinates).
    pub fn to_off(&self) -> String {
        let mut per_x: BTreeMap<&Point<Dyadic>, Vec<(&Rational, &Point<Dyadic>)>> = BTreeMap::new();
        for ((x, t), v) in &self.samples {
            per_x.entry(x).or_default().push((t, v));
        }
        let mut vertices: Vec<Vec<f64>> = Vec::new();
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for (_, mut traj) in per_x {
            traj.sort_by(|a, b| a.0.cmp(b.0));
            let base = vertices.len();
            for (_, v) in &traj {
                let mut coords: Vec<f64> = v.coords().iter().take(3).map(Dyadic::to_f64).collect();
                while coords.len() < 3 {
                    coords.push(0.0);
                }
                vertices.push(coords);
            }
            for i in 1..traj.len() {
                edges.push((base + i - 1, base + i));
            }
        }
        let mut out = format!("OFF\n{} {} 0\n", vertices.len(), edges.len());
        for v in &vertices {
            out.push_str(&format!("{} {} {}\n", v[0], v[1], v[2]));
        }
        for (a, b) in &edges {
            out.push_str(&format!("2 {a} {b}\n"));
        }
        out
    }
}

/// Parameters for the sampled homotopy: how many ternary levels, the base
/// tolerance, the dyadic sampling density inside each interval, and the
/// sample grid refinement for the x slots.
#[derive(Clone, Debug)]
pub struct ContractionParams {
    pub levels: u32,
    pub delta0: Dyadic,
    pub time_depth: u32,
}

impl Default for ContractionParams {
    fn default() -> Self {
        ContractionParams {
            levels: 4,
            delta0: Dyadic::pow2(-2),
            time_depth: 2,
        }
    }
}

/// Builds the sampled contraction of `a` to `x0` over the ternary
/// schedule: `phi(x, 0) = x`, `phi(x, 1) = x0`, interiors by the level
/// fields.
pub fn cantor_homotopy(
    a: &SpanComplex<Dyadic>,
    x0: &Point<Dyadic>,
    schedule: &CantorSchedule,
    params: &ContractionParams,
) -> Result<HomotopyField, HomotopyError> {
    if !a.contains(x0) {
        return Err(HomotopyError::BasePointOutside(format!("{x0:?}")));
    }
    // junction evaluations feed arbitrary dyadic set points back into the
    // level fields, which resolves only when every grid step is a power
    // of two
    use num_bigint::BigUint;
    if params.delta0.mantissa().magnitude() != &BigUint::from(1u32) {
        return Err(HomotopyError::NonPowerOfTwoDelta(params.delta0.to_string()));
    }

    // per-level two-point fields (lazily filled memos inside)
    let mut fields: Vec<TwoPointField> = (1..=schedule.level_count())
        .map(|k| TwoPointField::new(a, schedule.delta(k)))
        .collect::<Result<_, _>>()?;

    // x samples: set points of the delta0/2 grid, plus the base point
    let grid = Lattice::uniform(a.dim(), params.delta0.half());
    let hull = a.bounding_box().ok_or(HomotopyError::EmptySet)?;
    let mut xs: Vec<Point<Dyadic>> =
        crate::extension::lattice_points_in(&grid, &SpanComplex::from_box(hull))
            .into_iter()
            .filter(|p| a.contains(p))
            .collect();
    if !xs.contains(x0) {
        xs.push(x0.clone());
    }

    // scheduled t values: interval endpoints and dyadic interior samples
    let mut ts: Vec<Rational> = vec![Rational::zero(), Rational::one()];
    for k in 1..=schedule.level_count() {
        for interval in schedule.intervals(k) {
            let width = interval.1.clone() - interval.0.clone();
            for j in 0..=(1u64 << params.time_depth) {
                let lambda =
                    Rational::new(BigInt::from(j), BigInt::one() << params.time_depth as usize);
                ts.push(interval.0.clone() + lambda * width.clone());
            }
        }
    }
    ts.sort();
    ts.dedup();

    let mut samples = BTreeMap::new();
    for x in &xs {
        let mut memo: BTreeMap<Rational, Point<Dyadic>> = BTreeMap::new();
        for t in &ts {
            let v = eval_phi(x, x0, t, schedule, &mut fields, &mut memo)?;
            samples.insert((x.clone(), t.clone()), v);
        }
    }
    Ok(HomotopyField {
        base_point: x0.clone(),
        truncation: schedule.level_count(),
        samples,
    })
}

/// Wrapper fixing the second argument of the two-point homotopy at the
/// base point; same contracts, explicit precondition.
pub fn contract_to_point(
    a: &SpanComplex<Dyadic>,
    x0: &Point<Dyadic>,
    params: &ContractionParams,
) -> Result<HomotopyField, HomotopyError> {
    let schedule = cantor_schedule(params.levels, &params.delta0);
    cantor_homotopy(a, x0, &schedule, params)
}

fn eval_phi(
    x: &Point<Dyadic>,
    x0: &Point<Dyadic>,
    t: &Rational,
    schedule: &CantorSchedule,
    fields: &mut [TwoPointField],
    memo: &mut BTreeMap<Rational, Point<Dyadic>>,
) -> Result<Point<Dyadic>, HomotopyError> {
    if t.is_zero() {
        return Ok(x.clone());
    }
    if t.is_one() {
        return Ok(x0.clone());
    }
    if let Some(v) = memo.get(t) {
        return Ok(v.clone());
    }
    let (k, interval) = schedule
        .locate(t)
        .ok_or_else(|| HomotopyError::UnscheduledParameter(t.to_string()))?;
    let width = interval.1.clone() - interval.0.clone();
    let lambda = (t.clone() - interval.0.clone()) / width;
    let lambda = rational_to_dyadic(&lambda)
        .ok_or_else(|| HomotopyError::UnscheduledParameter(t.to_string()))?;
    let (t_before, t_after) = schedule.junctions(k, interval);
    let u = eval_phi(x, x0, &t_before, schedule, fields, memo)?;
    let v = eval_phi(x, x0, &t_after, schedule, fields, memo)?;
    let out = fields[(k - 1) as usize].eval(&u, &v, &lambda)?;
    memo.insert(t.clone(), out.clone());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;
    use crate::num::dy;

    type P = Point<Dyadic>;

    #[test]
    fn schedule_matches_the_ternary_construction() {
        let s = cantor_schedule(3, &dy(1, 2));
        let third = |n: i64, d: i64| Rational::new(BigInt::from(n), BigInt::from(d));
        assert_eq!(s.intervals(1), &[(third(1, 3), third(2, 3))]);
        assert_eq!(
            s.intervals(2),
            &[(third(1, 9), third(2, 9)), (third(7, 9), third(8, 9))]
        );
        assert_eq!(s.intervals(3).len(), 4);
        assert_eq!(s.delta(1), &dy(1, 3));
        assert_eq!(s.delta(2), &dy(1, 4));
    }

    #[test]
    fn seed_on_an_aligned_box_is_the_identity() {
        // unit square, delta aligned: every grid vertex in the set anchors
        // to itself
        let a = SpanComplex::from_box(BoxRegion::closed_from_corners(
            &P::from_ints(&[0, 0]),
            &P::from_ints(&[1, 1]),
        ));
        let seed = boundary_seed(&a, &dy(1, 1)).unwrap();
        for (v, anchor) in seed.anchors() {
            if a.contains(v) {
                assert_eq!(v, anchor);
            } else {
                assert!(v.cheb(anchor) <= dy(1, 2));
            }
        }
    }

    #[test]
    fn corner_only_cell_anchors_to_the_corner() {
        // the set is a single point on the grid: every vertex of its
        // companion X anchors to that corner
        let c = P::from_ints(&[1, 1]);
        let a = SpanComplex::from_box(BoxRegion::point_box(&c));
        let seed = boundary_seed(&a, &dy(1, 1)).unwrap();
        for anchor in seed.anchors().values() {
            assert_eq!(anchor, &c);
        }
    }

    #[test]
    fn point_set_field_is_constant() {
        let p = P::from_ints(&[1, 1]);
        let a = SpanComplex::from_box(BoxRegion::point_box(&p));
        let field = build_path_field(&a, &dy(1, 1), 2).unwrap();
        assert!(field.samples().values().all(|v| v == &p));
        assert!(field.audit().violations.is_empty());
    }

    #[test]
    fn interval_field_bounds_hold() {
        let a = SpanComplex::from_box(BoxRegion::closed_from_corners(
            &P::from_ints(&[0]),
            &P::from_ints(&[1]),
        ));
        let field = build_path_field(&a, &dy(1, 1), 3).unwrap();
        let audit = field.audit();
        assert!(
            audit.violations.is_empty(),
            "violations: {:?}",
            audit.violations
        );
    }

    #[test]
    fn homotopy_slices_are_exact_on_the_staircase() {
        let a = instances::example1(2);
        let x0 = P::from_ints(&[1, 1]);
        let params = ContractionParams {
            levels: 2,
            delta0: dy(1, 2),
            time_depth: 1,
        };
        let field = contract_to_point(&a, &x0, &params).unwrap();
        let schedule = cantor_schedule(params.levels, &params.delta0);
        let audit = field.audit(&a, &schedule);
        assert_eq!(audit.range_violations, 0);
        assert_eq!(audit.identity_violations, 0);
        assert_eq!(audit.base_violations, 0);
        assert_eq!(audit.junction_violations, 0);
        assert!(!field.samples().is_empty());
    }

    #[test]
    fn base_point_outside_is_rejected() {
        let a = instances::example1(2);
        let err = contract_to_point(&a, &P::from_ints(&[5, 5]), &ContractionParams::default())
            .unwrap_err();
        assert!(matches!(err, HomotopyError::BasePointOutside(_)));
    }
}
