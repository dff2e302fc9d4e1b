//! Nearest-point thickening and the iterated retraction with certified
//! geometric decay.
//!
//! For a query point off a closed monovex set: the nearest-point set is
//! thickened onto a power-of-two grid scaled to the query distance, the
//! thickening is inflated by an open box into an open monovex
//! neighborhood, a coordinate-inductive midpoint selection picks a single
//! point of it, and iterating the selection walks the query toward the
//! set, dividing the distance by at least nine per step. Every bound is
//! checked exactly at every step; a violation is a hard failure.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::geom::{merge_intervals, BoxRegion, GeomError, Interval, Point, SpanComplex};
use crate::num::{Coord, Dyadic};
use crate::path::{MonotonePath, PathError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RetractionError {
    #[error("query point {0} lies inside the set")]
    PointInsideSet(String),
    #[error("the set is empty")]
    EmptySet,
    #[error("query point {0} must be a member of the sample set")]
    NotInSampleSet(String),
    #[error("axis projection is not a single interval: the neighborhood is not monovex ({0})")]
    ProjectionNotInterval(String),
    #[error("selection slice is empty at {0}")]
    EmptySlice(String),
    #[error("endpoint {0} does not share a grid cell with its set companion")]
    CellSharingViolated(String),
    #[error("point {0} is outside {1}")]
    OutsideRegion(String, &'static str),
    #[error("step bound violated at {x}: moved {moved}, allowed 4/3 * {dist}")]
    StepBound {
        x: String,
        moved: String,
        dist: String,
    },
    #[error("decay bound violated at {x}: distance {after} > {before} / 9")]
    Decay {
        x: String,
        before: String,
        after: String,
    },
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error(transparent)]
    Path(#[from] PathError),
}

/// The per-query scale ladder: the Chebyshev distance `d` to the set, and
/// the largest power of two `eta <= d/100` (the grid step of the
/// thickening). The reference tolerance is `eps = d/10`; `eta <= eps/10 <
/// 2 eta` while `eps/10 <= 1`.
#[derive(Clone, Debug, Serialize)]
pub struct Scales {
    pub dist: Dyadic,
    pub eta: Dyadic,
}

impl Scales {
    pub fn compute(a: &SpanComplex<Dyadic>, x: &Point<Dyadic>) -> Result<Self, RetractionError> {
        if a.is_empty() {
            return Err(RetractionError::EmptySet);
        }
        if a.contains(x) {
            return Err(RetractionError::PointInsideSet(format!("{x:?}")));
        }
        let dist = a.cheb_distance(x)?;
        debug_assert!(dist.attained, "closed sets attain their distance");
        let dist = dist.value;
        // largest eta = 2^-k with eta <= dist/100, i.e. dist * 2^k >= 100
        let hundred = Dyadic::from(100);
        let mut k = 0i32;
        while dist.mul_pow2(k) < hundred {
            k += 1;
        }
        Ok(Scales {
            dist,
            eta: Dyadic::pow2(-k),
        })
    }

    /// `100 * eta <= dist < 200 * eta`, the defining property of the
    /// ladder for queries with `dist <= 100`.
    pub fn invariant_holds(&self) -> bool {
        self.eta.mul_int(100) <= self.dist
            && (self.dist < self.eta.mul_int(200) || self.eta == Dyadic::one())
    }
}

/// Thickening of the nearest-point set: `F(x)` and the union `F1(x)` of
/// `eta`-grid cells meeting it, kept both as a complex and as the grid
/// index set.
#[derive(Clone, Debug)]
pub struct ThickenedEntry {
    pub scales: Scales,
    pub nearest: SpanComplex<Dyadic>,
    pub thickened: SpanComplex<Dyadic>,
    cells: HashSet<Vec<i64>>,
}

/// The set of nearest points: the intersection with the closed ball at
/// the exact query distance.
pub fn nearest_point_map(
    a: &SpanComplex<Dyadic>,
    x: &Point<Dyadic>,
) -> Result<SpanComplex<Dyadic>, RetractionError> {
    let scales = Scales::compute(a, x)?;
    let ball = BoxRegion::cheb_ball(x, &scales.dist, true);
    Ok(a.intersect_box(&ball)?)
}

pub fn thicken(
    a: &SpanComplex<Dyadic>,
    x: &Point<Dyadic>,
) -> Result<ThickenedEntry, RetractionError> {
    let scales = Scales::compute(a, x)?;
    let ball = BoxRegion::cheb_ball(x, &scales.dist, true);
    let nearest = a.intersect_box(&ball)?;
    debug_assert!(!nearest.is_empty());

    let eta = &scales.eta;
    let mut cells: HashSet<Vec<i64>> = HashSet::new();
    for b in nearest.boxes() {
        let dim = b.ambient_dim();
        // grid cells meeting the closed box: k*eta <= hi and (k+1)*eta >= lo
        let lo_idx: Vec<i64> = (0..dim)
            .map(|axis| {
                (b.interval(axis).lo().ceil_div(eta) - BigInt::one())
                    .to_i64()
                    .expect("cell index fits i64")
            })
            .collect();
        let hi_idx: Vec<i64> = (0..dim)
            .map(|axis| {
                b.interval(axis)
                    .hi()
                    .floor_div(eta)
                    .to_i64()
                    .expect("cell index fits i64")
            })
            .collect();
        let mut idx = lo_idx.clone();
        'outer: loop {
            cells.insert(idx.clone());
            for axis in (0..dim).rev() {
                if idx[axis] < hi_idx[axis] {
                    idx[axis] += 1;
                    for (a2, slot) in idx.iter_mut().enumerate().skip(axis + 1) {
                        *slot = lo_idx[a2];
                    }
                    continue 'outer;
                }
            }
            break;
        }
    }
    let boxes: Vec<BoxRegion<Dyadic>> = {
        let mut sorted: Vec<&Vec<i64>> = cells.iter().collect();
        sorted.sort();
        sorted
            .into_iter()
            .map(|idx| {
                BoxRegion::new(
                    idx.iter()
                        .map(|&k| Interval::closed(eta.mul_int(k), eta.mul_int(k + 1)))
                        .collect(),
                )
            })
            .collect()
    };
    let thickened = SpanComplex::new(a.dim(), boxes)?;
    Ok(ThickenedEntry {
        scales,
        nearest,
        thickened,
        cells,
    })
}

impl ThickenedEntry {
    pub fn eta(&self) -> &Dyadic {
        &self.scales.eta
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// Exact containment of another thickening (possibly on a finer
    /// power-of-two grid) in this one. Grid boundaries of the coarse cells
    /// never fall strictly inside a fine cell, so each fine cell is
    /// covered iff the one coarse cell holding its interior is present.
    pub fn covers(&self, finer: &ThickenedEntry) -> bool {
        let ratio = self.scales.eta.to_rational() / finer.scales.eta.to_rational();
        if !ratio.is_integer() {
            return false;
        }
        let ratio = ratio.to_integer().to_i64().expect("grid ratio fits i64");
        if ratio < 1 {
            return false;
        }
        finer.cells.iter().all(|cell| {
            let coarse: Vec<i64> = cell.iter().map(|&i| i.div_euclid(ratio)).collect();
            self.cells.contains(&coarse)
        })
    }

    /// Hausdorff gap between the thickening and the nearest-point set:
    /// at most one grid step by construction.
    pub fn gap_within_eta(&self) -> bool {
        // every thickened cell meets the nearest set, so every point of a
        // cell is within the cell diameter of it; cells have side eta
        self.thickened.boxes().iter().all(|cell| {
            !self
                .nearest
                .intersect_box(cell)
                .map(|c| c.is_empty())
                .unwrap_or(true)
        })
    }

    /// The open neighborhood contribution `F1 + (-eta, eta)^n`.
    pub fn inflated(&self) -> SpanComplex<Dyadic> {
        let dim = self.thickened.dim();
        let eta = self.eta();
        let open_ball = BoxRegion::new(
            (0..dim)
                .map(|_| {
                    Interval::new(-eta.clone(), eta.clone(), false, false).expect("eta is positive")
                })
                .collect(),
        );
        self.thickened
            .minkowski_box(&open_ball)
            .expect("dimensions agree")
    }
}

/// Probe-verified stability radius for a query: the largest tested dyadic
/// `delta = eta/2^j` such that all sampled points of the open ball
/// `B(x, delta)` keep both a finer ladder and a smaller thickening.
#[derive(Clone, Debug, Serialize)]
pub struct LocalRadius {
    pub delta: Dyadic,
    pub probe_verified: bool,
    pub probes_used: u32,
}

pub fn local_radius(
    a: &SpanComplex<Dyadic>,
    x: &Point<Dyadic>,
    probes: u32,
) -> Result<LocalRadius, RetractionError> {
    let entry = thicken(a, x)?;
    let candidates: Vec<Dyadic> = (1..=6).map(|j| entry.scales.eta.mul_pow2(-j)).collect();
    if probes == 0 {
        return Ok(LocalRadius {
            delta: candidates.last().expect("nonempty").clone(),
            probe_verified: false,
            probes_used: 0,
        });
    }
    for delta in &candidates {
        let mut ok = true;
        for i in 0..probes {
            let y = probe_point(x, delta, i);
            if a.contains(&y) {
                continue;
            }
            let sub = thicken(a, &y)?;
            if sub.scales.eta > entry.scales.eta || !entry.covers(&sub) {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(LocalRadius {
                delta: delta.clone(),
                probe_verified: true,
                probes_used: probes,
            });
        }
    }
    Ok(LocalRadius {
        delta: candidates.last().expect("nonempty").clone(),
        probe_verified: false,
        probes_used: probes,
    })
}

/// Deterministic dyadic probe offsets strictly inside the open ball.
fn probe_point(x: &Point<Dyadic>, delta: &Dyadic, index: u32) -> Point<Dyadic> {
    use rand::{Rng, SeedableRng};
    let mut hasher = std::collections::hash_map::DefaultHasher::new();
    use std::hash::{Hash, Hasher};
    for c in x.coords() {
        c.to_string().hash(&mut hasher);
    }
    delta.to_string().hash(&mut hasher);
    index.hash(&mut hasher);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(hasher.finish());
    let scale = delta.mul_pow2(-12);
    Point::new(
        x.coords()
            .iter()
            .map(|c| {
                let r: i64 = rng.gen_range(-(1 << 12) + 1..(1 << 12));
                c.clone() + scale.mul_int(r)
            })
            .collect(),
    )
}

/// The open neighborhood of a query: the union over sampled nearby
/// queries of their inflated thickenings.
#[derive(Clone, Debug)]
pub struct NeighborhoodEntry {
    pub complex: SpanComplex<Dyadic>,
    pub contributors: Vec<Point<Dyadic>>,
}

pub fn neighborhood_map(
    a: &SpanComplex<Dyadic>,
    x: &Point<Dyadic>,
    sample_set: &[Point<Dyadic>],
    probes: u32,
) -> Result<NeighborhoodEntry, RetractionError> {
    if !sample_set.contains(x) {
        return Err(RetractionError::NotInSampleSet(format!("{x:?}")));
    }
    let mut complex = SpanComplex::empty(a.dim());
    let mut contributors = Vec::new();
    for y in sample_set {
        if a.contains(y) {
            continue;
        }
        // x must lie in the open ball B(y, delta_y / 2)
        let in_ball = if y == x {
            true
        } else {
            let delta = local_radius(a, y, probes)?.delta;
            x.cheb(y) < delta.half()
        };
        if !in_ball {
            continue;
        }
        let entry = thicken(a, y)?;
        for b in entry.inflated().boxes() {
            complex.push_box(b.clone())?;
        }
        contributors.push(y.clone());
    }
    Ok(NeighborhoodEntry {
        complex,
        contributors,
    })
}

/// Coordinate-inductive midpoint selection: the first coordinate is the
/// midpoint of the axis projection (a single interval when the set is
/// monovex), then recurse on the slice through it.
pub fn select_point(g: &SpanComplex<Dyadic>) -> Result<Point<Dyadic>, RetractionError> {
    if g.is_empty() {
        return Err(RetractionError::EmptySlice(
            "selection on an empty set".into(),
        ));
    }
    let mut coords = Vec::with_capacity(g.dim());
    let mut current = g.clone();
    while current.dim() > 0 {
        let merged = merge_intervals(
            current
                .boxes()
                .iter()
                .map(|b| b.interval(0).clone())
                .collect(),
        );
        let interval = match merged.as_slice() {
            [single] => single,
            _ => {
                return Err(RetractionError::ProjectionNotInterval(format!(
                    "{} components",
                    merged.len()
                )))
            }
        };
        let mid = interval.midpoint();
        let next = current.slice(0, &mid)?;
        if next.dim() == 0 {
            coords.push(mid);
            break;
        }
        if next.is_empty() {
            return Err(RetractionError::EmptySlice(format!("axis value {mid}")));
        }
        coords.push(mid);
        current = next;
    }
    Ok(Point::new(coords))
}

/// One retraction step at a query point: thicken, inflate, select. The
/// sample set for the neighborhood is the singleton query, which keeps
/// every pointwise bound (fewer contributors only shrink the
/// neighborhood while the query itself keeps the nearest set inside).
pub fn retraction_step(
    a: &SpanComplex<Dyadic>,
    x: &Point<Dyadic>,
) -> Result<(Point<Dyadic>, ThickenedEntry), RetractionError> {
    let entry = thicken(a, x)?;
    let g = entry.inflated();
    let selected = select_point(&g)?;
    debug_assert!(g.contains(&selected));
    Ok((selected, entry))
}

/// A certified retraction trajectory: per step the exact distance to the
/// set, the decay bound from the starting distance, and the step length
/// bound.
#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub points: Vec<Point<Dyadic>>,
    pub dists: Vec<Dyadic>,
    pub bounds: Vec<Dyadic>,
}

pub fn iterate_retraction(
    a: &SpanComplex<Dyadic>,
    x: &Point<Dyadic>,
    iterations: u32,
) -> Result<Trajectory, RetractionError> {
    if a.contains(x) {
        return Err(RetractionError::PointInsideSet(format!("{x:?}")));
    }
    let d0 = a.cheb_distance(x)?.value;
    let mut points = vec![x.clone()];
    let mut dists = vec![d0.clone()];
    let mut bounds = vec![d0.clone()];
    let mut nine_pow = BigInt::one();
    let mut cur = x.clone();
    for _ in 0..iterations {
        nine_pow *= 9;
        if a.contains(&cur) {
            points.push(cur.clone());
            dists.push(Dyadic::zero());
            bounds.push(bound_at(&d0, &nine_pow));
            continue;
        }
        let before = a.cheb_distance(&cur)?.value;
        let (next, _) = retraction_step(a, &cur)?;
        let moved = next.cheb(&cur);
        // d(g(x), x) <= 4/3 d(x, A), exactly
        if moved.mul_int(3) > before.mul_int(4) {
            return Err(RetractionError::StepBound {
                x: format!("{cur:?}"),
                moved: moved.to_string(),
                dist: before.to_string(),
            });
        }
        let after = if a.contains(&next) {
            Dyadic::zero()
        } else {
            a.cheb_distance(&next)?.value
        };
        // d(g(x), A) <= d(x, A) / 9, exactly
        if after.mul_int(9) > before {
            return Err(RetractionError::Decay {
                x: format!("{cur:?}"),
                before: before.to_string(),
                after: after.to_string(),
            });
        }
        // cumulative bound d(g^k(x), A) <= d(x, A) / 9^k
        debug_assert!(after.clone() * Dyadic::from(nine_pow.clone()) <= d0);
        points.push(next.clone());
        dists.push(after);
        bounds.push(bound_at(&d0, &nine_pow));
        cur = next;
    }
    Ok(Trajectory {
        points,
        dists,
        bounds,
    })
}

/// `d0 / 9^k` is not dyadic; the recorded bound column carries the exact
/// rational as a decimal-free pair via its dyadic numerator and the power
/// of nine, evaluated here as the dyadic floor for reporting only.
fn bound_at(d0: &Dyadic, nine_pow: &BigInt) -> Dyadic {
    // report d0 / 9^k rounded down to the 2^-40 grid; comparisons in the
    // audits use exact cross-multiplied forms, never this value
    let scaled = d0.mul_pow2(40);
    let q = scaled.to_rational() / Dyadic::from(nine_pow.clone()).to_rational();
    Dyadic::new(q.floor().to_integer(), 40)
}

impl Trajectory {
    /// CSV decay table `k, distance, bound`.
    pub fn to_decay_csv(&self) -> String {
        let mut out = String::from("k,distance,bound\n");
        for (k, (d, b)) in self.dists.iter().zip(&self.bounds).enumerate() {
            out.push_str(&format!("{k},{d},{b}\n"));
        }
        out
    }

    /// Exact cumulative audit: `9^k * d_k <= d_0` for every step.
    pub fn decay_certified(&self) -> bool {
        let d0 = &self.dists[0];
        let mut nine_pow = BigInt::one();
        for d in self.dists.iter().skip(1) {
            nine_pow *= 9;
            if d.clone() * Dyadic::from(nine_pow.clone()) > *d0 {
                return false;
            }
        }
        true
    }
}

/// Exact check that a neighborhood stays inside the open ball
/// `B(x, 4/3 d(x, A))`: per box end, `3 |end - x_i| <= 4 d` (the
/// neighborhood's ends are open, so equality is still inside).
pub fn ball_bound_holds(x: &Point<Dyadic>, dist: &Dyadic, g: &SpanComplex<Dyadic>) -> bool {
    let four_d = dist.mul_int(4);
    g.boxes().iter().all(|b| {
        b.intervals().iter().zip(x.coords()).all(|(iv, c)| {
            (iv.hi().clone() - c.clone()).mul_int(3) <= four_d
                && (c.clone() - iv.lo().clone()).mul_int(3) <= four_d
        })
    })
}

/// One graph-inclusion witness: for a point `z` of the neighborhood of
/// `x`, a pair `(x', z')` on the graph of the nearest-point map with both
/// gaps strictly below `3 eps(x') / 10 = 3 d(x', A) / 100`.
#[derive(Clone, Debug, Serialize)]
pub struct SandwichWitness {
    pub z: Point<Dyadic>,
    pub x_witness: Point<Dyadic>,
    pub z_witness: Point<Dyadic>,
    pub x_gap: Dyadic,
    pub z_gap: Dyadic,
    pub ok: bool,
}

/// Audits the sandwich `graph(F) in graph(G) in the 3 eps/10 neighborhood
/// of graph(F)` at one query with the singleton sample set: containment
/// of the nearest set, the ball bound, and per-probe witnesses (box
/// centers of the neighborhood plus the selected point).
#[derive(Clone, Debug, Serialize)]
pub struct SandwichAudit {
    pub nearest_inside: bool,
    pub ball_bound: bool,
    pub witnesses: Vec<SandwichWitness>,
}

impl SandwichAudit {
    pub fn all_ok(&self) -> bool {
        self.nearest_inside && self.ball_bound && self.witnesses.iter().all(|w| w.ok)
    }
}

pub fn sandwich_audit(
    a: &SpanComplex<Dyadic>,
    x: &Point<Dyadic>,
) -> Result<SandwichAudit, RetractionError> {
    let entry = thicken(a, x)?;
    let g = entry.inflated();
    let nearest_inside = entry.nearest.subset_of(&g)?;
    let ball_bound = ball_bound_holds(x, &entry.scales.dist, &g);

    let mut probes: Vec<Point<Dyadic>> = g.boxes().iter().map(BoxRegion::center).collect();
    if let Ok(selected) = select_point(&g) {
        probes.push(selected);
    }
    // the witness query is x itself (it contributes the whole
    // neighborhood); its nearest-point set provides z'
    let bound_scale = entry.scales.dist.mul_int(3); // 3 d(x', A); gaps scaled by 100
    let witnesses = probes
        .into_iter()
        .map(|z| {
            let (z_witness, z_gap) = entry
                .nearest
                .nearest_point(&z)
                .expect("nearest set nonempty");
            let ok = Dyadic::zero() < bound_scale && z_gap.mul_int(100) < bound_scale;
            SandwichWitness {
                z,
                x_witness: x.clone(),
                z_witness,
                x_gap: Dyadic::zero(),
                z_gap,
                ok,
            }
        })
        .collect();
    Ok(SandwichAudit {
        nearest_inside,
        ball_bound,
        witnesses,
    })
}

/// Containment comparability of the thickenings of nearby queries: for
/// every pair in the neighborhood sample, one thickening must cover the
/// other. Violations are reported, not asserted.
#[derive(Clone, Debug, Serialize)]
pub struct QOrderReport {
    pub pairs: usize,
    pub incomparable: Vec<(Point<Dyadic>, Point<Dyadic>)>,
}

pub fn q_order_report(
    a: &SpanComplex<Dyadic>,
    contributors: &[Point<Dyadic>],
) -> Result<QOrderReport, RetractionError> {
    let entries: Vec<(Point<Dyadic>, ThickenedEntry)> = contributors
        .iter()
        .map(|y| thicken(a, y).map(|e| (y.clone(), e)))
        .collect::<Result<_, _>>()?;
    let mut pairs = 0;
    let mut incomparable = Vec::new();
    for i in 0..entries.len() {
        for j in (i + 1)..entries.len() {
            pairs += 1;
            let (y1, e1) = &entries[i];
            let (y2, e2) = &entries[j];
            if !(e1.covers(e2) || e2.covers(e1)) {
                incomparable.push((y1.clone(), y2.clone()));
            }
        }
    }
    Ok(QOrderReport {
        pairs,
        incomparable,
    })
}

/// Measured modulus of the selection near a query: pairs of input and
/// output distances on a deterministic probe cloud. Recorded for
/// reporting; continuity is not asserted.
pub fn selection_modulus(
    a: &SpanComplex<Dyadic>,
    x: &Point<Dyadic>,
    radius: &Dyadic,
    count: u32,
) -> Result<Vec<(Dyadic, Dyadic)>, RetractionError> {
    let (gx, _) = retraction_step(a, x)?;
    let mut out = Vec::new();
    for i in 0..count {
        let y = probe_point(x, radius, i);
        if a.contains(&y) {
            continue;
        }
        let (gy, _) = retraction_step(a, &y)?;
        out.push((x.cheb(&y), gx.cheb(&gy)));
    }
    Ok(out)
}

/// Monotone path repair inside a thickening: given endpoints `y`, `z` of
/// `F1`, companions `y'`, `z'` of `F` sharing their grid cells, and a
/// monotone path between the companions inside `F`, produces a monotone
/// path from `y` to `z` inside `F1`. Axes whose endpoints share a grid
/// cell interpolate linearly; all other axes clamp the companion path to
/// the endpoint span, with straight fix-up segments at both ends.
pub fn repair_path(
    entry: &ThickenedEntry,
    y: &Point<Dyadic>,
    z: &Point<Dyadic>,
    y_prime: &Point<Dyadic>,
    z_prime: &Point<Dyadic>,
    gamma_prime: &MonotonePath<Dyadic>,
) -> Result<MonotonePath<crate::num::Rational>, RetractionError> {
    use crate::num::Rational;
    let eta = entry.eta();
    let dim = y.dim();
    for (p, name) in [(y, "F1"), (z, "F1")] {
        if !entry.thickened.contains(p) {
            return Err(RetractionError::OutsideRegion(format!("{p:?}"), name));
        }
    }
    for (p, name) in [(y_prime, "F"), (z_prime, "F")] {
        if !entry.nearest.contains(p) {
            return Err(RetractionError::OutsideRegion(format!("{p:?}"), name));
        }
    }
    let shares_cell = |a: &Dyadic, b: &Dyadic| -> bool {
        let lo = a.min(b);
        let hi = a.max(b);
        hi.ceil_div(eta) - BigInt::one() <= lo.floor_div(eta)
    };
    for axis in 0..dim {
        if !shares_cell(y.coord(axis), y_prime.coord(axis))
            || !shares_cell(z.coord(axis), z_prime.coord(axis))
        {
            return Err(RetractionError::CellSharingViolated(format!("axis {axis}")));
        }
    }

    // per-axis case split
    let linear: Vec<bool> = (0..dim)
        .map(|axis| shares_cell(y.coord(axis), z.coord(axis)))
        .collect();

    let wps: Vec<Point<Rational>> = gamma_prime
        .waypoints()
        .iter()
        .map(Point::to_rational)
        .collect();
    let segments = (wps.len().max(2) - 1) as i64;
    let yr = y.to_rational();
    let zr = z.to_rational();

    // parameter cuts: companion waypoints plus every clamp crossing
    let mut cuts: Vec<Rational> = (0..=segments)
        .map(|k| Rational::new(BigInt::from(k), BigInt::from(segments)))
        .collect();
    for axis in 0..dim {
        if linear[axis] {
            continue;
        }
        let lo = yr.coord(axis).min(zr.coord(axis)).clone();
        let hi = yr.coord(axis).max(zr.coord(axis)).clone();
        for (k, pair) in wps.windows(2).enumerate() {
            let a = pair[0].coord(axis);
            let b = pair[1].coord(axis);
            if a == b {
                continue;
            }
            for bound in [&lo, &hi] {
                let t = (bound.clone() - a.clone()) / (b.clone() - a.clone());
                if t > Rational::zero() && t < Rational::one() {
                    let global = (Rational::from_integer(BigInt::from(k as i64)) + t)
                        / Rational::from_integer(BigInt::from(segments));
                    cuts.push(global);
                }
            }
        }
    }
    cuts.sort();
    cuts.dedup();

    let eval_companion = |t: &Rational, axis: usize| -> Rational {
        if wps.len() == 1 {
            return wps[0].coord(axis).clone();
        }
        let scaled = t.clone() * Rational::from_integer(BigInt::from(segments));
        let k = scaled.floor().to_integer().to_i64().expect("segment index") as usize;
        let k = k.min(wps.len() - 2);
        let frac = scaled - Rational::from_integer(BigInt::from(k as i64));
        let a = wps[k].coord(axis);
        let b = wps[k + 1].coord(axis);
        a.clone() + frac * (b.clone() - a.clone())
    };

    let mut waypoints: Vec<Point<Rational>> = vec![yr.clone()];
    for t in &cuts {
        let coords = (0..dim)
            .map(|axis| {
                if linear[axis] {
                    yr.coord(axis).clone()
                        + t.clone() * (zr.coord(axis).clone() - yr.coord(axis).clone())
                } else {
                    let lo = yr.coord(axis).min(zr.coord(axis)).clone();
                    let hi = yr.coord(axis).max(zr.coord(axis)).clone();
                    eval_companion(t, axis).max(lo).min(hi)
                }
            })
            .collect();
        waypoints.push(Point::new(coords));
    }
    waypoints.push(zr);
    waypoints.dedup();
    Ok(MonotonePath::new(waypoints)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;
    use crate::num::dy;
    use crate::path::{is_monovex, validate_monotone};

    type P = Point<Dyadic>;

    fn unit_interval() -> SpanComplex<Dyadic> {
        SpanComplex::from_box(BoxRegion::closed_from_corners(
            &P::from_ints(&[0]),
            &P::from_ints(&[1]),
        ))
    }

    fn unit_square() -> SpanComplex<Dyadic> {
        SpanComplex::from_box(BoxRegion::closed_from_corners(
            &P::from_ints(&[0, 0]),
            &P::from_ints(&[1, 1]),
        ))
    }

    #[test]
    fn nearest_of_interval_endpoint() {
        let f = nearest_point_map(&unit_interval(), &P::from_ints(&[2])).unwrap();
        assert_eq!(f.boxes().len(), 1);
        assert!(f.contains(&P::from_ints(&[1])));
        assert!(!f.contains(&P::from_ints(&[0])));
        assert_eq!(f.boxes()[0].interval(0).lo(), &Dyadic::one());
        assert_eq!(f.boxes()[0].interval(0).hi(), &Dyadic::one());
    }

    #[test]
    fn nearest_of_square_is_an_edge() {
        // x = (2, 1/2): distance 1, the whole right edge is nearest
        let x = Point::new(vec![Dyadic::from(2), dy(1, 1)]);
        let f = nearest_point_map(&unit_square(), &x).unwrap();
        assert!(f.contains(&P::from_ints(&[1, 0])));
        assert!(f.contains(&P::from_ints(&[1, 1])));
        assert!(!f.contains(&P::from_ints(&[0, 0])));
        assert!(f.contains(&Point::new(vec![Dyadic::one(), dy(1, 1)])));
    }

    #[test]
    fn thicken_the_interval_tip() {
        // d = 1, eta = 1/128, F = {1}: the two incident grid cells
        let entry = thicken(&unit_interval(), &P::from_ints(&[2])).unwrap();
        assert_eq!(entry.eta(), &dy(1, 7));
        assert!(entry.scales.invariant_holds());
        assert_eq!(entry.cell_count(), 2);
        assert!(entry.thickened.contains(&Point::new(vec![dy(127, 7)])));
        assert!(entry.thickened.contains(&Point::new(vec![dy(129, 7)])));
        assert!(!entry.thickened.contains(&Point::new(vec![dy(126, 7)])));
        assert!(entry.gap_within_eta());
    }

    #[test]
    fn thickening_is_monovex_on_the_staircase() {
        let a = instances::example1(3);
        let entry = thicken(&a, &P::from_ints(&[2, 2])).unwrap();
        assert!(is_monovex(&entry.thickened).is_monovex);
        assert!(entry.gap_within_eta());
        // nearest set of the staircase from the far corner passes too
        assert!(is_monovex(&entry.nearest).is_monovex);
    }

    #[test]
    fn selection_of_a_single_box_is_its_center() {
        let g = SpanComplex::from_box(BoxRegion::new(vec![
            Interval::open(Dyadic::from(0), Dyadic::from(2)).unwrap(),
            Interval::open(Dyadic::from(0), Dyadic::from(1)).unwrap(),
        ]));
        let p = select_point(&g).unwrap();
        assert_eq!(p, Point::new(vec![Dyadic::one(), dy(1, 1)]));
    }

    #[test]
    fn selection_of_an_l_shape_slices_at_the_projection_midpoint() {
        // axis-0 projection (0, 2): f1 = 1, then the slice is (0, 1)
        let g = SpanComplex::new(
            2,
            vec![
                BoxRegion::new(vec![
                    Interval::open(Dyadic::from(0), Dyadic::from(2)).unwrap(),
                    Interval::open(Dyadic::from(0), Dyadic::from(1)).unwrap(),
                ]),
                BoxRegion::new(vec![
                    Interval::open(Dyadic::from(0), Dyadic::from(1)).unwrap(),
                    Interval::open(Dyadic::from(0), Dyadic::from(2)).unwrap(),
                ]),
            ],
        )
        .unwrap();
        let p = select_point(&g).unwrap();
        assert_eq!(p, Point::new(vec![Dyadic::one(), dy(1, 1)]));
    }

    #[test]
    fn selection_rejects_disconnected_projection() {
        let g = SpanComplex::new(
            1,
            vec![
                BoxRegion::new(vec![
                    Interval::open(Dyadic::from(0), Dyadic::from(1)).unwrap()
                ]),
                BoxRegion::new(vec![
                    Interval::open(Dyadic::from(2), Dyadic::from(3)).unwrap()
                ]),
            ],
        )
        .unwrap();
        assert!(matches!(
            select_point(&g),
            Err(RetractionError::ProjectionNotInterval(_))
        ));
    }

    #[test]
    fn interval_retraction_decays_fast() {
        // d(g^3(x), A) <= 1 / 729 from distance 1
        let t = iterate_retraction(&unit_interval(), &P::from_ints(&[2]), 3).unwrap();
        assert!(t.decay_certified());
        let limit = Dyadic::one().to_rational() / Dyadic::from(729).to_rational();
        assert!(t.dists[3].to_rational() <= limit);
    }

    #[test]
    fn step_stays_within_four_thirds() {
        let a = instances::example1(3);
        let x = P::from_ints(&[2, 0]);
        let d0 = a.cheb_distance(&x).unwrap().value;
        let t = iterate_retraction(&a, &x, 1).unwrap();
        let moved = t.points[1].cheb(&x);
        assert!(moved.mul_int(3) <= d0.mul_int(4));
    }

    #[test]
    fn local_radius_is_probe_verified_on_easy_instances() {
        let r = local_radius(&unit_interval(), &P::from_ints(&[2]), 40).unwrap();
        assert!(r.probe_verified);
        assert!(r.delta <= dy(1, 8));
        let fallback = local_radius(&unit_interval(), &P::from_ints(&[2]), 0).unwrap();
        assert!(!fallback.probe_verified);
    }

    #[test]
    fn neighborhood_contains_the_nearest_set() {
        let a = instances::example1(3);
        let x = P::from_ints(&[2, 2]);
        let g = neighborhood_map(&a, &x, std::slice::from_ref(&x), 10).unwrap();
        let entry = thicken(&a, &x).unwrap();
        assert!(entry.nearest.subset_of(&g.complex).unwrap());
        assert!(is_monovex(&g.complex).is_monovex);
    }

    #[test]
    fn repair_path_identity_case() {
        let a = instances::example1(2);
        let x = P::from_ints(&[2, 2]);
        let entry = thicken(&a, &x).unwrap();
        // y = y' and z = z' in F: the repaired path is the companion path
        let y = P::from_ints(&[1, 1]);
        let path = MonotonePath::constant(y.clone());
        let repaired = repair_path(&entry, &y, &y, &y, &y, &path).unwrap();
        assert_eq!(repaired.waypoints().len(), 1);
    }

    #[test]
    fn repair_path_one_dimensional_straight_case() {
        let a = unit_interval();
        let x = P::from_ints(&[2]);
        let entry = thicken(&a, &x).unwrap();
        let y = Point::new(vec![dy(127, 7)]);
        let z = P::from_ints(&[1]);
        let one = P::from_ints(&[1]);
        let gamma = MonotonePath::constant(one.clone());
        let repaired = repair_path(&entry, &y, &z, &one, &one, &gamma).unwrap();
        assert!(validate_monotone(&repaired, &entry.thickened.to_rational()));
        assert_eq!(repaired.start(), &y.to_rational());
        assert_eq!(repaired.end(), &z.to_rational());
    }
}
