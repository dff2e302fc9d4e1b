//! Monotone reachability, certified monotone paths, the monovexity
//! decision, and the Minkowski path lift.
//!
//! Reachability is decided on the endpoint arrangement of the complex: a
//! monotone path between two points exists iff there is a walk over the
//! arrangement cells that moves through shared faces lying inside the set,
//! with every per-axis transition following the sign forced by the
//! endpoints. Coordinates with equal endpoints are frozen, which confines
//! the walk to the slice through that value.

mod decide;
mod finder;
mod lift;
mod oracle;
mod validate;

pub use decide::is_monovex;
pub use finder::PathFinder;
pub use lift::lift_minkowski_path;
pub use oracle::{grid_oracle_reachable, oracle_step};
pub use validate::validate_monotone;

use serde::Serialize;

use crate::geom::{GeomError, Point, SpanComplex};
use crate::num::Coord;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PathError {
    #[error("endpoint {0} lies outside the complex")]
    EndpointOutsideComplex(String),
    #[error("point {0} lies outside the box summand")]
    EndpointOutsideBox(String),
    #[error("a path needs at least one waypoint")]
    NoWaypoints,
    #[error("coordinate {axis} is not monotone along the waypoints")]
    NotMonotone { axis: usize },
    #[error(transparent)]
    Geometry(#[from] GeomError),
}

/// Per-coordinate direction certificate: `+1` nondecreasing, `-1`
/// nonincreasing, `0` constant. For a path from `x` to `y` the sign on
/// each axis is `sign(y_i - x_i)`; equal endpoints force a constant
/// coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignPattern {
    signs: Vec<i8>,
}

impl SignPattern {
    pub fn between<S: Coord>(x: &Point<S>, y: &Point<S>) -> Self {
        assert_eq!(x.dim(), y.dim());
        SignPattern {
            signs: x
                .coords()
                .iter()
                .zip(y.coords())
                .map(|(a, b)| match b.cmp(a) {
                    std::cmp::Ordering::Greater => 1,
                    std::cmp::Ordering::Less => -1,
                    std::cmp::Ordering::Equal => 0,
                })
                .collect(),
        }
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn sign(&self, axis: usize) -> i8 {
        self.signs[axis]
    }

    /// Axes with nonzero sign (the moving coordinates).
    pub fn moving_axes(&self) -> Vec<usize> {
        self.signs
            .iter()
            .enumerate()
            .filter(|(_, &s)| s != 0)
            .map(|(a, _)| a)
            .collect()
    }
}

/// A piecewise-linear path, monotone in every coordinate, given by its
/// waypoints. Containment in a complex is checked by
/// [`validate_monotone`]; the constructor enforces the monotonicity
/// certificate itself.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct MonotonePath<S> {
    waypoints: Vec<Point<S>>,
    direction: SignPattern,
}

impl<S: Coord> std::fmt::Debug for MonotonePath<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MonotonePath{:?} via ", self.direction.signs())?;
        f.debug_list().entries(self.waypoints.iter()).finish()
    }
}

impl<S: Coord> MonotonePath<S> {
    pub fn new(waypoints: Vec<Point<S>>) -> Result<Self, PathError> {
        let first = waypoints.first().ok_or(PathError::NoWaypoints)?;
        let last = waypoints.last().expect("nonempty");
        let direction = SignPattern::between(first, last);
        let path = MonotonePath {
            waypoints,
            direction,
        };
        path.check_monotone()?;
        Ok(path)
    }

    pub fn constant(p: Point<S>) -> Self {
        let direction = SignPattern::between(&p, &p);
        MonotonePath {
            waypoints: vec![p],
            direction,
        }
    }

    pub fn waypoints(&self) -> &[Point<S>] {
        &self.waypoints
    }

    pub fn direction(&self) -> &SignPattern {
        &self.direction
    }

    pub fn start(&self) -> &Point<S> {
        self.waypoints.first().expect("paths are nonempty")
    }

    pub fn end(&self) -> &Point<S> {
        self.waypoints.last().expect("paths are nonempty")
    }

    pub fn dim(&self) -> usize {
        self.start().dim()
    }

    fn check_monotone(&self) -> Result<(), PathError> {
        let dim = self.start().dim();
        for axis in 0..dim {
            let sign = self.direction.sign(axis);
            for pair in self.waypoints.windows(2) {
                let cmp = pair[1].coord(axis).cmp(pair[0].coord(axis));
                let ok = match sign {
                    0 => cmp == std::cmp::Ordering::Equal,
                    1 => cmp != std::cmp::Ordering::Less,
                    -1 => cmp != std::cmp::Ordering::Greater,
                    _ => unreachable!(),
                };
                if !ok {
                    return Err(PathError::NotMonotone { axis });
                }
            }
        }
        Ok(())
    }

    /// Exact reverse of the path.
    pub fn reversed(&self) -> MonotonePath<S> {
        let mut waypoints = self.waypoints.clone();
        waypoints.reverse();
        MonotonePath::new(waypoints).expect("reverse of a monotone path is monotone")
    }
}

/// Outcome of the monovexity decision. A `false` verdict carries a witness
/// pair with no monotone path between them.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct MonovexVerdict<S> {
    pub is_monovex: bool,
    pub witness: Option<(Point<S>, Point<S>)>,
}

impl<S: Coord> std::fmt::Debug for MonovexVerdict<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.witness {
            Some((x, y)) => write!(f, "MonovexVerdict(false, witness {x:?} / {y:?})"),
            None => write!(f, "MonovexVerdict({})", self.is_monovex),
        }
    }
}

/// Searches for a monotone path from `x` to `y` inside the complex.
/// Returns `None` when no monotone cell walk exists. Builds the
/// arrangement on the fly; hold a [`PathFinder`] for repeated queries.
pub fn monotone_reachable<S: Coord>(
    complex: &SpanComplex<S>,
    x: &Point<S>,
    y: &Point<S>,
) -> Result<Option<MonotonePath<S>>, PathError> {
    PathFinder::new(complex.clone()).reachable(x, y)
}
