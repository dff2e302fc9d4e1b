//! Exact toolkit for monovex sets over axis-aligned box complexes.
//!
//! A set is *monovex* when every two of its points are joined by a path,
//! inside the set, that is monotone (nondecreasing or nonincreasing) in
//! every coordinate. Open and closed monovex sets are contractible; sets
//! that are neither can fail to be. This crate makes that circle of ideas
//! computational:
//!
//! - [`geom`]: exact primitive geometry (dyadic endpoints, open/closed
//!   facet flags, arrangements of box complexes);
//! - [`path`]: certified monotone paths, reachability, the monovexity
//!   decision, and the Minkowski path lift;
//! - [`extension`]: extending lattice samples into a monovex set by
//!   iterated dyadic refinement, with hull-confinement and spread-halving
//!   diagnostics;
//! - [`homotopy`]: the two-point path field `g_delta` and the ternary
//!   (Cantor) interleaving that contracts a closed monovex set at finite
//!   depth;
//! - [`retraction`]: nearest-point thickening, open neighborhood maps,
//!   midpoint selections and the iterated retraction with certified `1/9`
//!   decay per step;
//! - [`homology`]: cubical homology over GF(2), the independent
//!   topological oracle;
//! - [`raster`]: exact voxelization of Minkowski sums of segment sets;
//! - [`instances`]: built-in example sets; [`fuzz`]: the randomized
//!   property harness; [`mod@format`]: the canonical textual exchange format.
//!
//! The geometric kernel is generic over the exact scalar; the crate root
//! re-exports the dyadic instantiation everybody uses.

pub mod extension;
pub mod format;
pub mod fuzz;
pub mod geom;
pub mod homology;
pub mod homotopy;
pub mod instances;
pub mod num;
pub mod path;
pub mod raster;
pub mod retraction;

pub use num::{Coord, Dyadic, Rational};

/// Dyadic-coordinate point, the default instantiation.
pub type Point = geom::Point<Dyadic>;
/// Dyadic interval with open/closed ends.
pub type Interval = geom::Interval<Dyadic>;
/// Dyadic axis-aligned box.
pub type BoxRegion = geom::BoxRegion<Dyadic>;
/// Union of dyadic boxes.
pub type SpanComplex = geom::SpanComplex<Dyadic>;
/// Dyadic b-lattice.
pub type Lattice = geom::Lattice<Dyadic>;
/// Piecewise-linear monotone path with dyadic waypoints.
pub type MonotonePath = path::MonotonePath<Dyadic>;
