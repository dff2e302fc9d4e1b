//! Exact primitive geometry for axis-aligned box complexes.
//!
//! The kernel is generic over an exact scalar [`crate::num::Coord`] so the
//! same membership, intersection and distance code serves both the dyadic
//! surface types and the internal rational checks (segment validation,
//! rasterizer clipping).

mod arrangement;
mod boxes;
mod complex;
mod interval;
mod lattice;
mod point;

pub use arrangement::{Arrangement, CellKey};
pub use boxes::BoxRegion;
pub use complex::{bhull, ChebDistance, SpanComplex};
pub use interval::{merge_intervals, Interval};
pub use lattice::{elementary_boxes, Lattice};
pub use point::Point;

/// Errors raised by the geometric kernel.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty interval: lo {lo} hi {hi} with open end at a point")]
    EmptyInterval { lo: String, hi: String },
    #[error("interval endpoints out of order: lo {lo} > hi {hi}")]
    IntervalOrder { lo: String, hi: String },
    #[error("{0} requires a nonempty input")]
    EmptyInput(&'static str),
    #[error("operation on an empty complex")]
    EmptyComplex,
    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },
    #[error("lattice steps must be positive")]
    NonPositiveStep,
    #[error("box dimension {l} exceeds ambient dimension {n}")]
    BadBoxDimension { l: usize, n: usize },
}
