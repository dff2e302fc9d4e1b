use serde::{Deserialize, Serialize};

use crate::num::{Coord, Rational};

/// A point with exact coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point<S> {
    coords: Vec<S>,
}

impl<S: Coord> Point<S> {
    pub fn new(coords: Vec<S>) -> Self {
        Point { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn coord(&self, axis: usize) -> &S {
        &self.coords[axis]
    }

    pub fn into_coords(self) -> Vec<S> {
        self.coords
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point {
            coords: coords.iter().map(|&v| S::from_int(v)).collect(),
        }
    }

    /// Componentwise sum.
    pub fn add(&self, other: &Point<S>) -> Point<S> {
        assert_eq!(self.dim(), other.dim());
        Point {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Point<S>) -> Point<S> {
        assert_eq!(self.dim(), other.dim());
        Point {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }

    /// Chebyshev (maximum-metric) distance between two points.
    pub fn cheb(&self, other: &Point<S>) -> S {
        assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a.clone() - b.clone()).abs())
            .max()
            .unwrap_or_else(S::zero)
    }

    pub fn to_rational(&self) -> Point<Rational> {
        Point {
            coords: self.coords.iter().map(Coord::to_rational).collect(),
        }
    }

    /// Drops all axes not listed, in the listed order.
    pub fn project(&self, axes: &[usize]) -> Point<S> {
        Point {
            coords: axes.iter().map(|&a| self.coords[a].clone()).collect(),
        }
    }
}

impl<S: Coord> std::fmt::Debug for Point<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl<S: Coord> std::fmt::Display for Point<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}
