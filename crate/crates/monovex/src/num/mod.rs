//! Exact scalar arithmetic.
//!
//! Every geometric decision in this crate (membership with open/closed
//! facets, monotonicity, distance comparisons) is made exactly. The
//! canonical coordinate type is [`Dyadic`], a rational with a power-of-two
//! denominator; it is closed under addition, subtraction, multiplication
//! and halving, which covers every construction the toolkit performs.
//! [`Rational`] (arbitrary exact rationals) backs the few places where
//! division is unavoidable: segment/hyperplane crossing parameters,
//! ternary schedule endpoints, and halfplane clipping in the rasterizer.

mod dyadic;

pub use dyadic::{dy, Dyadic, ParseDyadicError};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar used where halving alone is not enough.
pub type Rational = BigRational;

/// An exact, totally ordered scalar the geometric kernel can be built on.
///
/// Implementations must be exact: `a + b - b == a` for all values, and
/// `half` must return exactly one half. `f32`/`f64` deliberately do not
/// implement this trait.
pub trait Coord:
    Clone + Ord + Eq + std::hash::Hash + std::fmt::Debug + std::fmt::Display + Signed + 'static
{
    /// Exactly one half of `self`.
    fn half(&self) -> Self;

    fn from_int(v: i64) -> Self;

    /// Embed into the exact rationals.
    fn to_rational(&self) -> Rational;

    fn midpoint(a: &Self, b: &Self) -> Self {
        (a.clone() + b.clone()).half()
    }
}

impl Coord for Dyadic {
    fn half(&self) -> Self {
        Dyadic::half(self)
    }

    fn from_int(v: i64) -> Self {
        Dyadic::from(v)
    }

    fn to_rational(&self) -> Rational {
        BigRational::new(
            self.mantissa().clone(),
            BigInt::one() << self.exponent() as usize,
        )
    }
}

impl Coord for BigRational {
    fn half(&self) -> Self {
        self / BigRational::from_integer(BigInt::from(2))
    }

    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn to_rational(&self) -> Rational {
        self.clone()
    }
}

/// Converts an exact rational back to a dyadic if its reduced denominator
/// is a power of two.
pub fn rational_to_dyadic(r: &Rational) -> Option<Dyadic> {
    let denom = r.denom();
    if denom.is_zero() || denom.is_negative() {
        return None;
    }
    let bits = denom.bits();
    if denom != &(BigInt::one() << (bits - 1) as usize) {
        return None;
    }
    Some(Dyadic::new(r.numer().clone(), (bits - 1) as u32))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip() {
        let d = Dyadic::new(BigInt::from(-5), 3);
        let r = d.to_rational();
        assert_eq!(rational_to_dyadic(&r).unwrap(), d);
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert!(rational_to_dyadic(&third).is_none());
    }
}
