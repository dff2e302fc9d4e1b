use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Num, One, Signed, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

/// A dyadic rational `mantissa / 2^exponent` in canonical form: the
/// exponent is minimal, i.e. either zero or the mantissa is odd (zero is
/// stored as `0 / 2^0`). Canonical form makes `Eq`/`Hash` agree with the
/// numeric value.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: u32,
}

impl Dyadic {
    /// Builds `mantissa / 2^exponent`, reducing to canonical form.
    pub fn new(mantissa: BigInt, exponent: u32) -> Self {
        let mut d = Dyadic { mantissa, exponent };
        d.normalize();
        d
    }

    /// `2^k` for any (possibly negative) `k`.
    pub fn pow2(k: i32) -> Self {
        if k >= 0 {
            Dyadic::new(BigInt::one() << k as usize, 0)
        } else {
            Dyadic::new(BigInt::one(), (-k) as u32)
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn half(&self) -> Self {
        Dyadic::new(self.mantissa.clone(), self.exponent + 1)
    }

    /// Multiplies by `2^k` exactly.
    pub fn mul_pow2(&self, k: i32) -> Self {
        if k >= 0 {
            Dyadic::new(self.mantissa.clone() << k as usize, self.exponent)
        } else {
            Dyadic::new(self.mantissa.clone(), self.exponent + (-k) as u32)
        }
    }

    /// Multiplies by a machine integer exactly.
    pub fn mul_int(&self, k: i64) -> Self {
        Dyadic::new(&self.mantissa * BigInt::from(k), self.exponent)
    }

    pub fn is_integer(&self) -> bool {
        self.exponent == 0
    }

    /// Largest integer `<= self`.
    pub fn floor_int(&self) -> BigInt {
        self.mantissa
            .div_floor(&(BigInt::one() << self.exponent as usize))
    }

    /// Smallest integer `>= self`.
    pub fn ceil_int(&self) -> BigInt {
        self.mantissa
            .div_ceil(&(BigInt::one() << self.exponent as usize))
    }

    /// `floor(self / step)` for a positive dyadic step; exact.
    pub fn floor_div(&self, step: &Dyadic) -> BigInt {
        assert!(step.is_positive(), "floor_div needs a positive step");
        // self/step = m1 * 2^e2 / (m2 * 2^e1)
        let num = &self.mantissa << step.exponent as usize;
        let den = &step.mantissa << self.exponent as usize;
        num.div_floor(&den)
    }

    /// `ceil(self / step)` for a positive dyadic step; exact.
    pub fn ceil_div(&self, step: &Dyadic) -> BigInt {
        assert!(step.is_positive(), "ceil_div needs a positive step");
        let num = &self.mantissa << step.exponent as usize;
        let den = &step.mantissa << self.exponent as usize;
        num.div_ceil(&den)
    }

    /// True when `self` is an integer multiple of `step`.
    pub fn is_multiple_of(&self, step: &Dyadic) -> bool {
        assert!(step.is_positive());
        let num = &self.mantissa << step.exponent as usize;
        let den = &step.mantissa << self.exponent as usize;
        num.mod_floor(&den).is_zero()
    }

    /// Approximate value for diagnostics only; never used in decisions.
    pub fn to_f64(&self) -> f64 {
        let mut m = self.mantissa.clone();
        let mut e = self.exponent as i64;
        // keep the mantissa within f64 range
        while m.bits() > 900 {
            m >>= 64;
            e -= 64;
        }
        let approx = m.to_string().parse::<f64>().unwrap_or(f64::NAN);
        approx / 2f64.powi(e.clamp(-1000, 1000) as i32)
    }

    fn normalize(&mut self) {
        if self.mantissa.is_zero() {
            self.exponent = 0;
            return;
        }
        while self.exponent > 0 && self.mantissa.is_even() {
            self.mantissa >>= 1;
            self.exponent -= 1;
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.mantissa)
        } else {
            write!(f, "{}/2^{}", self.mantissa, self.exponent)
        }
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Dyadic {
            mantissa: BigInt::from(v),
            exponent: 0,
        }
    }
}

impl From<i32> for Dyadic {
    fn from(v: i32) -> Self {
        Dyadic::from(v as i64)
    }
}

impl From<BigInt> for Dyadic {
    fn from(v: BigInt) -> Self {
        Dyadic {
            mantissa: v,
            exponent: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid dyadic literal {input:?}: expected an integer or \"m/2^e\"")]
pub struct ParseDyadicError {
    pub input: String,
}

impl FromStr for Dyadic {
    type Err = ParseDyadicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let err = || ParseDyadicError {
            input: s.to_string(),
        };
        if let Some((m, e)) = s.split_once("/2^") {
            let mantissa = BigInt::from_str(m.trim()).map_err(|_| err())?;
            let exponent = e.trim().parse::<u32>().map_err(|_| err())?;
            Ok(Dyadic::new(mantissa, exponent))
        } else if s.contains('/') {
            Err(err())
        } else {
            let mantissa = BigInt::from_str(s).map_err(|_| err())?;
            Ok(Dyadic {
                mantissa,
                exponent: 0,
            })
        }
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use num_traits::ToPrimitive;
        if self.exponent == 0 {
            if let Some(v) = self.mantissa.to_i64() {
                return serializer.serialize_i64(v);
            }
        }
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct DyadicVisitor;

        impl Visitor<'_> for DyadicVisitor {
            type Value = Dyadic;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a string \"m/2^e\"")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Dyadic, E> {
                Ok(Dyadic::from(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Dyadic, E> {
                Ok(Dyadic::new(BigInt::from(v), 0))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Dyadic, E> {
                v.parse()
                    .map_err(|e: ParseDyadicError| de::Error::custom(e))
            }
        }

        deserializer.deserialize_any(DyadicVisitor)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: Dyadic) -> Dyadic {
        let e = self.exponent.max(rhs.exponent);
        let m = (self.mantissa << (e - self.exponent) as usize)
            + (rhs.mantissa << (e - rhs.exponent) as usize);
        Dyadic::new(m, e)
    }
}

impl<'a> Add<&'a Dyadic> for &Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: &'a Dyadic) -> Dyadic {
        self.clone() + rhs.clone()
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;

    fn sub(self, rhs: Dyadic) -> Dyadic {
        self + (-rhs)
    }
}

impl<'a> Sub<&'a Dyadic> for &Dyadic {
    type Output = Dyadic;

    fn sub(self, rhs: &'a Dyadic) -> Dyadic {
        self.clone() - rhs.clone()
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;

    fn mul(self, rhs: Dyadic) -> Dyadic {
        Dyadic::new(self.mantissa * rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl<'a> Mul<&'a Dyadic> for &Dyadic {
    type Output = Dyadic;

    fn mul(self, rhs: &'a Dyadic) -> Dyadic {
        self.clone() * rhs.clone()
    }
}

/// Division is only defined when the quotient is again dyadic (the divisor's
/// odd part must divide the dividend's); panics otherwise. Use
/// [`crate::num::Rational`] for general quotients.
impl Div for Dyadic {
    type Output = Dyadic;

    fn div(self, rhs: Dyadic) -> Dyadic {
        assert!(!rhs.is_zero(), "division by zero");
        let num = self.mantissa << rhs.exponent as usize;
        let (q, r) = num.div_rem(&rhs.mantissa);
        assert!(r.is_zero(), "non-dyadic quotient");
        Dyadic::new(q, self.exponent)
    }
}

impl Rem for Dyadic {
    type Output = Dyadic;

    fn rem(self, rhs: Dyadic) -> Dyadic {
        let q = Dyadic::from(self.floor_div(&rhs));
        self - q * rhs
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;

    fn neg(self) -> Dyadic {
        Dyadic {
            mantissa: -self.mantissa,
            exponent: self.exponent,
        }
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;

    fn neg(self) -> Dyadic {
        -self.clone()
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exponent.max(other.exponent);
        let lhs = &self.mantissa << (e - self.exponent) as usize;
        let rhs = &other.mantissa << (e - other.exponent) as usize;
        lhs.cmp(&rhs)
    }
}

impl Zero for Dyadic {
    fn zero() -> Self {
        Dyadic {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }
}

impl One for Dyadic {
    fn one() -> Self {
        Dyadic {
            mantissa: BigInt::one(),
            exponent: 0,
        }
    }
}

impl Num for Dyadic {
    type FromStrRadixErr = ParseDyadicError;

    fn from_str_radix(str: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        BigInt::from_str_radix(str, radix)
            .map(Dyadic::from)
            .map_err(|_| ParseDyadicError {
                input: str.to_string(),
            })
    }
}

impl Signed for Dyadic {
    fn abs(&self) -> Self {
        Dyadic {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    fn abs_sub(&self, other: &Self) -> Self {
        if self <= other {
            Self::zero()
        } else {
            self - other
        }
    }

    fn signum(&self) -> Self {
        Dyadic::from(self.mantissa.signum())
    }

    fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }
}

/// Convenience constructor: `dy(m, e)` is `m / 2^e`.
pub fn dy(m: i64, e: u32) -> Dyadic {
    Dyadic::new(BigInt::from(m), e)
}
