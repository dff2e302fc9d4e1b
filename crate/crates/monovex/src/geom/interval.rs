use serde::Serialize;

use super::GeomError;
use crate::num::Coord;

/// One axis factor of a box: an interval with independently open or closed
/// ends. Emptiness is never represented; constructors reject it.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Interval<S> {
    lo: S,
    hi: S,
    lo_closed: bool,
    hi_closed: bool,
}

impl<S: Coord> Interval<S> {
    pub fn new(lo: S, hi: S, lo_closed: bool, hi_closed: bool) -> Result<Self, GeomError> {
        if lo > hi {
            return Err(GeomError::IntervalOrder {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        if lo == hi && !(lo_closed && hi_closed) {
            return Err(GeomError::EmptyInterval {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(Interval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        })
    }

    pub fn closed(lo: S, hi: S) -> Self {
        Interval::new(lo, hi, true, true).expect("closed interval endpoints out of order")
    }

    pub fn point(v: S) -> Self {
        Interval {
            lo: v.clone(),
            hi: v,
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn open(lo: S, hi: S) -> Result<Self, GeomError> {
        Interval::new(lo, hi, false, false)
    }

    pub fn lo(&self) -> &S {
        &self.lo
    }

    pub fn hi(&self) -> &S {
        &self.hi
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_closed(&self) -> bool {
        self.lo_closed && self.hi_closed
    }

    pub fn contains(&self, v: &S) -> bool {
        let above_lo = if self.lo_closed {
            *v >= self.lo
        } else {
            *v > self.lo
        };
        let below_hi = if self.hi_closed {
            *v <= self.hi
        } else {
            *v < self.hi
        };
        above_lo && below_hi
    }

    /// Distance from `v` to the closure `[lo, hi]`; zero inside.
    pub fn dist_to_closure(&self, v: &S) -> S {
        if *v < self.lo {
            self.lo.clone() - v.clone()
        } else if *v > self.hi {
            v.clone() - self.hi.clone()
        } else {
            S::zero()
        }
    }

    pub fn intersect(&self, other: &Interval<S>) -> Option<Interval<S>> {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            std::cmp::Ordering::Greater => (self.lo.clone(), self.lo_closed),
            std::cmp::Ordering::Less => (other.lo.clone(), other.lo_closed),
            std::cmp::Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            std::cmp::Ordering::Less => (self.hi.clone(), self.hi_closed),
            std::cmp::Ordering::Greater => (other.hi.clone(), other.hi_closed),
            std::cmp::Ordering::Equal => (self.hi.clone(), self.hi_closed && other.hi_closed),
        };
        Interval::new(lo, hi, lo_closed, hi_closed).ok()
    }

    /// Minkowski sum of two intervals; an end is closed iff both summand
    /// ends are closed.
    pub fn sum(&self, other: &Interval<S>) -> Interval<S> {
        Interval {
            lo: self.lo.clone() + other.lo.clone(),
            hi: self.hi.clone() + other.hi.clone(),
            lo_closed: self.lo_closed && other.lo_closed,
            hi_closed: self.hi_closed && other.hi_closed,
        }
    }

    pub fn to_closed(&self) -> Interval<S> {
        Interval::closed(self.lo.clone(), self.hi.clone())
    }

    pub fn midpoint(&self) -> S {
        S::midpoint(&self.lo, &self.hi)
    }

    /// True when the union of the two intervals is again an interval.
    pub fn touches(&self, other: &Interval<S>) -> bool {
        let (a, b) = if self.lo <= other.lo {
            (self, other)
        } else {
            (other, self)
        };
        match a.hi.cmp(&b.lo) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Equal => a.hi_closed || b.lo_closed,
            std::cmp::Ordering::Less => false,
        }
    }

    /// Union of two touching intervals.
    fn merge(&self, other: &Interval<S>) -> Interval<S> {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            std::cmp::Ordering::Less => (self.lo.clone(), self.lo_closed),
            std::cmp::Ordering::Greater => (other.lo.clone(), other.lo_closed),
            std::cmp::Ordering::Equal => (self.lo.clone(), self.lo_closed || other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            std::cmp::Ordering::Greater => (self.hi.clone(), self.hi_closed),
            std::cmp::Ordering::Less => (other.hi.clone(), other.hi_closed),
            std::cmp::Ordering::Equal => (self.hi.clone(), self.hi_closed || other.hi_closed),
        };
        Interval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        }
    }
}

/// Merges a union of 1-D intervals into disjoint maximal intervals, sorted.
pub fn merge_intervals<S: Coord>(mut intervals: Vec<Interval<S>>) -> Vec<Interval<S>> {
    intervals.sort_by(|a, b| a.lo.cmp(&b.lo).then_with(|| b.lo_closed.cmp(&a.lo_closed)));
    let mut out: Vec<Interval<S>> = Vec::new();
    for iv in intervals {
        match out.last_mut() {
            Some(last) if last.touches(&iv) => *last = last.merge(&iv),
            _ => out.push(iv),
        }
    }
    out
}

impl<S: Coord> std::fmt::Debug for Interval<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let l = if self.lo_closed { '[' } else { '(' };
        let r = if self.hi_closed { ']' } else { ')' };
        write!(f, "{l}{}, {}{r}", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::Dyadic;

    fn iv(lo: i64, hi: i64, lc: bool, hc: bool) -> Interval<Dyadic> {
        Interval::new(Dyadic::from(lo), Dyadic::from(hi), lc, hc).unwrap()
    }

    #[test]
    fn rejects_empty() {
        assert!(Interval::<Dyadic>::new(Dyadic::from(1), Dyadic::from(0), true, true).is_err());
        assert!(Interval::<Dyadic>::new(Dyadic::from(1), Dyadic::from(1), false, true).is_err());
    }

    #[test]
    fn open_end_intersection_is_empty() {
        // [0,1) meets [1,2] only at the excluded end.
        let a = iv(0, 1, true, false);
        let b = iv(1, 2, true, true);
        assert!(a.intersect(&b).is_none());
        let c = iv(1, 2, true, true);
        assert!(iv(0, 1, true, true).intersect(&c).is_some());
    }

    #[test]
    fn merge_respects_flags() {
        // [0,1) and (1,2] leave a gap at 1; adding {1} closes it.
        let parts = vec![iv(0, 1, true, false), iv(1, 2, false, true)];
        assert_eq!(merge_intervals(parts.clone()).len(), 2);
        let mut with_point = parts;
        with_point.push(Interval::point(Dyadic::from(1)));
        let merged = merge_intervals(with_point);
        assert_eq!(merged.len(), 1);
        assert!(merged[0].contains(&Dyadic::from(1)));
    }
}
