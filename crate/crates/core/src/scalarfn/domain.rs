use std::fmt;

use crate::matfun::SpectrumInterval;

/// A real interval with independently open or closed endpoints.
///
/// Infinite endpoints are always open. An interval whose bounds cross is
/// empty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    lo: f64,
    hi: f64,
    lo_closed: bool,
    hi_closed: bool,
}

impl Domain {
    pub fn new(lo: f64, lo_closed: bool, hi: f64, hi_closed: bool) -> Self {
        Self {
            lo,
            hi,
            lo_closed: lo_closed && lo.is_finite(),
            hi_closed: hi_closed && hi.is_finite(),
        }
    }

    pub fn reals() -> Self {
        Self::new(f64::NEG_INFINITY, false, f64::INFINITY, false)
    }

    /// `(0, ∞)`
    pub fn positive() -> Self {
        Self::new(0.0, false, f64::INFINITY, false)
    }

    /// `[0, ∞)`
    pub fn nonnegative() -> Self {
        Self::new(0.0, true, f64::INFINITY, false)
    }

    pub fn closed(lo: f64, hi: f64) -> Self {
        Self::new(lo, true, hi, true)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn contains(&self, t: f64) -> bool {
        let above = if self.lo_closed { t >= self.lo } else { t > self.lo };
        let below = if self.hi_closed { t <= self.hi } else { t < self.hi };
        above && below
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }

    pub fn contains_interval(&self, interval: &SpectrumInterval) -> bool {
        self.contains(interval.lo()) && self.contains(interval.hi())
    }

    pub fn intersect(&self, other: &Domain) -> Domain {
        let (lo, lo_closed) = if self.lo > other.lo {
            (self.lo, self.lo_closed)
        } else if other.lo > self.lo {
            (other.lo, other.lo_closed)
        } else {
            (self.lo, self.lo_closed && other.lo_closed)
        };
        let (hi, hi_closed) = if self.hi < other.hi {
            (self.hi, self.hi_closed)
        } else if other.hi < self.hi {
            (other.hi, other.hi_closed)
        } else {
            (self.hi, self.hi_closed && other.hi_closed)
        };
        Domain::new(lo, lo_closed, hi, hi_closed)
    }

    /// `{t − eps : t ∈ self}`
    pub fn translate(&self, offset: f64) -> Domain {
        Domain::new(self.lo + offset, self.lo_closed, self.hi + offset, self.hi_closed)
    }

    /// `{t > 0 : 1/t ∈ self}`
    pub fn reciprocal_positive(&self) -> Domain {
        let positive = self.intersect(&Domain::positive());
        if positive.is_empty() {
            return Domain::new(1.0, false, 0.0, false);
        }
        let (lo, lo_closed) = if positive.hi.is_infinite() {
            (0.0, false)
        } else {
            (1.0 / positive.hi, positive.hi_closed)
        };
        let (hi, hi_closed) = if positive.lo == 0.0 {
            (f64::INFINITY, false)
        } else {
            (1.0 / positive.lo, positive.lo_closed)
        };
        Domain::new(lo, lo_closed, hi, hi_closed)
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lo_closed { '[' } else { '(' };
        let close = if self.hi_closed { ']' } else { ')' };
        write!(f, "{open}{}, {}{close}", self.lo, self.hi)
    }
}
