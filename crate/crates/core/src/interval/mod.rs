//! Validated interval arithmetic.
//!
//! Every operation returns an enclosure of the exact real result set. Rounding
//! direction is emulated without touching the FPU mode: each primitive computes
//! the round-to-nearest result together with its exact error term (TwoSum or an
//! FMA residual) and steps to the adjacent binary64 value only when the result
//! was inexact in the unsafe direction. Exact results therefore stay exact.

mod boxes;
mod prover;
mod scalar;

pub use boxes::IBox;
pub use prover::{prove_positive, ProverConfig, Status, Verdict, Witness};
pub use scalar::Scalar;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("division by an interval containing zero")]
    DivisionByZeroInterval,
    #[error("square root of an interval with negative part")]
    SqrtOfNegativeInterval,
    #[error("invalid interval bounds (lo > hi or NaN)")]
    InvalidBounds,
    #[error("a box needs at least one dimension")]
    EmptyBox,
}

/// Results smaller than this may have lost bits to gradual underflow, in which
/// case the FMA residual is no longer exact and both endpoints get nudged.
const TINY: f64 = 1.0e-290;

#[inline]
fn down(s: f64, err: f64) -> f64 {
    if s.is_nan() {
        f64::NEG_INFINITY
    } else if s == f64::INFINITY {
        f64::MAX
    } else if s.abs() < TINY || err < 0.0 {
        s.next_down()
    } else {
        s
    }
}

#[inline]
fn up(s: f64, err: f64) -> f64 {
    if s.is_nan() {
        f64::INFINITY
    } else if s == f64::NEG_INFINITY {
        f64::MIN
    } else if s.abs() < TINY || err > 0.0 {
        s.next_up()
    } else {
        s
    }
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn add_rd(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if s == 0.0 && e == 0.0 {
        return s;
    }
    down(s, e)
}

#[inline]
fn add_ru(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if s == 0.0 && e == 0.0 {
        return s;
    }
    up(s, e)
}

#[inline]
fn mul_rd(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let s = a * b;
    down(s, a.mul_add(b, -s))
}

#[inline]
fn mul_ru(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let s = a * b;
    up(s, a.mul_add(b, -s))
}

/// Sign of (a/b − q) where q = fl(a/b).
#[inline]
fn div_err(a: f64, b: f64, q: f64) -> f64 {
    let r = (-q).mul_add(b, a);
    if b < 0.0 {
        -r
    } else {
        r
    }
}

#[inline]
fn div_rd(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let q = a / b;
    down(q, div_err(a, b, q))
}

#[inline]
fn div_ru(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let q = a / b;
    up(q, div_err(a, b, q))
}

#[inline]
fn sqrt_rd(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let s = x.sqrt();
    down(s, (-s).mul_add(s, x)).max(0.0)
}

#[inline]
fn sqrt_ru(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let s = x.sqrt();
    up(s, (-s).mul_add(s, x))
}

/// A closed interval `[lo, hi]` of reals with binary64 endpoints.
///
/// The empty set is never represented by an `Interval`; operations that can
/// produce it (intersection) return `Option<Interval>`.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "(f64, f64)", into = "(f64, f64)")]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl TryFrom<(f64, f64)> for Interval {
    type Error = IntervalError;

    fn try_from((lo, hi): (f64, f64)) -> Result<Self, Self::Error> {
        Interval::new(lo, hi)
    }
}

impl From<Interval> for (f64, f64) {
    fn from(iv: Interval) -> Self {
        (iv.lo, iv.hi)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, IntervalError> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(IntervalError::InvalidBounds);
        }
        Ok(Self { lo, hi })
    }

    /// Degenerate interval `[x, x]`.
    pub fn point(x: f64) -> Self {
        assert!(!x.is_nan(), "NaN is not a valid interval endpoint");
        Self { lo: x, hi: x }
    }

    /// Smallest interval containing both values, in either order.
    pub fn hull_of(a: f64, b: f64) -> Self {
        Self {
            lo: a.min(b),
            hi: a.max(b),
        }
    }

    pub fn entire() -> Self {
        Self {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn width(self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(self) -> f64 {
        if self.lo == self.hi {
            return self.lo;
        }
        0.5 * self.lo + 0.5 * self.hi
    }

    /// Largest absolute value in the interval.
    pub fn mag(self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn is_point(self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(self) -> bool {
        self.contains(0.0)
    }

    pub fn is_subset_of(self, other: Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// `self ⊂ interior(other)`.
    pub fn is_interior_to(self, other: Interval) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    pub fn intersect(self, other: Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn hull(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Split at the midpoint. The two halves share the midpoint and cover `self`.
    pub fn bisect(self) -> (Interval, Interval) {
        let m = self.mid();
        (
            Interval { lo: self.lo, hi: m },
            Interval { lo: m, hi: self.hi },
        )
    }

    pub fn sqr(self) -> Interval {
        if self.lo >= 0.0 {
            Interval {
                lo: mul_rd(self.lo, self.lo),
                hi: mul_ru(self.hi, self.hi),
            }
        } else if self.hi <= 0.0 {
            Interval {
                lo: mul_rd(self.hi, self.hi),
                hi: mul_ru(self.lo, self.lo),
            }
        } else {
            let m = self.mag();
            Interval {
                lo: 0.0,
                hi: mul_ru(m, m),
            }
        }
    }

    pub fn abs(self) -> Interval {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            -self
        } else {
            Interval {
                lo: 0.0,
                hi: self.mag(),
            }
        }
    }

    pub fn min(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.min(other.hi),
        }
    }

    pub fn max(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo.max(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn sqrt(self) -> Result<Interval, IntervalError> {
        if self.lo < 0.0 {
            return Err(IntervalError::SqrtOfNegativeInterval);
        }
        Ok(Interval {
            lo: sqrt_rd(self.lo),
            hi: sqrt_ru(self.hi),
        })
    }

    pub fn checked_div(self, rhs: Interval) -> Result<Interval, IntervalError> {
        if rhs.contains_zero() {
            return Err(IntervalError::DivisionByZeroInterval);
        }
        let (a, b) = (self, rhs);
        let lo = div_rd(a.lo, b.lo)
            .min(div_rd(a.lo, b.hi))
            .min(div_rd(a.hi, b.lo))
            .min(div_rd(a.hi, b.hi));
        let hi = div_ru(a.lo, b.lo)
            .max(div_ru(a.lo, b.hi))
            .max(div_ru(a.hi, b.lo))
            .max(div_ru(a.hi, b.hi));
        Ok(Interval { lo, hi })
    }
}

impl Neg for Interval {
    type Output = Interval;

    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Add for Interval {
    type Output = Interval;

    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: add_rd(self.lo, rhs.lo),
            hi: add_ru(self.hi, rhs.hi),
        }
    }
}

impl Sub for Interval {
    type Output = Interval;

    fn sub(self, rhs: Interval) -> Interval {
        Interval {
            lo: add_rd(self.lo, -rhs.hi),
            hi: add_ru(self.hi, -rhs.lo),
        }
    }
}

impl Mul for Interval {
    type Output = Interval;

    fn mul(self, rhs: Interval) -> Interval {
        let (a, b) = (self, rhs);
        let pairs = [(a.lo, b.lo), (a.lo, b.hi), (a.hi, b.lo), (a.hi, b.hi)];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (x, y) in pairs {
            let d = mul_rd(x, y);
            let u = mul_ru(x, y);
            lo = lo.min(if d.is_nan() { f64::NEG_INFINITY } else { d });
            hi = hi.max(if u.is_nan() { f64::INFINITY } else { u });
        }
        Interval { lo, hi }
    }
}

macro_rules! scalar_ops {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr<f64> for Interval {
            type Output = Interval;
            fn $m(self, rhs: f64) -> Interval {
                self.$m(Interval::point(rhs))
            }
        }
        impl $tr<Interval> for f64 {
            type Output = Interval;
            fn $m(self, rhs: Interval) -> Interval {
                Interval::point(self).$m(rhs)
            }
        }
    )*};
}

scalar_ops!(Add::add, Sub::sub, Mul::mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn exact_endpoint_sum() {
        assert_eq!(iv(1.0, 2.0) + iv(3.0, 4.0), iv(4.0, 6.0));
    }

    #[test]
    fn sign_case_product() {
        assert_eq!(iv(-1.0, 2.0) * iv(-1.0, 2.0), iv(-2.0, 4.0));
        assert_eq!(iv(-3.0, -1.0) * iv(2.0, 5.0), iv(-15.0, -2.0));
    }

    #[test]
    fn sqrt_39_is_tight() {
        let r = Interval::point(39.0).sqrt().unwrap();
        // 6.2449979983983982058468931209397944610729599779...
        assert!(r.lo() <= 6.244_997_998_398_398 && 6.244_997_998_398_398 <= r.hi());
        assert!(r.hi() <= r.lo().next_up().next_up());
        // the decimal oracle sits strictly between the two binary64 neighbours
        let lo_bits = r.lo().to_bits();
        assert!(r.hi().to_bits() - lo_bits <= 2);
    }

    #[test]
    fn inexact_sum_is_widened() {
        let r = Interval::point(0.1) + Interval::point(0.2);
        assert!(r.lo() < r.hi());
        assert!(r.contains(0.30000000000000004) || r.contains(0.3));
        assert_eq!(r.hi(), r.lo().next_up());
    }

    #[test]
    fn division_by_zero_interval_is_an_error() {
        assert_eq!(
            iv(1.0, 2.0).checked_div(iv(-1.0, 1.0)),
            Err(IntervalError::DivisionByZeroInterval)
        );
        assert_eq!(
            iv(1.0, 2.0).checked_div(iv(0.0, 1.0)),
            Err(IntervalError::DivisionByZeroInterval)
        );
    }

    #[test]
    fn sqrt_of_negative_part_is_an_error() {
        assert_eq!(iv(-1.0, 4.0).sqrt(), Err(IntervalError::SqrtOfNegativeInterval));
        assert_eq!(iv(0.0, 4.0).sqrt(), Ok(iv(0.0, 2.0)));
    }

    #[test]
    fn invalid_bounds_rejected() {
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn intersection_of_disjoint_is_none() {
        assert!(iv(0.0, 1.0).intersect(iv(2.0, 3.0)).is_none());
        assert_eq!(iv(0.0, 2.0).intersect(iv(1.0, 3.0)), Some(iv(1.0, 2.0)));
    }

    #[test]
    fn sqr_and_abs_straddling_zero() {
        assert_eq!(iv(-4.0, 4.0).sqr(), iv(0.0, 16.0));
        assert_eq!(iv(-3.0, 1.0).abs(), iv(0.0, 3.0));
        assert_eq!(iv(-3.0, -1.0).abs(), iv(1.0, 3.0));
    }

    #[test]
    fn min_max() {
        assert_eq!(iv(0.0, 3.0).min(iv(1.0, 2.0)), iv(0.0, 2.0));
        assert_eq!(iv(0.0, 3.0).max(iv(1.0, 2.0)), iv(1.0, 3.0));
    }

    #[test]
    fn overflow_stays_enclosing() {
        let big = Interval::point(f64::MAX);
        let r = big + big;
        assert_eq!(r.lo(), f64::MAX);
        assert_eq!(r.hi(), f64::INFINITY);
    }
}
