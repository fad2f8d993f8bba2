use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Interval, IntervalError};

/// Arithmetic shared by plain floats and intervals, so a formula written once
/// can be evaluated at a point (fast, unvalidated) or over a box (rigorous).
pub trait Scalar:
    Copy
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
{
    fn cst(v: f64) -> Self;
    fn sqrt(self) -> Result<Self, IntervalError>;
    fn div(self, rhs: Self) -> Result<Self, IntervalError>;
    fn sqr(self) -> Self;
    fn abs(self) -> Self;
    fn min(self, other: Self) -> Self;
    fn max(self, other: Self) -> Self;
    /// Lower bound of the value set.
    fn lower(self) -> f64;
    /// Upper bound of the value set.
    fn upper(self) -> f64;
}

impl Scalar for f64 {
    fn cst(v: f64) -> Self {
        v
    }

    fn sqrt(self) -> Result<Self, IntervalError> {
        if self < 0.0 {
            return Err(IntervalError::SqrtOfNegativeInterval);
        }
        Ok(f64::sqrt(self))
    }

    fn div(self, rhs: Self) -> Result<Self, IntervalError> {
        if rhs == 0.0 {
            return Err(IntervalError::DivisionByZeroInterval);
        }
        Ok(self / rhs)
    }

    fn sqr(self) -> Self {
        self * self
    }

    fn abs(self) -> Self {
        f64::abs(self)
    }

    fn min(self, other: Self) -> Self {
        f64::min(self, other)
    }

    fn max(self, other: Self) -> Self {
        f64::max(self, other)
    }

    fn lower(self) -> f64 {
        self
    }

    fn upper(self) -> f64 {
        self
    }
}

impl Scalar for Interval {
    fn cst(v: f64) -> Self {
        Interval::point(v)
    }

    fn sqrt(self) -> Result<Self, IntervalError> {
        Interval::sqrt(self)
    }

    fn div(self, rhs: Self) -> Result<Self, IntervalError> {
        self.checked_div(rhs)
    }

    fn sqr(self) -> Self {
        Interval::sqr(self)
    }

    fn abs(self) -> Self {
        Interval::abs(self)
    }

    fn min(self, other: Self) -> Self {
        Interval::min(self, other)
    }

    fn max(self, other: Self) -> Self {
        Interval::max(self, other)
    }

    fn lower(self) -> f64 {
        self.lo()
    }

    fn upper(self) -> f64 {
        self.hi()
    }
}
