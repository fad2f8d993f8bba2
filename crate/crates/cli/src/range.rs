//! `lo:hi[:step]` ranges; a single value is a degenerate range.

use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub step: Option<f64>,
}

impl Range {
    pub fn point(v: f64) -> Self {
        Self {
            lo: v,
            hi: v,
            step: None,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    /// Grid points `lo, lo + step, …` up to `hi`, with `hi` itself included
    /// when the step divides the range up to rounding.
    pub fn points(&self) -> Result<Vec<f64>, String> {
        if self.is_degenerate() {
            return Ok(vec![self.lo]);
        }
        let step = self.step.ok_or_else(|| format!("range {self} needs a step"))?;
        let n = ((self.hi - self.lo) / step + 1e-9).floor() as usize + 1;
        Ok((0..n)
            .map(|i| {
                let v = self.lo + i as f64 * step;
                if i + 1 == n && (self.hi - v).abs() <= 1e-9 * step {
                    self.hi
                } else {
                    v.min(self.hi)
                }
            })
            .collect())
    }

    /// Consecutive sub-intervals of width `step` covering `[lo, hi]`.
    pub fn cells(&self) -> Result<Vec<(f64, f64)>, String> {
        if self.is_degenerate() {
            return Ok(vec![(self.lo, self.hi)]);
        }
        let step = self.step.ok_or_else(|| format!("range {self} needs a step"))?;
        let n = (((self.hi - self.lo) / step) - 1e-9).ceil().max(1.0) as usize;
        Ok((0..n)
            .map(|k| {
                let a = self.lo + k as f64 * step;
                let b = if k + 1 == n { self.hi } else { (self.lo + (k + 1) as f64 * step).min(self.hi) };
                (a, b)
            })
            .collect())
    }

    pub fn count_points(&self) -> Result<usize, String> {
        if self.is_degenerate() {
            return Ok(1);
        }
        let step = self.step.ok_or_else(|| format!("range {self} needs a step"))?;
        Ok(((self.hi - self.lo) / step + 1e-9).floor() as usize + 1)
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.step {
            Some(s) => write!(f, "{}:{}:{}", self.lo, self.hi, s),
            None if self.is_degenerate() => write!(f, "{}", self.lo),
            None => write!(f, "{}:{}", self.lo, self.hi),
        }
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| -> Result<f64, String> {
            let v: f64 = t.trim().parse().map_err(|_| format!("not a number: {t:?}"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("not finite: {t:?}"))
            }
        };
        let parts: Vec<&str> = s.split(':').collect();
        let r = match parts.as_slice() {
            [v] => Range::point(num(v)?),
            [lo, hi] => Range {
                lo: num(lo)?,
                hi: num(hi)?,
                step: None,
            },
            [lo, hi, step] => Range {
                lo: num(lo)?,
                hi: num(hi)?,
                step: Some(num(step)?),
            },
            _ => return Err(format!("expected lo:hi[:step], got {s:?}")),
        };
        if r.lo > r.hi {
            return Err(format!("empty range {s:?}: lo > hi"));
        }
        if let Some(step) = r.step {
            if step <= 0.0 {
                return Err(format!("step must be positive in {s:?}"));
            }
        }
        Ok(r)
    }
}
