use serde::{Deserialize, Serialize};

use super::{Interval, IntervalError};

/// An axis-aligned box, one nonempty interval per dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Interval>", into = "Vec<Interval>")]
pub struct IBox {
    dims: Vec<Interval>,
}

impl TryFrom<Vec<Interval>> for IBox {
    type Error = IntervalError;

    fn try_from(dims: Vec<Interval>) -> Result<Self, Self::Error> {
        IBox::new(dims)
    }
}

impl From<IBox> for Vec<Interval> {
    fn from(b: IBox) -> Self {
        b.dims
    }
}

impl IBox {
    pub fn new(dims: Vec<Interval>) -> Result<Self, IntervalError> {
        if dims.is_empty() {
            return Err(IntervalError::EmptyBox);
        }
        Ok(Self { dims })
    }

    /// Degenerate box at a point.
    pub fn point(coords: &[f64]) -> Result<Self, IntervalError> {
        Self::new(coords.iter().map(|&c| Interval::point(c)).collect())
    }

    pub fn from_bounds(bounds: &[(f64, f64)]) -> Result<Self, IntervalError> {
        let dims = bounds
            .iter()
            .map(|&(lo, hi)| Interval::new(lo, hi))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(dims)
    }

    pub fn dims(&self) -> &[Interval] {
        &self.dims
    }

    pub fn dim(&self, i: usize) -> Interval {
        self.dims[i]
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn widths(&self) -> Vec<f64> {
        self.dims.iter().map(|d| d.width()).collect()
    }

    pub fn midpoint(&self) -> Vec<f64> {
        self.dims.iter().map(|d| d.mid()).collect()
    }

    pub fn is_point(&self) -> bool {
        self.dims.iter().all(|d| d.is_point())
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        x.len() == self.dims.len() && self.dims.iter().zip(x).all(|(d, &v)| d.contains(v))
    }

    pub fn is_subset_of(&self, other: &IBox) -> bool {
        self.len() == other.len() && self.dims.iter().zip(&other.dims).all(|(a, b)| a.is_subset_of(*b))
    }

    /// Replace one coordinate interval.
    pub fn with_dim(&self, i: usize, iv: Interval) -> IBox {
        let mut dims = self.dims.clone();
        dims[i] = iv;
        IBox { dims }
    }

    /// Box extended by one extra dimension.
    pub fn extended(&self, iv: Interval) -> IBox {
        let mut dims = self.dims.clone();
        dims.push(iv);
        IBox { dims }
    }

    /// Split along `axis` at its midpoint.
    pub fn bisect(&self, axis: usize) -> (IBox, IBox) {
        let (l, r) = self.dims[axis].bisect();
        (self.with_dim(axis, l), self.with_dim(axis, r))
    }

    /// Shrink every non-degenerate dimension inward by `frac` of its width
    /// on each side.
    pub fn shrink(&self, frac: f64) -> IBox {
        let dims = self
            .dims
            .iter()
            .map(|d| {
                let w = d.width();
                if w == 0.0 {
                    *d
                } else {
                    Interval::new(d.lo() + frac * w, d.hi() - frac * w).unwrap_or(*d)
                }
            })
            .collect();
        IBox { dims }
    }

    /// All 2^n corner points.
    pub fn corners(&self) -> Vec<Vec<f64>> {
        let n = self.dims.len();
        (0..1usize << n)
            .map(|mask| {
                (0..n)
                    .map(|i| {
                        if mask >> i & 1 == 0 {
                            self.dims[i].lo()
                        } else {
                            self.dims[i].hi()
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_covers_parent_exactly() {
        let b = IBox::from_bounds(&[(1.18, 1.19), (-10.0, -9.0)]).unwrap();
        for axis in 0..2 {
            let (l, r) = b.bisect(axis);
            assert_eq!(l.dim(axis).lo(), b.dim(axis).lo());
            assert_eq!(r.dim(axis).hi(), b.dim(axis).hi());
            assert_eq!(l.dim(axis).hi(), r.dim(axis).lo());
            assert_eq!(l.dim(1 - axis), b.dim(1 - axis));
            assert!(l.is_subset_of(&b) && r.is_subset_of(&b));
        }
    }

    #[test]
    fn empty_box_rejected() {
        assert_eq!(IBox::new(vec![]), Err(IntervalError::EmptyBox));
    }

    #[test]
    fn corners_of_square() {
        let b = IBox::from_bounds(&[(0.0, 1.0), (2.0, 3.0)]).unwrap();
        let c = b.corners();
        assert_eq!(c.len(), 4);
        assert!(c.contains(&vec![1.0, 2.0]));
    }

    #[test]
    fn shrink_keeps_points() {
        let b = IBox::from_bounds(&[(0.0, 1.0), (2.0, 2.0)]).unwrap();
        let s = b.shrink(0.25);
        assert_eq!(s.dim(0), Interval::new(0.25, 0.75).unwrap());
        assert_eq!(s.dim(1), Interval::point(2.0));
    }
}
