use serde::{Deserialize, Serialize};

use super::{IBox, Interval, IntervalError};
use crate::serde_num;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Unknown,
}

impl Status {
    /// FAIL dominates UNKNOWN, which dominates PASS.
    pub fn merge(self, other: Status) -> Status {
        use Status::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Unknown, _) | (_, Unknown) => Unknown,
            _ => Pass,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Unknown => "UNKNOWN",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProverConfig {
    pub max_depth: u32,
    /// Smallest sub-box width worth splitting, relative to the root box.
    pub min_width: f64,
}

impl Default for ProverConfig {
    fn default() -> Self {
        Self {
            max_depth: 24,
            min_width: 1e-9,
        }
    }
}

/// Where a FAIL was found: the sub-box and the point inside it whose exact
/// evaluation came out negative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub point: Vec<f64>,
    pub sub_box: IBox,
    #[serde(with = "serde_num")]
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    /// PASS: certified lower bound of the slack. FAIL: the (negative) slack at
    /// the witness. UNKNOWN: lowest unresolved lower bound.
    #[serde(with = "serde_num")]
    pub margin: f64,
    pub boxes_examined: u64,
    pub max_depth_reached: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn pass(margin: f64) -> Self {
        Self {
            status: Status::Pass,
            margin,
            boxes_examined: 1,
            max_depth_reached: 0,
            witness: None,
        }
    }

    pub fn unknown(margin: f64) -> Self {
        Self {
            status: Status::Unknown,
            margin,
            boxes_examined: 1,
            max_depth_reached: 0,
            witness: None,
        }
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }

    /// Associative, commutative combination of verdicts on parts of a domain.
    pub fn merge(self, other: Verdict) -> Verdict {
        let status = self.status.merge(other.status);
        let pick = |v: &Verdict| v.status == status;
        let margin = match (pick(&self), pick(&other)) {
            (true, true) => self.margin.min(other.margin),
            (true, false) => self.margin,
            _ => other.margin,
        };
        let witness = match (self.witness, other.witness) {
            (Some(a), Some(b)) => Some(if b.value < a.value { b } else { a }),
            (a, b) => a.or(b),
        };
        Verdict {
            status,
            margin,
            boxes_examined: self.boxes_examined + other.boxes_examined,
            max_depth_reached: self.max_depth_reached.max(other.max_depth_reached),
            witness,
        }
    }
}

fn split_axis(b: &IBox, root_widths: &[f64], min_width: f64) -> Option<usize> {
    let mut best = None;
    let mut best_rel = min_width;
    for (i, (d, &rw)) in b.dims().iter().zip(root_widths).enumerate() {
        if rw <= 0.0 {
            continue;
        }
        let rel = d.width() / rw;
        if rel > best_rel && d.lo() < d.mid() && d.mid() < d.hi() {
            best_rel = rel;
            best = Some(i);
        }
    }
    best
}

/// Branch-and-bound proof that `f > 0` on every point of `domain`.
///
/// `f` must return an enclosure of the function's range over the box it is
/// handed. An evaluation error leaves that sub-box undecided.
pub fn prove_positive<F>(f: F, domain: &IBox, cfg: &ProverConfig) -> Verdict
where
    F: Fn(&IBox) -> Result<Interval, IntervalError>,
{
    let root_widths = domain.widths();
    let mut stack = vec![(domain.clone(), 0u32)];
    let mut examined = 0u64;
    let mut deepest = 0u32;
    let mut pass_margin = f64::INFINITY;
    let mut unknown_margin: Option<f64> = None;

    while let Some((b, depth)) = stack.pop() {
        examined += 1;
        deepest = deepest.max(depth);
        let enclosure = f(&b);
        if let Ok(iv) = enclosure {
            if iv.lo() > 0.0 {
                pass_margin = pass_margin.min(iv.lo());
                continue;
            }
        }
        let mid = b.midpoint();
        if let Ok(pb) = IBox::point(&mid) {
            if let Ok(pv) = f(&pb) {
                if pv.hi() < 0.0 {
                    return Verdict {
                        status: Status::Fail,
                        margin: pv.hi(),
                        boxes_examined: examined,
                        max_depth_reached: deepest,
                        witness: Some(Witness {
                            point: mid,
                            sub_box: b,
                            value: pv.hi(),
                        }),
                    };
                }
            }
        }
        let axis = if depth < cfg.max_depth {
            split_axis(&b, &root_widths, cfg.min_width)
        } else {
            None
        };
        match axis {
            Some(axis) => {
                let (l, r) = b.bisect(axis);
                stack.push((r, depth + 1));
                stack.push((l, depth + 1));
            }
            None => {
                let lo = enclosure.map(|iv| iv.lo()).unwrap_or(f64::NEG_INFINITY);
                unknown_margin = Some(unknown_margin.map_or(lo, |m| m.min(lo)));
            }
        }
    }

    let (status, margin) = match unknown_margin {
        Some(m) => (Status::Unknown, m),
        None => (Status::Pass, pass_margin),
    };
    Verdict {
        status,
        margin,
        boxes_examined: examined,
        max_depth_reached: deepest,
        witness: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(b: &[(f64, f64)]) -> IBox {
        IBox::from_bounds(b).unwrap()
    }

    #[test]
    fn linear_expansion_bound_passes() {
        let v = prove_positive(
            |b| Ok(20.0 - b.dim(0) * 13.0 - 4.0),
            &line(&[(1.18, 1.19)]),
            &ProverConfig::default(),
        );
        assert_eq!(v.status, Status::Pass);
        assert!(v.margin >= 0.53 - 1e-12, "{}", v.margin);
        assert!(v.margin <= 0.53 + 1e-12);
    }

    #[test]
    fn identity_fails_with_negative_witness() {
        let v = prove_positive(|b| Ok(b.dim(0)), &line(&[(-1.0, 1.0)]), &ProverConfig::default());
        assert_eq!(v.status, Status::Fail);
        let w = v.witness.expect("witness");
        assert!(w.point[0] < 0.0);
        assert!(w.value < 0.0);
        assert!(w.sub_box.contains_point(&w.point));
    }

    #[test]
    fn quadratic_cone_bound_passes() {
        let v = prove_positive(
            |b| {
                let xi = b.dim(0);
                Ok(4.0 - (2.0 + xi + (xi * 0.5).sqr()))
            },
            &line(&[(1.18, 1.19)]),
            &ProverConfig::default(),
        );
        assert_eq!(v.status, Status::Pass);
        assert!(v.margin >= 0.455);
        assert!(v.margin <= 0.455_975 + 1e-12);
    }

    #[test]
    fn touching_zero_is_unknown() {
        // x² ≥ 0 with equality at 0: never provable strictly, never a witness.
        let v = prove_positive(
            |b| Ok(b.dim(0).sqr()),
            &line(&[(-1.0, 1.0)]),
            &ProverConfig {
                max_depth: 10,
                min_width: 1e-9,
            },
        );
        assert_eq!(v.status, Status::Unknown);
        assert_eq!(v.max_depth_reached, 10);
    }

    #[test]
    fn evaluation_error_is_unknown_not_fail() {
        let v = prove_positive(
            |b| b.dim(0).sqrt(),
            &line(&[(-1.0, 1.0)]),
            &ProverConfig {
                max_depth: 4,
                min_width: 1e-9,
            },
        );
        assert_eq!(v.status, Status::Unknown);
        assert_eq!(v.margin, f64::NEG_INFINITY);
    }

    #[test]
    fn splits_widest_relative_dimension() {
        // Only the second coordinate matters; relative splitting must reach it
        // even though its absolute width is tiny.
        let v = prove_positive(
            |b| Ok(b.dim(1) - 1.0),
            &line(&[(0.0, 1000.0), (1.0, 1.000001)]),
            &ProverConfig {
                max_depth: 6,
                min_width: 1e-9,
            },
        );
        assert_eq!(v.status, Status::Unknown);
        let v = prove_positive(
            |b| Ok(b.dim(1) - 0.5),
            &line(&[(0.0, 1000.0), (1.0, 1.000001)]),
            &ProverConfig::default(),
        );
        assert_eq!(v.status, Status::Pass);
        assert_eq!(v.boxes_examined, 1);
    }

    #[test]
    fn merge_priority() {
        let p = Verdict::pass(1.0);
        let u = Verdict::unknown(-0.5);
        let mut f = Verdict::pass(0.0);
        f.status = Status::Fail;
        f.margin = -2.0;
        assert_eq!(p.clone().merge(u.clone()).status, Status::Unknown);
        assert_eq!(u.clone().merge(p.clone()).margin, -0.5);
        assert_eq!(u.merge(f.clone()).status, Status::Fail);
        let pp = p.clone().merge(Verdict::pass(0.25));
        assert_eq!(pp.margin, 0.25);
        assert_eq!(pp.boxes_examined, 2);
    }
}
