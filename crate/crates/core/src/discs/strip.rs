//! u-strips as ordered families of uu-discs and the growth of their width
//! under iteration until one crosses the local stable line of P.

use serde::{Deserialize, Serialize};

use super::{classify, iterate_leg, DiscError, UUDisc, ON_TOLERANCE};
use crate::geometry::{FixedPointData, Leg};
use crate::henon::Params;

pub const DEFAULT_STRIP_MEMBERS: usize = 65;
/// Transversals sampled for the width.
const WIDTH_SAMPLES: usize = 257;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UStrip {
    /// Label of each member in the original parameterization.
    pub z0: Vec<f64>,
    pub members: Vec<UUDisc>,
    pub width: f64,
}

impl UStrip {
    pub fn new(z0: Vec<f64>, members: Vec<UUDisc>) -> Result<Self, DiscError> {
        if members.is_empty() || z0.len() != members.len() {
            return Err(DiscError::EmptyStrip);
        }
        let width = strip_width(&members);
        Ok(Self { z0, members, width })
    }

    /// Flat discs `z ≡ z0` for `z0` evenly spaced in `[z_lo, z_hi]`; a
    /// degenerate range gives a single member.
    pub fn flat(z_lo: f64, z_hi: f64, members: usize, nodes: usize) -> Result<Self, DiscError> {
        if !(z_lo <= z_hi) || members == 0 {
            return Err(DiscError::EmptyStrip);
        }
        let m = if z_lo == z_hi { 1 } else { members.max(2) };
        let z0: Vec<f64> = (0..m)
            .map(|i| {
                if m == 1 || i + 1 == m {
                    z_hi
                } else {
                    z_lo + (z_hi - z_lo) * i as f64 / (m - 1) as f64
                }
            })
            .collect();
        let discs = z0
            .iter()
            .map(|&z| UUDisc::flat(0.0, z, nodes))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(z0, discs)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// First consecutive pair whose `z` at `y = p` straddles `p̃`, or a member
    /// lying on the line.
    fn crossing(&self, fp: &FixedPointData) -> Option<usize> {
        let s: Vec<f64> = self.members.iter().map(|d| d.z_at(fp.p_mu) - fp.p_tilde).collect();
        if let Some(i) = s.iter().position(|v| v.abs() <= ON_TOLERANCE) {
            return Some(i);
        }
        s.windows(2).position(|w| (w[0] < 0.0) != (w[1] < 0.0))
    }

    fn image(&self, p: &Params, leg: Leg, theta: f64) -> Result<UStrip, DiscError> {
        let members = self
            .members
            .iter()
            .map(|d| iterate_leg(p, d, leg, theta))
            .collect::<Result<Vec<_>, _>>()?;
        UStrip::new(self.z0.clone(), members)
    }

    /// Longest run of consecutive members that are in between, as an
    /// index range.
    fn longest_in_between(&self, fp: &FixedPointData) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        let mut start = None;
        for (i, d) in self.members.iter().enumerate() {
            if classify(d, fp).in_between {
                let s = *start.get_or_insert(i);
                if best.is_none_or(|(a, b)| i + 1 - s > b - a) {
                    best = Some((s, i + 1));
                }
            } else {
                start = None;
            }
        }
        best
    }

    fn sub_strip(&self, (a, b): (usize, usize)) -> Result<UStrip, DiscError> {
        UStrip::new(self.z0[a..b].to_vec(), self.members[a..b].to_vec())
    }
}

/// Infimum over sampled vertical transversals of the `z`-extent.
fn strip_width(members: &[UUDisc]) -> f64 {
    let mut w = f64::INFINITY;
    for i in 0..WIDTH_SAMPLES {
        let y = -4.0 + 8.0 * i as f64 / (WIDTH_SAMPLES - 1) as f64;
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for d in members {
            let z = d.z_at(y);
            lo = lo.min(z);
            hi = hi.max(z);
        }
        w = w.min(hi - lo);
    }
    w
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StripGrowth {
    pub hit: bool,
    /// Iteration at which the crossing was found, or the iterations run.
    pub iterations: usize,
    /// Width of the strip at each iteration, including the hit iteration.
    pub widths: Vec<f64>,
    /// Leg chosen at each step.
    pub itinerary: String,
    /// Members kept at each iteration.
    pub member_counts: Vec<usize>,
    /// Range of parent members kept at each step, `[start, end)`.
    pub kept_ranges: Vec<(usize, usize)>,
    /// Member index whose disc (with the next one) straddles the stable line.
    pub crossing_member: Option<usize>,
    pub crossing_z0: Option<f64>,
    /// Tangent of the crossing member at `y = p` is inside the uu-cone.
    pub transverse: bool,
}

/// Iterates the strip leg by leg until some image meets `{y = p, z = p̃}`.
///
/// Per step the leg-A image is kept if all its members are in between, then
/// the leg-B image; otherwise the longer in-between run of either image.
pub fn grow_strip(
    p: &Params,
    s: &UStrip,
    fp: &FixedPointData,
    max_iter: usize,
    theta: f64,
) -> Result<StripGrowth, DiscError> {
    if !p.is_unperturbed() {
        return Err(DiscError::RequiresUnperturbed);
    }
    if s.is_empty() {
        return Err(DiscError::EmptyStrip);
    }
    let mut out = StripGrowth {
        hit: false,
        iterations: 0,
        widths: vec![s.width],
        itinerary: String::new(),
        member_counts: vec![s.len()],
        kept_ranges: Vec::new(),
        crossing_member: None,
        crossing_z0: None,
        transverse: false,
    };
    let finish_hit = |mut out: StripGrowth, strip: &UStrip, i: usize, n: usize| {
        out.hit = true;
        out.iterations = n;
        out.crossing_member = Some(i);
        out.crossing_z0 = Some(strip.z0[i]);
        out.transverse = strip.members[i].tangent_in_cone(fp.p_mu, theta);
        out
    };
    if let Some(i) = s.crossing(fp) {
        return Ok(finish_hit(out, s, i, 0));
    }
    if let Some(d) = s.members.iter().find(|d| !classify(d, fp).in_between) {
        let b = classify(d, fp);
        return Err(DiscError::NotInBetween {
            z_at_p: b.z_at_p,
            z_at_q: b.z_at_q,
        });
    }
    let mut cur = s.clone();
    for n in 1..=max_iter {
        let images = [
            (Leg::A, cur.image(p, Leg::A, theta)?),
            (Leg::B, cur.image(p, Leg::B, theta)?),
        ];
        let mut next = None;
        for (leg, img) in &images {
            if let Some(i) = img.crossing(fp) {
                out.itinerary.push(leg.symbol());
                out.widths.push(img.width);
                out.member_counts.push(img.len());
                out.kept_ranges.push((0, img.len()));
                return Ok(finish_hit(out, img, i, n));
            }
        }
        for (leg, img) in &images {
            if img.longest_in_between(fp) == Some((0, img.len())) {
                next = Some((*leg, img.clone(), (0, img.len())));
                break;
            }
        }
        if next.is_none() {
            let mut best: Option<(Leg, &UStrip, (usize, usize))> = None;
            for (leg, img) in &images {
                if let Some(r) = img.longest_in_between(fp) {
                    if best.as_ref().is_none_or(|(_, _, (a, b))| r.1 - r.0 > b - a) {
                        best = Some((*leg, img, r));
                    }
                }
            }
            let (leg, img, r) = best.ok_or(DiscError::NoLegInBetween { step: n - 1 })?;
            next = Some((leg, img.sub_strip(r)?, r));
        }
        let (leg, strip, range) = next.expect("set above");
        out.itinerary.push(leg.symbol());
        out.widths.push(strip.width);
        out.member_counts.push(strip.len());
        out.kept_ranges.push(range);
        cur = strip;
    }
    out.iterations = max_iter;
    Ok(out)
}
