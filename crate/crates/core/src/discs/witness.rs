//! Nested-disc construction of a point of the disc whose forward orbit stays
//! in the cube.
//!
//! The surviving parameter interval shrinks by about `2|y| ≥ 2√5` per step,
//! so after ~20 steps it is narrower than a binary64 ulp. Endpoints and the
//! orbit are carried in double-double.

use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use super::{branch_sign, classify, iterate_leg, Betweenness, DiscError, UUDisc};
use crate::geometry::{FixedPointData, Leg};
use crate::henon::{Cube, Params, Point3};

/// A coordinate triple in double-double, stored as `(hi, lo)` pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DdPoint {
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub z: (f64, f64),
}

impl DdPoint {
    fn new(x: TwoFloat, y: TwoFloat, z: TwoFloat) -> Self {
        let pair = |v: TwoFloat| (v.hi(), v.lo());
        Self {
            x: pair(x),
            y: pair(y),
            z: pair(z),
        }
    }

    pub fn to_point(&self) -> Point3 {
        Point3::new(self.x.0 + self.x.1, self.y.0 + self.y.1, self.z.0 + self.z.1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessDiagnostics {
    /// Chosen leg per step.
    pub itinerary: String,
    /// Diameter of the surviving y-interval on the original disc, starting
    /// with the full disc.
    pub diameters: Vec<f64>,
    /// Ratios of consecutive diameters.
    pub shrink_factors: Vec<f64>,
    /// Classification of the chosen image at each step.
    pub classes: Vec<Betweenness>,
    /// Forward orbit of the witness, rounded to binary64; entry 0 is the witness.
    pub orbit: Vec<Point3>,
    /// Membership tolerance used at each orbit entry.
    pub tolerances: Vec<f64>,
    /// Largest distance of an orbit entry outside the cube.
    pub max_excursion: f64,
    pub orbit_in_cube: bool,
    /// The orbit visits the recorded legs in order.
    pub itinerary_replayed: bool,
    /// Tolerance model: `base · growth^n` at iterate `n`, capped at `cap`.
    pub tolerance_model: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StableWitness {
    pub point: Point3,
    pub point_dd: DdPoint,
    pub diagnostics: WitnessDiagnostics,
}

/// Relative precision of double-double arithmetic.
const DD_EPS: f64 = 1e-31;
pub const ORBIT_TOLERANCE_CAP: f64 = 1e-4;

fn dd(v: f64) -> TwoFloat {
    TwoFloat::from(v)
}

fn leg_bounds(mu: f64, leg: Leg) -> (TwoFloat, TwoFloat) {
    let outer = (dd(4.0) - mu).sqrt();
    let inner = (dd(-4.0) - mu).sqrt();
    match leg {
        Leg::A => (-outer, -inner),
        Leg::B => (inner, outer),
    }
}

/// Preimage on the original disc of `[lo, hi]` at the current level.
fn pull_back(mu: f64, chain: &[Leg], lo: TwoFloat, hi: TwoFloat) -> (TwoFloat, TwoFloat) {
    let (mut a, mut b) = (lo, hi);
    for &leg in chain.iter().rev() {
        let s = branch_sign(leg);
        a = (a - mu).sqrt() * s;
        b = (b - mu).sqrt() * s;
    }
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn interpolate_dd(d: &UUDisc, y: TwoFloat) -> (TwoFloat, TwoFloat) {
    let i = d.segment(y.hi());
    let (a, b) = (d.nodes[i], d.nodes[i + 1]);
    let t = (y - a.y) / (dd(b.y) - a.y);
    let x = t * (dd(b.x) - a.x) + a.x;
    let z = t * (dd(b.z) - a.z) + a.z;
    (x, z)
}

/// Runs the nested-disc construction for `max_iter` steps. At each step the
/// leg-A image is kept when in between, otherwise the leg-B image.
pub fn witness_stable_point(
    p: &Params,
    d: &UUDisc,
    fp: &FixedPointData,
    max_iter: usize,
    theta: f64,
) -> Result<StableWitness, DiscError> {
    if !p.is_unperturbed() {
        return Err(DiscError::RequiresUnperturbed);
    }
    let start = classify(d, fp);
    if !start.in_between {
        return Err(DiscError::NotInBetween {
            z_at_p: start.z_at_p,
            z_at_q: start.z_at_q,
        });
    }
    let mut chain = Vec::with_capacity(max_iter);
    let mut classes = Vec::with_capacity(max_iter);
    let mut diameters = vec![8.0];
    let mut shrink_factors = Vec::with_capacity(max_iter);
    let mut cur = d.clone();
    let (mut lo, mut hi) = (dd(-4.0), dd(4.0));
    for step in 0..max_iter {
        let mut chosen = None;
        for leg in [Leg::A, Leg::B] {
            let img = iterate_leg(p, &cur, leg, theta)?;
            let b = classify(&img, fp);
            if b.in_between {
                chosen = Some((leg, img, b));
                break;
            }
        }
        let (leg, img, b) = chosen.ok_or(DiscError::NoLegInBetween { step })?;
        let (l0, l1) = leg_bounds(p.mu, leg);
        (lo, hi) = pull_back(p.mu, &chain, l0, l1);
        chain.push(leg);
        classes.push(b);
        let diam = (hi - lo).hi();
        shrink_factors.push(diameters[diameters.len() - 1] / diam);
        diameters.push(diam);
        cur = img;
    }

    let y0 = (lo + hi) / 2.0;
    let (x0, z0) = interpolate_dd(d, y0);
    let point_dd = DdPoint::new(x0, y0, z0);

    // |DG| along the uu direction is at most 2 max|y| on the legs
    let growth = 2.0 * (4.0 - p.mu).sqrt();
    let base = DD_EPS * 64.0;
    let cube = Cube::delta();
    let (mut x, mut y, mut z) = (x0, y0, z0);
    let mut orbit = Vec::with_capacity(max_iter + 1);
    let mut tolerances = Vec::with_capacity(max_iter + 1);
    let mut max_excursion = 0f64;
    let mut orbit_in_cube = true;
    let mut itinerary_replayed = true;
    for n in 0..=max_iter {
        let pt = Point3::new(x.hi(), y.hi(), z.hi());
        let tol = (base * growth.powi(n as i32)).min(ORBIT_TOLERANCE_CAP);
        let exc = excursion(&cube, pt);
        max_excursion = max_excursion.max(exc);
        orbit_in_cube &= exc <= tol;
        if n < max_iter {
            let (l0, l1) = leg_bounds(p.mu, chain[n]);
            itinerary_replayed &= y.hi() >= l0.hi() - tol && y.hi() <= l1.hi() + tol;
        }
        orbit.push(pt);
        tolerances.push(tol);
        (x, y, z) = (y, y * y + p.mu, z * p.xi + y);
    }

    Ok(StableWitness {
        point: point_dd.to_point(),
        point_dd,
        diagnostics: WitnessDiagnostics {
            itinerary: chain.iter().map(|l| l.symbol()).collect(),
            diameters,
            shrink_factors,
            classes,
            orbit,
            tolerances,
            max_excursion,
            orbit_in_cube,
            itinerary_replayed,
            tolerance_model: format!("base = {base:e}, growth = 2 sqrt(4 - mu) = {growth}, cap = {ORBIT_TOLERANCE_CAP:e}"),
        },
    })
}

fn excursion(cube: &Cube, pt: Point3) -> f64 {
    let out = |iv: crate::interval::Interval, v: f64| (iv.lo() - v).max(v - iv.hi()).max(0.0);
    out(cube.x_range, pt.x).max(out(cube.y_range, pt.y)).max(out(cube.z_range, pt.z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discs::DEFAULT_NODES;
    use crate::geometry::fixed_points;

    fn setup() -> (Params, FixedPointData) {
        let p = Params::unperturbed(1.185, -9.5).unwrap();
        let fp = fixed_points(&p).unwrap();
        (p, fp)
    }

    #[test]
    fn flat_disc_witness() {
        let (p, fp) = setup();
        let d = UUDisc::flat(0.0, 0.0, DEFAULT_NODES).unwrap();
        let w = witness_stable_point(&p, &d, &fp, 30, 0.5).unwrap();
        let g = &w.diagnostics;
        assert_eq!(g.itinerary.len(), 30);
        assert_eq!(g.diameters.len(), 31);
        assert!(g.shrink_factors.iter().all(|&s| s >= 4.0), "{:?}", g.shrink_factors);
        assert!(g.orbit_in_cube, "{}", g.max_excursion);
        assert!(g.itinerary_replayed);
        assert_eq!(g.orbit.len(), 31);
        assert!(*g.tolerances.last().unwrap() <= ORBIT_TOLERANCE_CAP);
        assert_eq!(w.point.x, 0.0);
        assert_eq!(w.point.z, 0.0);
    }

    #[test]
    fn deterministic() {
        let (p, fp) = setup();
        let d = UUDisc::flat(0.0, 0.0, 256).unwrap();
        let a = witness_stable_point(&p, &d, &fp, 12, 0.5).unwrap();
        let b = witness_stable_point(&p, &d, &fp, 12, 0.5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn disc_right_of_p_is_rejected() {
        let (p, fp) = setup();
        let d = UUDisc::flat(0.0, fp.p_tilde + 1.0, 64).unwrap();
        assert!(matches!(
            witness_stable_point(&p, &d, &fp, 5, 0.5),
            Err(DiscError::NotInBetween { .. })
        ));
    }
}
