//! Named geometric objects of the horseshoe: the two saddles with their
//! eigen-data, the legs, the Markov parallelograms, cone fields and the
//! one-dimensional return maps along the center-unstable lines.

use serde::{Deserialize, Serialize};
use thiserror::Error;
use twofloat::TwoFloat;

use crate::henon::{Cube, Params, Point3, Vec3};
use crate::interval::{Interval, IntervalError, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum GeometryError {
    #[error("fixed points are complex: 1 - 4 mu = {0} < 0")]
    ComplexFixedPoints(f64),
    #[error("xi = 1 makes the center-unstable coordinate of the saddles undefined")]
    DegenerateXi,
    #[error("legs undefined for mu = {0}: need mu < -4 so that -4 - mu > 0")]
    LegsUndefined(f64),
    #[error("cone membership of the zero vector is undefined")]
    ZeroVector,
    #[error("invalid cone apertures theta = {theta}, vartheta = {vartheta}: need theta > 0 and 0 < vartheta < 2*sqrt(5)")]
    InvalidCone { theta: f64, vartheta: f64 },
    #[error("closed forms assume kappa = eta = 0")]
    RequiresUnperturbed,
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

/// Saddle coordinates as closed forms over any scalar.
#[derive(Debug, Clone, Copy)]
pub struct SaddleForms<S> {
    /// `√(1 − 4μ)`
    pub s: S,
    pub p: S,
    pub q: S,
    pub p_tilde: S,
    pub q_tilde: S,
}

pub fn saddle_forms<S: Scalar>(xi: S, mu: S) -> Result<SaddleForms<S>, IntervalError> {
    let s = (S::cst(1.0) - mu * 4.0).sqrt()?;
    let p = (S::cst(1.0) - s) * 0.5;
    let q = (S::cst(1.0) + s) * 0.5;
    let one_minus_xi = S::cst(1.0) - xi;
    Ok(SaddleForms {
        s,
        p,
        q,
        p_tilde: p.div(one_minus_xi)?,
        q_tilde: q.div(one_minus_xi)?,
    })
}

/// Leg endpoints `a = −√(4−μ)`, `b = −√(−4−μ)`, `c = −b`, `d = −a`.
#[derive(Debug, Clone, Copy)]
pub struct LegForms<S> {
    pub a: S,
    pub b: S,
    pub c: S,
    pub d: S,
}

pub fn leg_forms<S: Scalar>(mu: S) -> Result<LegForms<S>, IntervalError> {
    let d = (S::cst(4.0) - mu).sqrt()?;
    let c = (S::cst(-4.0) - mu).sqrt()?;
    Ok(LegForms { a: -d, b: -c, c, d })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Saddle {
    P,
    Q,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaddleData {
    pub point: Point3,
    pub lambda_s: f64,
    pub lambda_cu: f64,
    pub lambda_uu: f64,
    pub v_s: Vec3,
    pub v_cu: Vec3,
    pub v_uu: Vec3,
}

impl SaddleData {
    fn new(r: f64, r_tilde: f64, xi: f64) -> Self {
        let two_r = 2.0 * r;
        Self {
            point: Vec3::new(r, r, r_tilde),
            lambda_s: 0.0,
            lambda_cu: xi,
            lambda_uu: two_r,
            v_s: Vec3::new(1.0, 0.0, 0.0),
            v_cu: Vec3::new(0.0, 0.0, 1.0),
            // J v = (v₂, 2r v₂, v₂ + ξ v₃) = 2r v forces v₁ = v₂/2r, v₃ = v₂/(2r − ξ)
            v_uu: Vec3::new(two_r - xi, two_r * (two_r - xi), two_r),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPointData {
    pub xi: f64,
    pub mu: f64,
    pub p_mu: f64,
    pub q_mu: f64,
    pub p_tilde: f64,
    pub q_tilde: f64,
    pub lambda_uu_p: f64,
    pub lambda_uu_q: f64,
    pub lambda_cu: f64,
    pub p: SaddleData,
    pub q: SaddleData,
}

impl FixedPointData {
    pub fn saddle(&self, which: Saddle) -> &SaddleData {
        match which {
            Saddle::P => &self.p,
            Saddle::Q => &self.q,
        }
    }

    /// `(r_μ, r̃)` for the chosen saddle.
    pub fn coords(&self, which: Saddle) -> (f64, f64) {
        match which {
            Saddle::P => (self.p_mu, self.p_tilde),
            Saddle::Q => (self.q_mu, self.q_tilde),
        }
    }

    /// `[α^r, β^r]`, the part of the center-unstable line that `φ^r` maps
    /// onto `[−40, 22]`.
    pub fn return_interval(&self, which: Saddle) -> (f64, f64) {
        let (_, rt) = self.coords(which);
        let shift = (1.0 - self.xi) * rt;
        ((-40.0 - shift) / self.xi, (22.0 - shift) / self.xi)
    }
}

pub fn fixed_points(p: &Params) -> Result<FixedPointData, GeometryError> {
    if !p.is_unperturbed() {
        return Err(GeometryError::RequiresUnperturbed);
    }
    if p.xi == 1.0 {
        return Err(GeometryError::DegenerateXi);
    }
    let disc = 1.0 - 4.0 * p.mu;
    if disc < 0.0 {
        return Err(GeometryError::ComplexFixedPoints(disc));
    }
    let mut f = saddle_forms(p.xi, p.mu)?;
    (f.p, f.p_tilde) = polish(f.p, p.xi, p.mu);
    (f.q, f.q_tilde) = polish(f.q, p.xi, p.mu);
    Ok(FixedPointData {
        xi: p.xi,
        mu: p.mu,
        p_mu: f.p,
        q_mu: f.q,
        p_tilde: f.p_tilde,
        q_tilde: f.q_tilde,
        lambda_uu_p: 2.0 * f.p,
        lambda_uu_q: 2.0 * f.q,
        lambda_cu: p.xi,
        p: SaddleData::new(f.p, f.p_tilde, p.xi),
        q: SaddleData::new(f.q, f.q_tilde, p.xi),
    })
}

/// One Newton step on `r² − r + μ = 0` in double-double, then `r̃ = r/(1 − ξ)`
/// for the rounded `r`; both come out correctly rounded up to a few units in
/// the 32nd digit.
fn polish(r: f64, xi: f64, mu: f64) -> (f64, f64) {
    let f = TwoFloat::new_mul(r, r) - r + mu;
    let r = (TwoFloat::from(r) - f / (2.0 * r - 1.0)).hi();
    let rt = (TwoFloat::from(r) / (TwoFloat::from(1.0) - xi)).hi();
    (r, rt)
}

/// `φ^r(z) = ξz + (1 − ξ) r̃`, the map along the center-unstable line of a saddle.
pub fn phi(fp: &FixedPointData, which: Saddle, z: f64) -> f64 {
    let (_, rt) = fp.coords(which);
    fp.xi * z + (1.0 - fp.xi) * rt
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Leg {
    A,
    B,
}

impl Leg {
    pub fn symbol(self) -> char {
        match self {
            Leg::A => 'A',
            Leg::B => 'B',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Legs {
    pub a_mu: f64,
    pub b_mu: f64,
    pub c_mu: f64,
    pub d_mu: f64,
    pub i_mu: Interval,
    pub j_mu: Interval,
    pub a_block: Cube,
    pub b_block: Cube,
}

impl Legs {
    pub fn y_range(&self, leg: Leg) -> Interval {
        match leg {
            Leg::A => self.i_mu,
            Leg::B => self.j_mu,
        }
    }

    pub fn block(&self, leg: Leg) -> &Cube {
        match leg {
            Leg::A => &self.a_block,
            Leg::B => &self.b_block,
        }
    }

    /// Which leg's y-range holds `y`, if any.
    pub fn leg_of(&self, y: f64) -> Option<Leg> {
        if self.i_mu.contains(y) {
            Some(Leg::A)
        } else if self.j_mu.contains(y) {
            Some(Leg::B)
        } else {
            None
        }
    }
}

pub fn legs(p: &Params) -> Result<Legs, GeometryError> {
    if p.mu >= -4.0 {
        return Err(GeometryError::LegsUndefined(p.mu));
    }
    let f = leg_forms(p.mu)?;
    let delta = Cube::delta();
    let i_mu = Interval::new(f.a, f.b)?;
    let j_mu = Interval::new(f.c, f.d)?;
    Ok(Legs {
        a_mu: f.a,
        b_mu: f.b,
        c_mu: f.c,
        d_mu: f.d,
        i_mu,
        j_mu,
        a_block: Cube {
            y_range: i_mu,
            ..delta
        },
        b_block: Cube {
            y_range: j_mu,
            ..delta
        },
    })
}

/// A straight segment in the YZ-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub from: (f64, f64),
    pub to: (f64, f64),
}

/// Region of the YZ-plane over `[y0, y1]` between the lines
/// `z = (−40 − y)/ξ` and `z = (22 − y)/ξ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Parallelogram {
    pub xi: f64,
    pub y_range: Interval,
    /// Upper line, lower line, then the two vertical sides at `y0` and `y1`.
    pub sides: [Segment; 4],
}

impl Parallelogram {
    fn new(xi: f64, y_range: Interval) -> Self {
        let (y0, y1) = (y_range.lo(), y_range.hi());
        let up = |y: f64| (y, upper_line(xi, y));
        let low = |y: f64| (y, lower_line(xi, y));
        Self {
            xi,
            y_range,
            sides: [
                Segment { from: up(y0), to: up(y1) },
                Segment { from: low(y0), to: up(y0) },
                Segment { from: low(y0), to: low(y1) },
                Segment { from: low(y1), to: up(y1) },
            ],
        }
    }

    pub fn contains(&self, y: f64, z: f64) -> bool {
        self.y_range.contains(y) && lower_line(self.xi, y) <= z && z <= upper_line(self.xi, y)
    }

    pub fn corners(&self) -> [(f64, f64); 4] {
        [self.sides[2].from, self.sides[2].to, self.sides[0].to, self.sides[0].from]
    }
}

/// `z¹(y) = (22 − y)/ξ`: points whose image has z = 22.
pub fn upper_line(xi: f64, y: f64) -> f64 {
    (22.0 - y) / xi
}

/// `z²(y) = (−40 − y)/ξ`: points whose image has z = −40.
pub fn lower_line(xi: f64, y: f64) -> f64 {
    (-40.0 - y) / xi
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Slab {
    pub x_range: Interval,
    pub section: Parallelogram,
}

impl Slab {
    pub fn contains(&self, pt: Point3) -> bool {
        self.x_range.contains(pt.x) && self.section.contains(pt.y, pt.z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarkovPartition {
    pub xi: f64,
    pub a_para: Parallelogram,
    pub b_para: Parallelogram,
    pub a_slab: Slab,
    pub b_slab: Slab,
}

impl MarkovPartition {
    pub fn line1(&self, y: f64) -> f64 {
        upper_line(self.xi, y)
    }

    pub fn line2(&self, y: f64) -> f64 {
        lower_line(self.xi, y)
    }
}

pub fn markov(p: &Params, _fp: &FixedPointData) -> Result<MarkovPartition, GeometryError> {
    if !p.is_unperturbed() {
        return Err(GeometryError::RequiresUnperturbed);
    }
    let l = legs(p)?;
    let a_para = Parallelogram::new(p.xi, l.i_mu);
    let b_para = Parallelogram::new(p.xi, l.j_mu);
    let xr = Cube::delta().x_range;
    Ok(MarkovPartition {
        xi: p.xi,
        a_para,
        b_para,
        a_slab: Slab {
            x_range: xr,
            section: a_para,
        },
        b_slab: Slab {
            x_range: xr,
            section: b_para,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeConfig {
    pub theta: f64,
    pub vartheta: f64,
}

impl Default for ConeConfig {
    fn default() -> Self {
        Self {
            theta: 0.5,
            vartheta: 0.1,
        }
    }
}

impl ConeConfig {
    pub fn new(theta: f64, vartheta: f64) -> Result<Self, GeometryError> {
        let c = Self { theta, vartheta };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        let ok = self.theta.is_finite()
            && self.theta > 0.0
            && self.vartheta.is_finite()
            && self.vartheta > 0.0
            && self.vartheta < 2.0 * 5f64.sqrt();
        if ok {
            Ok(())
        } else {
            Err(GeometryError::InvalidCone {
                theta: self.theta,
                vartheta: self.vartheta,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConeKind {
    S,
    U,
    Uu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConeMembership {
    Inside,
    Boundary,
    Outside,
}

/// Classify `v` against the strict cone inequality `lhs < rhs`:
/// s: `√(v²+w²) < ϑ|u|`, uu: `√(u²+w²) < θ|v|`, u: `|u| < θ√(v²+w²)`.
pub fn cone_membership(cfg: &ConeConfig, kind: ConeKind, v: Vec3) -> Result<ConeMembership, GeometryError> {
    if v.x == 0.0 && v.y == 0.0 && v.z == 0.0 {
        return Err(GeometryError::ZeroVector);
    }
    let (lhs, rhs) = match kind {
        ConeKind::S => (v.y.hypot(v.z), cfg.vartheta * v.x.abs()),
        ConeKind::Uu => (v.x.hypot(v.z), cfg.theta * v.y.abs()),
        ConeKind::U => (v.x.abs(), cfg.theta * v.y.hypot(v.z)),
    };
    let tol = 4.0 * f64::EPSILON * lhs.max(rhs);
    Ok(if (lhs - rhs).abs() <= tol {
        ConeMembership::Boundary
    } else if lhs < rhs {
        ConeMembership::Inside
    } else {
        ConeMembership::Outside
    })
}

/// `|(u, v, w)|_* = max(|u|, √(v² + w²))`, the adapted norm in which the
/// derivative expands the u-cone in one step.
pub fn star_norm(v: Vec3) -> f64 {
    v.x.abs().max(v.y.hypot(v.z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::henon::{eval, eval_planar, jacobian};

    fn p0() -> Params {
        Params::unperturbed(1.185, -9.5).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn saddle_values_at_reference_point() {
        // √39 = 6.244997998398398205846893...
        let fp = fixed_points(&p0()).unwrap();
        assert!((fp.p_mu - -2.622_498_999_199_199).abs() < 1e-12);
        assert!((fp.q_mu - 3.622_498_999_199_199).abs() < 1e-12);
        assert!((fp.p_tilde - 14.175_670_265_941_617).abs() < 1e-10);
        assert!((fp.q_tilde - -19.581_075_671_347_022).abs() < 1e-10);
        assert!((fp.lambda_uu_p - -5.244_997_998_398_398).abs() < 1e-12);
        assert!(fp.lambda_uu_p.abs() > 5.0);
    }

    #[test]
    fn saddles_are_fixed() {
        let p = p0();
        let fp = fixed_points(&p).unwrap();
        for s in [fp.p, fp.q] {
            let img = eval(&p, s.point);
            assert!((img - s.point).max_abs() < 1e-12);
        }
    }

    #[test]
    fn eigen_residuals() {
        let p = p0();
        let fp = fixed_points(&p).unwrap();
        for s in [fp.p, fp.q] {
            let j = jacobian(&p, s.point);
            for (lam, v) in [(s.lambda_uu, s.v_uu), (s.lambda_cu, s.v_cu), (s.lambda_s, s.v_s)] {
                let r = j.apply(v) - v * lam;
                assert!(r.max_abs() < 1e-9, "{lam} {r:?}");
            }
        }
    }

    #[test]
    fn fixed_point_identities() {
        let fp = fixed_points(&p0()).unwrap();
        for (r, rt) in [(fp.p_mu, fp.p_tilde), (fp.q_mu, fp.q_tilde)] {
            assert!(rel(fp.mu + r * r, r) < 1e-12);
            assert!(rel((1.0 - fp.xi) * rt, r) < 1e-12);
        }
        assert!(rel((fp.p_mu - fp.mu).sqrt(), -fp.p_mu) < 1e-12);
    }

    #[test]
    fn fixed_point_errors() {
        assert_eq!(
            fixed_points(&Params::unperturbed(1.185, 1.0).unwrap()),
            Err(GeometryError::ComplexFixedPoints(-3.0))
        );
        let degenerate = Params {
            xi: 1.0,
            mu: -9.5,
            kappa: 0.0,
            eta: 0.0,
        };
        assert_eq!(fixed_points(&degenerate), Err(GeometryError::DegenerateXi));
    }

    #[test]
    fn leg_values() {
        let l = legs(&p0()).unwrap();
        assert!((l.a_mu - -13.5f64.sqrt()).abs() < 1e-15);
        assert!((l.b_mu - -5.5f64.sqrt()).abs() < 1e-15);
        assert!((l.a_mu - -3.674_234_614).abs() < 1e-9);
        assert!((l.b_mu - -2.345_207_880).abs() < 1e-9);
        assert_eq!(l.a_mu, -l.d_mu);
        assert_eq!(l.b_mu, -l.c_mu);
        assert!(-(14f64.sqrt()) < l.a_mu && l.a_mu < -(13f64.sqrt()));
        assert!(-(6f64.sqrt()) < l.b_mu && l.b_mu < -(5f64.sqrt()));
        assert!(l.i_mu.is_interior_to(Interval::new(-4.0, 0.0).unwrap()));
        assert!(l.j_mu.is_interior_to(Interval::new(0.0, 4.0).unwrap()));
        let fp = fixed_points(&p0()).unwrap();
        assert!(l.i_mu.lo() < fp.p_mu && fp.p_mu < l.i_mu.hi());
        assert!(l.j_mu.lo() < fp.q_mu && fp.q_mu < l.j_mu.hi());
        assert_eq!(l.leg_of(fp.p_mu), Some(Leg::A));
        assert_eq!(l.leg_of(fp.q_mu), Some(Leg::B));
        assert_eq!(l.leg_of(0.0), None);
    }

    #[test]
    fn legs_need_mu_below_minus_four() {
        assert_eq!(
            legs(&Params::unperturbed(1.185, -3.0).unwrap()),
            Err(GeometryError::LegsUndefined(-3.0))
        );
    }

    #[test]
    fn phi_fixed_point_and_return_interval() {
        let fp = fixed_points(&p0()).unwrap();
        for s in [Saddle::P, Saddle::Q] {
            let (_, rt) = fp.coords(s);
            assert!((phi(&fp, s, rt) - rt).abs() < 1e-10);
            let (al, be) = fp.return_interval(s);
            assert!((phi(&fp, s, al) + 40.0).abs() < 1e-10);
            assert!((phi(&fp, s, be) - 22.0).abs() < 1e-10);
            assert!(al < rt && rt < be);
        }
        assert!((phi(&fp, Saddle::P, 0.0) - fp.p_mu).abs() < 1e-12);
    }

    #[test]
    fn markov_corners_map_to_rectangle_corners() {
        let p = p0();
        let fp = fixed_points(&p).unwrap();
        let m = markov(&p, &fp).unwrap();
        for para in [m.a_para, m.b_para] {
            let mut images: Vec<(f64, f64)> = para
                .corners()
                .iter()
                .map(|&(y, z)| eval_planar(&p, y, z).unwrap())
                .collect();
            images.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let expected = [(-4.0, -40.0), (-4.0, 22.0), (4.0, -40.0), (4.0, 22.0)];
            for (got, want) in images.iter().zip(expected) {
                assert!((got.0 - want.0).abs() < 1e-10 && (got.1 - want.1).abs() < 1e-10, "{got:?}");
            }
            for (y, z) in para.corners() {
                assert!(-40.0 < z && z < 22.0);
                assert!(para.contains(y, z));
            }
        }
        assert!(m.a_slab.contains(Vec3::new(0.0, fp.p_mu, fp.p_tilde)));
        assert!(!m.a_slab.contains(Vec3::new(0.0, fp.q_mu, fp.q_tilde)));
    }

    #[test]
    fn cone_examples() {
        let c = ConeConfig::default();
        assert_eq!(cone_membership(&c, ConeKind::Uu, Vec3::new(0.0, 1.0, 0.0)), Ok(ConeMembership::Inside));
        assert_eq!(cone_membership(&c, ConeKind::Uu, Vec3::new(1.0, -6.0, 1.0)), Ok(ConeMembership::Inside));
        assert_eq!(cone_membership(&c, ConeKind::S, Vec3::new(0.0, 1.0, 0.0)), Ok(ConeMembership::Outside));
        assert_eq!(cone_membership(&c, ConeKind::U, Vec3::new(1.0, 2.0, 0.0)), Ok(ConeMembership::Boundary));
        assert_eq!(
            cone_membership(&c, ConeKind::S, Vec3::default()),
            Err(GeometryError::ZeroVector)
        );
    }

    #[test]
    fn cone_config_bounds() {
        assert!(ConeConfig::new(0.5, 0.1).is_ok());
        assert!(ConeConfig::new(0.0, 0.1).is_err());
        assert!(ConeConfig::new(0.5, 4.5).is_err());
        assert!(ConeConfig::new(0.5, 4.4).is_ok());
    }

    #[test]
    fn interval_forms_enclose_point_forms() {
        let xi = Interval::new(1.18, 1.19).unwrap();
        let mu = Interval::new(-10.0, -9.0).unwrap();
        let f = saddle_forms(xi, mu).unwrap();
        let fp = fixed_points(&p0()).unwrap();
        assert!(f.p.contains(fp.p_mu) && f.q.contains(fp.q_mu));
        assert!(f.p_tilde.contains(fp.p_tilde) && f.q_tilde.contains(fp.q_tilde));
        let l = leg_forms(mu).unwrap();
        assert!(l.a.contains(-(13.5f64.sqrt())));
    }
}
