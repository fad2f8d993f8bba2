//! The center-unstable Hénon-like family
//! `G(x, y, z) = (y, μ + y² + κyz + ηz², ξz + y)` and its interval lift.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval::{IBox, Interval, IntervalError, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum HenonError {
    #[error("invalid expansion rate xi = {0}: the family requires xi > 1")]
    InvalidXi(f64),
    #[error("non-finite parameter {0}")]
    NonFinite(&'static str),
    #[error("the planar reduction needs kappa = eta = 0")]
    PlanarRequiresUnperturbed,
    #[error("parameter box must have 2 (xi, mu) or 4 (xi, mu, kappa, eta) dimensions, got {0}")]
    ParamBoxArity(usize),
    #[error("phase-space box must have 3 dimensions, got {0}")]
    PhaseBoxArity(usize),
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

/// Reference parameter rectangle `(1.18, 1.19) × (−10, −9)` in (ξ, μ).
pub const XI_RANGE: (f64, f64) = (1.18, 1.19);
pub const MU_RANGE: (f64, f64) = (-10.0, -9.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub xi: f64,
    pub mu: f64,
    pub kappa: f64,
    pub eta: f64,
}

impl Params {
    pub fn new(xi: f64, mu: f64, kappa: f64, eta: f64) -> Result<Self, HenonError> {
        let p = Self { xi, mu, kappa, eta };
        p.validate()?;
        Ok(p)
    }

    pub fn unperturbed(xi: f64, mu: f64) -> Result<Self, HenonError> {
        Self::new(xi, mu, 0.0, 0.0)
    }

    pub fn validate(&self) -> Result<(), HenonError> {
        for (name, v) in [("xi", self.xi), ("mu", self.mu), ("kappa", self.kappa), ("eta", self.eta)] {
            if !v.is_finite() {
                return Err(HenonError::NonFinite(name));
            }
        }
        if self.xi <= 1.0 {
            return Err(HenonError::InvalidXi(self.xi));
        }
        Ok(())
    }

    pub fn is_unperturbed(&self) -> bool {
        self.kappa == 0.0 && self.eta == 0.0
    }

    /// Whether (ξ, μ) lies in the open reference rectangle.
    pub fn in_reference_box(&self) -> bool {
        XI_RANGE.0 < self.xi && self.xi < XI_RANGE.1 && MU_RANGE.0 < self.mu && self.mu < MU_RANGE.1
    }

    pub fn to_generic<S: Scalar>(&self) -> ParamsOf<S> {
        ParamsOf {
            xi: S::cst(self.xi),
            mu: S::cst(self.mu),
            kappa: S::cst(self.kappa),
            eta: S::cst(self.eta),
        }
    }
}

/// Parameters over any [`Scalar`]: plain values or interval enclosures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamsOf<S> {
    pub xi: S,
    pub mu: S,
    pub kappa: S,
    pub eta: S,
}

pub type IParams = ParamsOf<Interval>;

impl IParams {
    /// Reads (ξ, μ) or (ξ, μ, κ, η) from a parameter box; missing
    /// perturbation terms are zero.
    pub fn from_box(b: &IBox) -> Result<Self, HenonError> {
        let zero = Interval::point(0.0);
        let p = match b.len() {
            2 => Self {
                xi: b.dim(0),
                mu: b.dim(1),
                kappa: zero,
                eta: zero,
            },
            4 => Self {
                xi: b.dim(0),
                mu: b.dim(1),
                kappa: b.dim(2),
                eta: b.dim(3),
            },
            n => return Err(HenonError::ParamBoxArity(n)),
        };
        if p.xi.lo() <= 1.0 {
            return Err(HenonError::InvalidXi(p.xi.lo()));
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

pub type Point3 = Vec3;

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Row-major 3×3 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Matrix3(pub [[f64; 3]; 3]);

impl Matrix3 {
    pub fn identity() -> Self {
        Matrix3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    }

    pub fn apply(&self, v: Vec3) -> Vec3 {
        let m = &self.0;
        Vec3::new(
            m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
        )
    }

    pub fn sub_scaled_identity(&self, lambda: f64) -> Self {
        let mut m = self.0;
        for (i, row) in m.iter_mut().enumerate() {
            row[i] -= lambda;
        }
        Matrix3(m)
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }
}

/// Image of a point under `G`, generic over the scalar type.
pub fn eval_generic<S: Scalar>(p: &ParamsOf<S>, pt: [S; 3]) -> [S; 3] {
    let [_, y, z] = pt;
    [y, p.mu + y.sqr() + p.kappa * y * z + p.eta * z.sqr(), p.xi * z + y]
}

/// Binary64 image; `μ + y² + κyz + ηz²` is grouped as `y(y + κz) + (ηz² + μ)`
/// with fused multiply-adds, so the unperturbed case rounds once.
pub fn eval(p: &Params, pt: Point3) -> Point3 {
    let (y, z) = (pt.y, pt.z);
    let tail = (p.eta * z).mul_add(z, p.mu);
    Vec3::new(y, y.mul_add(p.kappa.mul_add(z, y), tail), p.xi.mul_add(z, y))
}

pub fn jacobian(p: &Params, pt: Point3) -> Matrix3 {
    let (y, z) = (pt.y, pt.z);
    Matrix3([
        [0.0, 1.0, 0.0],
        [0.0, 2.0 * y + p.kappa * z, p.kappa * y + 2.0 * p.eta * z],
        [0.0, 1.0, p.xi],
    ])
}

/// The (y, z) reduction `g(y, z) = (μ + y², ξz + y)` of the unperturbed map.
pub fn eval_planar(p: &Params, y: f64, z: f64) -> Result<(f64, f64), HenonError> {
    if !p.is_unperturbed() {
        return Err(HenonError::PlanarRequiresUnperturbed);
    }
    Ok((p.mu + y * y, p.xi * z + y))
}

/// Enclosure of `G(pt)` for every parameter in `params` and point in `pt`.
pub fn eval_box(params: &IBox, pt: &IBox) -> Result<IBox, HenonError> {
    if pt.len() != 3 {
        return Err(HenonError::PhaseBoxArity(pt.len()));
    }
    let ip = IParams::from_box(params)?;
    let img = eval_generic(&ip, [pt.dim(0), pt.dim(1), pt.dim(2)]);
    Ok(IBox::new(img.to_vec())?)
}

/// Which part of the cube's boundary a point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryParts {
    /// `∂I_x × I_y × I_z`
    pub s: bool,
    /// `I_x × ∂(I_y × I_z)`
    pub u: bool,
    /// `I_x × ∂I_y × I_z`
    pub uu: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cube {
    pub x_range: Interval,
    pub y_range: Interval,
    pub z_range: Interval,
}

impl Default for Cube {
    fn default() -> Self {
        Self::delta()
    }
}

impl Cube {
    /// `Δ = [−4, 4]² × [−40, 22]`.
    pub fn delta() -> Self {
        Self {
            x_range: Interval::hull_of(-4.0, 4.0),
            y_range: Interval::hull_of(-4.0, 4.0),
            z_range: Interval::hull_of(-40.0, 22.0),
        }
    }

    pub fn as_ibox(&self) -> IBox {
        IBox::new(vec![self.x_range, self.y_range, self.z_range]).expect("three dimensions")
    }

    pub fn contains(&self, pt: Point3) -> bool {
        self.x_range.contains(pt.x) && self.y_range.contains(pt.y) && self.z_range.contains(pt.z)
    }

    /// Membership with every face pushed outward by `tol`.
    pub fn contains_with_tol(&self, pt: Point3, tol: f64) -> bool {
        let inside = |r: Interval, v: f64| r.lo() - tol <= v && v <= r.hi() + tol;
        inside(self.x_range, pt.x) && inside(self.y_range, pt.y) && inside(self.z_range, pt.z)
    }

    pub fn boundary_parts(&self, pt: Point3) -> BoundaryParts {
        if !self.contains(pt) {
            return BoundaryParts {
                s: false,
                u: false,
                uu: false,
            };
        }
        let on = |r: Interval, v: f64| v == r.lo() || v == r.hi();
        let (ex, ey, ez) = (on(self.x_range, pt.x), on(self.y_range, pt.y), on(self.z_range, pt.z));
        BoundaryParts {
            s: ex,
            u: ey || ez,
            uu: ey,
        }
    }

    pub fn on_boundary(&self, pt: Point3) -> bool {
        let b = self.boundary_parts(pt);
        b.s || b.u
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p0() -> Params {
        Params::unperturbed(1.185, -9.5).unwrap()
    }

    #[test]
    fn origin_image() {
        assert_eq!(eval(&p0(), Vec3::new(0.0, 0.0, 0.0)), Vec3::new(0.0, -9.5, 0.0));
    }

    #[test]
    fn substitution_example() {
        let r = eval(&p0(), Vec3::new(1.0, 2.0, 3.0));
        assert_eq!(r.x, 2.0);
        assert_eq!(r.y, -5.5);
        assert!((r.z - 5.555).abs() < 1e-14);
    }

    #[test]
    fn jacobian_actions() {
        let j = jacobian(&p0(), Vec3::new(0.0, -3.0, 0.0));
        assert_eq!(j.apply(Vec3::new(0.0, 1.0, 0.0)), Vec3::new(1.0, -6.0, 1.0));
        assert_eq!(j.apply(Vec3::new(1.0, 0.0, 0.0)), Vec3::new(0.0, 0.0, 0.0));
        assert_eq!(j.apply(Vec3::new(0.0, 0.0, 1.0)), Vec3::new(0.0, 0.0, 1.185));
        let pert = Params::new(1.185, -9.5, 0.3, -0.2).unwrap();
        let jp = jacobian(&pert, Vec3::new(0.7, 1.1, -2.0));
        assert_eq!(jp.apply(Vec3::new(1.0, 0.0, 0.0)), Vec3::new(0.0, 0.0, 0.0));
    }

    #[test]
    fn planar_reduction() {
        assert_eq!(eval_planar(&p0(), 0.0, 1.0).unwrap(), (-9.5, 1.185));
        let pert = Params::new(1.185, -9.5, 1e-3, 0.0).unwrap();
        assert_eq!(eval_planar(&pert, 0.0, 1.0), Err(HenonError::PlanarRequiresUnperturbed));
    }

    #[test]
    fn top_line_maps_to_top_face() {
        let p = p0();
        for i in 0..=20 {
            let y = -4.0 + 0.4 * i as f64;
            let z1 = (22.0 - y) / p.xi;
            let (_, z) = eval_planar(&p, y, z1).unwrap();
            assert!((z - 22.0).abs() < 1e-12);
        }
    }

    #[test]
    fn invalid_xi_rejected() {
        assert_eq!(Params::unperturbed(0.9, -9.5), Err(HenonError::InvalidXi(0.9)));
        assert_eq!(Params::unperturbed(1.0, -9.5), Err(HenonError::InvalidXi(1.0)));
        assert!(Params::unperturbed(f64::NAN, -9.5).is_err());
    }

    #[test]
    fn reference_rectangle_membership() {
        assert!(p0().in_reference_box());
        assert!(!Params::unperturbed(1.18, -9.5).unwrap().in_reference_box());
    }

    #[test]
    fn box_image_of_delta() {
        let pb = IBox::point(&[1.185, -9.5, 0.0, 0.0]).unwrap();
        let img = eval_box(&pb, &Cube::delta().as_ibox()).unwrap();
        assert!(img.dim(1).is_subset_of(Interval::new(-9.5, 6.5).unwrap()));
        assert_eq!(img.dim(0), Interval::new(-4.0, 4.0).unwrap());
    }

    #[test]
    fn degenerate_box_matches_point_eval() {
        let p = Params::new(1.185, -9.5, 0.01, -0.02).unwrap();
        let pt = Vec3::new(0.3, -1.7, 12.5);
        let r = eval(&p, pt);
        let pb = IBox::point(&[p.xi, p.mu, p.kappa, p.eta]).unwrap();
        let img = eval_box(&pb, &IBox::point(&pt.to_array()).unwrap()).unwrap();
        for (iv, v) in img.dims().iter().zip(r.to_array()) {
            assert!(iv.contains(v));
            assert!(iv.width() <= 8.0 * f64::EPSILON * v.abs().max(1.0));
        }
    }

    #[test]
    fn phase_box_arity() {
        let pb = IBox::point(&[1.185, -9.5]).unwrap();
        assert_eq!(
            eval_box(&pb, &IBox::point(&[0.0, 0.0]).unwrap()),
            Err(HenonError::PhaseBoxArity(2))
        );
    }

    #[test]
    fn boundary_decomposition() {
        let d = Cube::delta();
        let s = d.boundary_parts(Vec3::new(4.0, 0.0, 0.0));
        assert!(s.s && !s.u && !s.uu);
        let uu = d.boundary_parts(Vec3::new(0.0, -4.0, 0.0));
        assert!(uu.u && uu.uu && !uu.s);
        let u = d.boundary_parts(Vec3::new(0.0, 0.0, 22.0));
        assert!(u.u && !u.uu);
        assert!(!d.on_boundary(Vec3::new(0.0, 0.0, 0.0)));
    }

    #[test]
    fn matrix_det() {
        assert_eq!(Matrix3::identity().det(), 1.0);
        assert_eq!(Matrix3::identity().sub_scaled_identity(1.0).det(), 0.0);
    }
}
