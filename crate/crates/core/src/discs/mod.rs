//! uu-discs and u-strips as sampled curves, their images under the two legs,
//! and the in-between classification against the local stable lines of the
//! saddles.

mod strip;
mod witness;

pub use strip::{grow_strip, StripGrowth, UStrip, DEFAULT_STRIP_MEMBERS};
pub use witness::{witness_stable_point, DdPoint, StableWitness, WitnessDiagnostics};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{legs, FixedPointData, GeometryError, Leg};
use crate::henon::{Cube, Params};

pub const DEFAULT_NODES: usize = 1024;
pub const MAX_NODES: usize = 1 << 16;
/// Distance to a stable line below which a disc counts as lying on it.
pub const ON_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiscError {
    #[error("invalid disc: {0}")]
    InvalidDisc(String),
    #[error("image disc leaves the uu-cone at segment {segment} even with {nodes} nodes")]
    ConeViolationAfterIteration { segment: usize, nodes: usize },
    #[error("disc is not in between (z at p = {z_at_p}, z at q = {z_at_q})")]
    NotInBetween { z_at_p: f64, z_at_q: f64 },
    #[error("neither leg image is in between at step {step}")]
    NoLegInBetween { step: usize },
    #[error("disc iteration needs kappa = eta = 0")]
    RequiresUnperturbed,
    #[error("strip has no members")]
    EmptyStrip,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscNode {
    pub y: f64,
    pub x: f64,
    pub z: f64,
}

/// A curve graphed over `y ∈ [−4, 4]`, sampled at strictly increasing `y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UUDisc {
    nodes: Vec<DiscNode>,
}

/// Uniform grid on [−4, 4] with exact endpoints.
fn y_grid(n: usize) -> impl Iterator<Item = f64> {
    let h = (n - 1) as f64;
    (0..n).map(move |i| if i + 1 == n { 4.0 } else { -4.0 + 8.0 * i as f64 / h })
}

impl UUDisc {
    /// Validated disc; `theta` is the uu-cone aperture.
    pub fn new(nodes: Vec<DiscNode>, theta: f64) -> Result<Self, DiscError> {
        let d = Self { nodes };
        d.validate(theta)?;
        Ok(d)
    }

    /// `x ≡ x0`, `z ≡ z0` on `n` nodes.
    pub fn flat(x0: f64, z0: f64, n: usize) -> Result<Self, DiscError> {
        if n < 2 {
            return Err(DiscError::InvalidDisc(format!("{n} nodes")));
        }
        if !x0.is_finite() || !z0.is_finite() {
            return Err(DiscError::InvalidDisc("non-finite coordinate".into()));
        }
        Ok(Self {
            nodes: y_grid(n).map(|y| DiscNode { y, x: x0, z: z0 }).collect(),
        })
    }

    pub fn nodes(&self) -> &[DiscNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// First segment whose slope leaves the cone, if any.
    fn cone_violation(&self, theta: f64) -> Option<usize> {
        self.nodes.windows(2).position(|w| {
            let dy = w[1].y - w[0].y;
            (w[1].x - w[0].x).hypot(w[1].z - w[0].z) >= theta * dy
        })
    }

    pub fn validate(&self, theta: f64) -> Result<(), DiscError> {
        let n = &self.nodes;
        if n.len() < 2 {
            return Err(DiscError::InvalidDisc(format!("{} nodes", n.len())));
        }
        if n[0].y != -4.0 || n[n.len() - 1].y != 4.0 {
            return Err(DiscError::InvalidDisc("endpoints must be y = -4 and y = 4".into()));
        }
        if n.iter().any(|p| !(p.x.is_finite() && p.z.is_finite())) {
            return Err(DiscError::InvalidDisc("non-finite node".into()));
        }
        if let Some(i) = n.windows(2).position(|w| !(w[1].y > w[0].y)) {
            return Err(DiscError::InvalidDisc(format!("y not increasing at node {i}")));
        }
        if let Some(i) = self.cone_violation(theta) {
            return Err(DiscError::InvalidDisc(format!("segment {i} outside the uu-cone")));
        }
        Ok(())
    }

    /// Index of the segment containing `y` (clamped to the ends).
    fn segment(&self, y: f64) -> usize {
        let i = self.nodes.partition_point(|p| p.y <= y);
        i.clamp(1, self.nodes.len() - 1) - 1
    }

    /// Linear interpolation of `(x, z)` at `y`.
    pub fn at(&self, y: f64) -> (f64, f64) {
        let i = self.segment(y);
        let (a, b) = (self.nodes[i], self.nodes[i + 1]);
        let t = (y - a.y) / (b.y - a.y);
        (a.x + t * (b.x - a.x), a.z + t * (b.z - a.z))
    }

    pub fn z_at(&self, y: f64) -> f64 {
        self.at(y).1
    }

    /// `(dx/dy, dz/dy)` on the segment containing `y`.
    pub fn tangent_at(&self, y: f64) -> (f64, f64) {
        let i = self.segment(y);
        let (a, b) = (self.nodes[i], self.nodes[i + 1]);
        let dy = b.y - a.y;
        ((b.x - a.x) / dy, (b.z - a.z) / dy)
    }

    pub fn tangent_in_cone(&self, y: f64, theta: f64) -> bool {
        let (dx, dz) = self.tangent_at(y);
        dx.hypot(dz) < theta
    }

    /// Same curve resampled on `n` uniform nodes.
    pub fn resampled(&self, n: usize) -> Self {
        Self {
            nodes: y_grid(n)
                .map(|y| {
                    let (x, z) = self.at(y);
                    DiscNode { y, x, z }
                })
                .collect(),
        }
    }

    pub fn inside(&self, cube: &Cube) -> bool {
        self.nodes
            .iter()
            .all(|p| cube.x_range.contains(p.x) && cube.z_range.contains(p.z))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SideOfP {
    LeftOfP,
    OnP,
    RightOfP,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SideOfQ {
    LeftOfQ,
    OnQ,
    RightOfQ,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Betweenness {
    pub z_at_p: f64,
    pub z_at_q: f64,
    pub p_side: SideOfP,
    pub q_side: SideOfQ,
    pub in_between: bool,
}

/// Position of the disc relative to the stable lines `{y = p, z = p̃}` and
/// `{y = q, z = q̃}`.
pub fn classify(d: &UUDisc, fp: &FixedPointData) -> Betweenness {
    let z_at_p = d.z_at(fp.p_mu);
    let z_at_q = d.z_at(fp.q_mu);
    let p_side = if (z_at_p - fp.p_tilde).abs() <= ON_TOLERANCE {
        SideOfP::OnP
    } else if z_at_p < fp.p_tilde {
        SideOfP::LeftOfP
    } else {
        SideOfP::RightOfP
    };
    let q_side = if (z_at_q - fp.q_tilde).abs() <= ON_TOLERANCE {
        SideOfQ::OnQ
    } else if z_at_q > fp.q_tilde {
        SideOfQ::RightOfQ
    } else {
        SideOfQ::LeftOfQ
    };
    Betweenness {
        z_at_p,
        z_at_q,
        p_side,
        q_side,
        in_between: z_at_p < fp.p_tilde && z_at_q > fp.q_tilde,
    }
}

fn branch_sign(leg: Leg) -> f64 {
    match leg {
        Leg::A => -1.0,
        Leg::B => 1.0,
    }
}

/// Image under G of the part of `d` over one leg, regraphed over the new `y`.
///
/// The new coordinate is `y' = μ + y²`, inverted on the leg's branch; the
/// grid is doubled until every segment is back inside the uu-cone.
pub fn iterate_leg(p: &Params, d: &UUDisc, leg: Leg, theta: f64) -> Result<UUDisc, DiscError> {
    if !p.is_unperturbed() {
        return Err(DiscError::RequiresUnperturbed);
    }
    legs(p)?;
    d.validate(theta)?;
    let sign = branch_sign(leg);
    let mut n = d.len();
    loop {
        let nodes = y_grid(n)
            .map(|yp| {
                let y = sign * (yp - p.mu).sqrt();
                let z = d.z_at(y);
                DiscNode {
                    y: yp,
                    x: y,
                    z: p.xi * z + y,
                }
            })
            .collect();
        let img = UUDisc { nodes };
        match img.cone_violation(theta) {
            None => return Ok(img),
            Some(segment) if n >= MAX_NODES => {
                return Err(DiscError::ConeViolationAfterIteration { segment, nodes: n })
            }
            Some(_) => n = (2 * n).min(MAX_NODES),
        }
    }
}
