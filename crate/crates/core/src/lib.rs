// NaN comparisons must take the failing branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Computer-assisted verification of a blender-horseshoe for the
//! center-unstable Hénon-like family
//! `G(x, y, z) = (y, μ + y² + κyz + ηz², ξz + y)`.

pub mod certifier;
pub mod discs;
pub mod geometry;
pub mod henon;
pub mod interval;
pub mod serde_num;
