use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{leg_forms, star_norm, ConeConfig, Leg};
use crate::henon::{jacobian, Params, Vec3};
use crate::serde_num;

use super::checks::leg_point;

/// Empirical expansion constants of the derivative on the u-cone, measured in
/// `|·|_*`. Informational only: the BH2 verdict rests on the strict checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionDiagnostics {
    /// Infimum of `|DG v|_* / |v|_*` over the deterministic sample grid.
    #[serde(with = "serde_num")]
    pub c0: f64,
    /// Smallest `ℓ` with `c0^ℓ > κ`, absent when `c0 ≤ 1`.
    pub ell: Option<u32>,
    /// Equivalence constant `κ` between the Euclidean norm and `|·|_*`.
    pub norm_equivalence: f64,
    pub grid_samples: u64,
    pub random_trials: u64,
    pub random_violations: u64,
    pub seed: u64,
}

const GRID: usize = 64;

/// Tangent vector in the open u-cone from normalized coordinates:
/// `(v, w)` on the unit circle at angle `phi`, `u = θ·s` with `|s| < 1`.
pub fn u_cone_vector(theta: f64, s: f64, phi: f64, r: f64) -> Vec3 {
    Vec3::new(theta * s * r, r * phi.cos(), r * phi.sin())
}

fn ratio(p: &Params, y: f64, z: f64, v: Vec3) -> f64 {
    let dv = jacobian(p, Vec3::new(0.0, y, z)).apply(v);
    star_norm(dv) / star_norm(v)
}

pub fn expansion_diagnostics(p: &Params, cone: &ConeConfig, trials: u64, seed: u64) -> ExpansionDiagnostics {
    let z_mid = -9.0;
    let mut c0 = f64::INFINITY;
    let mut grid_samples = 0u64;
    let half = GRID / 2;
    for i in 0..GRID {
        let leg = if i < half { Leg::A } else { Leg::B };
        let t = ((i % half) as f64 + 0.5) / half as f64;
        let Ok(y) = leg_point(leg, p.mu, t) else { continue };
        for j in 0..GRID {
            let phi = std::f64::consts::TAU * j as f64 / GRID as f64;
            for k in 0..GRID {
                let s = -1.0 + (2 * k + 1) as f64 / GRID as f64;
                c0 = c0.min(ratio(p, y, z_mid, u_cone_vector(cone.theta, s, phi, 1.0)));
                grid_samples += 1;
            }
        }
    }

    let (random_trials, random_violations) = sample_expansion(p, cone, trials, seed);
    let norm_equivalence = 2f64.sqrt();
    let ell = (c0 > 1.0).then(|| (norm_equivalence.ln() / c0.ln()).ceil().max(1.0) as u32);
    ExpansionDiagnostics {
        c0,
        ell,
        norm_equivalence,
        grid_samples,
        random_trials,
        random_violations,
        seed,
    }
}

/// Random (point on a leg, u-cone vector) pairs; counts those with
/// `|DG v|_* ≤ |v|_*`.
pub fn sample_expansion(p: &Params, cone: &ConeConfig, trials: u64, seed: u64) -> (u64, u64) {
    let Ok(l) = leg_forms(p.mu) else {
        return (0, 0);
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    for _ in 0..trials {
        let y = if rng.gen_bool(0.5) {
            rng.gen_range(l.a..=l.b)
        } else {
            rng.gen_range(l.c..=l.d)
        };
        let z = rng.gen_range(-40.0..=22.0);
        let v = u_cone_vector(
            cone.theta,
            rng.gen_range(-1.0..1.0),
            rng.gen_range(0.0..std::f64::consts::TAU),
            rng.gen_range(1e-3..1e3),
        );
        if ratio(p, y, z, v) <= 1.0 {
            violations += 1;
        }
    }
    (trials, violations)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_point_expands() {
        let p = Params::unperturbed(1.185, -9.5).unwrap();
        let d = expansion_diagnostics(&p, &ConeConfig::default(), 10_000, 7);
        assert!(d.c0 > 1.0, "{}", d.c0);
        assert_eq!(d.grid_samples, 64 * 64 * 64);
        assert_eq!(d.random_violations, 0);
        let ell = d.ell.unwrap();
        assert!(d.c0.powi(ell as i32) > d.norm_equivalence);
        assert!(ell == 1 || d.c0.powi(ell as i32 - 1) <= d.norm_equivalence);
    }

    #[test]
    fn deterministic_under_seed() {
        let p = Params::unperturbed(1.18, -10.0).unwrap();
        let a = sample_expansion(&p, &ConeConfig::default(), 500, 3);
        let b = sample_expansion(&p, &ConeConfig::default(), 500, 3);
        assert_eq!(a, b);
    }
}
