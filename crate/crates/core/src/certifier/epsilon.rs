//! Perturbation radius for the coupling coefficients κ, η.
//!
//! Each strict check has weights `(w_val, w_jac)` bounding how much its slack
//! moves per unit shift of the second coordinate of G and of the second row of
//! DG. Over Δ the shift is at most `C_yz|κ| + C_zz|η|` in value and
//! `C_jκ|κ| + C_jη|η|` in the Jacobian, so a check survives while
//! `w_val·δ_val + w_jac·δ_jac` stays below its margin.

use serde::{Deserialize, Serialize};

use super::{certify_box, prove_check, CertificationReport, CertifyConfig, CertifyError, StrictCheck};
use crate::geometry::ConeConfig;
use crate::henon::{Cube, HenonError};
use crate::interval::{IBox, Interval, ProverConfig, Status};
use crate::serde_num;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationConstants {
    /// sup |y z| over Δ
    pub c_yz: f64,
    /// sup z² over Δ
    pub c_zz: f64,
    /// sup (|y| + |z|) over Δ
    pub c_jac_kappa: f64,
    /// sup 2|z| over Δ
    pub c_jac_eta: f64,
}

impl PerturbationConstants {
    pub fn compute() -> Self {
        Self::for_cube(&Cube::delta())
    }

    pub fn for_cube(cube: &Cube) -> Self {
        let y = cube.y_range;
        let z = cube.z_range;
        Self {
            c_yz: (y * z).mag(),
            c_zz: z.sqr().mag(),
            c_jac_kappa: (y.abs() + z.abs()).hi(),
            c_jac_eta: (z.abs() * 2.0).hi(),
        }
    }

    /// Upper bound of `w_val·δ_val + w_jac·δ_jac` for κ ∈ `kappa`, η ∈ `eta`,
    /// as a degenerate interval.
    pub fn absorption(&self, kappa: Interval, eta: Interval, w_val: f64, w_jac: f64) -> Interval {
        if w_val == 0.0 && w_jac == 0.0 {
            return Interval::point(0.0);
        }
        let k = Interval::point(kappa.mag());
        let e = Interval::point(eta.mag());
        let dv = k * self.c_yz + e * self.c_zz;
        let dj = k * self.c_jac_kappa + e * self.c_jac_eta;
        Interval::point((dv * w_val + dj * w_jac).hi())
    }

    /// Total absorption per unit radius when |κ|, |η| ≤ 1.
    pub fn sensitivity(&self, w_val: f64, w_jac: f64) -> f64 {
        let one = Interval::point(1.0);
        self.absorption(one, one, w_val, w_jac).hi()
    }

    pub fn formula(&self) -> String {
        format!(
            "sup_D |k y z + h z^2| <= {}|k| + {}|h|; jacobian shift <= {}|k| + {}|h|",
            self.c_yz, self.c_zz, self.c_jac_kappa, self.c_jac_eta
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsilonTerm {
    pub check: String,
    #[serde(with = "serde_num")]
    pub margin: f64,
    pub w_val: f64,
    pub w_jac: f64,
    pub sensitivity: f64,
    /// Largest radius proven to keep this check positive; infinite for checks
    /// the perturbation cannot move.
    #[serde(with = "serde_num")]
    pub epsilon: f64,
    /// Upper estimate of the same radius from plain sampling.
    #[serde(with = "serde_num")]
    pub epsilon_upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CornerCheck {
    pub kappa: f64,
    pub eta: f64,
    pub overall: Status,
    #[serde(with = "serde_num")]
    pub worst_margin: f64,
    pub worst_check: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsilonCertificate {
    pub epsilon: f64,
    pub binding_check: String,
    pub binding_margin: f64,
    pub perturbation_bound_formula: String,
    pub constants: PerturbationConstants,
    pub terms: Vec<EpsilonTerm>,
    /// Radius used for the corner re-checks, `0.9 ε`.
    pub recheck_radius: f64,
    pub corner_checks: Vec<CornerCheck>,
}

impl EpsilonCertificate {
    pub fn corners_pass(&self) -> bool {
        self.corner_checks.iter().all(|c| c.overall == Status::Pass)
    }
}

/// Margins this small are treated as numerical noise.
const MARGIN_FLOOR: f64 = 1e-12;

/// Minimum of the plain slack over a grid of the box and, for leg checks,
/// of the leg.
fn sampled_min(check: StrictCheck, base: &IBox, cone: &ConeConfig) -> f64 {
    const N: usize = 9;
    let ts: &[f64] = if check.leg().is_some() {
        &[0.0, 0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0]
    } else {
        &[0.0]
    };
    let at = |iv: Interval, i: usize| iv.lo() + (iv.hi() - iv.lo()) * i as f64 / (N - 1) as f64;
    let mut m = f64::INFINITY;
    for i in 0..N {
        for j in 0..N {
            for &t in ts {
                if let Ok(s) = check.slack(at(base.dim(0), i), at(base.dim(1), j), t, cone) {
                    m = m.min(s);
                }
            }
        }
    }
    m
}

/// Bisect the radius between the certified lower value and the sampled upper
/// one, keeping only radii for which `slack − sensitivity·ε > 0` is proven.
fn refine(check: StrictCheck, base: &IBox, cone: &ConeConfig, prover: &ProverConfig, term: &EpsilonTerm) -> f64 {
    let (mut lo, mut hi) = (term.epsilon, term.epsilon_upper);
    while hi - lo > 1e-4 * hi {
        let mid = 0.5 * (lo + hi);
        let shift = Interval::point((Interval::point(mid) * term.sensitivity).hi());
        if prove_check(check, base, cone, prover, shift).is_pass() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Largest ε such that every strict check keeps a positive margin for all
/// |κ|, |η| < ε over the (ξ, μ) box, followed by a re-check of the four
/// corners (±0.9ε, ±0.9ε).
pub fn certify_epsilon(param_box: &IBox, cfg: &CertifyConfig) -> Result<EpsilonCertificate, CertifyError> {
    certify_epsilon_report(param_box, cfg).map(|(_, e)| e)
}

/// As [`certify_epsilon`], also returning the report of the unperturbed box.
pub fn certify_epsilon_report(
    param_box: &IBox,
    cfg: &CertifyConfig,
) -> Result<(CertificationReport, EpsilonCertificate), CertifyError> {
    let base = match param_box.len() {
        2 => param_box.clone(),
        4 => {
            let zero = Interval::point(0.0);
            if param_box.dim(2) != zero || param_box.dim(3) != zero {
                return Err(HenonError::PlanarRequiresUnperturbed.into());
            }
            IBox::new(param_box.dims()[..2].to_vec())?
        }
        n => return Err(HenonError::ParamBoxArity(n).into()),
    };
    let report = certify_box(&base, cfg)?;
    if report.overall != Status::Pass {
        return Err(CertifyError::BaseNotCertified(report.overall));
    }
    let consts = PerturbationConstants::compute();
    let checks = StrictCheck::all();
    let mut terms = Vec::with_capacity(checks.len());
    for (check, sub) in checks.iter().zip(report.strict_checks()) {
        debug_assert_eq!(check.name(), sub.name);
        let (w_val, w_jac) = check.weights(&cfg.cone);
        let sensitivity = consts.sensitivity(w_val, w_jac);
        let margin = sub.verdict.margin;
        let (epsilon, epsilon_upper) = if sensitivity == 0.0 {
            (f64::INFINITY, f64::INFINITY)
        } else {
            (margin / sensitivity, sampled_min(*check, &base, &cfg.cone) / sensitivity)
        };
        terms.push(EpsilonTerm {
            check: sub.name.clone(),
            margin,
            w_val,
            w_jac,
            sensitivity,
            epsilon,
            epsilon_upper,
        });
    }
    if let Some(t) = terms.iter().find(|t| t.sensitivity > 0.0 && !(t.margin > MARGIN_FLOOR)) {
        return Err(CertifyError::NoPositiveEpsilon {
            binding_check: t.check.clone(),
            margin: t.margin,
        });
    }
    // the box margins are lower bounds from the first passing subdivision;
    // tighten only the checks that could still bind
    let ceiling = terms.iter().map(|t| t.epsilon_upper).fold(f64::INFINITY, f64::min);
    for (check, term) in checks.iter().zip(terms.iter_mut()) {
        if term.sensitivity > 0.0 && term.epsilon < ceiling {
            term.epsilon = refine(*check, &base, &cfg.cone, &cfg.prover, term);
        }
    }
    let binding = terms
        .iter()
        .filter(|t| t.sensitivity > 0.0)
        .min_by(|a, b| a.epsilon.total_cmp(&b.epsilon))
        .expect("some checks are sensitive to the perturbation");
    // strictly inside the bound: the absorbed slack must stay > 0
    let epsilon = binding.epsilon.next_down();
    let recheck_radius = 0.9 * epsilon;
    let mut corner_checks = Vec::with_capacity(4);
    for (sk, se) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
        let (kappa, eta) = (sk * recheck_radius, se * recheck_radius);
        let b = base
            .extended(Interval::point(kappa))
            .extended(Interval::point(eta));
        let r = certify_box(&b, cfg)?;
        corner_checks.push(CornerCheck {
            kappa,
            eta,
            overall: r.overall,
            worst_margin: r.worst_margin,
            worst_check: r.worst_check,
        });
    }
    let cert = EpsilonCertificate {
        epsilon,
        binding_check: binding.check.clone(),
        binding_margin: binding.margin,
        perturbation_bound_formula: consts.formula(),
        constants: consts,
        terms,
        recheck_radius,
        corner_checks,
    };
    Ok((report, cert))
}
