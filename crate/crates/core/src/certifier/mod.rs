//! Certification of the six blender-horseshoe conditions over a parameter
//! point or box, and of a perturbation radius for the coupling terms.

mod checks;
mod diagnostics;
mod epsilon;

pub use checks::{leg_point, Condition, Identity, ReferenceBound, StrictCheck, IDENTITY_TOLERANCE};
pub use diagnostics::{expansion_diagnostics, sample_expansion, u_cone_vector, ExpansionDiagnostics};
pub use epsilon::{certify_epsilon, certify_epsilon_report, CornerCheck, EpsilonCertificate, EpsilonTerm, PerturbationConstants};

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{ConeConfig, GeometryError};
use crate::henon::{HenonError, Params};
use crate::interval::{prove_positive, IBox, Interval, IntervalError, ProverConfig, Status, Verdict, Witness};
use crate::serde_num;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertifyError {
    #[error(transparent)]
    Henon(#[from] HenonError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
    #[error("no positive perturbation radius: binding check {binding_check} has margin {margin}")]
    NoPositiveEpsilon { binding_check: String, margin: f64 },
    #[error("the unperturbed box is not certified (overall {0})")]
    BaseNotCertified(Status),
}

impl CertifyError {
    /// Short label of the violated precondition, for reports.
    pub fn precondition(&self) -> &'static str {
        match self {
            CertifyError::Henon(HenonError::InvalidXi(_)) => "xi > 1",
            CertifyError::Henon(HenonError::NonFinite(_)) => "finite parameters",
            CertifyError::Henon(HenonError::ParamBoxArity(_)) => "parameter box arity",
            CertifyError::Henon(_) => "map evaluation",
            CertifyError::Geometry(GeometryError::LegsUndefined(_)) => "LegsUndefined: mu < -4",
            CertifyError::Geometry(GeometryError::ComplexFixedPoints(_)) => "1 - 4 mu >= 0",
            CertifyError::Geometry(GeometryError::InvalidCone { .. }) => "0 < theta, 0 < vartheta < 2 sqrt(5)",
            CertifyError::Geometry(_) => "geometry",
            CertifyError::Interval(_) => "interval evaluation",
            CertifyError::NoPositiveEpsilon { .. } => "positive perturbation radius",
            CertifyError::BaseNotCertified(_) => "unperturbed box certified",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertifyConfig {
    pub cone: ConeConfig,
    pub prover: ProverConfig,
    /// Seed for the sampled diagnostics.
    pub seed: u64,
    /// Random trials in the sampled u-cone expansion diagnostic.
    pub expansion_trials: u64,
    /// Run the sampled expansion diagnostic at all.
    pub diagnostics: bool,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        Self {
            cone: ConeConfig::default(),
            prover: ProverConfig::default(),
            seed: 0,
            expansion_trials: 10_000,
            diagnostics: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Plain binary64 evaluation at a point; leg checks sampled along the leg.
    Float,
    /// Interval evaluation at a degenerate parameter box.
    Rigorous,
    /// Interval branch-and-bound over a parameter box.
    Box,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubCheckReport {
    pub name: String,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub name: String,
    #[serde(with = "serde_num")]
    pub max_residual: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition: Condition,
    pub sub_checks: Vec<SubCheckReport>,
    pub identities: Vec<IdentityReport>,
    pub overall: Verdict,
    #[serde(with = "serde_num::map")]
    pub margins: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<ExpansionDiagnostics>,
}

impl ConditionReport {
    pub fn status(&self) -> Status {
        self.overall.status
    }

    pub fn sub_check(&self, name: &str) -> Option<&SubCheckReport> {
        self.sub_checks.iter().find(|s| s.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub mode: Mode,
    /// `(ξ, μ, κ, η)`
    pub param_box: IBox,
    pub cone: ConeConfig,
    pub prover: ProverConfig,
    pub conditions: Vec<ConditionReport>,
    /// Numeric estimates checked on the box shrunk by 1e-6 of its widths.
    /// Reported only; they do not enter `overall`.
    pub reference_bounds: Vec<SubCheckReport>,
    pub overall: Status,
    #[serde(with = "serde_num")]
    pub worst_margin: f64,
    pub worst_check: String,
}

impl CertificationReport {
    pub fn condition(&self, c: Condition) -> Option<&ConditionReport> {
        self.conditions.iter().find(|r| r.condition == c)
    }

    pub fn strict_checks(&self) -> impl Iterator<Item = &SubCheckReport> {
        self.conditions.iter().flat_map(|c| c.sub_checks.iter())
    }

    pub fn reference_bound(&self, name: &str) -> Option<&SubCheckReport> {
        self.reference_bounds.iter().find(|r| r.name == name)
    }
}

/// Parameter box split into the (ξ, μ) part that is searched and the
/// perturbation part that is absorbed into the margins.
#[derive(Debug, Clone)]
struct Domain {
    base: IBox,
    kappa: Interval,
    eta: Interval,
}

impl Domain {
    fn from_box(b: &IBox) -> Result<Self, CertifyError> {
        let zero = Interval::point(0.0);
        let (kappa, eta) = match b.len() {
            2 => (zero, zero),
            4 => (b.dim(2), b.dim(3)),
            n => return Err(HenonError::ParamBoxArity(n).into()),
        };
        for d in b.dims() {
            if !d.lo().is_finite() || !d.hi().is_finite() {
                return Err(HenonError::NonFinite("parameter box").into());
            }
        }
        let xi = b.dim(0);
        let mu = b.dim(1);
        if xi.lo() <= 1.0 {
            return Err(HenonError::InvalidXi(xi.lo()).into());
        }
        if mu.hi() >= -4.0 {
            return Err(GeometryError::LegsUndefined(mu.hi()).into());
        }
        Ok(Self {
            base: IBox::new(vec![xi, mu])?,
            kappa,
            eta,
        })
    }

    fn full_box(&self) -> IBox {
        self.base.extended(self.kappa).extended(self.eta)
    }

    fn perturbed(&self) -> bool {
        self.kappa != Interval::point(0.0) || self.eta != Interval::point(0.0)
    }
}

fn point_witness(point: Vec<f64>, value: f64) -> Witness {
    let sub_box = IBox::point(&point).expect("nonempty point");
    Witness { point, sub_box, value }
}

/// Branch-and-bound on `slack − shift` over the (ξ, μ) box, with the leg
/// coordinate `t ∈ [0, 1]` appended for phase-dependent checks.
pub(crate) fn prove_check(check: StrictCheck, base: &IBox, cone: &ConeConfig, prover: &ProverConfig, shift: Interval) -> Verdict {
    let has_t = check.leg().is_some();
    let domain = if has_t {
        base.extended(Interval::hull_of(0.0, 1.0))
    } else {
        base.clone()
    };
    let eval = |b: &IBox| -> Result<Interval, IntervalError> {
        let t = if has_t { b.dim(2) } else { Interval::point(0.0) };
        Ok(check.slack(b.dim(0), b.dim(1), t, cone)? - shift)
    };
    prove_positive(eval, &domain, prover)
}

fn strict_verdict_box(check: StrictCheck, dom: &Domain, cfg: &CertifyConfig, consts: &PerturbationConstants) -> Verdict {
    let cone = cfg.cone;
    let (wv, wj) = check.weights(&cone);
    let absorb = consts.absorption(dom.kappa, dom.eta, wv, wj);
    let mut v = prove_check(check, &dom.base, &cone, &cfg.prover, absorb);
    if v.status == Status::Fail && dom.perturbed() {
        // negative only after absorbing the perturbation: the sufficient
        // condition is lost, the inequality itself is not refuted
        let w = v.witness.as_ref().expect("FAIL carries a witness");
        let p = &w.point;
        let t = if check.leg().is_some() { p[2] } else { 0.0 };
        let base = check.slack(p[0], p[1], t, &cone);
        if base.map_or(true, |s| s >= 0.0) {
            v.status = Status::Unknown;
        }
    }
    v
}

const FLOAT_LEG_SAMPLES: usize = 65;

fn strict_verdict_float(check: StrictCheck, xi: f64, mu: f64, dom: &Domain, cfg: &CertifyConfig, consts: &PerturbationConstants) -> Verdict {
    let cone = cfg.cone;
    let (wv, wj) = check.weights(&cone);
    let absorb = consts.absorption(dom.kappa, dom.eta, wv, wj).hi();
    let ts: Vec<f64> = match check.leg() {
        Some(_) => (0..FLOAT_LEG_SAMPLES)
            .map(|i| i as f64 / (FLOAT_LEG_SAMPLES - 1) as f64)
            .collect(),
        None => vec![0.0],
    };
    let mut worst = f64::INFINITY;
    let mut worst_base = f64::INFINITY;
    let mut worst_t = 0.0;
    let mut errored = false;
    for &t in &ts {
        match check.slack(xi, mu, t, &cone) {
            Ok(s) if !s.is_nan() => {
                if s - absorb < worst {
                    worst = s - absorb;
                    worst_base = s;
                    worst_t = t;
                }
            }
            _ => errored = true,
        }
    }
    let mut point = vec![xi, mu];
    if check.leg().is_some() {
        point.push(worst_t);
    }
    let status = if errored {
        Status::Unknown
    } else if worst > 0.0 {
        Status::Pass
    } else if worst < 0.0 && worst_base < 0.0 {
        Status::Fail
    } else {
        Status::Unknown
    };
    Verdict {
        status,
        margin: if errored { f64::NEG_INFINITY } else { worst },
        boxes_examined: ts.len() as u64,
        max_depth_reached: 0,
        witness: (status == Status::Fail).then(|| point_witness(point, worst)),
    }
}

fn identity_report(id: Identity, base: &IBox) -> (IdentityReport, Verdict) {
    let mut samples = base.corners();
    samples.push(base.midpoint());
    samples.dedup();
    let mut worst = 0f64;
    let mut worst_at = samples[0].clone();
    for s in &samples {
        let r = id.residual(s[0], s[1]).unwrap_or(f64::INFINITY);
        if !(r <= worst) {
            worst = r;
            worst_at = s.clone();
        }
    }
    let passed = worst <= IDENTITY_TOLERANCE;
    let margin = IDENTITY_TOLERANCE - worst;
    let verdict = Verdict {
        status: if passed { Status::Pass } else { Status::Fail },
        margin,
        boxes_examined: samples.len() as u64,
        max_depth_reached: 0,
        witness: (!passed).then(|| point_witness(worst_at, margin)),
    };
    (
        IdentityReport {
            name: id.name(),
            max_residual: worst,
            tolerance: IDENTITY_TOLERANCE,
            samples: samples.len(),
            passed,
        },
        verdict,
    )
}

fn reference_verdict(rb: ReferenceBound, dom: &Domain, mode: Mode, cfg: &CertifyConfig) -> Verdict {
    match mode {
        Mode::Float => {
            let m = dom.base.midpoint();
            match rb.slack(m[0], m[1]) {
                Ok(s) if s > 0.0 => Verdict::pass(s),
                Ok(s) if s < 0.0 => Verdict {
                    status: Status::Fail,
                    margin: s,
                    boxes_examined: 1,
                    max_depth_reached: 0,
                    witness: Some(point_witness(m, s)),
                },
                Ok(s) => Verdict::unknown(s),
                Err(_) => Verdict::unknown(f64::NEG_INFINITY),
            }
        }
        Mode::Rigorous | Mode::Box => {
            let shrunk = dom.base.shrink(1e-6);
            prove_positive(|b| rb.slack(b.dim(0), b.dim(1)), &shrunk, &cfg.prover)
        }
    }
}

fn assemble(
    mode: Mode,
    dom: &Domain,
    cfg: &CertifyConfig,
    strict: Vec<(StrictCheck, Verdict)>,
    mut diagnostics: Option<ExpansionDiagnostics>,
) -> CertificationReport {
    let identities: Vec<(Identity, IdentityReport, Verdict)> = Identity::ALL
        .iter()
        .map(|&id| {
            let (r, v) = identity_report(id, &dom.base);
            (id, r, v)
        })
        .collect();

    let mut conditions = Vec::new();
    let mut worst_margin = f64::INFINITY;
    let mut worst_check = String::new();
    for cond in Condition::ALL {
        let mut sub_checks = Vec::new();
        let mut margins = BTreeMap::new();
        let mut overall: Option<Verdict> = None;
        for (check, v) in strict.iter().filter(|(c, _)| c.condition() == cond) {
            let name = check.name();
            margins.insert(name.clone(), v.margin);
            if !(v.margin >= worst_margin) {
                worst_margin = v.margin;
                worst_check = name.clone();
            }
            overall = Some(match overall {
                Some(o) => o.merge(v.clone()),
                None => v.clone(),
            });
            sub_checks.push(SubCheckReport {
                name,
                verdict: v.clone(),
                note: check.note().map(str::to_string),
            });
        }
        let mut id_reports = Vec::new();
        for (_, r, v) in identities.iter().filter(|(id, _, _)| id.condition() == cond) {
            id_reports.push(r.clone());
            let mut v = v.clone();
            // identities do not contribute a margin
            if v.status == Status::Pass {
                v.margin = f64::INFINITY;
            }
            overall = Some(match overall {
                Some(o) => o.merge(v),
                None => v,
            });
        }
        conditions.push(ConditionReport {
            condition: cond,
            sub_checks,
            identities: id_reports,
            overall: overall.expect("every condition has checks"),
            margins,
            diagnostics: if cond == Condition::BH2 { diagnostics.take() } else { None },
        });
    }

    let reference_bounds = ReferenceBound::ALL
        .par_iter()
        .map(|&rb| SubCheckReport {
            name: rb.name().to_string(),
            verdict: reference_verdict(rb, dom, mode, cfg),
            note: None,
        })
        .collect();

    let overall = conditions
        .iter()
        .map(|c| c.overall.status)
        .fold(Status::Pass, Status::merge);
    CertificationReport {
        mode,
        param_box: dom.full_box(),
        cone: cfg.cone,
        prover: cfg.prover,
        conditions,
        reference_bounds,
        overall,
        worst_margin,
        worst_check,
    }
}

fn diagnostics_for(dom: &Domain, cfg: &CertifyConfig) -> Option<ExpansionDiagnostics> {
    if !cfg.diagnostics {
        return None;
    }
    let m = dom.base.midpoint();
    let p = Params {
        xi: m[0],
        mu: m[1],
        kappa: dom.kappa.mid(),
        eta: dom.eta.mid(),
    };
    Some(expansion_diagnostics(&p, &cfg.cone, cfg.expansion_trials, cfg.seed))
}

/// Rigorous certification over a parameter box `(ξ, μ)` or `(ξ, μ, κ, η)`.
///
/// Nonzero κ, η ranges are handled by subtracting each check's worst-case
/// sensitivity from its slack.
pub fn certify_box(param_box: &IBox, cfg: &CertifyConfig) -> Result<CertificationReport, CertifyError> {
    cfg.cone.validate()?;
    let dom = Domain::from_box(param_box)?;
    let consts = PerturbationConstants::compute();
    let strict: Vec<(StrictCheck, Verdict)> = StrictCheck::all()
        .into_par_iter()
        .map(|c| (c, strict_verdict_box(c, &dom, cfg, &consts)))
        .collect();
    let mode = if dom.base.is_point() { Mode::Rigorous } else { Mode::Box };
    Ok(assemble(mode, &dom, cfg, strict, diagnostics_for(&dom, cfg)))
}

/// Certification at a single parameter point, either in interval arithmetic
/// (`rigorous`) or in plain binary64.
pub fn certify_point(p: &Params, cfg: &CertifyConfig, rigorous: bool) -> Result<CertificationReport, CertifyError> {
    p.validate()?;
    let b = IBox::point(&[p.xi, p.mu, p.kappa, p.eta])?;
    if rigorous {
        return certify_box(&b, cfg);
    }
    cfg.cone.validate()?;
    let dom = Domain::from_box(&b)?;
    let consts = PerturbationConstants::compute();
    let strict = StrictCheck::all()
        .into_iter()
        .map(|c| (c, strict_verdict_float(c, p.xi, p.mu, &dom, cfg, &consts)))
        .collect();
    Ok(assemble(Mode::Float, &dom, cfg, strict, diagnostics_for(&dom, cfg)))
}

/// One condition at one parameter point, in interval arithmetic.
pub fn check_condition(cond: Condition, p: &Params, cfg: &CertifyConfig) -> Result<ConditionReport, CertifyError> {
    let report = certify_point(p, cfg, true)?;
    Ok(report
        .conditions
        .into_iter()
        .find(|c| c.condition == cond)
        .expect("all conditions are reported"))
}

pub fn check_bh1(p: &Params, cfg: &CertifyConfig) -> Result<ConditionReport, CertifyError> {
    check_condition(Condition::BH1, p, cfg)
}

pub fn check_bh2(p: &Params, cfg: &CertifyConfig) -> Result<ConditionReport, CertifyError> {
    check_condition(Condition::BH2, p, cfg)
}

pub fn check_bh3(p: &Params, cfg: &CertifyConfig) -> Result<ConditionReport, CertifyError> {
    check_condition(Condition::BH3, p, cfg)
}

pub fn check_bh4(p: &Params, cfg: &CertifyConfig) -> Result<ConditionReport, CertifyError> {
    check_condition(Condition::BH4, p, cfg)
}

pub fn check_bh5(p: &Params, cfg: &CertifyConfig) -> Result<ConditionReport, CertifyError> {
    check_condition(Condition::BH5, p, cfg)
}

pub fn check_bh6(p: &Params, cfg: &CertifyConfig) -> Result<ConditionReport, CertifyError> {
    check_condition(Condition::BH6, p, cfg)
}
