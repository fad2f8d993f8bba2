//! JSON report document and the plain-text summary.

use std::fmt::Write as _;
use std::path::Path;

use blender_core::certifier::{
    CertificationReport, CertifyConfig, CertifyError, ConditionReport, EpsilonCertificate, Mode, SubCheckReport,
};
use blender_core::geometry::ConeConfig;
use blender_core::henon::Params;
use blender_core::interval::{IBox, ProverConfig, Status};
use blender_core::serde_num;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreconditionFailure {
    pub precondition: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Params>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param_box: Option<IBox>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    pub cone: ConeConfig,
    pub prover: ProverConfig,
    pub seed: u64,
    pub conditions: Vec<ConditionReport>,
    pub reference_bounds: Vec<SubCheckReport>,
    pub overall: Status,
    #[serde(with = "serde_num")]
    pub worst_margin: f64,
    pub worst_check: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<EpsilonCertificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<PreconditionFailure>,
    /// Seconds.
    pub wall_time: f64,
}

impl ReportDocument {
    fn empty(command: &str, cfg: &CertifyConfig) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            params: None,
            param_box: None,
            mode: None,
            cone: cfg.cone,
            prover: cfg.prover,
            seed: cfg.seed,
            conditions: Vec::new(),
            reference_bounds: Vec::new(),
            overall: Status::Fail,
            worst_margin: f64::NAN,
            worst_check: String::new(),
            epsilon: None,
            error: None,
            wall_time: 0.0,
        }
    }

    pub fn from_report(command: &str, cfg: &CertifyConfig, r: CertificationReport) -> Self {
        Self {
            param_box: Some(r.param_box),
            mode: Some(r.mode),
            cone: r.cone,
            prover: r.prover,
            conditions: r.conditions,
            reference_bounds: r.reference_bounds,
            overall: r.overall,
            worst_margin: r.worst_margin,
            worst_check: r.worst_check,
            ..Self::empty(command, cfg)
        }
    }

    /// FAIL document for a violated precondition.
    pub fn from_error(command: &str, cfg: &CertifyConfig, e: &CertifyError) -> Self {
        let overall = match e {
            CertifyError::BaseNotCertified(s) => *s,
            _ => Status::Fail,
        };
        Self {
            overall,
            error: Some(PreconditionFailure {
                precondition: e.precondition().to_string(),
                message: e.to_string(),
            }),
            ..Self::empty(command, cfg)
        }
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self, CliError> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let mut s = self.to_json()?;
        s.push('\n');
        std::fs::write(path, s).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "{}", self.command);
        if let Some(p) = &self.params {
            let _ = write!(out, "  xi={} mu={} kappa={} eta={}", p.xi, p.mu, p.kappa, p.eta);
        } else if let Some(b) = &self.param_box {
            let names = ["xi", "mu", "kappa", "eta"];
            for (n, d) in names.iter().zip(b.dims()) {
                if d.is_point() {
                    let _ = write!(out, "  {n}={}", d.lo());
                } else {
                    let _ = write!(out, "  {n}=[{}, {}]", d.lo(), d.hi());
                }
            }
        }
        if let Some(m) = self.mode {
            let _ = write!(out, "  mode={}", mode_name(m));
        }
        out.push('\n');
        if let Some(e) = &self.error {
            let _ = writeln!(out, "{}: precondition violated: {} ({})", self.overall, e.precondition, e.message);
            return out;
        }
        for c in &self.conditions {
            let depth = c.sub_checks.iter().map(|s| s.verdict.max_depth_reached).max().unwrap_or(0);
            let _ = writeln!(
                out,
                "{} {:<7} margin {:<24} depth {}",
                c.condition,
                c.overall.status.to_string(),
                c.overall.margin,
                depth
            );
            for s in c.sub_checks.iter().filter(|s| s.verdict.status != Status::Pass) {
                let _ = write!(out, "    {} {} margin {}", s.name, s.verdict.status, s.verdict.margin);
                if let Some(w) = &s.verdict.witness {
                    let _ = write!(out, " at {:?} (value {})", w.point, w.value);
                }
                out.push('\n');
            }
            for i in c.identities.iter().filter(|i| !i.passed) {
                let _ = writeln!(out, "    {} residual {} > {}", i.name, i.max_residual, i.tolerance);
            }
        }
        let failed: Vec<&SubCheckReport> = self
            .reference_bounds
            .iter()
            .filter(|r| r.verdict.status != Status::Pass)
            .collect();
        if !self.reference_bounds.is_empty() {
            let _ = writeln!(
                out,
                "reference bounds: {} of {} pass",
                self.reference_bounds.len() - failed.len(),
                self.reference_bounds.len()
            );
            for r in failed {
                let _ = write!(out, "    {} {}", r.name, r.verdict.status);
                if let Some(w) = &r.verdict.witness {
                    let _ = write!(out, " at {:?} (value {})", w.point, w.value);
                }
                out.push('\n');
            }
        }
        if let Some(e) = &self.epsilon {
            let _ = writeln!(out, "epsilon {}  binding {}  (margin {})", e.epsilon, e.binding_check, e.binding_margin);
            let _ = writeln!(out, "bound: {}", e.perturbation_bound_formula);
            for c in &e.corner_checks {
                let _ = writeln!(out, "    corner kappa={} eta={}: {} (worst {} {})", c.kappa, c.eta, c.overall, c.worst_check, c.worst_margin);
            }
        }
        let _ = writeln!(out, "overall {}  worst margin {} ({})", self.overall, self.worst_margin, self.worst_check);
        out
    }
}

pub fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Float => "float",
        Mode::Rigorous => "rigorous",
        Mode::Box => "box",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use blender_core::certifier::certify_point;

    fn cfg() -> CertifyConfig {
        CertifyConfig {
            expansion_trials: 100,
            ..CertifyConfig::default()
        }
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let p = Params::unperturbed(1.185, -9.5).unwrap();
        let mut doc = ReportDocument::from_report("verify", &cfg(), certify_point(&p, &cfg(), true).unwrap());
        doc.params = Some(p);
        doc.wall_time = 0.123456789;
        let a = doc.to_json().unwrap();
        let back = ReportDocument::from_json(&a).unwrap();
        assert_eq!(back.to_json().unwrap(), a);
    }

    #[test]
    fn error_document_round_trips() {
        let e = CertifyError::Henon(blender_core::henon::HenonError::InvalidXi(0.9));
        let doc = ReportDocument::from_error("verify", &cfg(), &e);
        assert_eq!(doc.overall, Status::Fail);
        let a = doc.to_json().unwrap();
        assert!(a.contains("xi > 1"));
        assert!(a.contains("\"worst_margin\": null"));
        let back = ReportDocument::from_json(&a).unwrap();
        assert_eq!(back.to_json().unwrap(), a);
    }
}
