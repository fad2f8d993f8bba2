//! Parameter grids of point or box checks.

use std::io::Write;

use blender_core::certifier::{certify_box, certify_point, CertificationReport, CertifyConfig, CertifyError, Condition};
use blender_core::henon::Params;
use blender_core::interval::{IBox, Status};
use rayon::prelude::*;

use crate::args::SweepMode;
use crate::range::Range;
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub xi: Range,
    pub mu: Range,
    pub kappa: Range,
    pub eta: Range,
    pub mode: SweepMode,
    pub rigorous: bool,
    pub max_cells: usize,
}

/// One grid cell: `(lo, hi)` per parameter, degenerate in point mode.
pub type Cell = [(f64, f64); 4];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub cell: Cell,
    pub conditions: [Option<Status>; 6],
    pub overall: Status,
    pub worst_margin: f64,
    pub worst_check: String,
    pub precondition: String,
}

impl SweepSpec {
    fn axes(&self) -> [&Range; 4] {
        [&self.xi, &self.mu, &self.kappa, &self.eta]
    }

    fn too_many(&self) -> CliError {
        CliError::Usage(format!(
            "sweep has more than {} cells; raise --max-cells or coarsen the steps",
            self.max_cells
        ))
    }

    pub fn cells(&self) -> Result<Vec<Cell>, CliError> {
        let usage = CliError::Usage;
        let mut count: usize = 1;
        let mut axes: Vec<Vec<(f64, f64)>> = Vec::with_capacity(4);
        for r in self.axes() {
            if r.count_points().map_err(usage)? > self.max_cells {
                return Err(self.too_many());
            }
            let a: Vec<(f64, f64)> = match self.mode {
                SweepMode::Point => r.points().map_err(usage)?.into_iter().map(|v| (v, v)).collect(),
                SweepMode::Box => r.cells().map_err(usage)?,
            };
            count = count.saturating_mul(a.len());
            if count > self.max_cells {
                return Err(self.too_many());
            }
            axes.push(a);
        }
        let mut cells = Vec::with_capacity(count);
        for &x in &axes[0] {
            for &m in &axes[1] {
                for &k in &axes[2] {
                    for &e in &axes[3] {
                        cells.push([x, m, k, e]);
                    }
                }
            }
        }
        Ok(cells)
    }
}

fn run_cell(spec: &SweepSpec, cfg: &CertifyConfig, cell: &Cell) -> SweepRow {
    let result: Result<CertificationReport, CertifyError> = match spec.mode {
        SweepMode::Point => Params::new(cell[0].0, cell[1].0, cell[2].0, cell[3].0)
            .map_err(CertifyError::from)
            .and_then(|p| certify_point(&p, cfg, spec.rigorous)),
        SweepMode::Box => IBox::from_bounds(cell)
            .map_err(CertifyError::from)
            .and_then(|b| certify_box(&b, cfg)),
    };
    match result {
        Ok(r) => {
            let mut conditions = [None; 6];
            for (slot, c) in conditions.iter_mut().zip(Condition::ALL) {
                *slot = r.condition(c).map(|c| c.status());
            }
            SweepRow {
                cell: *cell,
                conditions,
                overall: r.overall,
                worst_margin: r.worst_margin,
                worst_check: r.worst_check,
                precondition: String::new(),
            }
        }
        Err(e) => SweepRow {
            cell: *cell,
            conditions: [None; 6],
            overall: Status::Fail,
            worst_margin: f64::NAN,
            worst_check: String::new(),
            precondition: e.precondition().to_string(),
        },
    }
}

/// Rows in lexicographic grid order whatever the pool size.
pub fn run_sweep(spec: &SweepSpec, cfg: &CertifyConfig) -> Result<Vec<SweepRow>, CliError> {
    let cfg = CertifyConfig {
        diagnostics: false,
        ..*cfg
    };
    let cells = spec.cells()?;
    Ok(cells.par_iter().map(|c| run_cell(spec, &cfg, c)).collect())
}

pub fn write_csv<W: Write>(spec: &SweepSpec, rows: &[SweepRow], w: W) -> Result<(), CliError> {
    let mut out = csv::Writer::from_writer(w);
    let mut header: Vec<String> = Vec::new();
    for name in ["xi", "mu", "kappa", "eta"] {
        match spec.mode {
            SweepMode::Point => header.push(name.to_string()),
            SweepMode::Box => {
                header.push(format!("{name}_lo"));
                header.push(format!("{name}_hi"));
            }
        }
    }
    header.extend(Condition::ALL.iter().map(|c| c.to_string().to_lowercase()));
    header.extend(["overall", "worst_margin", "worst_check", "precondition"].map(String::from));
    out.write_record(&header)?;
    for r in rows {
        let mut rec: Vec<String> = Vec::with_capacity(header.len());
        for (lo, hi) in r.cell {
            rec.push(lo.to_string());
            if spec.mode == SweepMode::Box {
                rec.push(hi.to_string());
            }
        }
        rec.extend(r.conditions.iter().map(|s| s.map_or(String::new(), |s| s.to_string())));
        rec.push(r.overall.to_string());
        rec.push(r.worst_margin.to_string());
        rec.push(r.worst_check.clone());
        rec.push(r.precondition.clone());
        out.write_record(&rec)?;
    }
    out.flush().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(())
}

pub fn merged_status(rows: &[SweepRow]) -> Status {
    rows.iter().map(|r| r.overall).fold(Status::Pass, Status::merge)
}
