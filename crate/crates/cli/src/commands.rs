//! Subcommand handlers. Each returns the process exit code.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;
use std::time::Instant;

use blender_core::certifier::{certify_box, certify_epsilon_report, certify_point, CertifyError};
use blender_core::discs::{classify, grow_strip, witness_stable_point, DiscError, StableWitness, StripGrowth, UStrip, UUDisc};
use blender_core::geometry::{fixed_points, FixedPointData};
use blender_core::henon::Params;
use blender_core::interval::{IBox, Status};

use crate::args::{BoxArgs, Cli, Command, DiscArgs, EpsilonArgs, OutputArgs, StripArgs, SweepArgs, VerifyArgs};
use crate::config::Settings;
use crate::range::Range;
use crate::report::ReportDocument;
use crate::sweep::{merged_status, run_sweep, write_csv, SweepSpec};
use crate::{exit, figures, CliError};

pub(crate) fn dispatch(cli: &Cli) -> Result<u8, CliError> {
    let s = Settings::resolve(&cli.global)?;
    match &cli.command {
        Command::Verify(a) => verify(&s, a),
        Command::CertifyBox(a) => certify_box_cmd(&s, a),
        Command::CertifyEpsilon(a) => certify_epsilon_cmd(&s, a),
        Command::Sweep(a) => sweep_cmd(&s, a),
        Command::Disc(a) => disc(&s, a),
        Command::Strip(a) => strip(&s, a),
    }
}

fn emit(doc: &ReportDocument, out: &OutputArgs) -> Result<(), CliError> {
    if let Some(path) = &out.report {
        doc.write(path)?;
    }
    let text = if out.json {
        let mut s = doc.to_json()?;
        s.push('\n');
        s
    } else {
        doc.summary()
    };
    io::stdout()
        .write_all(text.as_bytes())
        .map_err(|e| CliError::Io(e.to_string()))
}

fn verify(s: &Settings, a: &VerifyArgs) -> Result<u8, CliError> {
    let start = Instant::now();
    let cfg = &s.certify;
    let raw = Params {
        xi: a.xi,
        mu: a.mu,
        kappa: a.kappa,
        eta: a.eta,
    };
    let result = s.install(|| {
        raw.validate()
            .map_err(CertifyError::from)
            .and_then(|_| certify_point(&raw, cfg, a.rigorous))
    })?;
    let mut doc = match &result {
        Ok(r) => ReportDocument::from_report("verify", cfg, r.clone()),
        Err(e) => ReportDocument::from_error("verify", cfg, e),
    };
    // NaN would not survive the JSON round trip as a parameter
    if [raw.xi, raw.mu, raw.kappa, raw.eta].iter().all(|v| v.is_finite()) {
        doc.params = Some(raw);
    }
    doc.wall_time = start.elapsed().as_secs_f64();
    emit(&doc, &a.output)?;
    Ok(exit::from_status(doc.overall))
}

fn no_step(name: &str, r: &Range) -> Result<(f64, f64), CliError> {
    match r.step {
        Some(_) => Err(CliError::Usage(format!("--{name} takes lo:hi here, not a step"))),
        None => Ok((r.lo, r.hi)),
    }
}

fn param_box(ranges: &[(&str, &Range)]) -> Result<IBox, CliError> {
    let bounds = ranges
        .iter()
        .map(|(n, r)| no_step(n, r))
        .collect::<Result<Vec<_>, _>>()?;
    IBox::from_bounds(&bounds).map_err(|e| CliError::Usage(e.to_string()))
}

fn certify_box_cmd(s: &Settings, a: &BoxArgs) -> Result<u8, CliError> {
    let start = Instant::now();
    let cfg = &s.certify;
    let b = param_box(&[("xi", &a.xi), ("mu", &a.mu), ("kappa", &a.kappa), ("eta", &a.eta)])?;
    let mut doc = match s.install(|| certify_box(&b, cfg))? {
        Ok(r) => ReportDocument::from_report("certify-box", cfg, r),
        Err(e) => {
            let mut d = ReportDocument::from_error("certify-box", cfg, &e);
            d.param_box = Some(b);
            d
        }
    };
    doc.wall_time = start.elapsed().as_secs_f64();
    emit(&doc, &a.output)?;
    Ok(exit::from_status(doc.overall))
}

fn certify_epsilon_cmd(s: &Settings, a: &EpsilonArgs) -> Result<u8, CliError> {
    let start = Instant::now();
    let cfg = &s.certify;
    let b = param_box(&[("xi", &a.xi), ("mu", &a.mu)])?;
    let (mut doc, code) = match s.install(|| certify_epsilon_report(&b, cfg))? {
        Ok((r, eps)) => {
            let code = if eps.corners_pass() { exit::PASS } else { exit::FAIL };
            let mut d = ReportDocument::from_report("certify-epsilon", cfg, r);
            d.epsilon = Some(eps);
            (d, code)
        }
        Err(e) => {
            let mut d = ReportDocument::from_error("certify-epsilon", cfg, &e);
            d.param_box = Some(b);
            let code = exit::from_status(d.overall);
            (d, code)
        }
    };
    doc.wall_time = start.elapsed().as_secs_f64();
    emit(&doc, &a.output)?;
    Ok(code)
}

fn sweep_cmd(s: &Settings, a: &SweepArgs) -> Result<u8, CliError> {
    let spec = SweepSpec {
        xi: a.xi,
        mu: a.mu,
        kappa: a.kappa,
        eta: a.eta,
        mode: a.mode,
        rigorous: a.rigorous,
        max_cells: a.max_cells,
    };
    let rows = s.install(|| run_sweep(&spec, &s.certify))??;
    match &a.out {
        Some(path) => {
            let f = File::create(path).map_err(|e| io_err(path, e))?;
            write_csv(&spec, &rows, f)?;
            let pass = rows.iter().filter(|r| r.overall == Status::Pass).count();
            println!("{} cells, {} PASS, written to {}", rows.len(), pass, path.display());
        }
        None => write_csv(&spec, &rows, io::stdout().lock())?,
    }
    Ok(exit::from_status(merged_status(&rows)))
}

fn io_err(path: &Path, e: io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn out_file(dir: &Path, name: &str) -> Result<csv::Writer<File>, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let path = dir.join(name);
    let f = File::create(&path).map_err(|e| io_err(&path, e))?;
    Ok(csv::Writer::from_writer(f))
}

fn finish(mut w: csv::Writer<File>) -> Result<(), CliError> {
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}

/// Unperturbed parameters and saddles, or the exit code of a precondition
/// failure after reporting it.
fn planar_setup(xi: f64, mu: f64) -> Result<(Params, FixedPointData), u8> {
    let r = Params::unperturbed(xi, mu)
        .map_err(CertifyError::from)
        .and_then(|p| Ok((p, fixed_points(&p)?)));
    r.map_err(|e| {
        eprintln!("blender: FAIL: precondition violated: {} ({e})", e.precondition());
        exit::FAIL
    })
}

fn disc_failed(e: DiscError) -> u8 {
    eprintln!("blender: FAIL: {e}");
    exit::FAIL
}

fn disc(s: &Settings, a: &DiscArgs) -> Result<u8, CliError> {
    let (p, fp) = match planar_setup(a.xi, a.mu) {
        Ok(v) => v,
        Err(code) => return Ok(code),
    };
    let theta = s.certify.cone.theta;
    let d = match UUDisc::flat(0.0, a.z0, a.nodes) {
        Ok(d) => d,
        Err(e) => return Ok(disc_failed(e)),
    };
    let w = match witness_stable_point(&p, &d, &fp, a.iters, theta) {
        Ok(w) => w,
        Err(e) => return Ok(disc_failed(e)),
    };
    if let Some(dir) = &a.out_dir {
        write_disc(dir, &w)?;
        figures::write_geometry(&dir.join("geometry.csv"), &p, &fp, theta)?;
    }
    let g = &w.diagnostics;
    let min_shrink = g.shrink_factors.iter().copied().fold(f64::INFINITY, f64::min);
    println!("itinerary {}", g.itinerary);
    println!(
        "witness y = {} + {}  (x = {}, z = {})",
        w.point_dd.y.0, w.point_dd.y.1, w.point.x, w.point.z
    );
    println!(
        "final diameter {}  min shrink factor {}",
        g.diameters.last().copied().unwrap_or(f64::NAN),
        min_shrink
    );
    println!(
        "orbit in cube: {}  itinerary replayed: {}  max excursion {}",
        g.orbit_in_cube, g.itinerary_replayed, g.max_excursion
    );
    println!("tolerance model: {}", g.tolerance_model);
    Ok(if g.orbit_in_cube && g.itinerary_replayed {
        exit::PASS
    } else {
        exit::FAIL
    })
}

fn write_disc(dir: &Path, w: &StableWitness) -> Result<(), CliError> {
    let g = &w.diagnostics;
    let mut it = out_file(dir, "disc_itinerary.csv")?;
    it.write_record(["step", "leg", "diameter", "shrink_factor", "z_at_p", "z_at_q", "p_side", "q_side"])?;
    it.write_record(["0", "", &g.diameters[0].to_string(), "", "", "", "", ""])?;
    for (i, leg) in g.itinerary.chars().enumerate() {
        let c = &g.classes[i];
        it.write_record([
            (i + 1).to_string(),
            leg.to_string(),
            g.diameters[i + 1].to_string(),
            g.shrink_factors[i].to_string(),
            c.z_at_p.to_string(),
            c.z_at_q.to_string(),
            format!("{:?}", c.p_side),
            format!("{:?}", c.q_side),
        ])?;
    }
    finish(it)?;

    let mut orbit = out_file(dir, "disc_orbit.csv")?;
    orbit.write_record(["n", "x", "y", "z", "tolerance"])?;
    for (n, (pt, tol)) in g.orbit.iter().zip(&g.tolerances).enumerate() {
        orbit.write_record([n.to_string(), pt.x.to_string(), pt.y.to_string(), pt.z.to_string(), tol.to_string()])?;
    }
    finish(orbit)?;

    let mut wit = out_file(dir, "disc_witness.csv")?;
    wit.write_record(["x_hi", "x_lo", "y_hi", "y_lo", "z_hi", "z_lo", "itinerary"])?;
    let d = &w.point_dd;
    wit.write_record([
        d.x.0.to_string(),
        d.x.1.to_string(),
        d.y.0.to_string(),
        d.y.1.to_string(),
        d.z.0.to_string(),
        d.z.1.to_string(),
        g.itinerary.clone(),
    ])?;
    finish(wit)
}

fn strip(s: &Settings, a: &StripArgs) -> Result<u8, CliError> {
    let (p, fp) = match planar_setup(a.xi, a.mu) {
        Ok(v) => v,
        Err(code) => return Ok(code),
    };
    let theta = s.certify.cone.theta;
    let (z_lo, z_hi) = no_step("z", &a.z)?;
    let st = match UStrip::flat(z_lo, z_hi, a.members, a.nodes) {
        Ok(st) => st,
        Err(e) => return Ok(disc_failed(e)),
    };
    if st.len() == 1 {
        let b = classify(&st.members[0], &fp);
        println!(
            "disc z0 = {}: {:?}, {:?}, in between: {}",
            z_lo, b.p_side, b.q_side, b.in_between
        );
    }
    let g = match grow_strip(&p, &st, &fp, a.iters, theta) {
        Ok(g) => g,
        Err(e) => return Ok(disc_failed(e)),
    };
    if let Some(dir) = &a.out_dir {
        write_strip(dir, &g)?;
        figures::write_geometry(&dir.join("geometry.csv"), &p, &fp, theta)?;
    }
    let widths: Vec<String> = g.widths.iter().map(|w| w.to_string()).collect();
    println!("widths {}", widths.join(" "));
    println!("itinerary {}", g.itinerary);
    if g.hit {
        println!(
            "crossing of W^s_loc(P) at iteration {} (member {:?}, z0 {:?}), transverse: {}",
            g.iterations, g.crossing_member, g.crossing_z0, g.transverse
        );
        Ok(exit::PASS)
    } else {
        println!("no crossing within {} iterations", g.iterations);
        Ok(exit::UNKNOWN)
    }
}

fn write_strip(dir: &Path, g: &StripGrowth) -> Result<(), CliError> {
    let mut w = out_file(dir, "strip_widths.csv")?;
    w.write_record(["iteration", "width", "members", "leg", "kept_from", "kept_to"])?;
    let legs: Vec<char> = g.itinerary.chars().collect();
    for (i, width) in g.widths.iter().enumerate() {
        let (leg, from, to) = match i.checked_sub(1) {
            Some(k) if k < legs.len() => {
                let (f, t) = g.kept_ranges.get(k).map_or((String::new(), String::new()), |r| (r.0.to_string(), r.1.to_string()));
                (legs[k].to_string(), f, t)
            }
            _ => Default::default(),
        };
        let members = g.member_counts.get(i).map_or(String::new(), |m| m.to_string());
        w.write_record([i.to_string(), width.to_string(), members, leg, from, to])?;
    }
    finish(w)
}

