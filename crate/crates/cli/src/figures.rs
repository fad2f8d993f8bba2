//! Plot-ready CSV of the YZ-plane picture: the cube, the legs, the Markov
//! parallelograms, the cone boundary lines through the saddles and the
//! saddles themselves.

use std::path::Path;

use blender_core::geometry::{legs, markov, FixedPointData};
use blender_core::henon::{Cube, Params};

use crate::CliError;

/// One vertex of a polyline: `(object, vertex index, y, z)`.
pub type Vertex = (String, usize, f64, f64);

fn polyline(out: &mut Vec<Vertex>, name: &str, pts: &[(f64, f64)]) {
    out.extend(pts.iter().enumerate().map(|(i, &(y, z))| (name.to_string(), i, y, z)));
}

fn rectangle(y: (f64, f64), z: (f64, f64)) -> [(f64, f64); 5] {
    [(y.0, z.0), (y.1, z.0), (y.1, z.1), (y.0, z.1), (y.0, z.0)]
}

pub fn geometry_vertices(p: &Params, fp: &FixedPointData, theta: f64) -> Result<Vec<Vertex>, CliError> {
    let fail = |e: &dyn std::fmt::Display| CliError::Io(e.to_string());
    let cube = Cube::delta();
    let l = legs(p).map_err(|e| fail(&e))?;
    let m = markov(p, fp).map_err(|e| fail(&e))?;
    let zr = (cube.z_range.lo(), cube.z_range.hi());
    let mut v = Vec::new();
    polyline(&mut v, "cube", &rectangle((cube.y_range.lo(), cube.y_range.hi()), zr));
    polyline(&mut v, "leg_a", &rectangle((l.a_mu, l.b_mu), zr));
    polyline(&mut v, "leg_b", &rectangle((l.c_mu, l.d_mu), zr));
    for (name, para) in [("parallelogram_a", &m.a_para), ("parallelogram_b", &m.b_para)] {
        let c = para.corners();
        polyline(&mut v, name, &[c[0], c[1], c[2], c[3], c[0]]);
    }
    let (y0, y1) = (cube.y_range.lo(), cube.y_range.hi());
    let l1 = |y: f64| fp.p_tilde + theta * (y - fp.p_mu);
    let l2 = |y: f64| fp.q_tilde + theta * (y - fp.q_mu);
    polyline(&mut v, "line_l1", &[(y0, l1(y0)), (y1, l1(y1))]);
    polyline(&mut v, "line_l2", &[(y0, l2(y0)), (y1, l2(y1))]);
    polyline(&mut v, "saddle_p", &[(fp.p_mu, fp.p_tilde)]);
    polyline(&mut v, "saddle_q", &[(fp.q_mu, fp.q_tilde)]);
    Ok(v)
}

pub fn write_geometry(path: &Path, p: &Params, fp: &FixedPointData, theta: f64) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["object", "vertex", "y", "z"])?;
    for (name, i, y, z) in geometry_vertices(p, fp, theta)? {
        w.write_record([name, i.to_string(), y.to_string(), z.to_string()])?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(())
}
