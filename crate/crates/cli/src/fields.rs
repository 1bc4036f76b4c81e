use std::fmt::Write;

use anyhow::Result;
use serde::Serialize;
use sl2orbit::fields::{
    bracket_residual, commutator, flow, generators, grid, linearization_eigenvalues, pullback_residual,
    PlaneVectorField,
};

#[derive(Serialize)]
pub struct BracketEntry {
    pub pair: String,
    pub expected: String,
    pub residual: f64,
}

#[derive(Serialize)]
pub struct FieldsSummary {
    pub n: u32,
    pub grid: [usize; 2],
    pub y_max: f64,
    pub step: f64,
    pub brackets: Vec<BracketEntry>,
    pub max_bracket_residual: f64,
    pub max_pullback_residual: f64,
    pub max_boundary_drift: f64,
    /// Linearization of `H` at its boundary zero `(0, 0)`.
    pub h_linearization: Option<[f64; 2]>,
}

pub struct FieldsOutput {
    pub summary: FieldsSummary,
    pub table: String,
    pub trajectories: Vec<(String, String)>,
}

fn combination(c: &[(sl2orbit::poly::Generator, f64)]) -> String {
    if c.is_empty() {
        return "0".into();
    }
    c.iter().map(|(z, v)| format!("{v}{z:?}")).collect::<Vec<_>>().join(" + ")
}

pub fn run(n: u32, nx: usize, ny: usize, y_max: f64, time: f64, step: f64) -> Result<FieldsOutput> {
    let gens = generators(n)?;
    let pts = grid(nx, ny, y_max);
    let mut brackets = Vec::new();
    for (i, f) in gens.iter().enumerate() {
        for g in &gens[i + 1..] {
            let expected = commutator(f.generator, g.generator);
            brackets.push(BracketEntry {
                pair: format!("[{}, {}]", f.label(), g.label()),
                expected: combination(&expected),
                residual: bracket_residual(f, g, &expected, &pts, 1e-4),
            });
        }
    }
    let max_bracket_residual = brackets.iter().map(|b| b.residual).fold(0.0, f64::max);
    let mut max_pullback_residual = 0.0f64;
    for f in &gens {
        for &(x, y) in pts.iter().filter(|p| p.1 > 0.0) {
            max_pullback_residual = max_pullback_residual.max(pullback_residual(f, x, y, 1e-5));
        }
    }

    let mut table = String::from("x,y");
    for f in &gens {
        write!(table, ",{0}_x,{0}_y", f.label())?;
    }
    table.push('\n');
    for &(x, y) in &pts {
        write!(table, "{x:e},{y:e}")?;
        for f in &gens {
            let v = f.eval(x, y);
            write!(table, ",{:e},{:e}", v[0], v[1])?;
        }
        table.push('\n');
    }

    let mut max_boundary_drift = 0.0f64;
    let mut trajectories = Vec::new();
    for f in &gens {
        let mut csv = String::from("start,step,x,y\n");
        for (label, start) in [("boundary", (1.0, 0.0)), ("interior", (1.0, 0.5))] {
            let traj = flow(f, start, time, step)?;
            if label == "boundary" {
                max_boundary_drift = traj.iter().fold(max_boundary_drift, |m, p| m.max(p[1].abs()));
            }
            for (k, p) in traj.iter().enumerate() {
                writeln!(csv, "{label},{k},{:e},{:e}", p[0], p[1])?;
            }
        }
        trajectories.push((f.label(), csv));
    }
    let h = PlaneVectorField { generator: sl2orbit::poly::Generator::H, n };
    let summary = FieldsSummary {
        n,
        grid: [nx, ny],
        y_max,
        step,
        brackets,
        max_bracket_residual,
        max_pullback_residual,
        max_boundary_drift,
        h_linearization: linearization_eigenvalues(&h, 0.0, 0.0, 1e-5),
    };
    Ok(FieldsOutput { summary, table, trajectories })
}
