use serde::Serialize;
use ttstar_core::reduced::{laplace_profile, solve_modes};
use ttstar_core::PlaneGrid;

use super::{max_of, Check, Context, Outcome, ReportHead};
use crate::error::{CliError, Result};
use crate::io::{num, pair, read_boundary_table};

#[derive(Serialize)]
struct ModeRow {
    k: i64,
    n: i64,
    coefficient: [f64; 2],
    decay_rate: f64,
}

#[derive(Serialize)]
struct ModesSummary {
    #[serde(flatten)]
    head: ReportHead,
    r0: f64,
    r1: f64,
    radial_nodes: usize,
    angular_samples: usize,
    theta_samples: usize,
    modes: Vec<ModeRow>,
    laplace_nodes: usize,
    laplace_residual_max: f64,
    checks: Vec<Check>,
    passed: bool,
}

/// Exterior Laplace problem from Dirichlet data at `r₀`: per-mode decaying
/// profiles, decay rates at `r₁`, the reconstructed phase and its residual.
pub fn run(mut ctx: Context) -> Result<Outcome> {
    let cfg = ctx.loaded.config.clone();
    let mc = cfg
        .modes
        .clone()
        .ok_or_else(|| CliError::usage("solve-modes needs a [modes] section"))?;
    let path = ctx.loaded.input("boundary", cfg.inputs.boundary.as_ref())?;
    let data = read_boundary_table(&path, mc.r0, cfg.theta_samples)?;
    let sol = solve_modes(&data, mc.r1, mc.radial_nodes)?;

    let mut profile_rows = Vec::new();
    for m in &sol.modes {
        for ((r, v), s) in m.profile.radii.iter().zip(&m.profile.values).zip(&m.profile.slopes) {
            profile_rows.push(vec![m.k.to_string(), m.n.to_string(), num(*r), num(*v), num(*s)]);
        }
    }
    let decay_rows: Vec<Vec<String>> = sol
        .modes
        .iter()
        .map(|m| {
            vec![
                m.k.to_string(),
                m.n.to_string(),
                num(m.coefficient.re),
                num(m.coefficient.im),
                num(m.decay_rate),
            ]
        })
        .collect();

    let grid = PlaneGrid::centered((0.0, 0.0), mc.grid_spacing, mc.grid_nodes)?;
    let (phi, inside) = sol.reconstruct(grid, cfg.theta_samples)?;
    let theta = phi.theta_grid().clone();
    let mut grid_rows = Vec::new();
    for i in 0..grid.n1 {
        for j in 0..grid.n2 {
            let (x1, x2) = grid.point(i, j);
            let r = x1.hypot(x2);
            if r < mc.r0 || r > mc.r1 {
                continue;
            }
            for (m, v) in phi.column(i, j).iter().enumerate() {
                grid_rows.push(vec![num(x1), num(x2), num(theta.theta(m)), num(*v)]);
            }
        }
    }
    let mut residual_rows = Vec::new();
    let mut worst = 0.0f64;
    for &(i, j) in &inside {
        let (x1, x2) = grid.point(i, j);
        for (m, v) in laplace_profile(&phi, (i, j))?.into_iter().enumerate() {
            worst = worst.max(v.abs());
            residual_rows.push(vec![num(x1), num(x2), num(theta.theta(m)), num(v)]);
        }
    }

    let mut checks = Vec::new();
    if let Some(tol) = cfg.tolerances.laplace {
        checks.push(Check::new("laplace", worst, tol));
    }
    let passed = checks.iter().all(|c| c.passed);
    let summary = ModesSummary {
        head: ctx.head(&[("boundary", &path)])?,
        r0: mc.r0,
        r1: mc.r1,
        radial_nodes: mc.radial_nodes,
        angular_samples: data.angular_samples,
        theta_samples: data.theta_samples,
        modes: sol
            .modes
            .iter()
            .map(|m| ModeRow {
                k: m.k,
                n: m.n,
                coefficient: pair(m.coefficient),
                decay_rate: m.decay_rate,
            })
            .collect(),
        laplace_nodes: inside.len(),
        laplace_residual_max: max_of([worst]),
        checks,
        passed,
    };
    ctx.json("modes_summary.json", &summary)?;
    ctx.csv("mode_profiles.csv", &["k", "n", "r", "value", "slope"], &profile_rows)?;
    ctx.csv(
        "decay_rates.csv",
        &["k", "n", "coefficient_re", "coefficient_im", "decay_rate"],
        &decay_rows,
    )?;
    ctx.csv("phase_grid.csv", &["x1", "x2", "theta", "value"], &grid_rows)?;
    ctx.csv("laplace_residual.csv", &["x1", "x2", "theta", "value"], &residual_rows)?;
    Ok(ctx.finish(passed))
}
