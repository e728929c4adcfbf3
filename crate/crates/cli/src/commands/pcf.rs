use rayon::prelude::*;
use serde::Serialize;
use ttstar_core::reduced::{
    b_limit_consistency, pcf_residual, su11_field_residual, ReducedConnection, SymbolField, LAPLACE_FRAME_SCALE,
};
use ttstar_core::{deformation_b, su11_residual};

use super::{max_of, Check, Context, Outcome, ReportHead};
use crate::config::{Deformation, ModelKind};
use crate::error::{CliError, Result};
use crate::io::{num, read_symbol_table};

#[derive(Serialize)]
struct BRow {
    gamma: f64,
    b: f64,
    gap: f64,
}

#[derive(Serialize)]
struct PcfReport {
    #[serde(flatten)]
    head: ReportHead,
    gamma: f64,
    b: f64,
    degenerate: bool,
    field_equation_max: f64,
    pcf_max: f64,
    su11_max: f64,
    b_limit: Vec<BRow>,
    checks: Vec<Check>,
    passed: bool,
}

/// Two-chain field equation and its principal chiral limit on a 2x2 symbol
/// field over `[plane]`. Derivatives are taken in the Laplace frame `x = 2t`.
pub fn run(mut ctx: Context) -> Result<Outcome> {
    let cfg = ctx.loaded.config.clone();
    if cfg.model != ModelKind::ModelB {
        return Err(CliError::usage("pcf-check needs model = \"model_b\""));
    }
    let (gamma, degenerate) = match cfg.deformation(ctx.allow_degenerate)? {
        Deformation::Gamma(g) => (g, false),
        Deformation::Degenerate => (0.0, true),
    };
    let b = if degenerate { 0.0 } else { deformation_b(gamma) };
    let plane = cfg.plane_grid()?;
    let grid = plane.scaled(LAPLACE_FRAME_SCALE);
    let path = ctx.loaded.input("field", cfg.inputs.field.as_ref())?;
    let table = read_symbol_table(&path, cfg.theta_samples)?;
    if table.chains != 2 {
        return Err(CliError::usage(format!(
            "the field must be 2x2, got {0}x{0}",
            table.chains
        )));
    }
    let expected: Vec<(usize, usize)> = (0..plane.n1).flat_map(|i| (0..plane.n2).map(move |j| (i, j))).collect();
    if table.nodes.len() != expected.len() || table.nodes.iter().zip(&expected).any(|(a, b)| a.0 != *b) {
        return Err(CliError::usage(format!(
            "field table must list the {}x{} plane nodes in (i, j) order",
            plane.n1, plane.n2
        )));
    }
    let samples = table.nodes.into_iter().flat_map(|(_, s)| s).collect();
    let field = SymbolField::new(grid, cfg.theta_samples, samples)?;

    let su11: Vec<f64> = expected
        .par_iter()
        .map(|&(i, j)| su11_residual(&field.symbol_at(i, j)?, 1.0))
        .collect::<std::result::Result<_, ttstar_core::Error>>()?;
    let conn = ReducedConnection::new(field.clone(), b)?;
    let interior = grid.interior_nodes();
    let residuals: Vec<(f64, f64)> = interior
        .par_iter()
        .map(|&node| Ok((su11_field_residual(&conn, node)?, pcf_residual(&field, node)?)))
        .collect::<std::result::Result<_, ttstar_core::Error>>()?;
    let b_limit = b_limit_consistency(&field, &cfg.pcf.gammas)?;

    let rows: Vec<Vec<String>> = interior
        .iter()
        .zip(&residuals)
        .map(|(&(i, j), &(e, p))| {
            let (x1, x2) = grid.point(i, j);
            vec![i.to_string(), j.to_string(), num(x1), num(x2), num(e), num(p)]
        })
        .collect();
    let b_rows: Vec<Vec<String>> = b_limit
        .iter()
        .map(|r| vec![num(r.gamma), num(r.b), num(r.gap)])
        .collect();

    let field_max = max_of(residuals.iter().map(|r| r.0));
    let pcf_max = max_of(residuals.iter().map(|r| r.1));
    let su11_max = max_of(su11.iter().copied());
    let tol = &cfg.tolerances;
    let checks = vec![
        Check::new("su11", su11_max, tol.su11),
        if degenerate {
            Check::new("principal_chiral", pcf_max, tol.field_equation)
        } else {
            Check::new("field_equation", field_max, tol.field_equation)
        },
    ];
    let passed = checks.iter().all(|c| c.passed);
    let report = PcfReport {
        head: ctx.head(&[("field", &path)])?,
        gamma,
        b,
        degenerate,
        field_equation_max: field_max,
        pcf_max,
        su11_max,
        b_limit: b_limit
            .iter()
            .map(|r| BRow {
                gamma: r.gamma,
                b: r.b,
                gap: r.gap,
            })
            .collect(),
        checks,
        passed,
    };
    ctx.json("pcf_report.json", &report)?;
    ctx.csv(
        "pcf_residuals.csv",
        &["i", "j", "x1", "x2", "field_equation", "pcf"],
        &rows,
    )?;
    ctx.csv("b_limit.csv", &["gamma", "b", "gap"], &b_rows)?;
    Ok(ctx.finish(passed))
}
