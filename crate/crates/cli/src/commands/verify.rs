use rayon::prelude::*;
use serde::Serialize;
use ttstar_core::{
    commutator_identity_residual, coupling_matrix, eta_matrix, find_critical_chains, fourier_expand, interior_max_norm,
    invariance_check, symbol_reality_residual, zero_curvature_operator, CMatrix64, Complex64, MetricField,
    MetricSymbol,
};

use super::{max_of, Check, Context, Outcome, ReportHead};
use crate::error::{CliError, Result};
use crate::io::{num, read_symbol_table};

#[derive(Serialize)]
struct VerifyReport {
    #[serde(flatten)]
    head: ReportHead,
    truncation: usize,
    theta_samples: usize,
    chains: usize,
    nodes: usize,
    checks: Vec<Check>,
    passed: bool,
}

struct NodeResult {
    reality: Option<f64>,
    invariance: f64,
    commutator: f64,
    matrix: CMatrix64,
}

/// Reality, Toeplitz invariance, commutator identity and zero curvature of a
/// grid of symbols over the `[plane]` section.
pub fn run(mut ctx: Context) -> Result<Outcome> {
    let cfg = ctx.loaded.config.clone();
    let gamma = cfg.gamma()?;
    let chains = find_critical_chains(&cfg.potential()?, cfg.truncation)?;
    let plane = cfg.plane_grid()?;
    let path = ctx.loaded.input("symbols", cfg.inputs.symbols.as_ref())?;
    let table = read_symbol_table(&path, cfg.theta_samples)?;
    let r = chains.chain_count();
    if table.chains != r {
        return Err(CliError::usage(format!(
            "symbols have {} chains, the model has {r}",
            table.chains
        )));
    }
    let expected: Vec<(usize, usize)> = (0..plane.n1).flat_map(|i| (0..plane.n2).map(move |j| (i, j))).collect();
    if table.nodes.len() != expected.len() || table.nodes.iter().zip(&expected).any(|(a, b)| a.0 != *b) {
        return Err(CliError::usage(format!(
            "symbol table must list the {}x{} plane nodes in (i, j) order",
            plane.n1, plane.n2
        )));
    }
    let with_reality = cfg.model != crate::config::ModelKind::Custom;

    let per_node: Vec<NodeResult> = table
        .nodes
        .par_iter()
        .map(|((i, j), samples)| {
            let (t1, t2) = plane.point(*i, *j);
            let s = MetricSymbol::new(cfg.theta_samples, r, samples.clone())?;
            let reality = if with_reality {
                Some(symbol_reality_residual(&s, Complex64::new(t1, t2), gamma)?)
            } else {
                None
            };
            let trunc = fourier_expand(&s, cfg.truncation)?;
            Ok(NodeResult {
                reality,
                invariance: invariance_check(trunc.matrix(), r)?,
                commutator: commutator_identity_residual(&s, &chains)?,
                matrix: trunc.into_matrix(),
            })
        })
        .collect::<std::result::Result<_, ttstar_core::Error>>()?;

    let field = MetricField::general(
        plane,
        per_node.iter().map(|n| n.matrix.clone()).collect(),
        eta_matrix(&chains),
    )?;
    let c = coupling_matrix(&chains);
    let curvature: Vec<Option<f64>> = expected
        .par_iter()
        .map(|&(i, j)| {
            if !plane.is_interior(i, j) {
                return Ok(None);
            }
            let op = zero_curvature_operator(&field, &c, (i, j))?;
            Ok(Some(interior_max_norm(&op, cfg.truncation, r)))
        })
        .collect::<std::result::Result<_, ttstar_core::Error>>()?;

    let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
    let rows: Vec<Vec<String>> = expected
        .iter()
        .zip(&per_node)
        .zip(&curvature)
        .map(|((&(i, j), n), zc)| {
            let (t1, t2) = plane.point(i, j);
            vec![
                i.to_string(),
                j.to_string(),
                num(t1),
                num(t2),
                opt(n.reality),
                num(n.invariance),
                num(n.commutator),
                opt(*zc),
            ]
        })
        .collect();

    let tol = &cfg.tolerances;
    let mut checks = Vec::new();
    if with_reality {
        checks.push(Check::new(
            "reality",
            max_of(per_node.iter().filter_map(|n| n.reality)),
            tol.reality,
        ));
    }
    checks.push(Check::new(
        "invariance",
        max_of(per_node.iter().map(|n| n.invariance)),
        tol.invariance,
    ));
    checks.push(Check::new(
        "commutator_identity",
        max_of(per_node.iter().map(|n| n.commutator)),
        tol.commutator,
    ));
    checks.push(Check::new(
        "zero_curvature",
        max_of(curvature.iter().flatten().copied()),
        tol.zero_curvature,
    ));
    let passed = checks.iter().all(|c| c.passed);

    let report = VerifyReport {
        head: ctx.head(&[("symbols", &path)])?,
        truncation: cfg.truncation,
        theta_samples: cfg.theta_samples,
        chains: r,
        nodes: expected.len(),
        checks,
        passed,
    };
    ctx.json("verify_report.json", &report)?;
    ctx.csv(
        "verify_residuals.csv",
        &[
            "i",
            "j",
            "t1",
            "t2",
            "reality",
            "invariance",
            "commutator_identity",
            "zero_curvature",
        ],
        &rows,
    )?;
    Ok(ctx.finish(passed))
}
