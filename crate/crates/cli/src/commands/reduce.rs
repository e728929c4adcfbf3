use rayon::prelude::*;
use serde::Serialize;
use ttstar_core::{
    commutator_identity_residual, find_critical_chains, fourier_expand, fourier_reduce, invariance_check,
    model_b_normalization, rescale_d, su11_residual, symbol_reality_residual, CMatrix64, Complex64, MetricSymbol,
};

use super::{max_of, Check, Context, Outcome, ReportHead};
use crate::config::ModelKind;
use crate::error::{CliError, Result};
use crate::io::{num, read_symbol_table, symbol_header, symbol_rows};

#[derive(Serialize)]
struct ReduceReport {
    #[serde(flatten)]
    head: ReportHead,
    truncation: usize,
    theta_samples: usize,
    chains: usize,
    nodes: usize,
    /// `max ‖fourier_reduce(fourier_expand(s)) - s‖`; zero for symbols band-limited to `N`.
    round_trip: f64,
    checks: Vec<Check>,
    passed: bool,
}

struct NodeResult {
    coupling: Complex64,
    reality: Option<f64>,
    su11: Option<f64>,
    invariance: f64,
    commutator: f64,
    round_trip: f64,
    toeplitz: CMatrix64,
    reduced: Vec<CMatrix64>,
    rescaled: Option<Vec<CMatrix64>>,
}

/// Toeplitz truncation of each symbol, its reduction back to a symbol, and the
/// chain-reduction checks. Without a `[plane]` section the table holds one
/// node `(0, 0)` at the configured `t`.
pub fn run(mut ctx: Context) -> Result<Outcome> {
    let cfg = ctx.loaded.config.clone();
    let gamma = cfg.gamma()?;
    let chains = find_critical_chains(&cfg.potential()?, cfg.truncation)?;
    let path = ctx.loaded.input("symbols", cfg.inputs.symbols.as_ref())?;
    let table = read_symbol_table(&path, cfg.theta_samples)?;
    let r = chains.chain_count();
    if table.chains != r {
        return Err(CliError::usage(format!(
            "symbols have {} chains, the model has {r}",
            table.chains
        )));
    }
    let coupling_at = |node: (usize, usize)| -> Result<Complex64> {
        match &cfg.plane {
            Some(_) => {
                let plane = cfg.plane_grid()?;
                if node.0 >= plane.n1 || node.1 >= plane.n2 {
                    return Err(CliError::usage(format!("node {node:?} lies outside the plane")));
                }
                let (a, b) = plane.point(node.0, node.1);
                Ok(Complex64::new(a, b))
            }
            None if node == (0, 0) => Ok(cfg.coupling()),
            None => Err(CliError::usage(
                "without [plane] the symbol table must hold the single node (0, 0)",
            )),
        }
    };
    let couplings = table
        .nodes
        .iter()
        .map(|(node, _)| coupling_at(*node))
        .collect::<Result<Vec<_>>>()?;
    let with_reality = cfg.model != ModelKind::Custom;

    let per_node: Vec<NodeResult> = table
        .nodes
        .par_iter()
        .zip(&couplings)
        .map(|((_, samples), &t)| {
            let s = MetricSymbol::new(cfg.theta_samples, r, samples.clone())?;
            let trunc = fourier_expand(&s, cfg.truncation)?;
            let back = fourier_reduce(&trunc, cfg.theta_samples)?;
            let (su11, rescaled) = match gamma {
                Some(g) => {
                    let tilde = rescale_d(&s, g)?;
                    (
                        Some(su11_residual(&tilde, model_b_normalization(t, g))?),
                        Some(tilde.samples().to_vec()),
                    )
                }
                None => (None, None),
            };
            Ok(NodeResult {
                coupling: t,
                reality: if with_reality {
                    Some(symbol_reality_residual(&s, t, gamma)?)
                } else {
                    None
                },
                su11,
                invariance: invariance_check(trunc.matrix(), r)?,
                commutator: commutator_identity_residual(&s, &chains)?,
                round_trip: back.max_deviation(&s)?,
                reduced: back.samples().to_vec(),
                toeplitz: trunc.into_matrix(),
                rescaled,
            })
        })
        .collect::<std::result::Result<_, ttstar_core::Error>>()?;

    let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
    let node_rows: Vec<Vec<String>> = table
        .nodes
        .iter()
        .zip(&per_node)
        .map(|(((i, j), _), n)| {
            vec![
                i.to_string(),
                j.to_string(),
                num(n.coupling.re),
                num(n.coupling.im),
                opt(n.reality),
                opt(n.su11),
                num(n.invariance),
                num(n.commutator),
                num(n.round_trip),
            ]
        })
        .collect();
    let mut toeplitz_rows = Vec::new();
    let mut reduced_rows = Vec::new();
    let mut rescaled_rows = Vec::new();
    for ((node, _), n) in table.nodes.iter().zip(&per_node) {
        let dim = n.toeplitz.rows();
        for a in 0..dim {
            for b in 0..dim {
                let z = n.toeplitz[(a, b)];
                toeplitz_rows.push(vec![
                    node.0.to_string(),
                    node.1.to_string(),
                    a.to_string(),
                    b.to_string(),
                    num(z.re),
                    num(z.im),
                ]);
            }
        }
        reduced_rows.extend(symbol_rows(*node, &n.reduced));
        if let Some(s) = &n.rescaled {
            rescaled_rows.extend(symbol_rows(*node, s));
        }
    }

    let tol = &cfg.tolerances;
    let mut checks = Vec::new();
    if with_reality {
        checks.push(Check::new(
            "reality",
            max_of(per_node.iter().filter_map(|n| n.reality)),
            tol.reality,
        ));
    }
    if gamma.is_some() {
        checks.push(Check::new(
            "su11",
            max_of(per_node.iter().filter_map(|n| n.su11)),
            tol.su11,
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
    let passed = checks.iter().all(|c| c.passed);

    let report = ReduceReport {
        head: ctx.head(&[("symbols", &path)])?,
        truncation: cfg.truncation,
        theta_samples: cfg.theta_samples,
        chains: r,
        nodes: per_node.len(),
        round_trip: max_of(per_node.iter().map(|n| n.round_trip)),
        checks,
        passed,
    };
    ctx.json("reduce_report.json", &report)?;
    ctx.csv(
        "reduce_nodes.csv",
        &[
            "i",
            "j",
            "t1",
            "t2",
            "reality",
            "su11",
            "invariance",
            "commutator_identity",
            "round_trip",
        ],
        &node_rows,
    )?;
    ctx.csv("toeplitz.csv", &["i", "j", "row", "col", "re", "im"], &toeplitz_rows)?;
    let header = symbol_header(r);
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    ctx.csv("reduced_symbols.csv", &header, &reduced_rows)?;
    if gamma.is_some() {
        ctx.csv("rescaled_symbols.csv", &header, &rescaled_rows)?;
    }
    Ok(ctx.finish(passed))
}
