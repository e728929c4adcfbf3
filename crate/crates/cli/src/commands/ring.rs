use serde::Serialize;
use ttstar_core::{coupling_diagonal, eta_matrix, find_critical_chains, model_b_constants};

use super::{Context, Outcome, ReportHead};
use crate::config::ModelKind;
use crate::error::Result;
use crate::io::{num, pair};

#[derive(Serialize)]
struct ChainRow {
    base_point: [f64; 2],
    hessian: [f64; 2],
    dwdt_base: [f64; 2],
}

#[derive(Serialize)]
struct Constants {
    a: f64,
    b: f64,
}

#[derive(Serialize)]
struct RingReport {
    #[serde(flatten)]
    head: ReportHead,
    model: ModelKind,
    t: [f64; 2],
    gamma: Option<f64>,
    truncation: usize,
    constants: Option<Constants>,
    chains: Vec<ChainRow>,
    labels: Vec<(usize, i64)>,
    eta_diagonal: Vec<[f64; 2]>,
    c_diagonal: Vec<[f64; 2]>,
}

/// Chains, Hessians, η and the coupling diagonal at the configured `t`.
pub fn run(mut ctx: Context) -> Result<Outcome> {
    let cfg = ctx.loaded.config.clone();
    let gamma = cfg.gamma()?;
    let chains = find_critical_chains(&cfg.potential()?, cfg.truncation)?;
    let eta = eta_matrix(&chains).diagonal();
    let c = coupling_diagonal(&chains);
    let labels: Vec<(usize, i64)> = chains.labels().collect();

    let rows: Vec<Vec<String>> = labels
        .iter()
        .enumerate()
        .map(|(idx, &(r, j))| {
            let x = chains.point(r, j);
            let h = chains.chains()[r].hessian;
            vec![r.to_string(), j.to_string(), num(x.re), num(x.im), num(h.re), num(h.im)]
                .into_iter()
                .chain([num(eta[idx].re), num(eta[idx].im), num(c[idx].re), num(c[idx].im)])
                .collect()
        })
        .collect();
    let report = RingReport {
        head: ctx.head(&[])?,
        model: cfg.model,
        t: cfg.t,
        gamma,
        truncation: cfg.truncation,
        constants: gamma.map(|g| {
            let (a, b) = model_b_constants(g);
            Constants { a, b }
        }),
        chains: chains
            .chains()
            .iter()
            .map(|ch| ChainRow {
                base_point: pair(ch.base_point),
                hessian: pair(ch.hessian),
                dwdt_base: pair(ch.dwdt_base),
            })
            .collect(),
        labels: labels.clone(),
        eta_diagonal: eta.iter().copied().map(pair).collect(),
        c_diagonal: c.iter().copied().map(pair).collect(),
    };
    ctx.json("ring_report.json", &report)?;
    ctx.csv(
        "ring_points.csv",
        &[
            "chain",
            "j",
            "x_re",
            "x_im",
            "hessian_re",
            "hessian_im",
            "eta_re",
            "eta_im",
            "c_re",
            "c_im",
        ],
        &rows,
    )?;
    Ok(ctx.finish(true))
}
