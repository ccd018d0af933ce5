use bipartite_resilience::extremal::{
    best_subnetwork_exact, best_subnetwork_local, isolated_left_count, isolation_regime,
    minimize_over, phase_region_with, reduce_clique_decomposition, reduce_exact_cover,
    uniform_grid, ExactCoverInstance, PhaseMode, SearchResult,
};
use bipartite_resilience::format::{fmt_real, round_real};
use bipartite_resilience::graph::{enumerate_half_regular, BipartiteGraph};
use bipartite_resilience::infection::{
    infected_fraction_exact_limited, infected_fraction_mc, star_expected_fraction,
    threshold_fraction_mc, ThresholdDistribution,
};
use bipartite_resilience::{Error, Estimate, InfectionParams};
use serde_json::{json, Value};

use crate::args::{
    EvalArgs, Format, ModelArgs, PhaseArgs, ReduceArgs, ReduceKind, SearchArgs, SimulateArgs,
    StarCurveArgs, SubnetArgs, SubnetMode,
};
use crate::plot::{line_plot, phase_raster};
use crate::source::{
    instance_text, load_graph, load_instance, parse_pairs, read_file, standard_name,
};
use crate::Failure;

enum Model {
    Cascade(InfectionParams),
    Threshold(ThresholdDistribution, String),
}

fn model(m: &ModelArgs) -> Result<Model, Failure> {
    match (&m.dist, m.mu, m.p) {
        (Some(lit), _, _) => Ok(Model::Threshold(
            ThresholdDistribution::parse(lit)?,
            lit.clone(),
        )),
        (None, Some(mu), Some(p)) => Ok(Model::Cascade(InfectionParams::new(mu, p)?)),
        _ => Err(Failure::usage("give --mu and --p, or --dist")),
    }
}

fn need_seed(seed: Option<u64>) -> Result<u64, Failure> {
    seed.ok_or_else(|| Failure::usage("--seed is required when sampling"))
}

fn no_svg(what: &str) -> Failure {
    Failure::usage(format!("svg output is not available for {what}"))
}

fn json_text(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
    s.push('\n');
    s
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn edge_list(g: &BipartiteGraph) -> String {
    g.edges()
        .iter()
        .map(|(l, r)| format!("{l}-{r}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn edges_json(g: &BipartiteGraph) -> Value {
    json!({ "n_left": g.n_left(), "n_right": g.n_right(), "edges": g.edges() })
}

/// Result of `eval` or `simulate`.
struct Report {
    graph: String,
    model: Model,
    method: &'static str,
    estimate: Estimate,
    seed: Option<u64>,
}

impl Report {
    fn render(&self, format: Format) -> Result<String, Failure> {
        let e = &self.estimate;
        let (mu, p, dist) = match &self.model {
            Model::Cascade(ip) => (Some(ip.mu), Some(ip.p), None),
            Model::Threshold(_, lit) => (None, None, Some(lit.as_str())),
        };
        let model_name = if dist.is_some() {
            "threshold"
        } else {
            "cascade"
        };
        Ok(match format {
            Format::Text if e.exact => format!("{}\n", fmt_real(e.mean)),
            Format::Text => format!(
                "{} +/- {} ({} samples)\n",
                fmt_real(e.mean),
                fmt_real(e.std_error),
                e.samples
            ),
            Format::Csv => {
                let opt = |x: Option<f64>| x.map(fmt_real).unwrap_or_default();
                let dist_field = dist.map(|d| format!("\"{d}\"")).unwrap_or_default();
                csv_text(
                    &[
                        "graph",
                        "model",
                        "mu",
                        "p",
                        "dist",
                        "method",
                        "value",
                        "std_error",
                        "samples",
                        "seed",
                    ],
                    &[vec![
                        self.graph.clone(),
                        model_name.into(),
                        opt(mu),
                        opt(p),
                        dist_field,
                        self.method.into(),
                        fmt_real(e.mean),
                        fmt_real(e.std_error),
                        e.samples.to_string(),
                        self.seed.map(|s| s.to_string()).unwrap_or_default(),
                    ]],
                )
            }
            Format::Json => json_text(json!({
                "graph": self.graph,
                "model": model_name,
                "mu": mu.map(round_real),
                "p": p.map(round_real),
                "dist": dist,
                "method": self.method,
                "value": round_real(e.mean),
                "std_error": round_real(e.std_error),
                "samples": e.samples,
                "seed": self.seed,
            })),
            Format::Svg => return Err(no_svg("single estimates")),
        })
    }
}

fn sample(
    g: &BipartiteGraph,
    model: &Model,
    samples: usize,
    seed: u64,
) -> Result<Estimate, Failure> {
    Ok(match model {
        Model::Cascade(ip) => infected_fraction_mc(g, *ip, samples, seed)?,
        Model::Threshold(dist, _) => threshold_fraction_mc(g, dist, samples, seed)?,
    })
}

pub fn eval(a: &EvalArgs, format: Format) -> Result<String, Failure> {
    let g = load_graph(&a.graph)?;
    let model = model(&a.model)?;
    let exact =
        match &model {
            Model::Cascade(ip) => match infected_fraction_exact_limited(&g, *ip, a.exact_limit) {
                Ok(v) => Some(v),
                Err(Error::Capacity { .. }) if a.mc => None,
                Err(e) => return Err(e.into()),
            },
            Model::Threshold(..) if a.mc => None,
            Model::Threshold(..) => return Err(Failure::usage(
                "the threshold model has no exact evaluator for general graphs; add --mc --seed",
            )),
        };
    let report = match exact {
        Some(v) => Report {
            graph: a.graph.clone(),
            model,
            method: "exact",
            estimate: Estimate::exact(v),
            seed: None,
        },
        None => {
            let seed = need_seed(a.seed)?;
            Report {
                graph: a.graph.clone(),
                method: "monte-carlo",
                estimate: sample(&g, &model, a.samples, seed)?,
                model,
                seed: Some(seed),
            }
        }
    };
    report.render(format)
}

pub fn simulate(a: &SimulateArgs, format: Format) -> Result<String, Failure> {
    let g = load_graph(&a.graph)?;
    let model = model(&a.model)?;
    let seed = need_seed(a.seed)?;
    let report = Report {
        graph: a.graph.clone(),
        method: "monte-carlo",
        estimate: sample(&g, &model, a.samples, seed)?,
        model,
        seed: Some(seed),
    };
    report.render(format)
}

pub fn star_curve(a: &StarCurveArgs, format: Format) -> Result<String, Failure> {
    if a.k_max == 0 {
        return Err(Failure::usage("--k-max must be at least 1"));
    }
    let ip = InfectionParams::new(a.mu, a.p)?;
    let rows = (1..=a.k_max)
        .map(|k| Ok((k, star_expected_fraction(k, ip)?)))
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(match format {
        Format::Text | Format::Csv => csv_text(
            &["k", "expected_fraction"],
            &rows
                .iter()
                .map(|&(k, v)| vec![k.to_string(), fmt_real(v)])
                .collect::<Vec<_>>(),
        ),
        Format::Json => json_text(json!({
            "mu": round_real(a.mu),
            "p": round_real(a.p),
            "rows": rows.iter().map(|&(k, v)| json!({ "k": k, "expected_fraction": round_real(v) })).collect::<Vec<_>>(),
        })),
        Format::Svg => line_plot(
            &format!("k-star, mu = {}, p = {}", fmt_real(a.mu), fmt_real(a.p)),
            "k",
            "expected infected fraction",
            &rows.iter().map(|&(k, v)| (k as f64, v)).collect::<Vec<_>>(),
        ),
    })
}

pub fn phase(a: &PhaseArgs, format: Format) -> Result<String, Failure> {
    let grid = uniform_grid(a.grid_steps);
    let mode = match a.finite {
        Some(n) => PhaseMode::Finite { n },
        None => PhaseMode::Limit,
    };
    let pd = phase_region_with(a.d, &grid, &grid, a.tie_tol, mode, a.exact_limit)?;
    Ok(match format {
        Format::Text | Format::Csv => pd.to_csv(),
        Format::Json => json_text(json!({
            "d": pd.d,
            "mode": match mode { PhaseMode::Limit => "limit".to_string(), PhaseMode::Finite { n } => format!("finite:{n}") },
            "tie_tol": a.tie_tol,
            "mu_grid": pd.mu_grid.iter().copied().map(round_real).collect::<Vec<_>>(),
            "p_grid": pd.p_grid.iter().copied().map(round_real).collect::<Vec<_>>(),
            "cells": pd.cells.iter().map(|row| row.iter().map(|w| w.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "deltas": pd.deltas.iter().map(|row| row.iter().copied().map(round_real).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })),
        Format::Svg => phase_raster(&pd),
    })
}

fn minimizer_rows(res: &SearchResult, d: usize) -> Vec<(String, &BipartiteGraph)> {
    res.minimizers
        .iter()
        .map(|g| (standard_name(g, d).unwrap_or_else(|| "other".into()), g))
        .collect()
}

pub fn search(a: &SearchArgs, format: Format) -> Result<String, Failure> {
    let ip = InfectionParams::new(a.mu, a.p)?;
    if a.d == 0 || a.d > a.n {
        return Err(Failure::usage("need 1 <= d <= n"));
    }
    let res = minimize_over(
        enumerate_half_regular(a.n, a.d).collect(),
        ip,
        a.exact_limit,
    )?;
    let rows = minimizer_rows(&res, a.d);
    Ok(match format {
        Format::Text => {
            let mut out = format!(
                "value {}\nevaluated {}\nminimizers {}\n",
                fmt_real(res.value),
                res.evaluated_count,
                rows.len()
            );
            for (i, (name, g)) in rows.iter().enumerate() {
                out.push_str(&format!("# minimizer {}: {name}\n{}", i + 1, g.to_text()));
            }
            out
        }
        Format::Csv => csv_text(
            &["rank", "name", "value", "edges"],
            &rows
                .iter()
                .enumerate()
                .map(|(i, (name, g))| {
                    vec![
                        (i + 1).to_string(),
                        name.clone(),
                        fmt_real(res.value),
                        edge_list(g),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
        Format::Json => json_text(json!({
            "n": a.n,
            "d": a.d,
            "mu": round_real(a.mu),
            "p": round_real(a.p),
            "value": round_real(res.value),
            "evaluated_count": res.evaluated_count,
            "minimizers": rows.iter().map(|(name, g)| {
                let mut v = edges_json(g);
                v["name"] = json!(name);
                v
            }).collect::<Vec<_>>(),
        })),
        Format::Svg => return Err(no_svg("search")),
    })
}

pub fn subnet(a: &SubnetArgs, format: Format) -> Result<String, Failure> {
    let inst = load_instance(&a.instance, a.d)?;
    let ip = if a.isolation {
        isolation_regime(inst.graph.vertex_count())
    } else {
        match (a.mu, a.p) {
            (Some(mu), Some(p)) => InfectionParams::new(mu, p)?,
            _ => return Err(Failure::usage("give --mu and --p, or --isolation")),
        }
    };
    let res = match a.mode {
        SubnetMode::Exact => best_subnetwork_exact(&inst, ip)?,
        SubnetMode::Local => best_subnetwork_local(&inst, ip, a.iterations, need_seed(a.seed)?)?,
    };
    let best = &res.minimizers[0];
    let isolated = isolated_left_count(best);
    let mode = match a.mode {
        SubnetMode::Exact => "exact",
        SubnetMode::Local => "local",
    };
    let certificate = inst
        .certificate
        .map(|c| c.to_string())
        .unwrap_or_else(|| "none".into());
    Ok(match format {
        Format::Text => format!(
            "value {}\nisolated_left {isolated}\ncertificate {certificate}\nevaluated {}\n{}",
            fmt_real(res.value),
            res.evaluated_count,
            best.to_text()
        ),
        Format::Csv => csv_text(
            &[
                "mode",
                "value",
                "isolated_left",
                "certificate",
                "evaluated",
                "edges",
            ],
            &[vec![
                mode.into(),
                fmt_real(res.value),
                isolated.to_string(),
                certificate,
                res.evaluated_count.to_string(),
                edge_list(best),
            ]],
        ),
        Format::Json => json_text(json!({
            "mode": mode,
            "d": inst.d.d,
            "mu": round_real(ip.mu),
            "p": round_real(ip.p),
            "value": round_real(res.value),
            "isolated_left": isolated,
            "certificate": inst.certificate,
            "evaluated_count": res.evaluated_count,
            "subnetwork": edges_json(best),
        })),
        Format::Svg => return Err(no_svg("subnet")),
    })
}

pub fn reduce(a: &ReduceArgs, format: Format) -> Result<String, Failure> {
    let text = read_file(&a.input)?;
    let inst = match a.kind {
        ReduceKind::ExactCover => {
            let cover: ExactCoverInstance = text.parse()?;
            reduce_exact_cover(cover.universe_size, &cover.sets, cover.k)?
        }
        ReduceKind::Clique => {
            let (n, pairs) = parse_pairs(&text)?;
            reduce_clique_decomposition(&pairs, n, a.d)?
        }
    };
    Ok(match format {
        Format::Text | Format::Csv => instance_text(&inst),
        Format::Json => json_text(json!({
            "d": inst.d.d,
            "certificate": inst.certificate,
            "graph": edges_json(&inst.graph),
        })),
        Format::Svg => return Err(no_svg("reduce")),
    })
}
