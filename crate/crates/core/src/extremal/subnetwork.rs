//! The optimal bipartite subnetwork problem: keep a subset of a host graph's
//! edges so every R vertex retains degree at least `d`, minimizing the
//! infected fraction.
//!
//! Removing an edge never increases the objective, so some minimizer keeps
//! exactly `d` edges at every R vertex; both solvers search those
//! selections.

use std::collections::HashMap;

use rand::Rng;
use serde::Serialize;

use super::SearchResult;
use crate::error::{Error, Result};
use crate::graph::{
    canonical_form, BipartiteGraph, CanonicalForm, ComponentCode, DegreeConstraint,
};
use crate::infection::{infected_fraction_mc, InfectionParams};
use crate::percolation::{
    exact_expectation_limited, Functional, PercParams, DEFAULT_EXACT_EDGE_LIMIT,
};
use crate::rng::substream;

/// Largest host graph [`best_subnetwork_exact`] accepts.
pub const SUBNETWORK_EDGE_LIMIT: usize = 20;

/// Samples per Monte Carlo evaluation when a candidate is too large for the
/// exact engine.
const LOCAL_MC_SAMPLES: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubnetworkInstance {
    pub graph: BipartiteGraph,
    #[serde(serialize_with = "serialize_constraint")]
    pub d: DegreeConstraint,
    /// Largest number of isolated L vertices a solution can have when the
    /// encoded problem is a yes-instance (set by reductions).
    pub certificate: Option<usize>,
}

fn serialize_constraint<S: serde::Serializer>(
    c: &DegreeConstraint,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(c.d as u64)
}

impl SubnetworkInstance {
    pub fn new(graph: BipartiteGraph, d: usize) -> Self {
        SubnetworkInstance {
            graph,
            d: DegreeConstraint::new(d),
            certificate: None,
        }
    }

    /// Every R vertex has at least `d` edges to choose from.
    pub fn is_feasible(&self) -> bool {
        self.graph.right_degrees().iter().all(|&x| x >= self.d.d)
    }

    fn check_feasible(&self) -> Result<()> {
        let degrees = self.graph.right_degrees();
        match degrees.iter().position(|&x| x < self.d.d) {
            Some(r) => Err(Error::Infeasible(format!(
                "R vertex {r} has degree {} < d = {}",
                degrees[r], self.d.d
            ))),
            None => Ok(()),
        }
    }

    /// Edge indices incident to each R vertex.
    fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.graph.n_right()];
        for (i, &(_, r)) in self.graph.edges().iter().enumerate() {
            inc[r].push(i);
        }
        inc
    }
}

/// Number of L vertices with no edges.
pub fn isolated_left_count(g: &BipartiteGraph) -> usize {
    g.left_degrees().iter().filter(|&&x| x == 0).count()
}

/// Parameters under which minimizing the infected fraction of a graph on
/// `vertices` vertices is the same as maximizing its isolated vertices:
/// `p = 1` and `1 - mu = 1 / vertices^2`, so one extra isolated vertex
/// outweighs every contribution from larger components.
pub fn isolation_regime(vertices: usize) -> InfectionParams {
    let v = vertices.max(2) as f64;
    InfectionParams {
        mu: 1.0 - 1.0 / (v * v),
        p: 1.0,
    }
}

/// Exact infected fraction with per-component caching: the escape weight is
/// additive over components, and isomorphic components share a value.
#[derive(Debug)]
pub struct SubnetworkEvaluator {
    ip: InfectionParams,
    edge_limit: usize,
    cache: HashMap<ComponentCode, f64>,
}

impl SubnetworkEvaluator {
    pub fn new(ip: InfectionParams) -> Self {
        Self::with_limit(ip, DEFAULT_EXACT_EDGE_LIMIT)
    }

    /// `edge_limit` applies to each connected component.
    pub fn with_limit(ip: InfectionParams, edge_limit: usize) -> Self {
        SubnetworkEvaluator {
            ip,
            edge_limit,
            cache: HashMap::new(),
        }
    }

    pub fn value(&mut self, g: &BipartiteGraph) -> Result<f64> {
        let form = canonical_form(g)?;
        let q = 1.0 - self.ip.mu;
        let mut escape = (form.isolated_left + form.isolated_right) as f64 * q;
        for code in form.components {
            escape += match self.cache.get(&code) {
                Some(&v) => v,
                None => {
                    let single = CanonicalForm {
                        components: vec![code.clone()],
                        isolated_left: 0,
                        isolated_right: 0,
                    }
                    .to_graph();
                    let v = exact_expectation_limited(
                        &single,
                        PercParams { p: self.ip.p },
                        Functional::EscapeWeight { mu: self.ip.mu },
                        self.edge_limit,
                    )?;
                    self.cache.insert(code, v);
                    v
                }
            };
        }
        Ok(1.0 - escape / g.vertex_count() as f64)
    }
}

/// Exhaustive search over all selections of exactly `d` edges per R vertex.
pub fn best_subnetwork_exact(
    inst: &SubnetworkInstance,
    ip: InfectionParams,
) -> Result<SearchResult> {
    inst.check_feasible()?;
    if inst.graph.edge_count() > SUBNETWORK_EDGE_LIMIT {
        return Err(Error::Capacity {
            what: "host edges for exhaustive subnetwork search",
            limit: SUBNETWORK_EDGE_LIMIT,
            actual: inst.graph.edge_count(),
        });
    }
    let d = inst.d.d;
    let choices: Vec<Vec<Vec<usize>>> = inst
        .incidence()
        .iter()
        .map(|inc| combinations(inc, d))
        .collect();
    let mut evaluator = SubnetworkEvaluator::new(ip);
    let mut candidates = Vec::new();
    let mut values = Vec::new();
    let mut cursor = vec![0usize; choices.len()];
    loop {
        let mut keep = vec![false; inst.graph.edge_count()];
        for (r, &c) in cursor.iter().enumerate() {
            for &e in &choices[r][c] {
                keep[e] = true;
            }
        }
        let g = inst.graph.edge_subgraph(|i| keep[i]);
        values.push(evaluator.value(&g)?);
        candidates.push(g);
        match (0..cursor.len())
            .rev()
            .find(|&r| cursor[r] + 1 < choices[r].len())
        {
            Some(r) => {
                cursor[r] += 1;
                cursor[r + 1..].fill(0);
            }
            None => break,
        }
    }
    SearchResult::from_values(candidates, &values)
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Keeps, at each R vertex, the `d` edges whose L endpoints have the lowest
/// degree in the host graph (ties to the lower index).
pub fn greedy_truncation(inst: &SubnetworkInstance) -> Result<BipartiteGraph> {
    inst.check_feasible()?;
    let keep = greedy_selection(inst);
    Ok(inst.graph.edge_subgraph(|i| keep[i]))
}

fn greedy_selection(inst: &SubnetworkInstance) -> Vec<bool> {
    let left_deg = inst.graph.left_degrees();
    let edges = inst.graph.edges();
    let mut keep = vec![false; edges.len()];
    for mut inc in inst.incidence() {
        inc.sort_by_key(|&e| (left_deg[edges[e].0], edges[e].0));
        for &e in inc.iter().take(inst.d.d) {
            keep[e] = true;
        }
    }
    keep
}

/// Randomized local search from the greedy truncation. Each step picks an R
/// vertex with spare host edges and either drops one of its kept edges (if
/// it has more than `d`) or swaps a kept edge for an unkept one; moves that
/// do not make things worse are accepted. Candidates are scored exactly
/// when every component fits the exact engine, by Monte Carlo otherwise.
pub fn best_subnetwork_local(
    inst: &SubnetworkInstance,
    ip: InfectionParams,
    iterations: usize,
    seed: u64,
) -> Result<SearchResult> {
    inst.check_feasible()?;
    local_search(inst, ip, greedy_selection(inst), iterations, seed)
}

fn local_search(
    inst: &SubnetworkInstance,
    ip: InfectionParams,
    start: Vec<bool>,
    iterations: usize,
    seed: u64,
) -> Result<SearchResult> {
    let d = inst.d.d;
    let incidence = inst.incidence();
    let movable: Vec<usize> = (0..incidence.len())
        .filter(|&r| incidence[r].len() > d)
        .collect();
    let mut evaluator = SubnetworkEvaluator::new(ip);
    let mut score = |keep: &[bool], step: u64| -> Result<f64> {
        let g = inst.graph.edge_subgraph(|i| keep[i]);
        match evaluator.value(&g) {
            Err(Error::Capacity { .. }) => {
                Ok(
                    infected_fraction_mc(&g, ip, LOCAL_MC_SAMPLES, seed ^ step.rotate_left(32))?
                        .mean,
                )
            }
            other => other,
        }
    };

    let mut keep = start;
    let mut current = score(&keep, 0)?;
    let mut best = (keep.clone(), current);
    let mut evaluated = 1;
    let mut rng = substream(seed, 0);
    for step in 1..=iterations as u64 {
        if movable.is_empty() {
            break;
        }
        let r = movable[rng.random_range(0..movable.len())];
        let (kept, spare): (Vec<usize>, Vec<usize>) = incidence[r].iter().partition(|&&e| keep[e]);
        let mut candidate = keep.clone();
        if kept.len() > d && (spare.is_empty() || rng.random_bool(0.5)) {
            candidate[kept[rng.random_range(0..kept.len())]] = false;
        } else if !spare.is_empty() {
            candidate[kept[rng.random_range(0..kept.len())]] = false;
            candidate[spare[rng.random_range(0..spare.len())]] = true;
        } else {
            continue;
        }
        let value = score(&candidate, step)?;
        evaluated += 1;
        if value <= current {
            keep = candidate;
            current = value;
            if value < best.1 {
                best = (keep.clone(), value);
            }
        }
    }
    Ok(SearchResult {
        minimizers: vec![inst.graph.edge_subgraph(|i| best.0[i])],
        value: best.1,
        evaluated_count: evaluated,
    })
}
