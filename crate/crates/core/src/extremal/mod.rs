//! Extremal questions: which half-regular graph minimizes the infected
//! fraction, where `K_{d,d}` decompositions beat `K_{d,n}`, and the optimal
//! subnetwork problem with its reduction instances.

mod phase;
mod reduction;
mod subnetwork;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{canonical_form, enumerate_half_regular, gen_kdd, gen_kdn, BipartiteGraph};
use crate::infection::{infected_fraction_exact_limited, InfectionParams};
use crate::percolation::DEFAULT_EXACT_EDGE_LIMIT;

pub use phase::{
    phase_boundary, phase_region, phase_region_with, uniform_grid, PhaseDiagram, PhaseMode, Winner,
    DEFAULT_TIE_TOL,
};
pub use reduction::{
    kdd_decomposition_exists, reduce_clique_decomposition, reduce_exact_cover, solve_exact_cover,
    ExactCoverInstance, KddBlock, MAX_DECOMPOSITION_VERTICES,
};
pub use subnetwork::{
    best_subnetwork_exact, best_subnetwork_local, greedy_truncation, isolated_left_count,
    isolation_regime, SubnetworkEvaluator, SubnetworkInstance, SUBNETWORK_EDGE_LIMIT,
};

/// Values within this distance of the minimum count as tied minimizers.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchResult {
    /// Every candidate within [`TIE_TOLERANCE`] of `value`, in search order.
    pub minimizers: Vec<BipartiteGraph>,
    pub value: f64,
    pub evaluated_count: usize,
}

impl SearchResult {
    /// Whether some minimizer is isomorphic to `g`.
    pub fn contains_isomorph(&self, g: &BipartiteGraph) -> bool {
        let Ok(target) = canonical_form(g) else {
            return false;
        };
        self.minimizers
            .iter()
            .any(|m| canonical_form(m).is_ok_and(|f| f == target))
    }

    pub(crate) fn from_values(candidates: Vec<BipartiteGraph>, values: &[f64]) -> Result<Self> {
        let value = values.iter().copied().fold(f64::INFINITY, f64::min);
        if !value.is_finite() {
            return Err(Error::Infeasible("no candidate graphs".into()));
        }
        let minimizers = candidates
            .into_iter()
            .zip(values)
            .filter(|&(_, &v)| v - value <= TIE_TOLERANCE)
            .map(|(g, _)| g)
            .collect();
        Ok(SearchResult {
            minimizers,
            value,
            evaluated_count: values.len(),
        })
    }
}

/// Exhaustive minimum of the exact infected fraction over all balanced
/// graphs with every R degree equal to `d`, up to isomorphism.
pub fn best_half_regular(n: usize, d: usize, ip: InfectionParams) -> Result<SearchResult> {
    let graphs: Vec<BipartiteGraph> = enumerate_half_regular(n, d).collect();
    minimize_over(graphs, ip, DEFAULT_EXACT_EDGE_LIMIT)
}

/// Exact minimum over an explicit candidate list.
pub fn minimize_over(
    graphs: Vec<BipartiteGraph>,
    ip: InfectionParams,
    edge_limit: usize,
) -> Result<SearchResult> {
    if let Some(big) = graphs.iter().find(|g| g.edge_count() > edge_limit) {
        return Err(Error::Capacity {
            what: "edges for exact percolation enumeration",
            limit: edge_limit,
            actual: big.edge_count(),
        });
    }
    let values = graphs
        .par_iter()
        .map(|g| infected_fraction_exact_limited(g, ip, edge_limit))
        .collect::<Result<Vec<f64>>>()?;
    SearchResult::from_values(graphs, &values)
}

/// Which candidate structures attain the optimum among half-`d`-regular
/// graphs on `n + n` vertices.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjectureReport {
    pub n: usize,
    pub d: usize,
    pub params: InfectionParams,
    pub optimum: f64,
    /// `None` when `d` does not divide `n`.
    pub kdd_optimal: Option<bool>,
    /// `K_{d,n}` with `n - d` isolated L vertices.
    pub kdn_optimal: bool,
    /// `K_{d,n}` with `n - 2` isolated L vertices. Only a balanced graph
    /// when `d = 2`, where it is the same graph as the `n - d` reading.
    pub kdn_n_minus_2_optimal: Option<bool>,
}

impl ConjectureReport {
    /// Whether a `K_{d,d}` decomposition or `K_{d,n}` is among the minimizers.
    pub fn holds(&self) -> bool {
        self.kdd_optimal == Some(true) || self.kdn_optimal
    }
}

/// Tests the conjectured dichotomy on one parameter point by exhaustive
/// search.
pub fn conjecture_check(n: usize, d: usize, ip: InfectionParams) -> Result<ConjectureReport> {
    let result = best_half_regular(n, d, ip)?;
    let kdn_optimal = result.contains_isomorph(&gen_kdn(n, d)?);
    Ok(ConjectureReport {
        n,
        d,
        params: ip,
        optimum: result.value,
        kdd_optimal: gen_kdd(n, d).ok().map(|g| result.contains_isomorph(&g)),
        kdn_optimal,
        kdn_n_minus_2_optimal: (d == 2).then_some(kdn_optimal),
    })
}
