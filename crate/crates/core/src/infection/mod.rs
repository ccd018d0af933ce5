//! The (mu, p) independent-cascade infection objective.
//!
//! Every vertex is infected by nature with probability `mu`; each newly
//! infected vertex then gets a single chance to pass the infection to each
//! uninfected neighbor, succeeding with probability `p`. The expected
//! infected fraction equals `1 - E[sum_v (1-mu)^|C(v)|] / |V|` under
//! p-edge percolation, which is how [`infected_fraction_exact`] computes it.

mod cascade;
mod star;
mod threshold;

use serde::Serialize;

use crate::error::{check_probability, invalid, Result};
use crate::graph::BipartiteGraph;
use crate::percolation::{
    exact_expectation_limited, Functional, PercParams, DEFAULT_EXACT_EDGE_LIMIT,
};

pub use cascade::{cascade_sample, infected_fraction_mc, run_cascade, InfectedSet};
pub use star::{
    delta_diagnostics, kdd_exact, kdd_exact_limited, kdn_exact, kdn_limit, l_prob, r_prob,
    star_expected_fraction, star_limit, DeltaDiagnostics,
};
pub use threshold::{
    cascade_as_threshold, star_threshold_exact, threshold_cascade_sample, threshold_fraction_mc,
    ThresholdDistribution,
};

/// Nature infection probability `mu` and per-edge transmission probability `p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InfectionParams {
    pub mu: f64,
    pub p: f64,
}

impl InfectionParams {
    pub fn new(mu: f64, p: f64) -> Result<Self> {
        check_probability("mu", mu)?;
        check_probability("p", p)?;
        Ok(InfectionParams { mu, p })
    }

    pub(crate) fn y(&self) -> f64 {
        1.0 - self.mu * self.p
    }
}

/// Exact expected infected fraction of `g`.
pub fn infected_fraction_exact(g: &BipartiteGraph, ip: InfectionParams) -> Result<f64> {
    infected_fraction_exact_limited(g, ip, DEFAULT_EXACT_EDGE_LIMIT)
}

pub fn infected_fraction_exact_limited(
    g: &BipartiteGraph,
    ip: InfectionParams,
    edge_limit: usize,
) -> Result<f64> {
    if g.vertex_count() == 0 {
        return Err(invalid("graph has no vertices"));
    }
    let escape = exact_expectation_limited(
        g,
        PercParams { p: ip.p },
        Functional::EscapeWeight { mu: ip.mu },
        edge_limit,
    )?;
    Ok(1.0 - escape / g.vertex_count() as f64)
}

/// `base^exp`, multiplying directly up to exponent 64.
pub(crate) fn pow_int(base: f64, exp: usize) -> f64 {
    if exp <= 64 {
        (0..exp).fold(1.0, |acc, _| acc * base)
    } else {
        base.powi(exp as i32)
    }
}
