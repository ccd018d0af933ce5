//! Closed forms for stars, `K_{d,d}` blocks and the large-`n` `K_{d,n}`
//! configuration. A `k`-star here is one L center joined to `k` R leaves,
//! padded with `k - 1` isolated L vertices.

use super::{infected_fraction_exact_limited, pow_int, InfectionParams};
use crate::error::{invalid, Result};
use crate::graph::{gen_kdd, gen_kdn};
use crate::percolation::DEFAULT_EXACT_EDGE_LIMIT;

/// Probability that an L vertex of degree `j`, all of whose neighbors are
/// leaves, ends up infected.
pub fn l_prob(j: usize, ip: InfectionParams) -> f64 {
    1.0 - (1.0 - ip.mu) * pow_int(ip.y(), j)
}

/// Probability that a leaf attached to a center of degree `j` ends up
/// infected.
pub fn r_prob(j: usize, ip: InfectionParams) -> Result<f64> {
    if j == 0 {
        return Err(invalid("a leaf needs a center of degree at least 1"));
    }
    let InfectionParams { mu, p } = ip;
    Ok(mu + p - mu * p - (1.0 - mu) * (1.0 - mu) * p * pow_int(ip.y(), j - 1))
}

/// Expected infected fraction of a `k`-star with its `k - 1` isolated L vertices.
pub fn star_expected_fraction(k: usize, ip: InfectionParams) -> Result<f64> {
    if k == 0 {
        return Err(invalid("star size must be at least 1"));
    }
    let kf = k as f64;
    Ok((l_prob(k, ip) + (kf - 1.0) * l_prob(0, ip) + kf * r_prob(k, ip)?) / (2.0 * kf))
}

/// Limit of [`star_expected_fraction`] as the star grows. At `mu = 0`
/// nothing is ever infected, so the limit is 0.
pub fn star_limit(ip: InfectionParams) -> f64 {
    let InfectionParams { mu, p } = ip;
    if mu == 0.0 {
        return 0.0;
    }
    (mu + (mu + p - mu * p)) / 2.0
}

/// Normalized gaps between neighboring star sizes, all scaled by `1/(1-mu)`:
/// `d = (E[I_k] - E[I_1]) / (1-mu)`,
/// `delta1 = 2 (E[I_{k-1}] - E[I_k]) / (1-mu)`,
/// `delta2 = 2 (E[I_k] - E[I_{k+1}]) / (1-mu)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeltaDiagnostics {
    pub d: f64,
    pub delta1: f64,
    pub delta2: f64,
}

/// Evaluates the gaps from their expanded forms in `y = 1 - mu p`.
pub fn delta_diagnostics(k: usize, ip: InfectionParams) -> Result<DeltaDiagnostics> {
    if k < 2 {
        return Err(invalid("delta diagnostics need k >= 2"));
    }
    if ip.mu >= 1.0 {
        return Err(invalid(
            "delta diagnostics divide by 1 - mu; mu must be below 1",
        ));
    }
    let InfectionParams { mu, p } = ip;
    let y = ip.y();
    let kf = k as f64;
    let yk = pow_int(y, k);
    let yk1 = pow_int(y, k - 1);
    let yk2 = pow_int(y, k - 2);
    let d = (1.0 - yk) / (2.0 * kf) + p / 2.0 - (1.0 - mu) * p * yk1 / 2.0 - mu * p;
    let delta1 =
        1.0 / (kf - 1.0) - 1.0 / kf + yk / kf - yk1 / (kf - 1.0) + (1.0 - mu) * p * yk2 * (y - 1.0);
    let delta2 = 1.0 / kf - 1.0 / (kf + 1.0) + yk * y / (kf + 1.0) - yk / kf
        + (1.0 - mu) * p * yk1 * (y - 1.0);
    Ok(DeltaDiagnostics { d, delta1, delta2 })
}

/// Exact infected fraction of a `K_{d,d}` decomposition; every block is an
/// independent copy, so one block suffices.
pub fn kdd_exact(d: usize, ip: InfectionParams) -> Result<f64> {
    kdd_exact_limited(d, ip, DEFAULT_EXACT_EDGE_LIMIT)
}

pub fn kdd_exact_limited(d: usize, ip: InfectionParams, edge_limit: usize) -> Result<f64> {
    infected_fraction_exact_limited(&gen_kdd(d, d)?, ip, edge_limit)
}

/// Infected fraction of `K_{d,n}` plus `n - d` isolated L vertices as
/// `n -> infinity`: the hubs are infected almost surely, so the isolated
/// half contributes `mu` and each R vertex `1 - (1-mu)(1-p)^d`. Defined as 0
/// at `mu = 0`, where every finite instance has value 0.
pub fn kdn_limit(d: usize, ip: InfectionParams) -> f64 {
    let InfectionParams { mu, p } = ip;
    if mu == 0.0 {
        return 0.0;
    }
    mu / 2.0 + (1.0 - (1.0 - mu) * pow_int(1.0 - p, d)) / 2.0
}

/// Exact infected fraction of `K_{d,n}` with `n - d` isolated L vertices.
pub fn kdn_exact(n: usize, d: usize, ip: InfectionParams, edge_limit: usize) -> Result<f64> {
    infected_fraction_exact_limited(&gen_kdn(n, d)?, ip, edge_limit)
}
