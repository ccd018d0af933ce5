//! General threshold model: each vertex draws an integer threshold `i` with
//! probability `mu_i` and is infected once at least `i` neighbors are
//! (threshold 0 means infected by nature). Distributions carry finite
//! support plus an explicit mass at infinity.

use rand::Rng;

use super::cascade::{Adjacency, InfectedSet};
use super::{pow_int, InfectionParams};
use crate::error::{invalid, Error, Result};
use crate::graph::BipartiteGraph;
use crate::percolation::{monte_carlo, Estimate};
use crate::rng::substream;

const MASS_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdDistribution {
    probs: Vec<f64>,
    residual: f64,
}

impl ThresholdDistribution {
    /// `probs[i]` is the probability of threshold `i`; `residual` that of
    /// never being infectable.
    pub fn new(probs: Vec<f64>, residual: f64) -> Result<Self> {
        if probs
            .iter()
            .chain([&residual])
            .any(|&x| x.is_nan() || x < 0.0 || !x.is_finite())
        {
            return Err(invalid(
                "threshold probabilities must be finite and non-negative",
            ));
        }
        let total: f64 = probs.iter().sum::<f64>() + residual;
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(invalid(format!(
                "threshold probabilities sum to {total}, not 1"
            )));
        }
        Ok(ThresholdDistribution { probs, residual })
    }

    /// Finite support; whatever mass is missing goes to infinity.
    pub fn with_remainder(probs: Vec<f64>) -> Result<Self> {
        let total: f64 = probs.iter().sum();
        let residual = if total > 1.0 && total - 1.0 <= MASS_TOLERANCE {
            0.0
        } else {
            1.0 - total
        };
        Self::new(probs, residual)
    }

    pub fn point_mass(threshold: usize) -> Self {
        let mut probs = vec![0.0; threshold + 1];
        probs[threshold] = 1.0;
        ThresholdDistribution {
            probs,
            residual: 0.0,
        }
    }

    /// Nobody is ever infected.
    pub fn never() -> Self {
        ThresholdDistribution {
            probs: Vec::new(),
            residual: 1.0,
        }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn prob(&self, threshold: usize) -> f64 {
        self.probs.get(threshold).copied().unwrap_or(0.0)
    }

    /// `P(threshold <= x)`.
    pub fn cdf(&self, x: usize) -> f64 {
        self.probs.iter().take(x + 1).sum()
    }

    /// Moves all mass above `cutoff` to infinity.
    pub fn truncated(&self, cutoff: usize) -> Self {
        if self.probs.len() <= cutoff + 1 {
            return self.clone();
        }
        let tail: f64 = self.probs[cutoff + 1..].iter().sum();
        ThresholdDistribution {
            probs: self.probs[..=cutoff].to_vec(),
            residual: self.residual + tail,
        }
    }

    /// Threshold for a uniform draw `u` in `[0, 1)`; `None` is infinity.
    /// Inverting the running sum keeps truncated copies of a distribution
    /// in lockstep with the original.
    pub fn quantile(&self, u: f64) -> Option<usize> {
        let mut acc = 0.0;
        for (i, &p) in self.probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return Some(i);
            }
        }
        None
    }

    /// Parses `threshold:prob` pairs separated by commas, e.g.
    /// `0:.6,1:.001,3:.399`; `inf:x` sets the mass at infinity, which
    /// otherwise takes the remainder.
    pub fn parse(literal: &str) -> Result<Self> {
        let mut probs: Vec<f64> = Vec::new();
        let mut residual = None;
        for item in literal.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let bad = || Error::Parse {
                line: 1,
                msg: format!("bad threshold entry {item:?}; expected `i:prob`"),
            };
            let (key, value) = item.split_once(':').ok_or_else(bad)?;
            let value: f64 = value.trim().parse().map_err(|_| bad())?;
            if key.trim().eq_ignore_ascii_case("inf") {
                residual = Some(value);
                continue;
            }
            let i: usize = key.trim().parse().map_err(|_| bad())?;
            if probs.len() <= i {
                probs.resize(i + 1, 0.0);
            }
            probs[i] += value;
        }
        match residual {
            Some(r) => Self::new(probs, r),
            None => Self::with_remainder(probs),
        }
    }
}

/// The (mu, p) cascade as a threshold distribution: `mu_0 = mu` and
/// `mu_i = (1-mu) p (1-p)^(i-1)` for `1 <= i <= cutoff`, the rest at infinity.
pub fn cascade_as_threshold(ip: InfectionParams, cutoff: usize) -> ThresholdDistribution {
    let InfectionParams { mu, p } = ip;
    let mut probs = vec![mu];
    probs.extend((1..=cutoff).map(|i| (1.0 - mu) * p * pow_int(1.0 - p, i - 1)));
    ThresholdDistribution {
        probs,
        residual: (1.0 - mu) * pow_int(1.0 - p, cutoff),
    }
}

struct ThresholdScratch {
    thresholds: Vec<Option<usize>>,
    infected: Vec<bool>,
    hits: Vec<usize>,
}

impl ThresholdScratch {
    fn new(vertices: usize) -> Self {
        ThresholdScratch {
            thresholds: vec![None; vertices],
            infected: vec![false; vertices],
            hits: vec![0; vertices],
        }
    }
}

/// Draws thresholds and iterates synchronous rounds to the fixed point.
/// Returns the number of infected vertices.
fn threshold_rounds(
    adj: &Adjacency,
    dist: &ThresholdDistribution,
    rng: &mut impl Rng,
    scratch: &mut ThresholdScratch,
) -> usize {
    let ThresholdScratch {
        thresholds,
        infected,
        hits,
    } = scratch;
    for t in thresholds.iter_mut() {
        *t = dist.quantile(rng.random::<f64>());
    }
    for (flag, t) in infected.iter_mut().zip(thresholds.iter()) {
        *flag = *t == Some(0);
    }
    loop {
        hits.fill(0);
        for (v, nbrs) in adj.neighbors.iter().enumerate() {
            if infected[v] {
                for &(w, _) in nbrs {
                    hits[w] += 1;
                }
            }
        }
        let mut changed = false;
        for v in 0..infected.len() {
            if !infected[v] && thresholds[v].is_some_and(|t| t <= hits[v]) {
                infected[v] = true;
                changed = true;
            }
        }
        if !changed {
            return infected.iter().filter(|&&x| x).count();
        }
    }
}

/// One seeded run of the threshold model.
pub fn threshold_cascade_sample(
    g: &BipartiteGraph,
    dist: &ThresholdDistribution,
    seed: u64,
) -> InfectedSet {
    let adj = Adjacency::new(g);
    let mut scratch = ThresholdScratch::new(g.vertex_count());
    threshold_rounds(&adj, dist, &mut substream(seed, 0), &mut scratch);
    InfectedSet::from_flags(g.n_left(), &scratch.infected)
}

/// Monte Carlo estimate of the infected fraction under the threshold model.
pub fn threshold_fraction_mc(
    g: &BipartiteGraph,
    dist: &ThresholdDistribution,
    samples: usize,
    seed: u64,
) -> Result<Estimate> {
    let adj = Adjacency::new(g);
    let vertices = g.vertex_count();
    monte_carlo(
        samples,
        seed,
        || ThresholdScratch::new(vertices),
        |scratch, rng| threshold_rounds(&adj, dist, rng, scratch) as f64 / vertices as f64,
    )
}

/// Exact expected infected fraction of a `j`-star (with `j - 1` isolated L
/// vertices) under the threshold model.
///
/// Leaves have degree 1, so a leaf is infected iff its threshold is 0, or it
/// is 1 and the center falls. Leaves with threshold 1 can only follow the
/// center, so the center falls iff its threshold is at most the number `X`
/// of nature-infected leaves, `X ~ Bin(j, mu_0)`.
pub fn star_threshold_exact(j: usize, dist: &ThresholdDistribution) -> Result<f64> {
    if j == 0 {
        return Err(invalid("star size must be at least 1"));
    }
    let mu0 = dist.prob(0);
    let follow = if mu0 < 1.0 {
        dist.prob(1) / (1.0 - mu0)
    } else {
        0.0
    };
    let jf = j as f64;
    let mut binom = 1.0;
    let mut total = (jf - 1.0) * mu0;
    for x in 0..=j {
        if x > 0 {
            binom *= (j - x + 1) as f64 / x as f64;
        }
        let pmf = binom * pow_int(mu0, x) * pow_int(1.0 - mu0, j - x);
        let fall = dist.cdf(x);
        let xf = x as f64;
        let leaves_if_fall = 1.0 + xf + (jf - xf) * follow;
        total += pmf * (fall * leaves_if_fall + (1.0 - fall) * xf);
    }
    Ok(total / (2.0 * jf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_kdd, gen_star, make_graph};
    use crate::infection::infected_fraction_exact;

    #[test]
    fn distribution_validation() {
        assert!(ThresholdDistribution::new(vec![0.5, 0.4], 0.1).is_ok());
        assert!(ThresholdDistribution::new(vec![0.5, 0.4], 0.2).is_err());
        assert!(ThresholdDistribution::new(vec![-0.1, 1.1], 0.0).is_err());
        let d = ThresholdDistribution::parse("0:.6,1:.001,3:.399").unwrap();
        assert_eq!(d.probs(), &[0.6, 0.001, 0.0, 0.399]);
        assert!(d.residual().abs() < 1e-12);
        let d = ThresholdDistribution::parse("0:.5,inf:.5").unwrap();
        assert_eq!(d.residual(), 0.5);
        assert!(ThresholdDistribution::parse("0:.5,x").is_err());
        assert!(ThresholdDistribution::parse("0:.9,1:.9").is_err());
    }

    #[test]
    fn cascade_mapping() {
        let ip = InfectionParams::new(0.5, 0.5).unwrap();
        let d = cascade_as_threshold(ip, 2);
        assert_eq!(d.probs(), &[0.5, 0.25, 0.125]);
        assert_eq!(d.residual(), 0.125);
        let d = cascade_as_threshold(InfectionParams::new(0.3, 1.0).unwrap(), 3);
        assert_eq!(d.probs(), &[0.3, 0.7, 0.0, 0.0]);
        assert_eq!(d.residual(), 0.0);
        for (mu, p, c) in [(0.2, 0.3, 0), (0.7, 0.1, 5), (0.0, 0.9, 9)] {
            let d = cascade_as_threshold(InfectionParams::new(mu, p).unwrap(), c);
            assert!((d.probs().iter().sum::<f64>() + d.residual() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn point_masses() {
        let g = gen_kdd(4, 2).unwrap();
        assert_eq!(
            threshold_cascade_sample(&g, &ThresholdDistribution::point_mass(0), 3).count(),
            8
        );
        assert_eq!(
            threshold_cascade_sample(&g, &ThresholdDistribution::never(), 3).count(),
            0
        );
        assert_eq!(
            star_threshold_exact(3, &ThresholdDistribution::point_mass(0)).unwrap(),
            1.0
        );
        assert_eq!(
            star_threshold_exact(3, &ThresholdDistribution::never()).unwrap(),
            0.0
        );
    }

    #[test]
    fn truncation_above_max_degree_changes_nothing() {
        let g = make_graph(3, 3, &[(0, 0), (0, 1), (0, 2), (1, 1), (2, 2)]).unwrap();
        let dist = ThresholdDistribution::parse("0:.3,1:.2,2:.1,3:.1,4:.2,6:.1").unwrap();
        let cut = dist.truncated(g.max_degree());
        assert_ne!(cut, dist);
        for seed in 0..200 {
            assert_eq!(
                threshold_cascade_sample(&g, &dist, seed),
                threshold_cascade_sample(&g, &cut, seed)
            );
        }
    }

    /// All threshold assignments over `support` (with `None` = infinity) on
    /// a j-star, each resolved by iterating neighbor counts to a fixed point.
    fn star_brute_force(j: usize, dist: &ThresholdDistribution) -> f64 {
        let g = gen_star(j).unwrap();
        let n = g.vertex_count();
        let mut support: Vec<(Option<usize>, f64)> = dist
            .probs()
            .iter()
            .enumerate()
            .map(|(i, &p)| (Some(i), p))
            .collect();
        support.push((None, dist.residual()));
        let mut choice = vec![0usize; n];
        let mut total = 0.0;
        loop {
            let weight: f64 = choice.iter().map(|&c| support[c].1).product();
            let thr: Vec<Option<usize>> = choice.iter().map(|&c| support[c].0).collect();
            let mut infected: Vec<bool> = thr.iter().map(|t| *t == Some(0)).collect();
            loop {
                let mut next = infected.clone();
                for v in 0..n {
                    let hits = g
                        .edges()
                        .iter()
                        .filter(|&&(l, r)| {
                            (l == v && infected[g.right_id(r)])
                                || (g.right_id(r) == v && infected[l])
                        })
                        .count();
                    if thr[v].is_some_and(|t| t <= hits) {
                        next[v] = true;
                    }
                }
                if next == infected {
                    break;
                }
                infected = next;
            }
            total += weight * infected.iter().filter(|&&x| x).count() as f64 / n as f64;
            match choice.iter().rposition(|&c| c + 1 < support.len()) {
                Some(pos) => {
                    choice[pos] += 1;
                    choice[pos + 1..].fill(0);
                }
                None => break,
            }
        }
        total
    }

    #[test]
    fn star_exact_matches_enumeration() {
        let dists = [
            ThresholdDistribution::parse("0:.35,1:.25,2:.15,3:.1").unwrap(),
            ThresholdDistribution::parse("0:.6,1:.05,3:.35").unwrap(),
            ThresholdDistribution::parse("1:.5,2:.5").unwrap(),
        ];
        for dist in &dists {
            for j in 1..=3 {
                let exact = star_threshold_exact(j, dist).unwrap();
                let brute = star_brute_force(j, dist);
                assert!((exact - brute).abs() < 1e-12, "j={j} {exact} vs {brute}");
            }
        }
    }

    #[test]
    fn star_exact_matches_cascade_model() {
        for (mu, p) in [(0.55, 0.4), (0.2, 0.9), (0.9, 0.1)] {
            let ip = InfectionParams::new(mu, p).unwrap();
            for j in 1..=5 {
                let via_threshold = star_threshold_exact(j, &cascade_as_threshold(ip, j)).unwrap();
                let direct = infected_fraction_exact(&gen_star(j).unwrap(), ip).unwrap();
                assert!((via_threshold - direct).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mc_matches_star_exact() {
        let dist = ThresholdDistribution::parse("0:.4,1:.3,2:.2").unwrap();
        let g = gen_star(3).unwrap();
        let exact = star_threshold_exact(3, &dist).unwrap();
        let est = threshold_fraction_mc(&g, &dist, 100_000, 21).unwrap();
        assert!(est.agrees_with(exact, 4.0), "{est:?} vs {exact}");
    }
}
