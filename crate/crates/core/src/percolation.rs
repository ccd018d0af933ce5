//! Independent p-edge percolation: exact expectations of component
//! functionals by weighted enumeration of edge subsets, and seeded Monte
//! Carlo estimates.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_probability, invalid, Error, Result};
use crate::graph::{components, BipartiteGraph};
use crate::rng::{substream, Substreams};
use crate::unionfind::{EdgeEffect, UnionFind};

/// Largest edge count [`exact_expectation`] enumerates by default.
pub const DEFAULT_EXACT_EDGE_LIMIT: usize = 24;

/// Hard cap for overridden limits; subsets are indexed by `u64` masks.
pub const MAX_EXACT_EDGE_LIMIT: usize = 40;

/// Edge retention probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PercParams {
    pub p: f64,
}

impl PercParams {
    pub fn new(p: f64) -> Result<Self> {
        check_probability("p", p)?;
        Ok(PercParams { p })
    }
}

/// Component functionals of a (percolated) graph.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Functional {
    /// `sum_v (1 - mu)^|C(v)|`
    EscapeWeight { mu: f64 },
    /// Number of isolated vertices.
    IsolatedCount,
    /// Mean component size seen from a uniform vertex, `(1/|V|) sum_v |C(v)|`.
    Susceptibility,
    /// `sum_C |C|^2`
    SumSqSizes,
    /// `sum_C |E(C)|^2`
    SumSqEdges,
}

impl Functional {
    /// Contribution of one component with `size` vertices and `edges` edges
    /// in a graph of `vertices` vertices.
    fn component_term(&self, size: u32, edges: u32, vertices: usize, escape: &[f64]) -> f64 {
        let s = size as f64;
        match *self {
            Functional::EscapeWeight { .. } => s * escape[size as usize],
            Functional::IsolatedCount => (size == 1) as u8 as f64,
            Functional::Susceptibility => s * s / vertices as f64,
            Functional::SumSqSizes => s * s,
            Functional::SumSqEdges => (edges as f64) * (edges as f64),
        }
    }

    fn check(&self) -> Result<()> {
        match *self {
            Functional::EscapeWeight { mu } => check_probability("mu", mu),
            _ => Ok(()),
        }
    }

    /// `(1 - mu)^s` for `s = 0..=vertices`, empty unless this is the escape weight.
    fn escape_table(&self, vertices: usize) -> Vec<f64> {
        match *self {
            Functional::EscapeWeight { mu } => {
                let q = 1.0 - mu;
                std::iter::successors(Some(1.0), |x| Some(x * q))
                    .take(vertices + 1)
                    .collect()
            }
            _ => Vec::new(),
        }
    }
}

/// Monte Carlo estimate, or an exact value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
    pub exact: bool,
}

impl Estimate {
    pub fn exact(mean: f64) -> Self {
        Estimate {
            mean,
            std_error: 0.0,
            samples: 0,
            exact: true,
        }
    }

    /// Whether `value` lies within `k` standard errors of the mean.
    pub fn agrees_with(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.std_error
    }
}

/// One percolation draw: each edge kept independently with probability `p`.
pub fn percolate_sample(g: &BipartiteGraph, pp: PercParams, seed: u64) -> BipartiteGraph {
    let mut rng = substream(seed, 0);
    let keep: Vec<bool> = (0..g.edge_count()).map(|_| rng.random_bool(pp.p)).collect();
    g.edge_subgraph(|i| keep[i])
}

/// The functional evaluated on `g` itself.
pub fn eval_functional(g: &BipartiteGraph, f: Functional) -> f64 {
    let stats = components(g);
    let escape = f.escape_table(g.vertex_count());
    stats
        .component_sizes
        .iter()
        .zip(&stats.component_edge_counts)
        .map(|(&s, &e)| f.component_term(s as u32, e as u32, g.vertex_count(), &escape))
        .sum()
}

/// `E[f]` under p-edge percolation with the default edge limit.
pub fn exact_expectation(g: &BipartiteGraph, pp: PercParams, f: Functional) -> Result<f64> {
    exact_expectation_limited(g, pp, f, DEFAULT_EXACT_EDGE_LIMIT)
}

/// `E[f] = sum_S p^|S| (1-p)^(|E|-|S|) f(S)` over all edge subsets `S`.
pub fn exact_expectation_limited(
    g: &BipartiteGraph,
    pp: PercParams,
    f: Functional,
    edge_limit: usize,
) -> Result<f64> {
    f.check()?;
    check_edge_limit(g, edge_limit)?;
    if pp.p == 1.0 {
        return Ok(eval_functional(g, f));
    }
    if pp.p == 0.0 {
        return Ok(eval_functional(&g.edge_subgraph(|_| false), f));
    }
    let escape = f.escape_table(g.vertex_count());
    let sink = walk_subsets(g, pp.p, ScalarSink::default, |sink, weight, state| {
        sink.sum
            .add(weight * state.value(&f, g.vertex_count(), &escape));
    });
    Ok(sink.sum.total())
}

/// Expected number of vertices lying in components of each size after
/// percolation: entry `s` is `E[#{v : |C(v)| = s}]`, for `s = 0..=|V|`.
/// Every functional of the form `sum_v h(|C(v)|)` is a linear image of it.
pub fn exact_size_profile(
    g: &BipartiteGraph,
    pp: PercParams,
    edge_limit: usize,
) -> Result<Vec<f64>> {
    check_edge_limit(g, edge_limit)?;
    let v = g.vertex_count();
    let point = |h: &BipartiteGraph| {
        let mut out = vec![0.0; v + 1];
        for s in components(h).component_sizes {
            out[s] += s as f64;
        }
        out
    };
    if pp.p == 1.0 {
        return Ok(point(g));
    }
    if pp.p == 0.0 {
        return Ok(point(&g.edge_subgraph(|_| false)));
    }
    let sink = walk_subsets(
        g,
        pp.p,
        || ProfileSink {
            sums: vec![Compensated::default(); v + 1],
        },
        |sink, weight, state| {
            for (s, &vertices) in state.by_size.iter().enumerate() {
                if vertices != 0 {
                    sink.sums[s].add(weight * vertices as f64);
                }
            }
        },
    );
    Ok(sink.sums.iter().map(Compensated::total).collect())
}

fn check_edge_limit(g: &BipartiteGraph, edge_limit: usize) -> Result<()> {
    let limit = edge_limit.min(MAX_EXACT_EDGE_LIMIT);
    if g.edge_count() > limit {
        return Err(Error::Capacity {
            what: "edges for exact percolation enumeration",
            limit,
            actual: g.edge_count(),
        });
    }
    Ok(())
}

/// Seeded Monte Carlo estimate of `E[f]`.
pub fn mc_expectation(
    g: &BipartiteGraph,
    pp: PercParams,
    f: Functional,
    samples: usize,
    seed: u64,
) -> Result<Estimate> {
    f.check()?;
    let escape = f.escape_table(g.vertex_count());
    let edges: Vec<(usize, usize)> = g.edges().iter().map(|&(l, r)| (l, g.right_id(r))).collect();
    let vertices = g.vertex_count();
    monte_carlo(
        samples,
        seed,
        || UnionFind::new(vertices),
        |uf, rng| {
            uf.reset();
            let mut value = vertices as f64 * f.component_term(1, 0, vertices, &escape);
            for &(a, b) in &edges {
                if rng.random_bool(pp.p) {
                    value += effect_delta(uf.add_edge(a, b), &f, vertices, &escape);
                }
            }
            value
        },
    )
}

/// Runs `draw` once per sample on its own substream and returns the mean and
/// standard error. Samples are processed in fixed chunks whose partial
/// statistics are merged in order, so the result is reproducible bit for
/// bit.
pub(crate) fn monte_carlo<S, I, F>(samples: usize, seed: u64, init: I, draw: F) -> Result<Estimate>
where
    I: Fn() -> S + Sync,
    F: Fn(&mut S, &mut crate::rng::StreamRng) -> f64 + Sync,
{
    if samples < 2 {
        return Err(invalid(format!("need at least 2 samples, got {samples}")));
    }
    const CHUNK: usize = 4096;
    let streams = Substreams::new(seed);
    let chunks: Vec<Welford> = (0..samples.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut scratch = init();
            let mut acc = Welford::default();
            for i in c * CHUNK..((c + 1) * CHUNK).min(samples) {
                let mut rng = streams.get(i as u64);
                acc.push(draw(&mut scratch, &mut rng));
            }
            acc
        })
        .collect();
    let total = chunks.into_iter().fold(Welford::default(), Welford::merge);
    let variance = total.m2 / (total.count - 1.0);
    Ok(Estimate {
        mean: total.mean,
        std_error: (variance / total.count).sqrt(),
        samples,
        exact: false,
    })
}

#[derive(Clone, Copy, Debug, Default)]
struct Welford {
    count: f64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.count += 1.0;
        let delta = x - self.mean;
        self.mean += delta / self.count;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Welford) -> Welford {
        if other.count == 0.0 {
            return self;
        }
        if self.count == 0.0 {
            return other;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        Welford {
            count,
            mean: self.mean + delta * other.count / count,
            m2: self.m2 + other.m2 + delta * delta * self.count * other.count / count,
        }
    }
}

/// Neumaier compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.carry
    }

    fn merge(mut self, other: &Compensated) -> Compensated {
        self.add(other.sum);
        self.add(other.carry);
        self
    }
}

fn effect_delta(effect: EdgeEffect, f: &Functional, vertices: usize, escape: &[f64]) -> f64 {
    let term = |(s, e): (u32, u32)| f.component_term(s, e, vertices, escape);
    match effect {
        EdgeEffect::Internal { before, after } => term(after) - term(before),
        EdgeEffect::Merge {
            first,
            second,
            after,
        } => term(after) - term(first) - term(second),
    }
}

/// Union-find over one edge subset plus the running component history the
/// sinks read from.
struct WalkState {
    uf: UnionFind,
    /// Components as `(size, edges)` changes, replayed lazily per functional.
    effects: Vec<EdgeEffect>,
    /// `by_size[s]` = number of vertices in components of size `s`.
    by_size: Vec<i64>,
}

impl WalkState {
    fn new(vertices: usize) -> Self {
        let mut by_size = vec![0; vertices + 1];
        if vertices > 0 {
            by_size[1] = vertices as i64;
        }
        WalkState {
            uf: UnionFind::new(vertices),
            effects: Vec::new(),
            by_size,
        }
    }

    fn reset(&mut self) {
        self.uf.reset();
        self.effects.clear();
        let v = self.by_size.len() - 1;
        self.by_size.fill(0);
        if v > 0 {
            self.by_size[1] = v as i64;
        }
    }

    fn add(&mut self, a: usize, b: usize) {
        let effect = self.uf.add_edge(a, b);
        if let EdgeEffect::Merge {
            first,
            second,
            after,
        } = effect
        {
            self.by_size[first.0 as usize] -= first.0 as i64;
            self.by_size[second.0 as usize] -= second.0 as i64;
            self.by_size[after.0 as usize] += after.0 as i64;
        }
        self.effects.push(effect);
    }

    fn value(&self, f: &Functional, vertices: usize, escape: &[f64]) -> f64 {
        let base = vertices as f64 * f.component_term(1, 0, vertices, escape);
        self.effects
            .iter()
            .fold(base, |acc, &e| acc + effect_delta(e, f, vertices, escape))
    }
}

#[derive(Default)]
struct ScalarSink {
    sum: Compensated,
}

struct ProfileSink {
    sums: Vec<Compensated>,
}

trait Mergeable {
    fn merge_from(self, other: &Self) -> Self;
}

impl Mergeable for ScalarSink {
    fn merge_from(self, other: &Self) -> Self {
        ScalarSink {
            sum: self.sum.merge(&other.sum),
        }
    }
}

impl Mergeable for ProfileSink {
    fn merge_from(self, other: &Self) -> Self {
        ProfileSink {
            sums: self
                .sums
                .into_iter()
                .zip(&other.sums)
                .map(|(a, b)| a.merge(b))
                .collect(),
        }
    }
}

/// Visits every edge subset with its probability weight. The subset space is
/// split on the high-order edge bits into blocks handled in parallel; inside a
/// block the low bits follow a Gray code, so each step toggles one edge.
/// Additions extend the union-find; removals rebuild it from the subset.
fn walk_subsets<S, I, R>(g: &BipartiteGraph, p: f64, init: I, record: R) -> S
where
    S: Mergeable + Send,
    I: Fn() -> S + Sync,
    R: Fn(&mut S, f64, &WalkState) + Sync,
{
    let m = g.edge_count();
    let vertices = g.vertex_count();
    let edges: Vec<(usize, usize)> = g.edges().iter().map(|&(l, r)| (l, g.right_id(r))).collect();
    // weight[k] = p^k (1-p)^(m-k)
    let weight: Vec<f64> = (0..=m)
        .map(|k| p.powi(k as i32) * (1.0 - p).powi((m - k) as i32))
        .collect();
    let high_bits = m.saturating_sub(12).min(8);
    let low_bits = m - high_bits;

    let blocks: Vec<S> = (0u64..1 << high_bits)
        .into_par_iter()
        .map(|high| {
            let mut sink = init();
            let mut state = WalkState::new(vertices);
            let high_mask = high << low_bits;
            let rebuild = |state: &mut WalkState, mask: u64| {
                state.reset();
                for (i, &(a, b)) in edges.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        state.add(a, b);
                    }
                }
            };
            let mut mask = high_mask;
            rebuild(&mut state, mask);
            record(&mut sink, weight[mask.count_ones() as usize], &state);
            for step in 1u64..1 << low_bits {
                let bit = step.trailing_zeros() as usize;
                mask ^= 1 << bit;
                if mask >> bit & 1 == 1 {
                    let (a, b) = edges[bit];
                    state.add(a, b);
                } else {
                    rebuild(&mut state, mask);
                }
                record(&mut sink, weight[mask.count_ones() as usize], &state);
            }
            sink
        })
        .collect();
    let mut blocks = blocks.into_iter();
    let first = blocks.next().expect("at least one block");
    blocks.fold(first, |acc, b| acc.merge_from(&b))
}
