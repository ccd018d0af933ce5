use rand::Rng;
use serde::Serialize;

use super::InfectionParams;
use crate::error::Result;
use crate::graph::BipartiteGraph;
use crate::percolation::{monte_carlo, Estimate};
use crate::rng::substream;

/// Final infected vertices of one run, per side.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct InfectedSet {
    pub left: Vec<bool>,
    pub right: Vec<bool>,
}

impl InfectedSet {
    pub fn count(&self) -> usize {
        self.left.iter().chain(&self.right).filter(|&&x| x).count()
    }

    pub fn fraction(&self) -> f64 {
        let total = self.left.len() + self.right.len();
        if total == 0 {
            0.0
        } else {
            self.count() as f64 / total as f64
        }
    }

    pub(crate) fn from_flags(n_left: usize, flags: &[bool]) -> Self {
        InfectedSet {
            left: flags[..n_left].to_vec(),
            right: flags[n_left..].to_vec(),
        }
    }
}

/// Vertex-indexed adjacency (L first, then R) with the edge index of each
/// incidence.
pub(crate) struct Adjacency {
    pub neighbors: Vec<Vec<(usize, usize)>>,
}

impl Adjacency {
    pub fn new(g: &BipartiteGraph) -> Self {
        let mut neighbors = vec![Vec::new(); g.vertex_count()];
        for (e, &(l, r)) in g.edges().iter().enumerate() {
            let rv = g.right_id(r);
            neighbors[l].push((rv, e));
            neighbors[rv].push((l, e));
        }
        Adjacency { neighbors }
    }
}

/// Scratch buffers for repeated cascades on one graph.
pub(crate) struct CascadeScratch {
    pub infected: Vec<bool>,
    frontier: Vec<usize>,
    next: Vec<usize>,
}

impl CascadeScratch {
    pub fn new(vertices: usize) -> Self {
        CascadeScratch {
            infected: vec![false; vertices],
            frontier: Vec::with_capacity(vertices),
            next: Vec::with_capacity(vertices),
        }
    }
}

/// Synchronous-round cascade with pre-drawn randomness: `nature[v]` marks
/// vertices infected by nature and `transmits[e]` whether edge `e` passes the
/// infection when its one attempt happens. `order`, if given, is the order in
/// which the vertices of each round are processed. Returns the number of
/// infected vertices; the set is left in `scratch.infected`.
pub(crate) fn cascade_rounds(
    adj: &Adjacency,
    nature: &[bool],
    transmits: &[bool],
    order: Option<&[usize]>,
    scratch: &mut CascadeScratch,
) -> usize {
    let CascadeScratch {
        infected,
        frontier,
        next,
    } = scratch;
    infected.copy_from_slice(nature);
    frontier.clear();
    frontier.extend((0..nature.len()).filter(|&v| nature[v]));
    let mut count = frontier.len();
    while !frontier.is_empty() {
        if let Some(rank) = order {
            frontier.sort_unstable_by_key(|&v| rank[v]);
        }
        next.clear();
        for &v in frontier.iter() {
            for &(w, e) in &adj.neighbors[v] {
                if !infected[w] && transmits[e] {
                    infected[w] = true;
                    next.push(w);
                }
            }
        }
        count += next.len();
        std::mem::swap(frontier, next);
    }
    count
}

/// Public form of the cascade with explicit randomness; `order` ranks
/// vertices (L first, then R) for within-round processing.
pub fn run_cascade(
    g: &BipartiteGraph,
    nature: &[bool],
    transmits: &[bool],
    order: Option<&[usize]>,
) -> InfectedSet {
    assert_eq!(nature.len(), g.vertex_count(), "one nature flag per vertex");
    assert_eq!(
        transmits.len(),
        g.edge_count(),
        "one transmission flag per edge"
    );
    let adj = Adjacency::new(g);
    let mut scratch = CascadeScratch::new(g.vertex_count());
    cascade_rounds(&adj, nature, transmits, order, &mut scratch);
    InfectedSet::from_flags(g.n_left(), &scratch.infected)
}

fn draw(rng: &mut impl Rng, ip: InfectionParams, nature: &mut [bool], transmits: &mut [bool]) {
    for x in nature.iter_mut() {
        *x = rng.random_bool(ip.mu);
    }
    for x in transmits.iter_mut() {
        *x = rng.random_bool(ip.p);
    }
}

/// One seeded cascade.
pub fn cascade_sample(g: &BipartiteGraph, ip: InfectionParams, seed: u64) -> InfectedSet {
    let mut rng = substream(seed, 0);
    let mut nature = vec![false; g.vertex_count()];
    let mut transmits = vec![false; g.edge_count()];
    draw(&mut rng, ip, &mut nature, &mut transmits);
    run_cascade(g, &nature, &transmits, None)
}

/// Monte Carlo estimate of the infected fraction over `samples` cascades.
pub fn infected_fraction_mc(
    g: &BipartiteGraph,
    ip: InfectionParams,
    samples: usize,
    seed: u64,
) -> Result<Estimate> {
    let adj = Adjacency::new(g);
    let vertices = g.vertex_count();
    let edges = g.edge_count();
    monte_carlo(
        samples,
        seed,
        || {
            (
                vec![false; vertices],
                vec![false; edges],
                CascadeScratch::new(vertices),
            )
        },
        |(nature, transmits, scratch), rng| {
            draw(rng, ip, nature, transmits);
            cascade_rounds(&adj, nature, transmits, None, scratch) as f64 / vertices as f64
        },
    )
}
