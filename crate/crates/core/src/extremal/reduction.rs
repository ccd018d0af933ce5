//! Instance generators for the optimal subnetwork problem: exact cover by
//! `k`-sets (degree 1) and clique decomposition (degree `d >= 2`), plus
//! small exact solvers used to check them.

use std::fmt;
use std::str::FromStr;

use super::subnetwork::SubnetworkInstance;
use crate::error::{invalid, Error, Result};
use crate::graph::BipartiteGraph;

/// Largest graph [`kdd_decomposition_exists`] searches.
pub const MAX_DECOMPOSITION_VERTICES: usize = 24;

/// Family of subsets of `0..universe_size`, each of size at most `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactCoverInstance {
    pub universe_size: usize,
    pub k: usize,
    pub sets: Vec<Vec<usize>>,
}

impl ExactCoverInstance {
    pub fn new(universe_size: usize, k: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        if k == 0 {
            return Err(invalid("set size k must be at least 1"));
        }
        let mut sets = sets;
        for (i, set) in sets.iter_mut().enumerate() {
            set.sort_unstable();
            if set.windows(2).any(|w| w[0] == w[1]) {
                return Err(invalid(format!("set {i} repeats an element")));
            }
            if let Some(&x) = set.iter().find(|&&x| x >= universe_size) {
                return Err(invalid(format!(
                    "set {i} has element {x} outside the universe of {universe_size}"
                )));
            }
            if set.len() > k {
                return Err(invalid(format!(
                    "set {i} has {} elements, more than k = {k}",
                    set.len()
                )));
            }
        }
        Ok(ExactCoverInstance {
            universe_size,
            k,
            sets,
        })
    }

    /// Every set brought up to exactly `k` elements with fresh elements
    /// appended to the universe.
    pub fn padded(&self) -> ExactCoverInstance {
        let mut next = self.universe_size;
        let sets = self
            .sets
            .iter()
            .map(|set| {
                let mut s = set.clone();
                while s.len() < self.k {
                    s.push(next);
                    next += 1;
                }
                s
            })
            .collect();
        ExactCoverInstance {
            universe_size: next,
            k: self.k,
            sets,
        }
    }

    /// `|U| k` header, then one set per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.universe_size, self.k);
        for set in &self.sets {
            let items: Vec<String> = set.iter().map(usize::to_string).collect();
            out.push_str(&items.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for ExactCoverInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for ExactCoverInstance {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut header = None;
        let mut sets = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let nums = line
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<Vec<usize>, _>>()
                .map_err(|_| Error::Parse {
                    line: idx + 1,
                    msg: format!("expected non-negative integers in {line:?}"),
                })?;
            match header {
                None if nums.len() == 2 => header = Some((nums[0], nums[1])),
                None => {
                    return Err(Error::Parse {
                        line: idx + 1,
                        msg: "header must be `universe_size k`".into(),
                    })
                }
                Some(_) => sets.push(nums),
            }
        }
        let (u, k) = header.ok_or(Error::Parse {
            line: 1,
            msg: "missing `universe_size k` header".into(),
        })?;
        ExactCoverInstance::new(u, k, sets)
    }
}

/// Subnetwork instance with L = sets and R = elements of the padded
/// universe, edge `(set, element)` for membership, and `d = 1`. A selection
/// isolates at most `|F| - |U|/k` sets, with equality iff the chosen sets
/// form an exact cover; that count is the certificate when `k` divides the
/// padded `|U|`.
pub fn reduce_exact_cover(
    universe_size: usize,
    sets: &[Vec<usize>],
    k: usize,
) -> Result<SubnetworkInstance> {
    let padded = ExactCoverInstance::new(universe_size, k, sets.to_vec())?.padded();
    let edges = padded
        .sets
        .iter()
        .enumerate()
        .flat_map(|(l, set)| set.iter().map(move |&r| (l, r)));
    let graph = BipartiteGraph::new(padded.sets.len(), padded.universe_size, edges)?;
    let used = padded.universe_size / k;
    let certificate = (padded.universe_size % k == 0 && used <= padded.sets.len())
        .then(|| padded.sets.len() - used);
    Ok(SubnetworkInstance {
        graph,
        d: crate::graph::DegreeConstraint::new(1),
        certificate,
    })
}

/// Algorithm X on bitmasks: indices of sets covering every element of
/// `0..universe_size` exactly once, if any.
pub fn solve_exact_cover(universe_size: usize, sets: &[Vec<usize>]) -> Option<Vec<usize>> {
    assert!(
        universe_size <= 64,
        "bitmask solver handles at most 64 elements"
    );
    let masks: Vec<u64> = sets
        .iter()
        .map(|s| s.iter().fold(0u64, |m, &x| m | 1 << x))
        .collect();
    let full = if universe_size == 64 {
        u64::MAX
    } else {
        (1u64 << universe_size) - 1
    };
    fn search(covered: u64, full: u64, masks: &[u64], chosen: &mut Vec<usize>) -> bool {
        if covered == full {
            return true;
        }
        // Branch on the uncovered element with the fewest usable sets.
        let open = full & !covered;
        let usable = |x: u32| {
            masks
                .iter()
                .enumerate()
                .filter(move |&(_, &m)| m >> x & 1 == 1 && m & covered == 0)
                .map(|(i, _)| i)
        };
        let element = (0..64)
            .filter(|&x| open >> x & 1 == 1)
            .min_by_key(|&x| usable(x).count())
            .expect("some element is open");
        for i in usable(element).collect::<Vec<_>>() {
            chosen.push(i);
            if search(covered | masks[i], full, masks, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::new();
    if masks.iter().any(|&m| m & !full != 0) {
        return None;
    }
    search(0, full, &masks, &mut chosen).then_some(chosen)
}

/// Balanced bipartite graph with `(l_i, r_j)` an edge iff `i = j` or
/// `{v_i, v_j}` is an edge of the source graph, with degree constraint `d`.
pub fn reduce_clique_decomposition(
    adjacency: &[(usize, usize)],
    n_vertices: usize,
    d: usize,
) -> Result<SubnetworkInstance> {
    if d < 2 {
        return Err(invalid("clique decomposition reduction needs d >= 2"));
    }
    let mut edges: Vec<(usize, usize)> = (0..n_vertices).map(|i| (i, i)).collect();
    for &(a, b) in adjacency {
        if a >= n_vertices || b >= n_vertices {
            return Err(invalid(format!(
                "vertex pair ({a}, {b}) out of range for {n_vertices} vertices"
            )));
        }
        if a == b {
            return Err(invalid(format!("self loop at {a}")));
        }
        edges.push((a, b));
        edges.push((b, a));
    }
    edges.sort_unstable();
    edges.dedup();
    Ok(SubnetworkInstance::new(
        BipartiteGraph::new(n_vertices, n_vertices, edges)?,
        d,
    ))
}

/// One complete `K_{d,d}` block of a decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KddBlock {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

/// Backtracking search for a partition of all vertices into blocks of `d`
/// L and `d` R vertices that are completely joined. Returns a witness.
pub fn kdd_decomposition_exists(g: &BipartiteGraph, d: usize) -> Result<Option<Vec<KddBlock>>> {
    if d == 0 {
        return Err(invalid("block size d must be at least 1"));
    }
    if g.vertex_count() > MAX_DECOMPOSITION_VERTICES {
        return Err(Error::Capacity {
            what: "vertices for K_{d,d} decomposition search",
            limit: MAX_DECOMPOSITION_VERTICES,
            actual: g.vertex_count(),
        });
    }
    if !g.is_balanced() || !g.n_left().is_multiple_of(d) {
        return Ok(None);
    }
    let n = g.n_left();
    let mut adj = vec![0u32; n];
    for &(l, r) in g.edges() {
        adj[l] |= 1 << r;
    }
    let mut blocks = Vec::new();
    let full = (1u32 << n) - 1;
    Ok(decompose(&adj, d, full, full, &mut blocks).then_some(blocks))
}

/// Covers the lowest free L vertex with a block, then recurses.
fn decompose(adj: &[u32], d: usize, free_l: u32, free_r: u32, blocks: &mut Vec<KddBlock>) -> bool {
    if free_l == 0 {
        return true;
    }
    let l = free_l.trailing_zeros() as usize;
    let rights = bits(adj[l] & free_r);
    for right in subsets_of(&rights, d) {
        let rmask = right.iter().fold(0u32, |m, &r| m | 1 << r);
        let partners: Vec<usize> = bits(free_l & !(1 << l))
            .into_iter()
            .filter(|&x| adj[x] & rmask == rmask)
            .collect();
        for others in subsets_of(&partners, d - 1) {
            let lmask = others.iter().fold(1u32 << l, |m, &x| m | 1 << x);
            let mut left = vec![l];
            left.extend(&others);
            blocks.push(KddBlock {
                left,
                right: right.clone(),
            });
            if decompose(adj, d, free_l & !lmask, free_r & !rmask, blocks) {
                return true;
            }
            blocks.pop();
        }
    }
    false
}

fn bits(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask >> i & 1 == 1).collect()
}

fn subsets_of(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    (0..items.len())
        .flat_map(|i| {
            subsets_of(&items[i + 1..], k - 1)
                .into_iter()
                .map(move |mut rest| {
                    rest.insert(0, items[i]);
                    rest
                })
        })
        .collect()
}
