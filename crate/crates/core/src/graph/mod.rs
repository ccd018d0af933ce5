//! Balanced bipartite graphs with a minimum-degree constraint on the right
//! side, the standard generators, connected components and the plain-text
//! graph format.

mod canon;
mod enumerate;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::unionfind::UnionFind;

pub use canon::{canonical_form, canonical_graph, CanonicalForm, ComponentCode};
pub use enumerate::{enumerate_half_regular, HalfRegularGraphs};

/// An L-R edge, as `(left index, right index)`.
pub type Edge = (usize, usize);

/// Bipartite graph with independently indexed sides. Edges are kept sorted
/// and unique; values are immutable once built.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BipartiteGraph {
    n_left: usize,
    n_right: usize,
    edges: Vec<Edge>,
}

/// Minimum degree required of every right-side vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DegreeConstraint {
    pub d: usize,
}

impl DegreeConstraint {
    pub fn new(d: usize) -> Self {
        DegreeConstraint { d }
    }
}

impl BipartiteGraph {
    /// Builds a graph, sorting the edges. Rejects out-of-range indices and
    /// duplicate edges.
    pub fn new(
        n_left: usize,
        n_right: usize,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self> {
        let mut edges: Vec<Edge> = edges.into_iter().collect();
        if let Some(&(l, r)) = edges.iter().find(|&&(l, r)| l >= n_left || r >= n_right) {
            return Err(Error::EdgeOutOfRange {
                l,
                r,
                n_left,
                n_right,
            });
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            let (l, r) = w[0];
            return Err(Error::DuplicateEdge { l, r });
        }
        Ok(BipartiteGraph {
            n_left,
            n_right,
            edges,
        })
    }

    /// Graph with `n` vertices on each side and no edges.
    pub fn empty(n: usize) -> Self {
        BipartiteGraph {
            n_left: n,
            n_right: n,
            edges: Vec::new(),
        }
    }

    pub fn n_left(&self) -> usize {
        self.n_left
    }

    pub fn n_right(&self) -> usize {
        self.n_right
    }

    pub fn vertex_count(&self) -> usize {
        self.n_left + self.n_right
    }

    /// Sorted, duplicate-free edge list.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_balanced(&self) -> bool {
        self.n_left == self.n_right
    }

    pub fn has_edge(&self, l: usize, r: usize) -> bool {
        self.edges.binary_search(&(l, r)).is_ok()
    }

    pub fn left_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n_left];
        for &(l, _) in &self.edges {
            deg[l] += 1;
        }
        deg
    }

    pub fn right_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n_right];
        for &(_, r) in &self.edges {
            deg[r] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        let l = self.left_degrees().into_iter().max().unwrap_or(0);
        let r = self.right_degrees().into_iter().max().unwrap_or(0);
        l.max(r)
    }

    /// Vertex id used by the component machinery: L vertex `i` is `i`,
    /// R vertex `j` is `n_left + j`.
    pub fn right_id(&self, r: usize) -> usize {
        self.n_left + r
    }

    /// New graph with the edges selected by `keep` (indexed like [`edges`](Self::edges)).
    pub fn edge_subgraph(&self, mut keep: impl FnMut(usize) -> bool) -> Self {
        BipartiteGraph {
            n_left: self.n_left,
            n_right: self.n_right,
            edges: self
                .edges
                .iter()
                .enumerate()
                .filter(|&(i, _)| keep(i))
                .map(|(_, &e)| e)
                .collect(),
        }
    }

    /// New graph with one more edge.
    pub fn with_edge(&self, l: usize, r: usize) -> Result<Self> {
        let mut edges = self.edges.clone();
        edges.push((l, r));
        BipartiteGraph::new(self.n_left, self.n_right, edges)
    }

    /// Relabels vertices: L vertex `i` becomes `left_perm[i]`, R vertex `j`
    /// becomes `right_perm[j]`.
    pub fn permuted(&self, left_perm: &[usize], right_perm: &[usize]) -> Result<Self> {
        if !is_permutation(left_perm, self.n_left) || !is_permutation(right_perm, self.n_right) {
            return Err(invalid("relabeling must be a permutation of each side"));
        }
        BipartiteGraph::new(
            self.n_left,
            self.n_right,
            self.edges
                .iter()
                .map(|&(l, r)| (left_perm[l], right_perm[r])),
        )
    }

    /// Plain-text form: `n_left n_right` then one sorted `l r` pair per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n_left, self.n_right);
        for &(l, r) in &self.edges {
            out.push_str(&format!("{l} {r}\n"));
        }
        out
    }
}

fn is_permutation(perm: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    perm.len() == n
        && perm
            .iter()
            .all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
}

impl fmt::Display for BipartiteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for BipartiteGraph {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let pair = parse_pair(line).map_err(|msg| Error::Parse { line: idx + 1, msg })?;
            if header.is_none() {
                header = Some(pair);
            } else {
                edges.push(pair);
            }
        }
        let (n_left, n_right) = header.ok_or(Error::Parse {
            line: 1,
            msg: "missing `n_left n_right` header".into(),
        })?;
        BipartiteGraph::new(n_left, n_right, edges)
    }
}

fn parse_pair(line: &str) -> std::result::Result<(usize, usize), String> {
    let mut it = line.split_whitespace();
    let mut next = || -> std::result::Result<usize, String> {
        let tok = it
            .next()
            .ok_or_else(|| format!("expected two integers in {line:?}"))?;
        tok.parse()
            .map_err(|_| format!("not a non-negative integer: {tok:?}"))
    };
    let pair = (next()?, next()?);
    if it.next().is_some() {
        return Err(format!("trailing tokens in {line:?}"));
    }
    Ok(pair)
}

/// Same as [`BipartiteGraph::new`].
pub fn make_graph(n_left: usize, n_right: usize, edges: &[Edge]) -> Result<BipartiteGraph> {
    BipartiteGraph::new(n_left, n_right, edges.iter().copied())
}

/// True iff the graph is balanced and every R vertex has degree at least `c.d`.
pub fn validate(g: &BipartiteGraph, c: DegreeConstraint) -> bool {
    g.is_balanced() && g.right_degrees().iter().all(|&deg| deg >= c.d)
}

/// `n` disjoint edges `(i, i)`.
pub fn gen_matching(n: usize) -> Result<BipartiteGraph> {
    if n == 0 {
        return Err(invalid("matching needs n >= 1"));
    }
    BipartiteGraph::new(n, n, (0..n).map(|i| (i, i)))
}

/// L vertex 0 joined to all `k` R vertices, with L vertices `1..k` isolated.
pub fn gen_star(k: usize) -> Result<BipartiteGraph> {
    if k == 0 {
        return Err(invalid("star needs k >= 1"));
    }
    BipartiteGraph::new(k, k, (0..k).map(|r| (0, r)))
}

/// `n / d` disjoint copies of `K_{d,d}`.
pub fn gen_kdd(n: usize, d: usize) -> Result<BipartiteGraph> {
    if d == 0 || n == 0 || !n.is_multiple_of(d) {
        return Err(invalid(format!(
            "K_{{d,d}} decomposition needs d >= 1 dividing n (n = {n}, d = {d})"
        )));
    }
    let edges = (0..n / d)
        .flat_map(|b| (0..d).flat_map(move |i| (0..d).map(move |j| (b * d + i, b * d + j))));
    BipartiteGraph::new(n, n, edges)
}

/// `K_{d,n}` padded with `n - d` isolated L vertices: L vertices `0..d` are
/// joined to every R vertex.
pub fn gen_kdn(n: usize, d: usize) -> Result<BipartiteGraph> {
    if d == 0 || d > n {
        return Err(invalid(format!(
            "K_{{d,n}} needs 1 <= d <= n (n = {n}, d = {d})"
        )));
    }
    BipartiteGraph::new(n, n, (0..d).flat_map(|l| (0..n).map(move |r| (l, r))))
}

/// Connected component summary of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentStats {
    /// Component sizes, sorted in decreasing order of (size, edges).
    pub component_sizes: Vec<usize>,
    /// Edge count of each component, aligned with `component_sizes`.
    pub component_edge_counts: Vec<usize>,
    /// R vertices in each component, aligned with `component_sizes`.
    pub component_right_counts: Vec<usize>,
    pub isolated_count: usize,
}

impl ComponentStats {
    pub fn len(&self) -> usize {
        self.component_sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.component_sizes.is_empty()
    }
}

pub fn components(g: &BipartiteGraph) -> ComponentStats {
    let labels = component_labels(g);
    let count = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut rows = vec![(0usize, 0usize, 0usize); count];
    for (v, &c) in labels.iter().enumerate() {
        rows[c].0 += 1;
        if v >= g.n_left {
            rows[c].2 += 1;
        }
    }
    for &(l, _) in &g.edges {
        rows[labels[l]].1 += 1;
    }
    rows.sort_unstable_by(|a, b| b.cmp(a));
    ComponentStats {
        isolated_count: rows.iter().filter(|c| c.0 == 1).count(),
        component_sizes: rows.iter().map(|c| c.0).collect(),
        component_edge_counts: rows.iter().map(|c| c.1).collect(),
        component_right_counts: rows.iter().map(|c| c.2).collect(),
    }
}

/// Component index of every vertex (L first, then R), numbered in order of
/// first appearance.
pub fn component_labels(g: &BipartiteGraph) -> Vec<usize> {
    let mut uf = UnionFind::new(g.vertex_count());
    for &(l, r) in &g.edges {
        uf.add_edge(l, g.right_id(r));
    }
    let mut label_of_root = vec![usize::MAX; g.vertex_count()];
    let mut next = 0;
    (0..g.vertex_count())
        .map(|v| {
            let root = uf.find(v);
            if label_of_root[root] == usize::MAX {
                label_of_root[root] = next;
                next += 1;
            }
            label_of_root[root]
        })
        .collect()
}
