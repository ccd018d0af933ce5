//! Canonical labeling of bipartite graphs under independent permutations of
//! the two sides.
//!
//! Each connected component is encoded as the lexicographically largest
//! adjacency bit-matrix (rows = L vertices, columns = R vertices). For a
//! fixed row order the best column order is a descending sort of the column
//! vectors, so only row orders are searched; at every depth only rows that
//! produce the largest next matrix row survive, and rows with identical
//! neighborhoods are tried once. The graph's form is the sorted list of
//! component codes plus the isolated-vertex counts.

use super::{component_labels, BipartiteGraph};
use crate::error::{Error, Result};

/// Largest number of R vertices allowed in a single component.
pub const MAX_COMPONENT_COLUMNS: usize = 64;

/// Canonical matrix of one connected component with at least one edge.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComponentCode {
    pub n_left: usize,
    pub n_right: usize,
    /// Row `i` has bit `n_right - 1 - j` set iff L vertex `i` is adjacent to
    /// R vertex `j` in canonical order.
    pub rows: Vec<u64>,
}

/// Isomorphism-invariant form of a bipartite graph. Two graphs have equal
/// forms iff one maps onto the other by permuting L and R separately.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    /// Non-trivial components, largest code first.
    pub components: Vec<ComponentCode>,
    pub isolated_left: usize,
    pub isolated_right: usize,
}

impl CanonicalForm {
    /// The canonical representative: components laid out in order on both
    /// sides, isolated vertices last.
    pub fn to_graph(&self) -> BipartiteGraph {
        let mut edges = Vec::new();
        let (mut l_off, mut r_off) = (0, 0);
        for comp in &self.components {
            for (i, &row) in comp.rows.iter().enumerate() {
                for j in 0..comp.n_right {
                    if row >> (comp.n_right - 1 - j) & 1 == 1 {
                        edges.push((l_off + i, r_off + j));
                    }
                }
            }
            l_off += comp.n_left;
            r_off += comp.n_right;
        }
        BipartiteGraph::new(
            l_off + self.isolated_left,
            r_off + self.isolated_right,
            edges,
        )
        .expect("canonical layout is a valid graph")
    }
}

pub fn canonical_form(g: &BipartiteGraph) -> Result<CanonicalForm> {
    let labels = component_labels(g);
    let count = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut lefts: Vec<Vec<usize>> = vec![Vec::new(); count];
    let mut rights: Vec<Vec<usize>> = vec![Vec::new(); count];
    for l in 0..g.n_left() {
        lefts[labels[l]].push(l);
    }
    for r in 0..g.n_right() {
        rights[labels[g.right_id(r)]].push(r);
    }
    let mut form = CanonicalForm {
        components: Vec::new(),
        isolated_left: 0,
        isolated_right: 0,
    };
    for (ls, rs) in lefts.iter().zip(&rights) {
        match (ls.len(), rs.len()) {
            (1, 0) => form.isolated_left += 1,
            (0, 1) => form.isolated_right += 1,
            (_, b) if b > MAX_COMPONENT_COLUMNS => {
                return Err(Error::Capacity {
                    what: "component R vertices for canonical labeling",
                    limit: MAX_COMPONENT_COLUMNS,
                    actual: b,
                })
            }
            _ => {
                let rows: Vec<u64> = ls
                    .iter()
                    .map(|&l| {
                        rs.iter()
                            .enumerate()
                            .filter(|&(_, &r)| g.has_edge(l, r))
                            .fold(0u64, |acc, (j, _)| acc | 1 << j)
                    })
                    .collect();
                form.components.push(canonical_component(&rows, rs.len()));
            }
        }
    }
    form.components.sort_unstable_by(|a, b| b.cmp(a));
    Ok(form)
}

/// Canonical representative of `g`'s isomorphism class.
pub fn canonical_graph(g: &BipartiteGraph) -> Result<BipartiteGraph> {
    Ok(canonical_form(g)?.to_graph())
}

/// `adj[i]` has bit `j` set iff local row `i` meets local column `j`.
fn canonical_component(adj: &[u64], n_cols: usize) -> ComponentCode {
    let mut search = RowSearch {
        adj,
        n_cols,
        prefix: Vec::with_capacity(adj.len()),
        best: None,
    };
    let remaining: Vec<usize> = (0..adj.len()).collect();
    search.descend(&[(0..n_cols).collect()], &remaining);
    ComponentCode {
        n_left: adj.len(),
        n_right: n_cols,
        rows: search.best.expect("component has at least one row"),
    }
}

struct RowSearch<'a> {
    adj: &'a [u64],
    n_cols: usize,
    prefix: Vec<u64>,
    best: Option<Vec<u64>>,
}

impl RowSearch<'_> {
    /// Next matrix row produced by placing `row` below the current prefix.
    fn row_code(&self, classes: &[Vec<usize>], row: usize) -> u64 {
        let mut code = 0u64;
        let mut pos = 0;
        for class in classes {
            let ones = class
                .iter()
                .filter(|&&c| self.adj[row] >> c & 1 == 1)
                .count();
            for q in pos..pos + ones {
                code |= 1 << (self.n_cols - 1 - q);
            }
            pos += class.len();
        }
        code
    }

    fn descend(&mut self, classes: &[Vec<usize>], remaining: &[usize]) {
        if remaining.is_empty() {
            if self.best.as_ref().is_none_or(|b| self.prefix > *b) {
                self.best = Some(self.prefix.clone());
            }
            return;
        }
        let codes: Vec<u64> = remaining
            .iter()
            .map(|&x| self.row_code(classes, x))
            .collect();
        let top = *codes.iter().max().expect("non-empty");
        let depth = self.prefix.len();
        if let Some(best) = &self.best {
            if best[..depth] == self.prefix[..] && top < best[depth] {
                return;
            }
        }
        let mut tried: Vec<u64> = Vec::new();
        for (i, &x) in remaining.iter().enumerate() {
            if codes[i] != top || tried.contains(&self.adj[x]) {
                continue;
            }
            tried.push(self.adj[x]);
            let refined: Vec<Vec<usize>> = classes
                .iter()
                .flat_map(|class| {
                    let (ones, zeros): (Vec<usize>, Vec<usize>) =
                        class.iter().partition(|&&c| self.adj[x] >> c & 1 == 1);
                    [ones, zeros]
                })
                .filter(|part| !part.is_empty())
                .collect();
            let rest: Vec<usize> = remaining.iter().copied().filter(|&y| y != x).collect();
            self.prefix.push(top);
            self.descend(&refined, &rest);
            self.prefix.pop();
        }
    }
}
