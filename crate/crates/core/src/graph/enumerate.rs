use std::collections::HashSet;

use super::{canonical_form, BipartiteGraph, CanonicalForm};

/// Lazily yields one canonical representative per isomorphism class of
/// balanced bipartite graphs on `n + n` vertices whose R vertices all have
/// degree exactly `d`.
///
/// Each R vertex picks a `d`-subset of L; permuting R turns the choice into
/// a multiset of subsets, which is what gets walked. Multisets whose used L
/// vertices are not a prefix `0..m` are skipped since some relabeling of
/// them is also walked.
pub fn enumerate_half_regular(n: usize, d: usize) -> HalfRegularGraphs {
    let subsets: Vec<u64> = if d <= n && n <= 63 {
        (0u64..1 << n)
            .filter(|m| m.count_ones() as usize == d)
            .collect()
    } else {
        Vec::new()
    };
    HalfRegularGraphs {
        n,
        cursor: if subsets.is_empty() {
            None
        } else {
            Some(vec![0; n])
        },
        subsets,
        seen: HashSet::new(),
    }
}

#[derive(Debug)]
pub struct HalfRegularGraphs {
    n: usize,
    subsets: Vec<u64>,
    cursor: Option<Vec<usize>>,
    seen: HashSet<CanonicalForm>,
}

impl HalfRegularGraphs {
    fn advance(&mut self) {
        let Some(idx) = self.cursor.as_mut() else {
            return;
        };
        let top = self.subsets.len() - 1;
        match idx.iter().rposition(|&i| i < top) {
            Some(pos) => {
                let v = idx[pos] + 1;
                idx[pos..].fill(v);
            }
            None => self.cursor = None,
        }
    }
}

impl Iterator for HalfRegularGraphs {
    type Item = BipartiteGraph;

    fn next(&mut self) -> Option<BipartiteGraph> {
        loop {
            let idx = self.cursor.clone()?;
            self.advance();
            let used = idx.iter().fold(0u64, |acc, &i| acc | self.subsets[i]);
            if used & used.wrapping_add(1) != 0 {
                continue;
            }
            let edges = idx.iter().enumerate().flat_map(|(r, &i)| {
                let mask = self.subsets[i];
                (0..self.n)
                    .filter(move |&l| mask >> l & 1 == 1)
                    .map(move |l| (l, r))
            });
            let g = BipartiteGraph::new(self.n, self.n, edges).expect("valid by construction");
            let form = canonical_form(&g).expect("small graphs canonicalize");
            if self.seen.insert(form.clone()) {
                return Some(form.to_graph());
            }
        }
    }
}
