/// Union-find with union by size that also tracks edges per component.
#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
    edges: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            edges: vec![0; n],
        }
    }

    pub fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i as u32;
        }
        self.size.fill(1);
        self.edges.fill(0);
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let grand = self.parent[self.parent[x] as usize];
            self.parent[x] = grand;
            x = grand as usize;
        }
        x
    }

    /// Adds an edge between `a` and `b`. Returns the (size, edges) of the
    /// components touched before the merge and the merged result.
    pub fn add_edge(&mut self, a: usize, b: usize) -> EdgeEffect {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            let before = (self.size[ra], self.edges[ra]);
            self.edges[ra] += 1;
            return EdgeEffect::Internal {
                before,
                after: (self.size[ra], self.edges[ra]),
            };
        }
        let (big, small) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        let first = (self.size[big], self.edges[big]);
        let second = (self.size[small], self.edges[small]);
        self.parent[small] = big as u32;
        self.size[big] += self.size[small];
        self.edges[big] += self.edges[small] + 1;
        EdgeEffect::Merge {
            first,
            second,
            after: (self.size[big], self.edges[big]),
        }
    }

    /// (size, edge count) for every root.
    #[cfg(test)]
    pub fn component_summaries(&mut self) -> Vec<(u32, u32)> {
        (0..self.parent.len())
            .filter(|&i| self.parent[i] as usize == i)
            .map(|i| (self.size[i], self.edges[i]))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum EdgeEffect {
    Internal {
        before: (u32, u32),
        after: (u32, u32),
    },
    Merge {
        first: (u32, u32),
        second: (u32, u32),
        after: (u32, u32),
    },
}
