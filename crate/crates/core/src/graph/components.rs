use super::{EdgeSubset, Graph};
use crate::rational::choose2;

/// Disjoint-set forest with path compression and union by rank.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
    sets: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
            sets: n,
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    /// Merge the sets of `a` and `b`; returns false if they were already one.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.rank[a] < self.rank[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        if self.rank[a] == self.rank[b] {
            self.rank[a] += 1;
        }
        self.sets -= 1;
        true
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    pub fn set_count(&self) -> usize {
        self.sets
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }
}

pub(crate) fn forest_of(g: &Graph, s: &EdgeSubset) -> UnionFind {
    assert_eq!(s.universe(), g.edge_count(), "subset belongs to another graph");
    let mut uf = UnionFind::new(g.vertex_count());
    for e in s.iter() {
        let (u, v) = g.edge(e);
        uf.union(u, v);
    }
    uf
}

/// κ(S): components of the spanning subgraph `(V, S)`, isolated vertices
/// included.
pub fn component_count(g: &Graph, s: &EdgeSubset) -> usize {
    forest_of(g, s).set_count()
}

/// Component sizes of `(V, S)`, largest first.
pub fn component_sizes(g: &Graph, s: &EdgeSubset) -> Vec<usize> {
    let mut uf = forest_of(g, s);
    let mut counts = vec![0usize; g.vertex_count()];
    for v in 0..g.vertex_count() {
        counts[uf.find(v)] += 1;
    }
    let mut sizes: Vec<usize> = counts.into_iter().filter(|&c| c > 0).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

/// c(S): number of vertex pairs sharing a component of `(V, S)`.
pub fn pair_count(g: &Graph, s: &EdgeSubset) -> usize {
    component_sizes(g, s).into_iter().map(choose2).sum()
}

/// Vertices of odd degree in `(V, S)`, ascending.
pub fn odd_vertices(g: &Graph, s: &EdgeSubset) -> Vec<usize> {
    assert_eq!(s.universe(), g.edge_count(), "subset belongs to another graph");
    let mut parity = vec![false; g.vertex_count()];
    for e in s.iter() {
        let (u, v) = g.edge(e);
        parity[u] ^= true;
        parity[v] ^= true;
    }
    parity
        .iter()
        .enumerate()
        .filter_map(|(v, &odd)| odd.then_some(v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;
    use proptest::prelude::*;

    fn k3() -> Graph {
        families::triangle()
    }

    #[test]
    fn triangle_components() {
        let g = k3();
        assert_eq!(component_count(&g, &EdgeSubset::from_edges(3, [0])), 2);
        assert_eq!(component_count(&g, &g.empty_subset()), 3);
        assert_eq!(component_count(&g, &g.full_subset()), 1);
    }

    #[test]
    fn odd_vertex_examples() {
        let single = families::single_edge();
        assert_eq!(odd_vertices(&single, &single.full_subset()), vec![0, 1]);
        let g = k3();
        assert!(odd_vertices(&g, &g.full_subset()).is_empty());
        let pair = families::parallel_pair();
        assert!(odd_vertices(&pair, &pair.full_subset()).is_empty());
    }

    #[test]
    fn triangle_pair_counts() {
        let g = k3();
        assert_eq!(pair_count(&g, &g.full_subset()), 3);
        assert_eq!(pair_count(&g, &g.empty_subset()), 0);
        assert_eq!(pair_count(&g, &EdgeSubset::from_edges(3, [0])), 1);
    }

    fn small_graph() -> impl Strategy<Value = Graph> {
        (2usize..7).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..12).prop_map(move |pairs| {
                let edges: Vec<_> = pairs.into_iter().filter(|(u, v)| u != v).collect();
                Graph::new(n, edges).unwrap()
            })
        })
    }

    fn graph_and_subset() -> impl Strategy<Value = (Graph, EdgeSubset)> {
        small_graph().prop_flat_map(|g| {
            let m = g.edge_count();
            (Just(g), 0u64..(1u64 << m)).prop_map(move |(g, mask)| (g, EdgeSubset::from_mask(m, mask)))
        })
    }

    proptest! {
        #[test]
        fn odd_vertex_count_is_even((g, s) in graph_and_subset()) {
            prop_assert_eq!(odd_vertices(&g, &s).len() % 2, 0);
        }

        #[test]
        fn insertion_lowers_kappa_by_at_most_one((g, s) in graph_and_subset()) {
            let k = component_count(&g, &s);
            for e in 0..g.edge_count() {
                let mut t = s.clone();
                t.insert(e);
                let k2 = component_count(&g, &t);
                prop_assert!(k2 == k || k2 + 1 == k);
            }
        }

        #[test]
        fn pair_count_bounded_by_all_pairs((g, s) in graph_and_subset()) {
            let n = g.vertex_count();
            let c = pair_count(&g, &s);
            prop_assert!(c <= choose2(n));
            prop_assert_eq!(c == choose2(n), component_count(&g, &s) == 1);
        }
    }
}
