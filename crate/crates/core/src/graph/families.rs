//! Small named graphs used throughout the test and verification batteries.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Graph;

pub fn single_edge() -> Graph {
    Graph::new(2, [(0, 1)]).unwrap()
}

/// Two vertices joined by two parallel edges.
pub fn parallel_pair() -> Graph {
    Graph::new(2, [(0, 1), (0, 1)]).unwrap()
}

/// Path on `n` vertices.
pub fn path(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|v| (v - 1, v))).unwrap()
}

/// Cycle on `n >= 3` vertices, edges `(0,1), (1,2), …, (n-2,n-1), (0,n-1)`.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3);
    Graph::new(n, (1..n).map(|v| (v - 1, v)).chain([(0, n - 1)])).unwrap()
}

/// K3 with edges `(0,1), (1,2), (0,2)`.
pub fn triangle() -> Graph {
    cycle(3)
}

/// Complete graph, edges in lexicographic order of `(u, v)`, `u < v`.
pub fn complete(n: usize) -> Graph {
    Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
}

/// `K_n` without its last edge `(n-2, n-1)`.
pub fn complete_minus_edge(n: usize) -> Graph {
    let mut edges: Vec<_> = complete(n).edges().to_vec();
    edges.pop();
    Graph::new(n, edges).unwrap()
}

/// Two triangles sharing vertex 0.
pub fn bowtie() -> Graph {
    Graph::new(5, [(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4)]).unwrap()
}

pub fn edgeless(n: usize) -> Graph {
    Graph::new(n, []).unwrap()
}

/// A connected simple graph on `n` vertices with `m` edges: a random
/// recursive tree plus uniformly chosen extra edges.
pub fn random_connected(n: usize, m: usize, seed: u64) -> Graph {
    assert!(n >= 1 && m + 1 >= n && m <= n * (n - 1) / 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.random_range(0..v), v)).collect();
    let mut missing: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|e| !edges.contains(e))
        .collect();
    while edges.len() < m {
        let pick = *missing.choose(&mut rng).unwrap();
        missing.retain(|&e| e != pick);
        edges.push(pick);
    }
    Graph::new(n, edges).unwrap()
}

/// Seed used for the random member of [`battery`].
pub const BATTERY_SEED: u64 = 2014;

/// The standard verification battery, smallest first.
pub fn battery() -> Vec<(&'static str, Graph)> {
    vec![
        ("single-edge", single_edge()),
        ("parallel-pair", parallel_pair()),
        ("path-3", path(3)),
        ("triangle", triangle()),
        ("cycle-4", cycle(4)),
        ("k4-minus-edge", complete_minus_edge(4)),
        ("k4", complete(4)),
        ("random-5-8", random_connected(5, 8, BATTERY_SEED)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::component_count;

    #[test]
    fn battery_shapes() {
        let sizes: Vec<_> = battery()
            .iter()
            .map(|(_, g)| (g.vertex_count(), g.edge_count()))
            .collect();
        assert_eq!(
            sizes,
            vec![(2, 1), (2, 2), (3, 2), (3, 3), (4, 4), (4, 5), (4, 6), (5, 8)]
        );
    }

    #[test]
    fn random_graph_is_connected_simple_and_reproducible() {
        for seed in 0..20 {
            let g = random_connected(5, 8, seed);
            assert_eq!(component_count(&g, &g.full_subset()), 1);
            let mut edges: Vec<_> = g.edges().to_vec();
            edges.sort();
            edges.dedup();
            assert_eq!(edges.len(), 8);
            assert_eq!(g, random_connected(5, 8, seed));
        }
    }
}
