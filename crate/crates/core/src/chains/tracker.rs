use crate::graph::{EdgeSubset, Graph, UnionFind};

/// Connectivity of the current state for κ differences.
///
/// Insertions are answered by a union-find kept in step with the state.
/// Deletions are answered by a search that skips the deleted edge; an
/// accepted deletion invalidates the union-find, which is rebuilt on the
/// next insertion query.
#[derive(Clone, Debug)]
pub struct ClusterTracker {
    uf: UnionFind,
    stale: bool,
    seen: Vec<bool>,
    stack: Vec<usize>,
}

impl ClusterTracker {
    pub fn new(g: &Graph, state: &EdgeSubset) -> Self {
        let mut t = ClusterTracker {
            uf: UnionFind::new(g.vertex_count()),
            stale: true,
            seen: vec![false; g.vertex_count()],
            stack: Vec::new(),
        };
        t.rebuild(g, state);
        t
    }

    fn rebuild(&mut self, g: &Graph, state: &EdgeSubset) {
        self.uf = UnionFind::new(g.vertex_count());
        for e in state.iter() {
            let (u, v) = g.edge(e);
            self.uf.union(u, v);
        }
        self.stale = false;
    }

    /// Whether adding `e ∉ state` joins two components.
    pub fn insertion_merges(&mut self, g: &Graph, state: &EdgeSubset, e: usize) -> bool {
        if self.stale {
            self.rebuild(g, state);
        }
        let (u, v) = g.edge(e);
        !self.uf.same(u, v)
    }

    /// Whether removing `e ∈ state` splits a component.
    pub fn deletion_splits(&mut self, g: &Graph, state: &EdgeSubset, e: usize) -> bool {
        let (u, v) = g.edge(e);
        self.seen.iter_mut().for_each(|s| *s = false);
        self.stack.clear();
        self.stack.push(u);
        self.seen[u] = true;
        while let Some(x) = self.stack.pop() {
            if x == v {
                return false;
            }
            for &f in g.incident(x) {
                if f == e || !state.contains(f) {
                    continue;
                }
                let y = g.opposite(f, x);
                if !self.seen[y] {
                    self.seen[y] = true;
                    self.stack.push(y);
                }
            }
        }
        true
    }

    /// Record an accepted insertion of `e`.
    pub fn inserted(&mut self, g: &Graph, e: usize) {
        if !self.stale {
            let (u, v) = g.edge(e);
            self.uf.union(u, v);
        }
    }

    /// Record an accepted deletion.
    pub fn deleted(&mut self) {
        self.stale = true;
    }

    /// Replace the tracked state wholesale.
    pub fn reset(&mut self, g: &Graph, state: &EdgeSubset) {
        self.rebuild(g, state);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{component_count, families};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matches_naive_recount_along_random_walk() {
        let g = families::random_connected(6, 10, 7);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut state = g.empty_subset();
        let mut tracker = ClusterTracker::new(&g, &state);
        for _ in 0..2000 {
            let e = rng.random_range(0..g.edge_count());
            let before = component_count(&g, &state);
            let after = component_count(&g, &state.flipped(e));
            if state.contains(e) {
                assert_eq!(tracker.deletion_splits(&g, &state, e), after == before + 1);
                state.remove(e);
                tracker.deleted();
            } else {
                assert_eq!(tracker.insertion_merges(&g, &state, e), after + 1 == before);
                state.insert(e);
                tracker.inserted(&g, e);
            }
        }
    }

    #[test]
    fn parallel_edge_is_never_a_bridge() {
        let g = families::parallel_pair();
        let full = g.full_subset();
        let mut t = ClusterTracker::new(&g, &full);
        assert!(!t.deletion_splits(&g, &full, 0));
        let one = EdgeSubset::from_edges(2, [1]);
        assert!(t.deletion_splits(&g, &one, 1));
    }
}
