use super::{EdgeSubset, Graph, UnionFind};
use crate::error::Result;
use crate::guards::Guards;
use crate::rational::choose2;

/// All `2^m` edge subsets of a graph as bitmasks, with per-subset tables of
/// κ, the pair count c(S), and the odd-vertex set.
#[derive(Clone, Debug)]
pub struct SubsetSpace<'g> {
    graph: &'g Graph,
    kappa: Vec<u8>,
    pairs: Vec<u16>,
    odd: Vec<u64>,
}

impl<'g> SubsetSpace<'g> {
    pub fn new(graph: &'g Graph, guards: &Guards) -> Result<Self> {
        guards.check_enumeration(graph)?;
        let m = graph.edge_count();
        let n = graph.vertex_count();
        let states = 1usize << m;
        let mut kappa = Vec::with_capacity(states);
        let mut pairs = Vec::with_capacity(states);
        let mut odd = Vec::with_capacity(states);
        let endpoint: Vec<u64> = (0..m).map(|e| graph.endpoint_mask(e)).collect();
        let mut sizes = vec![0usize; n];
        for mask in 0..states as u64 {
            let mut uf = UnionFind::new(n);
            let mut parity = 0u64;
            let mut rest = mask;
            while rest != 0 {
                let e = rest.trailing_zeros() as usize;
                let (u, v) = graph.edge(e);
                uf.union(u, v);
                parity ^= endpoint[e];
                rest &= rest - 1;
            }
            sizes.iter_mut().for_each(|s| *s = 0);
            for v in 0..n {
                sizes[uf.find(v)] += 1;
            }
            kappa.push(uf.set_count() as u8);
            pairs.push(sizes.iter().map(|&s| choose2(s)).sum::<usize>() as u16);
            odd.push(parity);
        }
        Ok(SubsetSpace {
            graph,
            kappa,
            pairs,
            odd,
        })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn state_count(&self) -> usize {
        self.kappa.len()
    }

    pub fn full_mask(&self) -> u64 {
        (self.state_count() - 1) as u64
    }

    pub fn masks(&self) -> impl Iterator<Item = u64> + Clone {
        0..self.state_count() as u64
    }

    pub fn subset(&self, mask: u64) -> EdgeSubset {
        EdgeSubset::from_mask(self.edge_count(), mask)
    }

    pub fn kappa(&self, mask: u64) -> usize {
        self.kappa[mask as usize] as usize
    }

    pub fn pair_count(&self, mask: u64) -> usize {
        self.pairs[mask as usize] as usize
    }

    pub fn odd_mask(&self, mask: u64) -> u64 {
        self.odd[mask as usize]
    }

    pub fn odd_count(&self, mask: u64) -> usize {
        self.odd[mask as usize].count_ones() as usize
    }

    pub fn is_even(&self, mask: u64) -> bool {
        self.odd[mask as usize] == 0
    }

    /// Membership in Ω_0 ∪ Ω_2.
    pub fn is_worm(&self, mask: u64) -> bool {
        self.odd_count(mask) <= 2
    }

    /// Ω_0 in increasing mask order.
    pub fn even_masks(&self) -> Vec<u64> {
        self.masks().filter(|&s| self.is_even(s)).collect()
    }

    /// Ω_0 ∪ Ω_2 in increasing mask order.
    pub fn worm_masks(&self) -> Vec<u64> {
        self.masks().filter(|&s| self.is_worm(s)).collect()
    }
}

/// Iterate over all submasks of `mask`, including `0` and `mask` itself.
pub(crate) fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & mask) };
        Some(cur)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{component_count, families, odd_vertices, pair_count};

    #[test]
    fn tables_agree_with_direct_computation() {
        for (_, g) in families::battery() {
            let space = SubsetSpace::new(&g, &Guards::default()).unwrap();
            for mask in space.masks() {
                let s = space.subset(mask);
                assert_eq!(space.kappa(mask), component_count(&g, &s));
                assert_eq!(space.pair_count(mask), pair_count(&g, &s));
                assert_eq!(space.odd_count(mask), odd_vertices(&g, &s).len());
            }
        }
    }

    #[test]
    fn submask_enumeration() {
        let mut subs: Vec<u64> = submasks(0b1011).collect();
        subs.sort_unstable();
        assert_eq!(subs, vec![0, 1, 2, 3, 8, 9, 10, 11]);
        assert_eq!(submasks(0).collect::<Vec<_>>(), vec![0]);
    }
}
