use std::fmt;

use smallvec::SmallVec;

/// A set of edge indices `0..universe` of some graph.
///
/// Set operations assert that both operands share the same universe, which
/// stands in for "belong to the same graph".
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSubset {
    universe: usize,
    words: SmallVec<[u64; 2]>,
}

const WORD: usize = 64;

impl EdgeSubset {
    pub fn empty(universe: usize) -> Self {
        EdgeSubset {
            universe,
            words: SmallVec::from_elem(0, universe.div_ceil(WORD)),
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for e in 0..universe {
            s.insert(e);
        }
        s
    }

    /// Build from a bitmask where bit `i` stands for edge `i`.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        assert!(universe <= WORD, "mask representation needs at most 64 edges");
        assert!(
            universe == WORD || mask >> universe == 0,
            "mask {mask:#b} has bits beyond {universe} edges"
        );
        let mut s = Self::empty(universe);
        if universe > 0 {
            s.words[0] = mask;
        }
        s
    }

    pub fn from_edges(universe: usize, edges: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(universe);
        for e in edges {
            s.insert(e);
        }
        s
    }

    /// The bitmask form; only available for universes of at most 64 edges.
    pub fn mask(&self) -> u64 {
        assert!(self.universe <= WORD, "mask representation needs at most 64 edges");
        self.words.first().copied().unwrap_or(0)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn contains(&self, e: usize) -> bool {
        assert!(e < self.universe, "edge {e} outside universe {}", self.universe);
        self.words[e / WORD] >> (e % WORD) & 1 == 1
    }

    pub fn insert(&mut self, e: usize) -> bool {
        let had = self.contains(e);
        self.words[e / WORD] |= 1 << (e % WORD);
        !had
    }

    pub fn remove(&mut self, e: usize) -> bool {
        let had = self.contains(e);
        self.words[e / WORD] &= !(1 << (e % WORD));
        had
    }

    pub fn toggle(&mut self, e: usize) {
        assert!(e < self.universe, "edge {e} outside universe {}", self.universe);
        self.words[e / WORD] ^= 1 << (e % WORD);
    }

    /// `self ⊕ {e}`.
    pub fn flipped(&self, e: usize) -> Self {
        let mut s = self.clone();
        s.toggle(e);
        s
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.universe).filter(move |&e| self.contains(e))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        assert_eq!(self.universe, other.universe, "edge subsets of different graphs");
        EdgeSubset {
            universe: self.universe,
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn symmetric_difference(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a ^ b)
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & b)
    }

    /// `self \ other`.
    pub fn difference(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }
}

impl fmt::Debug for EdgeSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn wide_universes_work() {
        let mut s = EdgeSubset::empty(130);
        s.insert(3);
        s.insert(129);
        assert_eq!(s.len(), 2);
        assert!(s.contains(129));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![3, 129]);
        s.toggle(129);
        assert!(!s.contains(129));
        assert_eq!(EdgeSubset::full(130).len(), 130);
    }

    #[test]
    #[should_panic(expected = "different graphs")]
    fn refuses_cross_graph_operations() {
        EdgeSubset::empty(3).union(&EdgeSubset::empty(4));
    }

    proptest! {
        #[test]
        fn set_algebra_matches_bit_ops(a in 0u64..1 << 12, b in 0u64..1 << 12) {
            let (x, y) = (EdgeSubset::from_mask(12, a), EdgeSubset::from_mask(12, b));
            prop_assert_eq!(x.symmetric_difference(&y).mask(), a ^ b);
            prop_assert_eq!(x.union(&y).mask(), a | b);
            prop_assert_eq!(x.difference(&y).mask(), a & !b);
            prop_assert_eq!(x.intersection(&y).mask(), a & b);
            prop_assert_eq!(x.len(), a.count_ones() as usize);
            prop_assert_eq!(x.is_subset(&y), a & !b == 0);
        }
    }
}
