use std::collections::HashSet;

use super::{EdgeSubset, Graph};
use crate::error::{Error, Result};
use crate::guards::Guards;

/// A simple cycle as an ordered edge tuple, read from `start` in a fixed
/// direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    pub start: usize,
    pub edges: Vec<usize>,
    mask: u64,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn sorted_edges(&self) -> Vec<usize> {
        let mut e = self.edges.clone();
        e.sort_unstable();
        e
    }
}

/// Every simple cycle of a graph in canonical order: by length, then by the
/// sorted edge-index sequence. Each cycle starts at its smallest vertex and
/// leaves along the smaller-indexed of its two cycle edges there.
#[derive(Clone, Debug)]
pub struct CycleInventory {
    edge_count: usize,
    vertex_count: usize,
    endpoint_masks: Vec<u64>,
    cycles: Vec<Cycle>,
}

impl CycleInventory {
    pub fn new(g: &Graph, guards: &Guards) -> Result<Self> {
        guards.check_enumeration(g)?;
        let mut found = HashSet::new();
        for s in 0..g.vertex_count() {
            let mut search = Search {
                g,
                start: s,
                found: &mut found,
            };
            search.extend(s, None, 0, 1u64 << s);
        }

        let mut cycles: Vec<Cycle> = found.into_iter().map(|mask| orient(g, mask)).collect();
        cycles.sort_by_cached_key(|c| (c.len(), c.sorted_edges()));
        Ok(CycleInventory {
            edge_count: g.edge_count(),
            vertex_count: g.vertex_count(),
            endpoint_masks: (0..g.edge_count()).map(|e| g.endpoint_mask(e)).collect(),
            cycles,
        })
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Edge-disjoint cycles covering the even mask `s`, the first such cover
    /// in inventory order.
    pub fn decompose_mask(&self, s: u64) -> Result<Vec<&Cycle>> {
        let odd = self.odd_mask(s);
        if odd != 0 {
            return Err(Error::NotEven(
                (0..self.vertex_count).filter(|v| odd >> v & 1 == 1).collect(),
            ));
        }
        let mut chosen = Vec::new();
        let covered = self.cover(s, 0, &mut chosen);
        assert!(covered, "every even edge set is a union of edge-disjoint cycles");
        Ok(chosen.into_iter().map(|i| &self.cycles[i]).collect())
    }

    /// The order in which the edges of the even mask `s` are flipped when its
    /// cycles are unwound one by one.
    pub fn unwinding_order(&self, s: u64) -> Result<Vec<usize>> {
        Ok(self
            .decompose_mask(s)?
            .into_iter()
            .flat_map(|c| c.edges.iter().copied())
            .collect())
    }

    fn odd_mask(&self, s: u64) -> u64 {
        let mut odd = 0;
        let mut rest = s;
        while rest != 0 {
            let e = rest.trailing_zeros() as usize;
            odd ^= self.endpoint_masks[e];
            rest &= rest - 1;
        }
        odd
    }

    fn cover(&self, remaining: u64, from: usize, chosen: &mut Vec<usize>) -> bool {
        if remaining == 0 {
            return true;
        }
        for i in from..self.cycles.len() {
            let mask = self.cycles[i].mask;
            if mask & !remaining == 0 {
                chosen.push(i);
                if self.cover(remaining & !mask, i + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
}

/// Free-function form of [`CycleInventory::decompose_mask`].
pub fn even_decomposition<'a>(inv: &'a CycleInventory, s: &EdgeSubset) -> Result<Vec<&'a Cycle>> {
    inv.decompose_mask(s.mask())
}

struct Search<'a> {
    g: &'a Graph,
    start: usize,
    found: &'a mut HashSet<u64>,
}

impl Search<'_> {
    /// Grow simple paths from `start` through vertices larger than it.
    fn extend(&mut self, v: usize, first: Option<usize>, used: u64, visited: u64) {
        for &e in self.g.incident(v) {
            if used >> e & 1 == 1 {
                continue;
            }
            let w = self.g.opposite(e, v);
            if w == self.start {
                if first.is_some() {
                    self.found.insert(used | 1 << e);
                }
            } else if w > self.start && visited >> w & 1 == 0 {
                self.extend(w, first.or(Some(e)), used | 1 << e, visited | 1 << w);
            }
        }
    }
}

fn orient(g: &Graph, mask: u64) -> Cycle {
    let on_cycle = |e: usize| mask >> e & 1 == 1;
    let start = (0..g.edge_count())
        .filter(|&e| on_cycle(e))
        .map(|e| g.edge(e).0.min(g.edge(e).1))
        .min()
        .expect("cycle has edges");
    let first = *g
        .incident(start)
        .iter()
        .find(|&&e| on_cycle(e))
        .expect("start lies on the cycle");

    let mut edges = vec![first];
    let mut prev = first;
    let mut at = g.opposite(first, start);
    while at != start {
        let next = *g
            .incident(at)
            .iter()
            .find(|&&e| e != prev && on_cycle(e))
            .expect("cycle vertices have degree two");
        edges.push(next);
        prev = next;
        at = g.opposite(next, at);
    }
    Cycle { start, edges, mask }
}
