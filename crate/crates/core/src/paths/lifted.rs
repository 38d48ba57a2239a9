use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{DeltaKernel, WormFamily, WormPath};
use crate::graph::SubsetSpace;
use crate::measures::{rc_measure, Measure};
use crate::rational::{int, Rational};

/// One step of a lifted path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LiftStep {
    /// Worm insertion: the edge is added to the lifted state.
    Insert(usize),
    /// Worm deletion: the edge stays with probability p', else it is removed.
    Delete(usize),
    /// Tail step: the edge is removed and re-added with probability p'.
    Rerandomize(usize),
}

impl LiftStep {
    pub fn edge(self) -> usize {
        match self {
            LiftStep::Insert(e) | LiftStep::Delete(e) | LiftStep::Rerandomize(e) => e,
        }
    }
}

/// A worm path lifted to random-cluster states: its own steps followed by a
/// re-randomization of every edge outside the terminal state, in ascending
/// edge order.
#[derive(Clone, Debug)]
pub struct LiftedFlowSpec {
    path: WormPath,
    steps: Vec<LiftStep>,
}

impl LiftedFlowSpec {
    pub fn new(path: WormPath, m: usize) -> Self {
        Self::build(path, m, true)
    }

    /// The same lift without the re-randomization tail.
    pub fn truncated(path: WormPath, m: usize) -> Self {
        Self::build(path, m, false)
    }

    fn build(path: WormPath, m: usize, tail: bool) -> Self {
        let mut steps: Vec<LiftStep> = path
            .transitions()
            .map(|(w, e)| {
                if w >> e & 1 == 0 {
                    LiftStep::Insert(e)
                } else {
                    LiftStep::Delete(e)
                }
            })
            .collect();
        if tail {
            let last = path.terminal();
            steps.extend((0..m).filter(|e| last >> e & 1 == 0).map(LiftStep::Rerandomize));
        }
        LiftedFlowSpec { path, steps }
    }

    pub fn path(&self) -> &WormPath {
        &self.path
    }

    pub fn steps(&self) -> &[LiftStep] {
        &self.steps
    }

    /// ℓ' = ℓ + |E \ w_ℓ| (or ℓ when truncated).
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// k(w,e): the position of `e` within the tail, if it is re-randomized.
    pub fn tail_index(&self, e: usize) -> Option<usize> {
        self.steps[self.path.len()..]
            .iter()
            .position(|s| *s == LiftStep::Rerandomize(e))
            .map(|k| k + 1)
    }

    /// The worm state whose δ-law the lifted state follows before step `k`.
    pub fn worm_state(&self, k: usize) -> u64 {
        let states = self.path.states();
        states[k.min(states.len() - 1)]
    }
}

/// Aggregated flow through every random-cluster transition: `flips[z·m + e]`
/// for `(z, z ⊕ {e})` and `loops[z]` for `(z, z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrafficTable {
    m: usize,
    pub flips: Vec<Rational>,
    pub loops: Vec<Rational>,
}

impl TrafficTable {
    pub fn zeros(m: usize) -> Self {
        TrafficTable {
            m,
            flips: vec![Rational::zero(); (1usize << m) * m],
            loops: vec![Rational::zero(); 1usize << m],
        }
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn flip(&self, z: u64, e: usize) -> &Rational {
        &self.flips[z as usize * self.m + e]
    }

    pub fn flip_mut(&mut self, z: u64, e: usize) -> &mut Rational {
        &mut self.flips[z as usize * self.m + e]
    }

    pub fn stay(&self, z: u64) -> &Rational {
        &self.loops[z as usize]
    }

    pub fn stay_mut(&mut self, z: u64) -> &mut Rational {
        &mut self.loops[z as usize]
    }

    /// Traffic through `(from, to)`; zero unless the two differ in at most one edge.
    pub fn get(&self, from: u64, to: u64) -> Rational {
        let d = from ^ to;
        match d.count_ones() {
            0 => self.stay(from).clone(),
            1 => self.flip(from, d.trailing_zeros() as usize).clone(),
            _ => Rational::zero(),
        }
    }

    /// Every transition with its traffic, loops first within each state.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64, &Rational)> + '_ {
        (0..self.loops.len() as u64).flat_map(move |z| {
            std::iter::once((z, z, self.stay(z))).chain((0..self.m).map(move |e| (z, z ^ 1 << e, self.flip(z, e))))
        })
    }
}

/// Γ_RC traffic from the per-w closed forms: each transition collects
/// δ(w,z)-weighted worm traffic and tail contributions from every `w ⊆ z`.
pub fn lifted_traffic(family: &WormFamily, kernel: &DeltaKernel) -> TrafficTable {
    let space = family.space();
    let m = space.edge_count();
    let full = space.full_mask();
    let p1 = kernel.p_prime();
    let q1 = Rational::one() - p1;
    let mut table = TrafficTable::zeros(m);
    for w in space.worm_masks() {
        let ending = family.ending_weight(w);
        let through: Vec<&Rational> = (0..m).map(|e| family.traffic(w, e)).collect();
        if ending.is_zero() && through.iter().all(|t| t.is_zero()) {
            continue;
        }
        let rest = full & !w;
        for extra in crate::graph::submasks(rest) {
            let z = w | extra;
            let d = kernel.get(w, z).expect("w ⊆ z");
            if d.is_zero() {
                continue;
            }
            let mut stay = Rational::zero();
            for (e, &through) in through.iter().enumerate() {
                let in_w = w >> e & 1 == 1;
                let in_z = z >> e & 1 == 1;
                match (in_w, in_z) {
                    (false, false) => {
                        let t = through + p1 * &ending;
                        *table.flip_mut(z, e) += &d * t;
                        stay += &ending * &q1;
                    }
                    (false, true) => {
                        let t = &ending * &q1;
                        *table.flip_mut(z, e) += &d * t;
                        stay += through + &ending * p1;
                    }
                    (true, true) => {
                        *table.flip_mut(z, e) += &d * &q1 * through;
                        stay += p1 * through;
                    }
                    (true, false) => unreachable!("w ⊆ z"),
                }
            }
            *table.stay_mut(z) += d * stay;
        }
    }
    table
}

/// Which traffic bound applies to a transition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransitionCase {
    Insertion,
    Deletion,
    Loop,
}

impl TransitionCase {
    pub fn name(self) -> &'static str {
        match self {
            TransitionCase::Insertion => "insertion",
            TransitionCase::Deletion => "deletion",
            TransitionCase::Loop => "loop",
        }
    }
}

/// Aggregated flow weight through one transition against its bound.
#[derive(Clone, Debug)]
pub struct TrafficReport {
    pub from: u64,
    pub to: u64,
    pub case: TransitionCase,
    pub traffic: Rational,
    pub bound: Rational,
}

impl TrafficReport {
    pub fn pass(&self) -> bool {
        self.traffic >= Rational::zero() && self.traffic <= self.bound
    }
}

/// Per-transition bounds: insertions p'·2n⁴π_RC(z), deletions
/// (1-p')·2n⁴π_RC(z), loops 2mn⁴π_RC(z), with π_RC at (2p, 2).
pub fn lifted_bounds(space: &SubsetSpace, p: &Rational, table: &TrafficTable) -> Vec<TrafficReport> {
    let m = space.edge_count();
    let n = space.vertex_count();
    let rc: Measure = rc_measure(space, &(p * int(2)), &int(2));
    let p1 = p / (Rational::one() - p);
    let two_n4 = Rational::from_integer(BigInt::from(2 * n.pow(4)));
    let mut out = Vec::with_capacity(table.loops.len() * (m + 1));
    for (from, to, traffic) in table.iter() {
        let base = &two_n4 * rc.prob(from);
        let (case, bound) = if from == to {
            (TransitionCase::Loop, base * int(m as i64))
        } else if to & !from != 0 {
            (TransitionCase::Insertion, base * &p1)
        } else {
            (TransitionCase::Deletion, base * (Rational::one() - &p1))
        };
        out.push(TrafficReport {
            from,
            to,
            case,
            traffic: traffic.clone(),
            bound,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;
    use crate::guards::Guards;
    use crate::rational::rat;

    #[test]
    fn single_edge_traffic_by_hand() {
        let g = families::single_edge();
        let space = SubsetSpace::new(&g, &Guards::default()).unwrap();
        let fam = WormFamily::new(&space, &rat(1, 4), &Guards::default()).unwrap();
        let kernel = DeltaKernel::new(1, &rat(1, 3));
        let t = lifted_traffic(&fam, &kernel);
        assert_eq!(t.get(0, 1), rat(2, 9));
        assert_eq!(t.get(1, 0), rat(2, 9));
        assert_eq!(t.get(0, 0), rat(4, 9));
        assert_eq!(t.get(1, 1), rat(1, 9));
    }

    #[test]
    fn tail_follows_terminal_state() {
        let g = families::triangle();
        let space = SubsetSpace::new(&g, &Guards::default()).unwrap();
        let fam = WormFamily::new(&space, &rat(1, 4), &Guards::default()).unwrap();
        let spec = LiftedFlowSpec::new(fam.path(0b111, 0).unwrap(), 3);
        assert_eq!(spec.len(), 6);
        assert_eq!(
            &spec.steps()[..3],
            &[LiftStep::Delete(0), LiftStep::Delete(1), LiftStep::Delete(2)]
        );
        assert_eq!(spec.tail_index(2), Some(3));
        let spec = LiftedFlowSpec::new(fam.path(0, 0b111).unwrap(), 3);
        assert_eq!(spec.len(), 3);
        assert_eq!(spec.tail_index(0), None);
        assert_eq!(LiftedFlowSpec::truncated(fam.path(0b111, 0).unwrap(), 3).len(), 3);
    }

    #[test]
    fn triangle_bounds_hold() {
        let g = families::triangle();
        let space = SubsetSpace::new(&g, &Guards::default()).unwrap();
        for p in [rat(1, 10), rat(1, 4), rat(2, 5), rat(1, 2)] {
            let fam = WormFamily::new(&space, &p, &Guards::default()).unwrap();
            let kernel = DeltaKernel::new(3, &(&p / (Rational::one() - &p)));
            let table = lifted_traffic(&fam, &kernel);
            assert!(lifted_bounds(&space, &p, &table).iter().all(|r| r.pass()));
        }
    }
}
