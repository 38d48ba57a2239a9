use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{CycleInventory, EdgeSubset, SubsetSpace};
use crate::guards::Guards;
use crate::measures::{even_measure, worm_measure, Measure};
use crate::rational::Rational;

/// One canonical path of Γ_worm between two even subgraphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WormPath {
    m: usize,
    states: Vec<u64>,
    flips: Vec<usize>,
    weight: Rational,
}

impl WormPath {
    /// States w_0, ..., w_ℓ as masks.
    pub fn states(&self) -> &[u64] {
        &self.states
    }

    pub fn subsets(&self) -> Vec<EdgeSubset> {
        self.states.iter().map(|&s| EdgeSubset::from_mask(self.m, s)).collect()
    }

    /// The edge flipped at each step.
    pub fn flips(&self) -> &[usize] {
        &self.flips
    }

    pub fn initial(&self) -> u64 {
        self.states[0]
    }

    pub fn terminal(&self) -> u64 {
        *self.states.last().expect("paths are never empty")
    }

    /// ℓ, the number of transitions.
    pub fn len(&self) -> usize {
        self.flips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flips.is_empty()
    }

    /// π_even(I) π_even(F).
    pub fn weight(&self) -> &Rational {
        &self.weight
    }

    /// `(w_k, e_k)` for every step.
    pub fn transitions(&self) -> impl Iterator<Item = (u64, usize)> + '_ {
        self.states.iter().copied().zip(self.flips.iter().copied())
    }

    /// Violations of the path invariants on `space`, if any.
    pub fn legality_errors(&self, space: &SubsetSpace) -> Vec<String> {
        let mut errors = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (k, &w) in self.states.iter().enumerate() {
            if !space.is_worm(w) {
                errors.push(format!("state {k} ({w:#b}) has {} odd vertices", space.odd_count(w)));
            }
            if !seen.insert(w) {
                errors.push(format!("state {k} ({w:#b}) repeats"));
            }
        }
        for (k, pair) in self.states.windows(2).enumerate() {
            if (pair[0] ^ pair[1]).count_ones() != 1 {
                errors.push(format!("step {k} changes more than one edge"));
            }
        }
        if self.len() > self.m {
            errors.push(format!("length {} exceeds m = {}", self.len(), self.m));
        }
        errors
    }
}

/// Certificate for one transition `(w, w ⊕ {e})` against the per-transition
/// traffic bounds n⁴ π_worm(w), and n⁴ π_worm(w) p/(1-p) for insertions.
#[derive(Clone, Debug)]
pub struct WormCertificate {
    pub from: u64,
    pub edge: usize,
    pub insertion: bool,
    pub traffic: Rational,
    pub bound: Rational,
    /// The insertion bound, equal to `bound` for deletions.
    pub insertion_bound: Rational,
}

impl WormCertificate {
    pub fn to(&self) -> u64 {
        self.from ^ (1 << self.edge)
    }

    pub fn pass(&self) -> bool {
        self.traffic <= self.bound && (!self.insertion || self.traffic <= self.insertion_bound)
    }
}

/// The complete family Γ_worm on one graph: a path for every ordered pair of
/// even subgraphs, with aggregated per-transition traffic.
#[derive(Clone, Debug)]
pub struct WormFamily<'s, 'g> {
    space: &'s SubsetSpace<'g>,
    inventory: CycleInventory,
    p: Rational,
    even: Measure,
    worm: Measure,
    evens: Vec<u64>,
    orders: HashMap<u64, Vec<usize>>,
    traffic: Vec<Rational>,
    max_len: usize,
    max_lifted_len: usize,
}

impl<'s, 'g> WormFamily<'s, 'g> {
    pub fn new(space: &'s SubsetSpace<'g>, p: &Rational, guards: &Guards) -> Result<Self> {
        let g = space.graph();
        guards.check_matrix(g)?;
        let inventory = CycleInventory::new(g, guards)?;
        let m = space.edge_count();
        let even = even_measure(space, p);
        let worm = worm_measure(space, p);
        let evens = space.even_masks();
        let mut orders = HashMap::with_capacity(evens.len());
        for &d in &evens {
            orders.insert(d, inventory.unwinding_order(d)?);
        }
        let mut traffic = vec![Rational::zero(); space.state_count() * m];
        let mut max_len = 0;
        let mut max_lifted_len = 0;
        for &i in &evens {
            let pi_i = even.prob(i);
            for &f in &evens {
                let wt = &pi_i * even.prob(f);
                let order = &orders[&(i ^ f)];
                max_len = max_len.max(order.len());
                max_lifted_len = max_lifted_len.max(order.len() + m - f.count_ones() as usize);
                if wt.is_zero() {
                    continue;
                }
                let mut w = i;
                for &e in order {
                    traffic[w as usize * m + e] += &wt;
                    w ^= 1 << e;
                }
            }
        }
        Ok(WormFamily {
            space,
            inventory,
            p: p.clone(),
            even,
            worm,
            evens,
            orders,
            traffic,
            max_len,
            max_lifted_len,
        })
    }

    pub fn space(&self) -> &'s SubsetSpace<'g> {
        self.space
    }

    pub fn inventory(&self) -> &CycleInventory {
        &self.inventory
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    pub fn even_measure(&self) -> &Measure {
        &self.even
    }

    pub fn worm_measure(&self) -> &Measure {
        &self.worm
    }

    /// Ω_0 in increasing mask order.
    pub fn evens(&self) -> &[u64] {
        &self.evens
    }

    /// L(Γ_worm), the longest path.
    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// The longest lifted path, ℓ + |E \ w_ℓ| over all paths.
    pub fn max_lifted_len(&self) -> usize {
        self.max_lifted_len
    }

    fn require_even(&self, s: u64) -> Result<()> {
        if !self.space.is_even(s) {
            let odd = self.space.odd_mask(s);
            return Err(Error::NotEven((0..64).filter(|v| odd >> v & 1 == 1).collect()));
        }
        Ok(())
    }

    fn order(&self, d: u64) -> &[usize] {
        &self.orders[&d]
    }

    /// γ_{IF}.
    pub fn path(&self, i: u64, f: u64) -> Result<WormPath> {
        self.require_even(i)?;
        self.require_even(f)?;
        let flips = self.order(i ^ f).to_vec();
        let mut states = Vec::with_capacity(flips.len() + 1);
        let mut w = i;
        states.push(w);
        for &e in &flips {
            w ^= 1 << e;
            states.push(w);
        }
        Ok(WormPath {
            m: self.space.edge_count(),
            states,
            flips,
            weight: self.even.prob(i) * self.even.prob(f),
        })
    }

    /// Every path of the family, in (I, F) mask order.
    pub fn paths(&self) -> impl Iterator<Item = WormPath> + '_ {
        self.evens.iter().flat_map(move |&i| {
            self.evens
                .iter()
                .map(move |&f| self.path(i, f).expect("even endpoints"))
        })
    }

    /// Σ_{γ ∋ (w, w⊕{e})} wt(γ).
    pub fn traffic(&self, w: u64, e: usize) -> &Rational {
        &self.traffic[w as usize * self.space.edge_count() + e]
    }

    /// Σ_{γ : w_ℓ = w} wt(γ) = π_even(w).
    pub fn ending_weight(&self, w: u64) -> Rational {
        self.even.prob(w)
    }

    /// φ(I,F) = I ⊕ F ⊕ w for the transition `(w, w⊕{e})` on γ_{IF}.
    pub fn encode(&self, i: u64, f: u64, w: u64, e: usize) -> Result<u64> {
        let path = self.path(i, f)?;
        if !path.transitions().any(|t| t == (w, e)) {
            return Err(Error::MalformedTransition(format!(
                "({w:#b}, flip {e}) is not on the path from {i:#b} to {f:#b}"
            )));
        }
        Ok(i ^ f ^ w)
    }

    /// Recover (I, F) from a transition and its encoding.
    pub fn decode(&self, w: u64, w_next: u64, u: u64) -> Result<(u64, u64)> {
        let flip = w ^ w_next;
        if flip.count_ones() != 1 {
            return Err(Error::MalformedTransition(format!("{w:#b} -> {w_next:#b}")));
        }
        let e = flip.trailing_zeros() as usize;
        let d = u ^ w;
        let not_in_image = || Error::NotInImage(format!("{u:#b}"));
        if !self.space.is_even(d) {
            return Err(not_in_image());
        }
        let order = self.order(d);
        let pos = order.iter().position(|&x| x == e).ok_or_else(not_in_image)?;
        // Edges unwound before e already agree with F; the rest still agree with I.
        let done: u64 = order[..pos].iter().map(|&x| 1u64 << x).sum();
        let i = w ^ done;
        if !self.space.is_even(i) {
            return Err(not_in_image());
        }
        Ok((i, i ^ d))
    }

    /// Path-weight certificates for every transition `(w, w ⊕ {e})` with
    /// `w ∈ Ω_worm`.
    pub fn certificates(&self) -> Vec<WormCertificate> {
        let m = self.space.edge_count();
        let n = self.space.vertex_count();
        let n4 = Rational::from_integer(BigInt::from(n).pow(4));
        let ratio = &self.p / (Rational::one() - &self.p);
        let mut out = Vec::new();
        for w in self.space.worm_masks() {
            let bound = &n4 * self.worm.prob(w);
            for e in 0..m {
                let insertion = w >> e & 1 == 0;
                let insertion_bound = if insertion { &bound * &ratio } else { bound.clone() };
                out.push(WormCertificate {
                    from: w,
                    edge: e,
                    insertion,
                    traffic: self.traffic(w, e).clone(),
                    bound: bound.clone(),
                    insertion_bound,
                });
            }
        }
        out
    }
}

/// Summary of the Γ_worm checks on one graph.
#[derive(Clone, Debug)]
pub struct WormReport {
    pub pairs: usize,
    pub max_len: usize,
    pub legality_errors: Vec<String>,
    pub transitions: usize,
    pub failures: Vec<WormCertificate>,
    /// max traffic / (n⁴ π_worm(w)) over transitions with traffic.
    pub max_ratio: Rational,
}

impl WormReport {
    pub fn pass(&self) -> bool {
        self.legality_errors.is_empty() && self.failures.is_empty()
    }
}

pub fn worm_report(family: &WormFamily) -> WormReport {
    let space = family.space();
    let mut legality_errors = Vec::new();
    let mut pairs = 0;
    for path in family.paths() {
        pairs += 1;
        for err in path.legality_errors(space) {
            legality_errors.push(format!("{:#b} -> {:#b}: {err}", path.initial(), path.terminal()));
        }
    }
    let certs = family.certificates();
    let mut max_ratio = Rational::zero();
    for c in &certs {
        if !c.traffic.is_zero() && !c.bound.is_zero() {
            max_ratio = max_ratio.max(&c.traffic / &c.bound);
        }
    }
    WormReport {
        pairs,
        max_len: family.max_len(),
        legality_errors,
        transitions: certs.len(),
        failures: certs.iter().filter(|c| !c.pass()).cloned().collect(),
        max_ratio,
    }
}

#[cfg(test)]
/// w_p(S) on masks, by size.
pub(crate) fn mask_weight(m: usize, s: u64, p: &Rational) -> Rational {
    let k = s.count_ones() as usize;
    crate::rational::pow(p, k) * crate::rational::pow(&(Rational::one() - p), m - k)
}
