use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{even_partition, ising_partition, rc_measure, rc_partition, stratum_partition, worm_measure};
use super::{Measure, Params};
use crate::error::{Error, Result};
use crate::graph::SubsetSpace;
use crate::guards::Guards;
use crate::paths::DeltaKernel;
use crate::rational::{choose2, fraction_string, int, pow, rat, Powers, Rational};

/// The three partition-function expressions that must coincide at q = 2.
#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub beta: Rational,
    pub z_ising: Rational,
    /// β^|E| · Z_RC(1 - 1/β, 2)
    pub rc_side: Rational,
    /// 2^|V| β^|E| · Z_even((1 - 1/β) / 2)
    pub even_side: Rational,
}

impl EquivalenceReport {
    pub fn pass(&self) -> bool {
        self.z_ising == self.rc_side && self.z_ising == self.even_side
    }
}

pub fn verify_equivalence(space: &SubsetSpace, beta: &Rational, guards: &Guards) -> Result<EquivalenceReport> {
    if *beta <= Rational::one() {
        return Err(Error::Parameter {
            name: "beta",
            value: fraction_string(beta),
            expected: "beta > 1",
        });
    }
    let g = space.graph();
    let m = g.edge_count();
    let n = g.vertex_count();
    let z_ising = ising_partition(g, beta, guards)?;
    let p_rc = Rational::one() - beta.recip();
    let p_even = &p_rc / int(2);
    let beta_m = pow(beta, m);
    let rc_side = &beta_m * rc_partition(space, &p_rc, &int(2));
    let even_side = pow(&int(2), n) * &beta_m * even_partition(space, &p_even);
    Ok(EquivalenceReport {
        beta: beta.clone(),
        z_ising,
        rc_side,
        even_side,
    })
}

/// Enumerated even-subgraph counts against 2^{|r| - n + κ(r)}, for the
/// whole graph and for every spanning subgraph `(V, r)`.
#[derive(Clone, Debug)]
pub struct EvenCountReport {
    pub even_count: u64,
    pub expected: u64,
    pub subgraphs_checked: usize,
    /// Masks `r` whose count disagrees (empty on success).
    pub mismatches: Vec<u64>,
}

impl EvenCountReport {
    pub fn pass(&self) -> bool {
        self.even_count == self.expected && self.mismatches.is_empty()
    }
}

pub fn even_count_check(space: &SubsetSpace) -> EvenCountReport {
    let m = space.edge_count();
    let n = space.vertex_count();
    // counts[r] = #{s ⊆ r : s even}, by a subset-sum transform.
    let mut counts: Vec<u32> = space.masks().map(|s| space.is_even(s) as u32).collect();
    for e in 0..m {
        let bit = 1usize << e;
        for r in 0..counts.len() {
            if r & bit != 0 {
                counts[r] += counts[r ^ bit];
            }
        }
    }
    let expected = |r: u64| -> u64 {
        let exp = r.count_ones() as usize + space.kappa(r) - n;
        1u64 << exp
    };
    let mismatches: Vec<u64> = space
        .masks()
        .filter(|&r| counts[r as usize] as u64 != expected(r))
        .collect();
    let full = space.full_mask();
    EvenCountReport {
        even_count: counts[full as usize] as u64,
        expected: expected(full),
        subgraphs_checked: space.state_count(),
        mismatches,
    }
}

/// The lift of π_worm, computed by its closed form and by pushing π_worm
/// through the δ kernel, and compared with π_RC at (2p, 2).
#[derive(Clone, Debug)]
pub struct HatPiReport {
    pub closed_form: Measure,
    pub convolution: Measure,
    pub routes_agree: bool,
    /// max_R π̂(R) / π_RC(R) over R with π_RC(R) > 0.
    pub max_ratio: Rational,
    pub witness: u64,
    /// π̂(R) / π_RC(R) ∝ 1 + c(R)/n² across all R.
    pub profile_consistent: bool,
}

impl HatPiReport {
    pub fn pass(&self) -> bool {
        self.routes_agree && self.profile_consistent && self.max_ratio <= rat(3, 2)
    }
}

pub fn hat_pi(space: &SubsetSpace, params: &Params) -> Result<HatPiReport> {
    params.require_q2()?;
    let m = space.edge_count();
    let n = space.vertex_count();
    let p = params.p_even();
    let n2 = Rational::from_integer(BigInt::from(n * n));

    let ps = Powers::new(p, m);
    let rest = Powers::new(&(Rational::one() - p * int(2)), m);
    let closed_form = Measure::from_weights(space.masks().map(|r| {
        let k = r.count_ones() as usize;
        let even_subgraphs = BigInt::one() << (k + space.kappa(r) - n);
        let near_even = &even_subgraphs * BigInt::from(space.pair_count(r));
        let count = Rational::from_integer(even_subgraphs) + Rational::from_integer(near_even) / &n2;
        (r, ps.get(k) * rest.get(m - k) * count)
    }));

    let worm = worm_measure(space, p);
    let kernel = DeltaKernel::new(m, &params.lift_probability());
    let pushed = kernel.push_forward(worm.iter());
    let convolution = Measure::from_weights(pushed.into_iter().enumerate().map(|(z, w)| (z as u64, w)));

    let routes_agree = space.masks().all(|r| closed_form.get(r) == convolution.get(r));

    let rc = rc_measure(space, params.p_rc(), &int(2));
    let mut max_ratio = Rational::zero();
    let mut witness = 0;
    let mut profile: Option<Rational> = None;
    let mut profile_consistent = true;
    for r in space.masks() {
        let hat = closed_form.prob(r);
        let Some(target) = rc.get(r) else {
            profile_consistent &= hat.is_zero();
            continue;
        };
        let ratio = &hat / target;
        let scaled = &ratio / (Rational::one() + int(space.pair_count(r) as i64) / &n2);
        match &profile {
            None => profile = Some(scaled),
            Some(c) => profile_consistent &= *c == scaled,
        }
        if ratio > max_ratio {
            max_ratio = ratio;
            witness = r;
        }
    }
    Ok(HatPiReport {
        closed_form,
        convolution,
        routes_agree,
        max_ratio,
        witness,
        profile_consistent,
    })
}

/// Z_{u,v} ≤ Z_0 for every pair, Z_2 ≤ C(n,2) Z_0, and Z_worm ≤ 3/2 Z_0.
#[derive(Clone, Debug)]
pub struct HoleReport {
    pub z0: Rational,
    pub z2: Rational,
    pub z_worm: Rational,
    /// Z_{u,v} for every `u < v`.
    pub holes: Vec<(usize, usize, Rational)>,
}

impl HoleReport {
    pub fn holes_ok(&self) -> bool {
        self.holes.iter().all(|(_, _, z)| *z <= self.z0)
    }

    pub fn z2_ok(&self, n: usize) -> bool {
        self.z2 <= int(choose2(n) as i64) * &self.z0
    }

    pub fn worm_ok(&self) -> bool {
        self.z_worm <= rat(3, 2) * &self.z0
    }

    /// Hole sums add back up to Z_2.
    pub fn consistent(&self) -> bool {
        self.holes.iter().map(|(_, _, z)| z).sum::<Rational>() == self.z2
    }

    pub fn max_hole(&self) -> Option<&(usize, usize, Rational)> {
        self.holes.iter().max_by(|a, b| a.2.cmp(&b.2))
    }

    pub fn pass(&self, n: usize) -> bool {
        self.holes_ok() && self.z2_ok(n) && self.worm_ok() && self.consistent()
    }
}

pub fn hole_bounds(space: &SubsetSpace, p: &Rational) -> HoleReport {
    let m = space.edge_count();
    let n = space.vertex_count();
    let mut by_holes: HashMap<u64, Vec<u64>> = HashMap::new();
    for s in space.masks().filter(|&s| space.odd_count(s) == 2) {
        by_holes.entry(space.odd_mask(s)).or_insert_with(|| vec![0; m + 1])[s.count_ones() as usize] += 1;
    }
    let ps = Powers::new(p, m);
    let qs = Powers::new(&(Rational::one() - p), m);
    let sum = |hist: &[u64]| -> Rational {
        hist.iter()
            .enumerate()
            .map(|(k, &c)| int(c as i64) * ps.get(k) * qs.get(m - k))
            .sum()
    };
    let mut holes = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let key = (1u64 << u) | (1u64 << v);
            let z = by_holes.get(&key).map(|h| sum(h)).unwrap_or_else(Rational::zero);
            holes.push((u, v, z));
        }
    }
    let z0 = even_partition(space, p);
    let z2 = stratum_partition(space, p, 2);
    let z_worm = worm_measure(space, p).total_weight().clone();
    HoleReport { z0, z2, z_worm, holes }
}

/// π_RC(∅) ≥ (1-p)^|E| at q = 2.
#[derive(Clone, Debug)]
pub struct EmptyStateReport {
    pub pi_empty: Rational,
    pub lower_bound: Rational,
}

impl EmptyStateReport {
    pub fn pass(&self) -> bool {
        self.pi_empty >= self.lower_bound
    }
}

pub fn empty_state_check(space: &SubsetSpace, params: &Params) -> Result<EmptyStateReport> {
    params.require_q2()?;
    let rc = rc_measure(space, params.p_rc(), params.q());
    Ok(EmptyStateReport {
        pi_empty: rc.prob(0),
        lower_bound: pow(&(Rational::one() - params.p_rc()), space.edge_count()),
    })
}
