use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use super::{Measure, Params};
use crate::error::{Error, Result};
use crate::graph::{EdgeSubset, Graph, SubsetSpace};
use crate::guards::Guards;
use crate::rational::{Powers, Rational};

/// w_p(S) = p^|S| (1-p)^|E \ S|.
pub fn subset_weight(g: &Graph, s: &EdgeSubset, p: &Rational) -> Rational {
    assert_eq!(s.universe(), g.edge_count(), "subset belongs to another graph");
    let k = s.len();
    crate::rational::pow(p, k) * crate::rational::pow(&(Rational::one() - p), g.edge_count() - k)
}

/// ln w_p(S) for the samplers.
pub fn log_subset_weight(g: &Graph, s: &EdgeSubset, p: f64) -> f64 {
    let k = s.len() as f64;
    let rest = (g.edge_count() - s.len()) as f64;
    let term = |count: f64, base: f64| if count == 0.0 { 0.0 } else { count * base.ln() };
    term(k, p) + term(rest, 1.0 - p)
}

/// Σ_k count[k] p^k (1-p)^(m-k).
fn size_histogram_sum(hist: &[u64], p: &Rational, m: usize) -> Rational {
    let ps = Powers::new(p, m);
    let qs = Powers::new(&(Rational::one() - p), m);
    hist.iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(k, &c)| Rational::from_integer(BigInt::from(c)) * ps.get(k) * qs.get(m - k))
        .sum()
}

fn size_histogram(space: &SubsetSpace, keep: impl Fn(u64) -> bool) -> Vec<u64> {
    let mut hist = vec![0u64; space.edge_count() + 1];
    for s in space.masks().filter(|&s| keep(s)) {
        hist[s.count_ones() as usize] += 1;
    }
    hist
}

/// Z_Ising(β) = Σ_σ β^{m(σ)} over all 2^n spin assignments.
pub fn ising_partition(g: &Graph, beta: &Rational, guards: &Guards) -> Result<Rational> {
    guards.check_spins(g)?;
    let n = g.vertex_count();
    let mut hist = vec![0u64; g.edge_count() + 1];
    for sigma in 0u64..1 << n {
        let mono = g
            .edges()
            .iter()
            .filter(|&&(u, v)| (sigma >> u & 1) == (sigma >> v & 1))
            .count();
        hist[mono] += 1;
    }
    let powers = Powers::new(beta, g.edge_count());
    Ok(hist
        .iter()
        .enumerate()
        .map(|(k, &c)| Rational::from_integer(BigInt::from(c)) * powers.get(k))
        .sum())
}

/// Exact random-cluster weights p^|S| (1-p)^|E\S| q^κ(S).
#[derive(Clone, Debug)]
pub struct RcWeights {
    m: usize,
    p: Powers,
    not_p: Powers,
    q: Powers,
}

impl RcWeights {
    pub fn new(space: &SubsetSpace, p: &Rational, q: &Rational) -> Self {
        let m = space.edge_count();
        RcWeights {
            m,
            p: Powers::new(p, m),
            not_p: Powers::new(&(Rational::one() - p), m),
            q: Powers::new(q, space.vertex_count()),
        }
    }

    pub fn weight(&self, space: &SubsetSpace, mask: u64) -> Rational {
        let k = mask.count_ones() as usize;
        self.p.get(k) * self.not_p.get(self.m - k) * self.q.get(space.kappa(mask))
    }
}

/// Z_RC(p, q), summed through a histogram over (|S|, κ(S)).
pub fn rc_partition(space: &SubsetSpace, p: &Rational, q: &Rational) -> Rational {
    let mut hist: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for s in space.masks() {
        *hist.entry((s.count_ones() as usize, space.kappa(s))).or_default() += 1;
    }
    let m = space.edge_count();
    let ps = Powers::new(p, m);
    let nps = Powers::new(&(Rational::one() - p), m);
    let qs = Powers::new(q, space.vertex_count());
    hist.into_iter()
        .map(|((k, c), count)| Rational::from_integer(BigInt::from(count)) * ps.get(k) * nps.get(m - k) * qs.get(c))
        .sum()
}

/// π_RC with parameters (p, q) over every edge subset.
pub fn rc_measure(space: &SubsetSpace, p: &Rational, q: &Rational) -> Measure {
    let w = RcWeights::new(space, p, q);
    Measure::from_weights(space.masks().map(|s| (s, w.weight(space, s))))
}

/// Z_k: total w_p over subsets with exactly `k` odd vertices.
pub fn stratum_partition(space: &SubsetSpace, p: &Rational, k: usize) -> Rational {
    let hist = size_histogram(space, |s| space.odd_count(s) == k);
    size_histogram_sum(&hist, p, space.edge_count())
}

/// Z_even(p) = Z_0.
pub fn even_partition(space: &SubsetSpace, p: &Rational) -> Rational {
    stratum_partition(space, p, 0)
}

/// Z_{u,v}: total w_p over subsets whose odd vertices are exactly `u` and `v`.
pub fn hole_partition(space: &SubsetSpace, p: &Rational, u: usize, v: usize) -> Result<Rational> {
    if u == v {
        return Err(Error::CoincidentHoles(u));
    }
    let n = space.vertex_count();
    if u >= n || v >= n {
        return Err(Error::Parameter {
            name: "hole",
            value: format!("({u}, {v})"),
            expected: "vertices of the graph",
        });
    }
    let target = (1u64 << u) | (1u64 << v);
    let hist = size_histogram(space, |s| space.odd_mask(s) == target);
    Ok(size_histogram_sum(&hist, p, space.edge_count()))
}

/// Z_worm(p) = Z_0 + n⁻² Z_2.
pub fn worm_partition(space: &SubsetSpace, p: &Rational) -> Rational {
    let n = space.vertex_count();
    let penalty = Rational::new(BigInt::one(), BigInt::from(n * n));
    even_partition(space, p) + penalty * stratum_partition(space, p, 2)
}

fn subset_weights(space: &SubsetSpace, p: &Rational) -> (Powers, Powers) {
    let m = space.edge_count();
    (Powers::new(p, m), Powers::new(&(Rational::one() - p), m))
}

/// π_even with parameter p, supported on Ω_0.
pub fn even_measure(space: &SubsetSpace, p: &Rational) -> Measure {
    let m = space.edge_count();
    let (ps, qs) = subset_weights(space, p);
    Measure::from_weights(space.masks().filter(|&s| space.is_even(s)).map(|s| {
        let k = s.count_ones() as usize;
        (s, ps.get(k) * qs.get(m - k))
    }))
}

/// π_worm with parameter p: weight w_p on Ω_0, n⁻² w_p on Ω_2.
pub fn worm_measure(space: &SubsetSpace, p: &Rational) -> Measure {
    let m = space.edge_count();
    let n = space.vertex_count();
    let penalty = Rational::new(BigInt::one(), BigInt::from(n * n));
    let (ps, qs) = subset_weights(space, p);
    Measure::from_weights(space.masks().filter(|&s| space.is_worm(s)).map(|s| {
        let k = s.count_ones() as usize;
        let w = ps.get(k) * qs.get(m - k);
        let w = if space.is_even(s) { w } else { w * &penalty };
        (s, w)
    }))
}

impl Params {
    /// π_RC at this parameter set's (p_rc, q).
    pub fn rc_measure(&self, space: &SubsetSpace) -> Measure {
        rc_measure(space, self.p_rc(), self.q())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;
    use crate::rational::{int, rat};

    fn space(g: &Graph) -> SubsetSpace<'_> {
        SubsetSpace::new(g, &Guards::default()).unwrap()
    }

    #[test]
    fn subset_weight_examples() {
        let single = families::single_edge();
        assert_eq!(subset_weight(&single, &single.full_subset(), &rat(1, 4)), rat(1, 4));
        let k3 = families::triangle();
        assert_eq!(subset_weight(&k3, &k3.empty_subset(), &rat(1, 4)), rat(27, 64));
        assert_eq!(subset_weight(&k3, &k3.full_subset(), &rat(1, 2)), rat(1, 8));
        let lw = log_subset_weight(&k3, &EdgeSubset::from_edges(3, [1]), 0.25);
        assert!((lw - (0.25f64 * 0.75 * 0.75).ln()).abs() < 1e-14);
    }

    #[test]
    fn ising_examples() {
        let g = Guards::default();
        assert_eq!(ising_partition(&families::single_edge(), &int(2), &g).unwrap(), int(6));
        assert_eq!(ising_partition(&families::triangle(), &int(2), &g).unwrap(), int(28));
        assert_eq!(ising_partition(&families::edgeless(2), &rat(7, 3), &g).unwrap(), int(4));
    }

    #[test]
    fn rc_examples() {
        let single = families::single_edge();
        assert_eq!(rc_partition(&space(&single), &rat(1, 2), &int(2)), int(3));
        let k3 = families::triangle();
        assert_eq!(rc_partition(&space(&k3), &rat(1, 2), &int(2)), rat(7, 2));
        for (_, g) in families::battery() {
            let n = g.vertex_count() as i64;
            assert_eq!(rc_partition(&space(&g), &int(0), &int(2)), int(1 << n));
        }
    }

    #[test]
    fn rc_partition_matches_direct_sum() {
        for (_, g) in families::battery() {
            let sp = space(&g);
            for q in [int(2), rat(1, 3), int(5)] {
                let w = RcWeights::new(&sp, &rat(2, 7), &q);
                let direct: Rational = sp.masks().map(|s| w.weight(&sp, s)).sum();
                assert_eq!(direct, rc_partition(&sp, &rat(2, 7), &q));
            }
        }
    }

    #[test]
    fn even_and_hole_examples() {
        let k3 = families::triangle();
        let sp = space(&k3);
        let p = rat(1, 4);
        assert_eq!(even_partition(&sp, &p), rat(7, 16));
        assert_eq!(stratum_partition(&sp, &p, 2), rat(9, 16));
        assert_eq!(hole_partition(&sp, &p, 0, 1).unwrap(), rat(3, 16));
        assert!(matches!(hole_partition(&sp, &p, 1, 1), Err(Error::CoincidentHoles(1))));
        assert!(hole_partition(&sp, &p, 0, 7).is_err());
        assert_eq!(
            worm_partition(&sp, &p),
            even_partition(&sp, &p) + rat(1, 9) * stratum_partition(&sp, &p, 2)
        );
    }

    #[test]
    fn measures_normalize() {
        let k3 = families::triangle();
        let sp = space(&k3);
        let even = even_measure(&sp, &rat(1, 4));
        assert_eq!(even.support(), &[0, 7]);
        assert_eq!(even.prob(0), rat(27, 28));
        let worm = worm_measure(&sp, &rat(1, 4));
        assert_eq!(worm.len(), 8);
        assert_eq!(worm.total_weight(), &worm_partition(&sp, &rat(1, 4)));
        let total: Rational = worm.iter().map(|(_, p)| p.clone()).sum();
        assert_eq!(total, int(1));
    }
}
