use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::EdgeSubset;
use crate::rational::{Powers, Rational};

/// δ(w,z) = p'^{|z\w|} (1-p')^{|E\z|}: the law of the lifted state `z`
/// given the worm state `w ⊆ z`.
pub fn delta(w: &EdgeSubset, z: &EdgeSubset, p_prime: &Rational) -> Result<Rational> {
    if !w.is_subset(z) {
        return Err(Error::NotNested(format!("{w:?} is not contained in {z:?}")));
    }
    let kernel = DeltaKernel::new(z.universe(), p_prime);
    Ok(kernel.get(w.mask(), z.mask()).expect("checked subset"))
}

/// δ on masks with cached powers of p' and 1-p'.
#[derive(Clone, Debug)]
pub struct DeltaKernel {
    m: usize,
    p_prime: Rational,
    lift: Powers,
    keep: Powers,
}

impl DeltaKernel {
    pub fn new(m: usize, p_prime: &Rational) -> Self {
        DeltaKernel {
            m,
            p_prime: p_prime.clone(),
            lift: Powers::new(p_prime, m),
            keep: Powers::new(&(Rational::one() - p_prime), m),
        }
    }

    pub fn p_prime(&self) -> &Rational {
        &self.p_prime
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    /// `None` when `w ⊄ z`.
    pub fn get(&self, w: u64, z: u64) -> Option<Rational> {
        if w & !z != 0 {
            return None;
        }
        let added = (z & !w).count_ones() as usize;
        let absent = self.m - z.count_ones() as usize;
        Some(self.lift.get(added) * self.keep.get(absent))
    }

    /// Σ_w μ(w) δ(w, ·) as a dense vector over all `2^m` masks.
    pub fn push_forward<'a>(&self, source: impl IntoIterator<Item = (u64, &'a Rational)>) -> Vec<Rational> {
        let mut h = vec![Rational::zero(); 1usize << self.m];
        for (w, mass) in source {
            h[w as usize] += mass;
        }
        // h[z] <- Σ_{w⊆z} p'^{|z\w|} h[w], one edge at a time.
        for e in 0..self.m {
            let bit = 1usize << e;
            for z in 0..h.len() {
                if z & bit != 0 {
                    let lower = &h[z ^ bit] * &self.p_prime;
                    h[z] += lower;
                }
            }
        }
        for (z, v) in h.iter_mut().enumerate() {
            let absent = self.m - z.count_ones() as usize;
            *v *= self.keep.get(absent);
        }
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn single_edge_values() {
        let p = rat(1, 3);
        let empty = EdgeSubset::empty(1);
        let full = EdgeSubset::full(1);
        assert_eq!(delta(&empty, &empty, &p).unwrap(), rat(2, 3));
        assert_eq!(delta(&empty, &full, &p).unwrap(), rat(1, 3));
        assert!(delta(&full, &empty, &p).is_err());
    }

    #[test]
    fn rows_sum_to_one_on_k3() {
        let k = DeltaKernel::new(3, &rat(1, 3));
        let total: Rational = (0..8u64).filter_map(|z| k.get(0, z)).sum();
        assert_eq!(total, int(1));
        let total: Rational = (0..8u64).filter_map(|z| k.get(0b101, z)).sum();
        assert_eq!(total, int(1));
    }

    #[test]
    fn push_forward_matches_direct_sum() {
        let k = DeltaKernel::new(4, &rat(2, 7));
        let source: Vec<(u64, Rational)> = vec![(0, rat(1, 2)), (0b0011, rat(1, 3)), (0b1010, rat(1, 6))];
        let pushed = k.push_forward(source.iter().map(|(w, r)| (*w, r)));
        for z in 0..16u64 {
            let direct: Rational = source.iter().filter_map(|(w, r)| k.get(*w, z).map(|d| d * r)).sum();
            assert_eq!(pushed[z as usize], direct, "z = {z:04b}");
        }
    }
}
