use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use crate::chains::{rc_row, sw_row, worm_row, ChainKind};
use crate::error::{Error, Result};
use crate::graph::SubsetSpace;
use crate::guards::Guards;
use crate::measures::{worm_measure, Measure, Params};
use crate::rational::{rat, Rational};

/// A full transition matrix over an enumerated state space, stored as sparse
/// rows, with the measure it should preserve.
#[derive(Clone, Debug)]
pub struct TransitionMatrix {
    states: Vec<u64>,
    index: HashMap<u64, usize>,
    rows: Vec<Vec<(usize, Rational)>>,
    stationary: Vec<Rational>,
}

impl TransitionMatrix {
    /// Rows are given as `(target mask, probability)` per state, states in
    /// increasing mask order.
    pub fn from_rows(states: Vec<u64>, rows: Vec<Vec<(u64, Rational)>>, stationary: &Measure) -> Result<Self> {
        if states.len() != rows.len() {
            return Err(Error::DimensionMismatch(states.len(), rows.len()));
        }
        let index: HashMap<u64, usize> = states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut indexed = Vec::with_capacity(rows.len());
        for row in rows {
            let mut r = Vec::with_capacity(row.len());
            for (to, p) in row {
                let j = *index
                    .get(&to)
                    .ok_or_else(|| Error::MalformedTransition(format!("target {to:#b} outside the state space")))?;
                r.push((j, p));
            }
            r.sort_by_key(|(j, _)| *j);
            indexed.push(r);
        }
        let stationary = states.iter().map(|&s| stationary.prob(s)).collect();
        Ok(TransitionMatrix {
            states,
            index,
            rows: indexed,
            stationary,
        })
    }

    pub fn states(&self) -> &[u64] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, mask: u64) -> Option<usize> {
        self.index.get(&mask).copied()
    }

    pub fn row(&self, i: usize) -> &[(usize, Rational)] {
        &self.rows[i]
    }

    pub fn stationary(&self) -> &[Rational] {
        &self.stationary
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        match self.rows[i].binary_search_by_key(&j, |(k, _)| *k) {
            Ok(pos) => self.rows[i][pos].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    /// Rows that are not probability vectors.
    pub fn stochasticity_violations(&self) -> Vec<u64> {
        (0..self.len())
            .filter(|&i| {
                let row = &self.rows[i];
                row.iter().any(|(_, p)| *p < Rational::zero())
                    || row.iter().map(|(_, p)| p).sum::<Rational>() != Rational::one()
            })
            .map(|i| self.states[i])
            .collect()
    }

    pub fn min_diagonal(&self) -> Rational {
        (0..self.len())
            .map(|i| self.get(i, i))
            .min()
            .unwrap_or_else(Rational::one)
    }

    pub fn is_lazy(&self) -> bool {
        self.min_diagonal() >= rat(1, 2)
    }

    /// Pairs with π(x)P(x,y) ≠ π(y)P(y,x).
    pub fn reversibility_violations(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for (j, p) in &self.rows[i] {
                if *j > i && &self.stationary[i] * p != &self.stationary[*j] * self.get(*j, i) {
                    out.push((self.states[i], self.states[*j]));
                }
            }
            // Entries present only in the reverse direction.
            for (j, p) in self.rows[i].iter().filter(|(j, _)| *j < i) {
                if self.get(*j, i).is_zero() && !(&self.stationary[i] * p).is_zero() {
                    out.push((self.states[i], self.states[*j]));
                }
            }
        }
        out
    }

    /// π P.
    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.len()];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, p) in &self.rows[i] {
                out[*j] += vi * p;
            }
        }
        out
    }

    /// States where (πP)(y) ≠ π(y).
    pub fn stationarity_violations(&self) -> Vec<u64> {
        let moved = self.apply(&self.stationary);
        (0..self.len())
            .filter(|&i| moved[i] != self.stationary[i])
            .map(|i| self.states[i])
            .collect()
    }
}

/// Assemble the exact matrix of one chain. The worm matrix lives on
/// Ω_0 ∪ Ω_2; the other two on all subsets.
pub fn build_matrix(
    space: &SubsetSpace,
    params: &Params,
    kind: ChainKind,
    guards: &Guards,
) -> Result<TransitionMatrix> {
    guards.check_matrix(space.graph())?;
    match kind {
        ChainKind::Rc => {
            let states: Vec<u64> = space.masks().collect();
            let rows = states
                .iter()
                .map(|&z| rc_row(space, params, z))
                .collect::<Result<_>>()?;
            TransitionMatrix::from_rows(states, rows, &params.rc_measure(space))
        }
        ChainKind::Sw => {
            let states: Vec<u64> = space.masks().collect();
            let rows = states
                .iter()
                .map(|&z| sw_row(space, params, z))
                .collect::<Result<_>>()?;
            TransitionMatrix::from_rows(states, rows, &params.rc_measure(space))
        }
        ChainKind::Worm => {
            let states = space.worm_masks();
            let rows = states
                .iter()
                .map(|&w| worm_row(space, params, w))
                .collect::<Result<_>>()?;
            TransitionMatrix::from_rows(states, rows, &worm_measure(space, params.p_even()))
        }
    }
}

/// ½ Σ |d1 - d2|, exactly.
pub fn tv_distance(d1: &[Rational], d2: &[Rational]) -> Result<Rational> {
    if d1.len() != d2.len() {
        return Err(Error::DimensionMismatch(d1.len(), d2.len()));
    }
    let sum: Rational = d1.iter().zip(d2).map(|(a, b)| (a - b).abs()).sum();
    Ok(sum / crate::rational::int(2))
}

/// ½ Σ |d1 - d2| in floating point.
pub fn tv_distance_f64(d1: &[f64], d2: &[f64]) -> Result<f64> {
    if d1.len() != d2.len() {
        return Err(Error::DimensionMismatch(d1.len(), d2.len()));
    }
    Ok(d1.iter().zip(d2).map(|(a, b)| (a - b).abs()).sum::<f64>() / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;
    use crate::rational::int;

    #[test]
    fn single_edge_rc_matrix() {
        let g = families::single_edge();
        let space = SubsetSpace::new(&g, &Guards::default()).unwrap();
        let params = Params::from_p_rc(rat(1, 2), 2).unwrap();
        let mat = build_matrix(&space, &params, ChainKind::Rc, &Guards::default()).unwrap();
        assert_eq!(mat.get(0, 1), rat(1, 4));
        assert_eq!(mat.get(1, 0), rat(1, 2));
        assert!(mat.is_lazy());
        assert!(mat.reversibility_violations().is_empty());
        assert!(mat.stationarity_violations().is_empty());
        let sw = build_matrix(&space, &params, ChainKind::Sw, &Guards::default()).unwrap();
        assert_eq!(sw.stationary(), &[rat(2, 3), rat(1, 3)]);
        assert!(sw.stationarity_violations().is_empty());
    }

    #[test]
    fn triangle_matrices_are_stochastic() {
        let g = families::triangle();
        let space = SubsetSpace::new(&g, &Guards::default()).unwrap();
        let params = Params::from_beta(int(2), 3).unwrap();
        for kind in [ChainKind::Rc, ChainKind::Worm, ChainKind::Sw] {
            let mat = build_matrix(&space, &params, kind, &Guards::default()).unwrap();
            assert!(mat.stochasticity_violations().is_empty());
            assert!(mat.stationarity_violations().is_empty());
        }
    }

    #[test]
    fn tv_examples() {
        let a = [rat(3, 4), rat(1, 4)];
        let b = [rat(1, 4), rat(3, 4)];
        assert_eq!(tv_distance(&a, &b).unwrap(), rat(1, 2));
        assert!(tv_distance(&a, &a).unwrap().is_zero());
        assert_eq!(tv_distance(&[int(1), int(0)], &[int(0), int(1)]).unwrap(), int(1));
        assert!(tv_distance(&a, &[int(1)]).is_err());
        assert!(tv_distance(&a, &b).unwrap().is_positive());
        assert_eq!(tv_distance_f64(&[0.75, 0.25], &[0.25, 0.75]).unwrap(), 0.5);
    }
}
