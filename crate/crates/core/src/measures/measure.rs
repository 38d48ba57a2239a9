use std::collections::HashMap;

use num_traits::Zero;

use crate::rational::Rational;

/// A normalized probability measure on edge-subset masks. States not listed
/// carry probability zero.
#[derive(Clone, Debug)]
pub struct Measure {
    masks: Vec<u64>,
    probs: Vec<Rational>,
    index: HashMap<u64, usize>,
    total_weight: Rational,
}

impl Measure {
    /// Normalize nonnegative weights. Entries with zero weight are dropped.
    pub fn from_weights(weights: impl IntoIterator<Item = (u64, Rational)>) -> Self {
        let pairs: Vec<(u64, Rational)> = weights.into_iter().filter(|(_, w)| !w.is_zero()).collect();
        let total_weight: Rational = pairs.iter().map(|(_, w)| w).sum();
        assert!(!total_weight.is_zero(), "measure with zero total weight");
        let mut masks = Vec::with_capacity(pairs.len());
        let mut probs = Vec::with_capacity(pairs.len());
        let mut index = HashMap::with_capacity(pairs.len());
        for (i, (mask, w)) in pairs.into_iter().enumerate() {
            assert!(index.insert(mask, i).is_none(), "duplicate state {mask}");
            masks.push(mask);
            probs.push(w / &total_weight);
        }
        Measure {
            masks,
            probs,
            index,
            total_weight,
        }
    }

    /// The normalizing constant the weights were divided by.
    pub fn total_weight(&self) -> &Rational {
        &self.total_weight
    }

    pub fn get(&self, mask: u64) -> Option<&Rational> {
        self.index.get(&mask).map(|&i| &self.probs[i])
    }

    pub fn prob(&self, mask: u64) -> Rational {
        self.get(mask).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> &[u64] {
        &self.masks
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &Rational)> {
        self.masks.iter().copied().zip(&self.probs)
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }
}
