use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};

use super::{Chain, ChainConfig, StepTrace};
use crate::error::Result;
use crate::graph::{submasks, EdgeSubset, Graph, SubsetSpace};
use crate::guards::Guards;
use crate::measures::{Measure, Params};
use crate::rational::{to_f64, Rational};

/// Final state of a run and, when requested, every step.
#[derive(Clone, Debug)]
pub struct ChainRun {
    pub final_state: EdgeSubset,
    pub trace: Vec<StepTrace>,
}

/// Run `cfg.steps` transitions from `initial`.
pub fn run_chain(g: &Graph, cfg: &ChainConfig, initial: EdgeSubset, trace: bool) -> Result<ChainRun> {
    let mut chain = Chain::new(g, cfg.clone(), initial)?;
    let mut steps = Vec::new();
    if trace {
        steps.reserve(cfg.steps as usize);
        for _ in 0..cfg.steps {
            steps.push(chain.step());
        }
    } else {
        chain.advance(cfg.steps);
    }
    Ok(ChainRun {
        final_state: chain.state().clone(),
        trace: steps,
    })
}

/// Visit counts over edge-subset masks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Histogram {
    counts: BTreeMap<u64, u64>,
    total: u64,
}

impl Histogram {
    pub fn record(&mut self, mask: u64) {
        *self.counts.entry(mask).or_default() += 1;
        self.total += 1;
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn count(&self, mask: u64) -> u64 {
        self.counts.get(&mask).copied().unwrap_or(0)
    }

    pub fn frequency(&self, mask: u64) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        self.count(mask) as f64 / self.total as f64
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&k, &v)| (k, v))
    }

    /// Total-variation distance to an exact measure.
    pub fn tv_distance(&self, target: &Measure) -> f64 {
        let mut sum = 0.0;
        for (mask, p) in target.iter() {
            sum += (self.frequency(mask) - to_f64(p)).abs();
        }
        for (mask, _) in self.iter().filter(|(m, _)| target.get(*m).is_none()) {
            sum += self.frequency(mask);
        }
        sum / 2.0
    }

    /// `subset_bitmask,count,frequency` rows in mask order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("subset_bitmask,count,frequency\n");
        for (mask, count) in self.iter() {
            writeln!(out, "{mask},{count},{}", self.frequency(mask)).unwrap();
        }
        out
    }
}

/// Burn in for `cfg.steps` transitions, then record `samples` states spaced
/// `thinning` transitions apart.
pub fn empirical_distribution(
    g: &Graph,
    cfg: &ChainConfig,
    initial: EdgeSubset,
    samples: u64,
    thinning: u64,
    guards: &Guards,
) -> Result<Histogram> {
    guards.check_matrix(g)?;
    let mut chain = Chain::new(g, cfg.clone(), initial)?;
    chain.advance(cfg.steps);
    let mut hist = Histogram::default();
    for _ in 0..samples {
        chain.advance(thinning.max(1));
        hist.record(chain.state().mask());
    }
    Ok(hist)
}

/// The law of the lifted subset when the source state is drawn from
/// `source`, by enumerating every (state, coin outcome) pair.
pub fn lift_distribution(space: &SubsetSpace, params: &Params, source: &Measure) -> Measure {
    let m = space.edge_count();
    let full = space.full_mask();
    let p1 = params.lift_probability();
    let q1 = Rational::one() - &p1;
    let mut law: BTreeMap<u64, Rational> = BTreeMap::new();
    for (w, mass) in source.iter() {
        for added in submasks(full & !w) {
            let mut prob = mass.clone();
            for e in 0..m {
                if w >> e & 1 == 1 {
                    continue;
                }
                prob *= if added >> e & 1 == 1 { &p1 } else { &q1 };
            }
            if !prob.is_zero() {
                *law.entry(w | added).or_insert_with(Rational::zero) += prob;
            }
        }
    }
    Measure::from_weights(law)
}

/// Autocorrelation of a series at lags `0..=max_lag`.
pub fn autocorrelation(series: &[f64], max_lag: usize) -> Vec<f64> {
    let n = series.len();
    if n == 0 {
        return Vec::new();
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let var = series.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
    (0..=max_lag.min(n - 1))
        .map(|lag| {
            if var == 0.0 {
                return if lag == 0 { 1.0 } else { 0.0 };
            }
            let cov = series[..n - lag]
                .iter()
                .zip(&series[lag..])
                .map(|(a, b)| (a - mean) * (b - mean))
                .sum::<f64>()
                / n as f64;
            cov / var
        })
        .collect()
}

/// 1 + 2 Σ ρ(k), summed until the first non-positive lag.
pub fn integrated_time(acf: &[f64]) -> f64 {
    1.0 + 2.0 * acf.iter().skip(1).take_while(|&&r| r > 0.0).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::{ChainKind, StepKind};
    use crate::graph::families;
    use crate::measures::{even_measure, rc_measure};
    use crate::rational::{int, rat};

    #[test]
    fn zero_steps_returns_initial() {
        let g = families::triangle();
        let params = Params::from_p_rc(rat(1, 2), 3).unwrap();
        let cfg = ChainConfig::new(ChainKind::Rc, params, 1, 0);
        let start = EdgeSubset::from_edges(3, [1]);
        let run = run_chain(&g, &cfg, start.clone(), true).unwrap();
        assert_eq!(run.final_state, start);
        assert!(run.trace.is_empty());
    }

    #[test]
    fn traced_and_untraced_runs_agree() {
        let g = families::complete(4);
        let params = Params::from_p_rc(rat(1, 2), 4).unwrap();
        for kind in [ChainKind::Rc, ChainKind::Worm, ChainKind::Sw] {
            let cfg = ChainConfig::new(kind, params.clone(), 21, 400);
            let a = run_chain(&g, &cfg, g.empty_subset(), true).unwrap();
            let b = run_chain(&g, &cfg, g.empty_subset(), false).unwrap();
            assert_eq!(a.final_state, b.final_state);
            assert_eq!(a.trace.last().unwrap().post, a.final_state);
            if kind == ChainKind::Sw {
                assert!(a.trace.iter().all(|s| s.kind == StepKind::Resample));
            }
        }
    }

    #[test]
    fn single_edge_histogram_is_close() {
        let g = families::single_edge();
        let params = Params::from_p_rc(rat(1, 2), 2).unwrap();
        let space = SubsetSpace::new(&g, &Guards::default()).unwrap();
        let target = rc_measure(&space, params.p_rc(), &int(2));
        let cfg = ChainConfig::new(ChainKind::Rc, params, 2014, 1000);
        let hist = empirical_distribution(&g, &cfg, g.empty_subset(), 100_000, 1, &Guards::default()).unwrap();
        assert_eq!(hist.total(), 100_000);
        assert!(hist.tv_distance(&target) < 0.02);
        assert!(hist.to_csv().starts_with("subset_bitmask,count,frequency\n0,"));
    }

    #[test]
    fn lift_of_single_edge() {
        let g = families::single_edge();
        let space = SubsetSpace::new(&g, &Guards::default()).unwrap();
        let params = Params::from_p_even(rat(1, 4), 2).unwrap();
        let lifted = lift_distribution(&space, &params, &even_measure(&space, params.p_even()));
        assert_eq!(lifted.prob(1), rat(1, 3));
        assert_eq!(lifted.prob(1), rc_measure(&space, &rat(1, 2), &int(2)).prob(1));
    }

    #[test]
    fn autocorrelation_basics() {
        let alternating: Vec<f64> = (0..100).map(|i| (i % 2) as f64).collect();
        let acf = autocorrelation(&alternating, 2);
        assert!((acf[0] - 1.0).abs() < 1e-12);
        assert!(acf[1] < -0.9);
        assert_eq!(integrated_time(&acf), 1.0);
        assert_eq!(autocorrelation(&[3.0; 10], 3), vec![1.0, 0.0, 0.0, 0.0]);
    }
}
