use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::ClusterTracker;
use crate::error::{Error, Result};
use crate::graph::{EdgeSubset, Graph, UnionFind};
use crate::measures::Params;
use crate::rational::{ln, to_f64, Rational};

/// The generator behind every chain. One stream per chain, seeded explicitly.
pub type ChainRng = ChaCha8Rng;

pub fn chain_rng(seed: u64) -> ChainRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ChainKind {
    /// Lazy single-bond-flip Metropolis chain on random-cluster states.
    Rc,
    /// Lazy Metropolis chain on Ω_0 ∪ Ω_2 targeting π_worm.
    Worm,
    /// Swendsen-Wang recoloring.
    Sw,
}

impl ChainKind {
    pub fn name(self) -> &'static str {
        match self {
            ChainKind::Rc => "rc",
            ChainKind::Worm => "worm",
            ChainKind::Sw => "sw",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ChainConfig {
    pub kind: ChainKind,
    pub params: Params,
    pub seed: u64,
    pub steps: u64,
}

impl ChainConfig {
    pub fn new(kind: ChainKind, params: Params, seed: u64, steps: u64) -> Self {
        ChainConfig {
            kind,
            params,
            seed,
            steps,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            ChainKind::Rc => self.params.require_open_rc(),
            // Params already guarantees p_even <= 1/2.
            ChainKind::Worm => Ok(()),
            ChainKind::Sw => {
                self.params.require_q2()?;
                self.params.require_open_rc()
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    Insert,
    Delete,
    /// The lazy coin kept the state.
    Hold,
    /// A whole-state update (Swendsen-Wang).
    Resample,
}

/// One transition. `post = pre ⊕ {edge}` when a flip is accepted, else
/// `post = pre`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepTrace {
    pub t: u64,
    pub edge: Option<usize>,
    pub kind: StepKind,
    pub accepted: bool,
    #[serde(skip)]
    pub pre: EdgeSubset,
    #[serde(skip)]
    pub post: EdgeSubset,
}

/// Per-step constants in log space.
#[derive(Clone, Debug)]
struct Rates {
    /// ln(p/(1-p)) at p_rc.
    rc_odds: f64,
    ln_q: f64,
    /// ln(p/(1-p)) at p_even.
    worm_odds: f64,
    /// ln n².
    ln_penalty: f64,
    p_rc: f64,
}

impl Rates {
    fn new(params: &Params) -> Self {
        let log_odds = |p: &Rational| {
            let rest = Rational::from_integer(1.into()) - p;
            if rest == Rational::from_integer(0.into()) {
                f64::INFINITY
            } else {
                ln(p) - ln(&rest)
            }
        };
        let n = params.vertex_count() as f64;
        Rates {
            rc_odds: log_odds(params.p_rc()),
            ln_q: ln(params.q()),
            worm_odds: log_odds(params.p_even()),
            ln_penalty: 2.0 * n.ln(),
            p_rc: to_f64(params.p_rc()),
        }
    }
}

/// A running chain: graph, state, generator.
#[derive(Clone, Debug)]
pub struct Chain<'g> {
    g: &'g Graph,
    cfg: ChainConfig,
    rng: ChainRng,
    state: EdgeSubset,
    t: u64,
    rates: Rates,
    tracker: ClusterTracker,
    odd: Vec<bool>,
    odd_count: usize,
}

impl<'g> Chain<'g> {
    pub fn new(g: &'g Graph, cfg: ChainConfig, initial: EdgeSubset) -> Result<Self> {
        cfg.validate()?;
        if initial.universe() != g.edge_count() {
            return Err(Error::DimensionMismatch(initial.universe(), g.edge_count()));
        }
        if cfg.params.vertex_count() != g.vertex_count() {
            return Err(Error::DimensionMismatch(cfg.params.vertex_count(), g.vertex_count()));
        }
        let mut odd = vec![false; g.vertex_count()];
        for e in initial.iter() {
            let (u, v) = g.edge(e);
            odd[u] ^= true;
            odd[v] ^= true;
        }
        let odd_count = odd.iter().filter(|&&o| o).count();
        if cfg.kind == ChainKind::Worm && odd_count > 2 {
            return Err(Error::OutsideWormSpace(odd_count));
        }
        Ok(Chain {
            g,
            rng: chain_rng(cfg.seed),
            rates: Rates::new(&cfg.params),
            tracker: ClusterTracker::new(g, &initial),
            state: initial,
            t: 0,
            odd,
            odd_count,
            cfg,
        })
    }

    pub fn state(&self) -> &EdgeSubset {
        &self.state
    }

    pub fn time(&self) -> u64 {
        self.t
    }

    pub fn config(&self) -> &ChainConfig {
        &self.cfg
    }

    pub fn rng(&mut self) -> &mut ChainRng {
        &mut self.rng
    }

    /// Advance one transition.
    pub fn step(&mut self) -> StepTrace {
        let pre = self.state.clone();
        let (edge, kind, accepted) = match self.cfg.kind {
            ChainKind::Rc => self.flip_step(Self::rc_log_ratio),
            ChainKind::Worm => self.flip_step(Self::worm_log_ratio),
            ChainKind::Sw => {
                self.sw_update();
                (None, StepKind::Resample, true)
            }
        };
        self.t += 1;
        StepTrace {
            t: self.t,
            edge,
            kind,
            accepted,
            pre,
            post: self.state.clone(),
        }
    }

    /// Advance without building traces.
    pub fn advance(&mut self, steps: u64) {
        for _ in 0..steps {
            match self.cfg.kind {
                ChainKind::Rc => {
                    self.flip_step(Self::rc_log_ratio);
                }
                ChainKind::Worm => {
                    self.flip_step(Self::worm_log_ratio);
                }
                ChainKind::Sw => self.sw_update(),
            }
            self.t += 1;
        }
    }

    fn flip_step(&mut self, log_ratio: fn(&mut Self, usize) -> Option<f64>) -> (Option<usize>, StepKind, bool) {
        let m = self.g.edge_count();
        if m == 0 || self.rng.random_bool(0.5) {
            return (None, StepKind::Hold, false);
        }
        let e = self.rng.random_range(0..m);
        let kind = if self.state.contains(e) {
            StepKind::Delete
        } else {
            StepKind::Insert
        };
        let accepted = match log_ratio(self, e) {
            None => false,
            Some(r) if r >= 0.0 => true,
            Some(r) => self.rng.random::<f64>() < r.exp(),
        };
        if accepted {
            self.apply_flip(e);
        }
        (Some(e), kind, accepted)
    }

    fn apply_flip(&mut self, e: usize) {
        let (u, v) = self.g.edge(e);
        for x in [u, v] {
            self.odd[x] ^= true;
            if self.odd[x] {
                self.odd_count += 1;
            } else {
                self.odd_count -= 1;
            }
        }
        if self.state.contains(e) {
            self.state.remove(e);
            self.tracker.deleted();
        } else {
            self.state.insert(e);
            self.tracker.inserted(self.g, e);
        }
    }

    fn rc_log_ratio(&mut self, e: usize) -> Option<f64> {
        let r = &self.rates;
        Some(if self.state.contains(e) {
            let split = self.tracker.deletion_splits(self.g, &self.state, e);
            -r.rc_odds + if split { r.ln_q } else { 0.0 }
        } else {
            let merge = self.tracker.insertion_merges(self.g, &self.state, e);
            r.rc_odds - if merge { r.ln_q } else { 0.0 }
        })
    }

    fn worm_log_ratio(&mut self, e: usize) -> Option<f64> {
        let (u, v) = self.g.edge(e);
        let change: isize = [u, v].iter().map(|&x| if self.odd[x] { -1 } else { 1 }).sum();
        let after = (self.odd_count as isize + change) as usize;
        if after > 2 {
            return None;
        }
        let r = &self.rates;
        let mut lr = if self.state.contains(e) {
            -r.worm_odds
        } else {
            r.worm_odds
        };
        match (self.odd_count, after) {
            (0, 2) => lr -= r.ln_penalty,
            (2, 0) => lr += r.ln_penalty,
            _ => {}
        }
        Some(lr)
    }

    fn sw_update(&mut self) {
        let g = self.g;
        let n = g.vertex_count();
        let mut uf = UnionFind::new(n);
        for e in self.state.iter() {
            let (u, v) = g.edge(e);
            uf.union(u, v);
        }
        let mut color: Vec<Option<bool>> = vec![None; n];
        let mut vertex_color = vec![false; n];
        for (v, slot) in vertex_color.iter_mut().enumerate() {
            let root = uf.find(v);
            *slot = *color[root].get_or_insert_with(|| self.rng.random_bool(0.5));
        }
        let mut next = g.empty_subset();
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            if vertex_color[u] == vertex_color[v] && self.rng.random_bool(self.rates.p_rc) {
                next.insert(e);
            }
        }
        self.set_state(next);
    }

    fn set_state(&mut self, state: EdgeSubset) {
        self.odd.iter_mut().for_each(|o| *o = false);
        for e in state.iter() {
            let (u, v) = self.g.edge(e);
            self.odd[u] ^= true;
            self.odd[v] ^= true;
        }
        self.odd_count = self.odd.iter().filter(|&&o| o).count();
        self.tracker.reset(self.g, &state);
        self.state = state;
    }
}

/// Add each edge outside `w` independently with probability p' = p/(1-p).
pub fn gj_lift(g: &Graph, w: &EdgeSubset, params: &Params, rng: &mut impl Rng) -> EdgeSubset {
    let p1 = to_f64(&params.lift_probability()).min(1.0);
    let mut r = w.clone();
    for e in 0..g.edge_count() {
        if !w.contains(e) && rng.random_bool(p1) {
            r.insert(e);
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;
    use crate::rational::rat;

    fn cfg(kind: ChainKind, params: Params, seed: u64) -> ChainConfig {
        ChainConfig::new(kind, params, seed, 0)
    }

    #[test]
    fn traces_respect_flip_contract() {
        let g = families::complete(4);
        for kind in [ChainKind::Rc, ChainKind::Worm] {
            let params = Params::from_p_rc(rat(1, 2), 4).unwrap();
            let mut chain = Chain::new(&g, cfg(kind, params, 3), g.empty_subset()).unwrap();
            for _ in 0..500 {
                let s = chain.step();
                match (s.edge, s.accepted) {
                    (Some(e), true) => assert_eq!(s.post, s.pre.flipped(e)),
                    _ => assert_eq!(s.post, s.pre),
                }
                if kind == ChainKind::Worm {
                    assert!(crate::graph::odd_vertices(&g, &s.post).len() <= 2);
                }
            }
        }
    }

    #[test]
    fn same_seed_same_trace() {
        let g = families::bowtie();
        let params = Params::from_p_rc(rat(2, 5), g.vertex_count()).unwrap();
        let run = |seed| {
            let mut c = Chain::new(&g, cfg(ChainKind::Rc, params.clone(), seed), g.empty_subset()).unwrap();
            (0..300).map(|_| c.step()).collect::<Vec<_>>()
        };
        assert_eq!(run(9), run(9));
        assert_ne!(run(9), run(10));
    }

    #[test]
    fn worm_rejects_bad_start() {
        let g = families::path(4);
        let params = Params::from_p_rc(rat(1, 2), 4).unwrap();
        let start = EdgeSubset::from_edges(3, [0, 2]);
        assert!(Chain::new(&g, cfg(ChainKind::Worm, params, 0), start).is_err());
    }

    #[test]
    fn rc_needs_open_parameter() {
        let g = families::single_edge();
        let params = Params::from_p_rc(rat(1, 1), 2).unwrap();
        assert!(Chain::new(&g, cfg(ChainKind::Rc, params.clone(), 0), g.empty_subset()).is_err());
        assert!(Chain::new(&g, cfg(ChainKind::Worm, params, 0), g.empty_subset()).is_ok());
    }

    #[test]
    fn sw_on_edgeless_graph_stays_empty() {
        let g = families::edgeless(3);
        let params = Params::from_p_rc(rat(1, 2), 3).unwrap();
        let mut c = Chain::new(&g, cfg(ChainKind::Sw, params, 1), g.empty_subset()).unwrap();
        c.advance(20);
        assert!(c.state().is_empty());
    }

    #[test]
    fn lift_is_superset() {
        let g = families::complete(4);
        let params = Params::from_p_even(rat(1, 4), 4).unwrap();
        let mut rng = chain_rng(5);
        let w = EdgeSubset::from_edges(6, [0, 1, 3]);
        for _ in 0..50 {
            assert!(w.is_subset(&gj_lift(&g, &w, &params, &mut rng)));
        }
        let tiny = Params::from_p_even(rat(1, 1_000_000_000), 4).unwrap();
        assert!(gj_lift(&g, &w, &tiny, &mut rng).len() <= 6);
    }
}
