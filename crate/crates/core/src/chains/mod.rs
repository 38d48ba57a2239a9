//! The Markov chains: lazy single-bond flips on random-cluster states, a
//! worm chain on near-even subgraphs, the lift from even subgraphs to
//! random-cluster states, and Swendsen-Wang.

mod driver;
pub mod kernel;
mod sampler;
mod tracker;

pub use driver::{
    autocorrelation, empirical_distribution, integrated_time, lift_distribution, run_chain, ChainRun, Histogram,
};
pub use kernel::{rc_flip_probability, rc_ratio, rc_row, sw_row, worm_ratio, worm_row, Row};
pub use sampler::{chain_rng, gj_lift, Chain, ChainConfig, ChainKind, ChainRng, StepKind, StepTrace};
pub use tracker::ClusterTracker;
