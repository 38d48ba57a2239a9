//! Configuration weights, exact partition functions, and exact checks of the
//! identities tying the Ising, random-cluster, even-subgraph and worm
//! measures together.

mod checks;
mod measure;
mod params;
mod partition;
mod weight;

pub use checks::{
    empty_state_check, even_count_check, hat_pi, hole_bounds, verify_equivalence, EmptyStateReport, EquivalenceReport,
    EvenCountReport, HatPiReport, HoleReport,
};
pub use measure::Measure;
pub use params::Params;
pub use partition::{
    even_measure, even_partition, hole_partition, ising_partition, log_subset_weight, rc_measure, rc_partition,
    stratum_partition, subset_weight, worm_measure, worm_partition, RcWeights,
};
pub use weight::{Mode, Weight, FLOAT_TOLERANCE};
