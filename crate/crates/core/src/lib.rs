//! Random-cluster, even-subgraph and worm samplers for the ferromagnetic
//! Ising model, with an exact verification engine for small graphs.

pub mod analysis;
pub mod chains;
pub mod cli;
pub mod error;
pub mod graph;
pub mod guards;
pub mod measures;
pub mod paths;
pub mod rational;
pub mod report;

pub use error::{Error, Result};
pub use graph::{EdgeSubset, Graph, SubsetSpace};
pub use guards::Guards;
pub use measures::Params;
