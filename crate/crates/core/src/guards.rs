use crate::error::{Error, Result};
use crate::graph::Graph;

/// Size limits for the exponential enumerations.
///
/// Every exact computation walks some power set: the `2^m` edge subsets,
/// the `2^n` spin assignments, full transition matrices, or the coin
/// outcomes of lifted trajectories. Each family has its own ceiling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Guards {
    /// Edge-subset enumeration and cycle inventories.
    pub max_edges: usize,
    /// Spin enumeration for the Ising partition function.
    pub max_vertices: usize,
    /// Dense transition-matrix construction and powering.
    pub matrix_max_edges: usize,
    /// Step-by-step propagation of lifted trajectories.
    pub trajectory_max_edges: usize,
    /// Explicit enumeration of every lifted trajectory.
    pub brute_force_max_edges: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            max_edges: 20,
            max_vertices: 20,
            matrix_max_edges: 12,
            trajectory_max_edges: 6,
            brute_force_max_edges: 4,
        }
    }
}

/// Masks are `u64` and vertex sets are `u64`; nothing can go past this.
pub const HARD_LIMIT: usize = 63;

fn check(what: &'static str, actual: usize, limit: usize) -> Result<()> {
    let limit = limit.min(HARD_LIMIT);
    if actual > limit {
        return Err(Error::GuardExceeded { what, actual, limit });
    }
    Ok(())
}

impl Guards {
    pub fn with_max_edges(mut self, max_edges: usize) -> Self {
        self.max_edges = max_edges;
        self
    }

    pub fn check_enumeration(&self, g: &Graph) -> Result<()> {
        check("edge count", g.edge_count(), self.max_edges)?;
        check("vertex count", g.vertex_count(), HARD_LIMIT)
    }

    pub fn check_spins(&self, g: &Graph) -> Result<()> {
        check("vertex count", g.vertex_count(), self.max_vertices)
    }

    pub fn check_matrix(&self, g: &Graph) -> Result<()> {
        self.check_enumeration(g)?;
        check(
            "edge count for matrix construction",
            g.edge_count(),
            self.matrix_max_edges.min(self.max_edges),
        )
    }

    pub fn check_trajectories(&self, g: &Graph) -> Result<()> {
        self.check_enumeration(g)?;
        check(
            "edge count for trajectory propagation",
            g.edge_count(),
            self.trajectory_max_edges.min(self.max_edges),
        )
    }

    pub fn check_brute_force(&self, g: &Graph) -> Result<()> {
        self.check_enumeration(g)?;
        check(
            "edge count for trajectory enumeration",
            g.edge_count(),
            self.brute_force_max_edges.min(self.max_edges),
        )
    }
}
