//! Canonical paths for the worm process, their lift to random-cluster flows,
//! and exact per-transition traffic and congestion.

mod congestion;
mod delta;
mod flow;
mod lifted;
mod worm;

pub use congestion::{rc_congestion, CongestionReport, CongestionRow};
pub use delta::{delta, DeltaKernel};
pub use flow::{brute_force, flow_validity, propagate, FlowTables, FlowValidityReport};
pub use lifted::{
    lifted_bounds, lifted_traffic, LiftStep, LiftedFlowSpec, TrafficReport, TrafficTable, TransitionCase,
};
pub use worm::{worm_report, WormCertificate, WormFamily, WormPath, WormReport};
