//! Exact transition matrices, total-variation mixing times and spectral
//! gaps on enumerable state spaces.

mod matrix;
mod mixing;
mod spectral;

pub use matrix::{build_matrix, tv_distance, tv_distance_f64, TransitionMatrix};
pub use mixing::{
    congestion_bound, mixing_reports, mixing_time, path_bound, tau_profile, MixingReport, TauProfile,
    DEFAULT_CEILING_BITS,
};
pub use spectral::{spectral_gap, Spectrum, DENSE_LIMIT, GAP_TOLERANCE};
