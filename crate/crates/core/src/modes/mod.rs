//! Hermite-Gauss mode functions, numerical overlaps, split/flipped-mode
//! decompositions and the Gouy phase.

pub mod adaptive;
mod coeffs;
mod geometry;
mod hermite;
mod quadrature;

pub use coeffs::{
    flipped_captured_norm, flipped_mode_coeffs, flipped_spectrum, flipped_tail_spectrum,
    split_overlap, split_overlap_coeffs, OverlapVector, SplitOverlap,
};
pub use geometry::{gouy_phase, BeamGeometry};
pub use hermite::{
    check_n_max, hermite_function, hermite_functions, hg_amplitude, hg_amplitudes, DEFAULT_N_MAX,
    MAX_N_MAX,
};
pub use quadrature::{default_node_count, overlap, GaussHermite, QuadratureRule, SampledProfile};
