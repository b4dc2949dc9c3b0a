//! Shared fixtures for the benchmarks.

use tem10::beam::{make_coherent_beam, Beam, ModeShape, Modulation};
use tem10::modes::{BeamGeometry, DEFAULT_N_MAX};

pub const WAIST: f64 = 106e-6;
pub const WAVELENGTH: f64 = 1064e-9;
pub const RBW: f64 = 1e5;

pub fn geometry() -> BeamGeometry {
    BeamGeometry::new(WAIST, WAVELENGTH).expect("valid geometry")
}

/// 170 uW beam with 2 dB / 8 dB TEM10 squeezing and a 0.15 nm displacement.
pub fn squeezed_beam(n_max: usize) -> Beam {
    make_coherent_beam(170e-6, WAVELENGTH, WAIST, RBW, n_max)
        .and_then(|b| b.squeezed(&ModeShape::Tem10, 2.0, 8.0, 0.0))
        .and_then(|b| b.modulated(&Modulation::displacement(0.15e-9)))
        .expect("valid beam")
}

/// 170 uW beam with 3.6 dB flipped-mode squeezing.
pub fn flipped_beam(n_max: usize) -> Beam {
    make_coherent_beam(170e-6, WAVELENGTH, WAIST, RBW, n_max)
        .and_then(|b| b.squeezed(&ModeShape::Flipped, 3.6, 3.6, 0.0))
        .expect("valid beam")
}

pub fn default_n_max() -> usize {
    DEFAULT_N_MAX
}
