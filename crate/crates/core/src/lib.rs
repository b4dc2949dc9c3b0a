//! Simulation of quantum-limited displacement and tilt measurements of a
//! Gaussian beam.
//!
//! A beam is a TEM00 carrier with small Hermite-Gauss sidebands
//! ([`beam::ModalField`]) plus a shot-noise-normalized quadrature covariance
//! over the same modes ([`beam::NoiseCovariance`]). Displacement lands in the
//! amplitude quadrature of TEM10 and tilt in its phase quadrature. Two
//! detectors read it out: a split photodiode, whose noise mode is the flipped
//! mode, and a homodyne detector with a TEM10 local oscillator, whose noise
//! mode is TEM10 itself. [`mc`] re-derives every analytic noise power by
//! sampling, and [`scenario`] drives complete experiments from TOML files.

// `!(x > 0.0)` is used deliberately so NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod beam;
pub mod detect;
mod error;
pub mod mc;
pub mod modes;
pub mod scenario;

pub use error::{Error, Result};

pub use beam::{Beam, ModalField, ModeShape, Modulation, NoiseCovariance};
pub use detect::{Measurement, SpectrumTrace};
pub use mc::McConfig;
pub use modes::{BeamGeometry, OverlapVector};

/// Planck constant, J s.
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
