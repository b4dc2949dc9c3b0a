//! Normalized Hermite-Gauss mode functions.
//!
//! Everything is evaluated through the orthonormal Hermite functions
//! `psi_n(xi) = (2^n n! sqrt(pi))^(-1/2) H_n(xi) exp(-xi^2/2)` using the
//! normalized three-term recurrence, so neither `H_n` nor `n!` is ever formed.
//! The waist-plane TEM_n0 amplitude is `u_n(x) = sqrt(sqrt(2)/w0) psi_n(sqrt(2) x / w0)`.

use crate::error::{Error, Result};
use crate::modes::BeamGeometry;

/// Default transverse truncation.
pub const DEFAULT_N_MAX: usize = 41;

/// Largest truncation accepted anywhere in the crate. Above this the
/// Gaussian factor underflows before the modes have decayed.
pub const MAX_N_MAX: usize = 400;

const PI_POW_NEG_QUARTER: f64 = 0.751_125_544_464_942_5;

/// Fills `out[k] = psi_k(xi)` for `k < out.len()`.
pub fn hermite_functions(xi: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    let p0 = PI_POW_NEG_QUARTER * (-0.5 * xi * xi).exp();
    out[0] = p0;
    if out.len() == 1 {
        return;
    }
    out[1] = std::f64::consts::SQRT_2 * xi * p0;
    for k in 1..out.len() - 1 {
        let kf = k as f64;
        out[k + 1] =
            (2.0 / (kf + 1.0)).sqrt() * xi * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
    }
}

/// Single Hermite function `psi_n(xi)`.
pub fn hermite_function(n: usize, xi: f64) -> f64 {
    let p0 = PI_POW_NEG_QUARTER * (-0.5 * xi * xi).exp();
    if n == 0 {
        return p0;
    }
    let mut prev = p0;
    let mut cur = std::f64::consts::SQRT_2 * xi * p0;
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * xi * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Fills `out[k] = u_k(x)` for a beam of waist `waist`.
pub fn hg_amplitudes(x: f64, waist: f64, out: &mut [f64]) {
    let xi = std::f64::consts::SQRT_2 * x / waist;
    hermite_functions(xi, out);
    let scale = (std::f64::consts::SQRT_2 / waist).sqrt();
    for v in out.iter_mut() {
        *v *= scale;
    }
}

/// Normalized 1-D Hermite-Gauss waist-plane amplitude `u_n(x)` in m^-1/2.
///
/// Fails with [`Error::Truncation`] when `n > n_max`.
pub fn hg_amplitude(n: usize, x: f64, geom: &BeamGeometry, n_max: usize) -> Result<f64> {
    if n > n_max {
        return Err(Error::Truncation { n, n_max });
    }
    let w = geom.waist();
    Ok((std::f64::consts::SQRT_2 / w).sqrt()
        * hermite_function(n, std::f64::consts::SQRT_2 * x / w))
}

/// Checks `n_max` against [`MAX_N_MAX`].
pub fn check_n_max(n_max: usize) -> Result<()> {
    if n_max > MAX_N_MAX {
        return Err(Error::usage(format!(
            "n_max = {n_max} exceeds the supported maximum {MAX_N_MAX}"
        )));
    }
    Ok(())
}
