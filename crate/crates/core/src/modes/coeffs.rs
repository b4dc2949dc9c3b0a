//! Overlap coefficients of the split detector and of the flipped mode.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_2_PI, FRAC_PI_2, SQRT_2};

use crate::error::{Error, Result};
use crate::modes::adaptive::integrate_vec;
use crate::modes::hermite::hermite_functions;
use crate::modes::BeamGeometry;

/// Beyond this reduced coordinate `psi_0` is below `exp(-50)`.
const XI_CUTOFF: f64 = 10.0;
const SPLIT_TOL: f64 = 1e-15;

/// Real coefficients of a transverse profile in the Hermite-Gauss basis,
/// indexed by mode order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OverlapVector(Vec<f64>);

impl OverlapVector {
    pub fn new(coefficients: Vec<f64>) -> Self {
        OverlapVector(coefficients)
    }

    /// Unit vector on mode `n` of a basis truncated at `n_max`.
    pub fn unit(n: usize, n_max: usize) -> Result<Self> {
        if n > n_max {
            return Err(Error::Truncation { n, n_max });
        }
        let mut v = vec![0.0; n_max + 1];
        v[n] = 1.0;
        Ok(OverlapVector(v))
    }

    /// The TEM10 profile.
    pub fn tem10(n_max: usize) -> Result<Self> {
        Self::unit(1, n_max)
    }

    pub fn n_max(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, n: usize) -> f64 {
        self.0.get(n).copied().unwrap_or(0.0)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &f64> {
        self.0.iter()
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum()
    }

    pub fn dot(&self, other: &OverlapVector) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Zero-pads or truncates to `n_max`.
    pub fn resized(&self, n_max: usize) -> Self {
        let mut v = self.0.clone();
        v.resize(n_max + 1, 0.0);
        OverlapVector(v)
    }
}

impl From<Vec<f64>> for OverlapVector {
    fn from(v: Vec<f64>) -> Self {
        OverlapVector(v)
    }
}

/// Split-detector overlap coefficients together with the fraction of the
/// TEM00 power that lands on the active area.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitOverlap {
    pub coeffs: OverlapVector,
    pub detected_fraction: f64,
}

fn check_split_geometry(gap: f64, half_width: f64) -> Result<()> {
    if !(gap >= 0.0 && gap.is_finite()) {
        return Err(Error::geometry(format!(
            "split gap must be finite and >= 0, got {gap}"
        )));
    }
    if half_width.is_nan() || half_width <= gap / 2.0 {
        return Err(Error::geometry(format!(
            "detector half-width {half_width} must exceed half the gap {}",
            gap / 2.0
        )));
    }
    Ok(())
}

/// Like [`split_overlap_coeffs`] but also returns the detected power fraction.
pub fn split_overlap(
    n_max: usize,
    geom: &BeamGeometry,
    gap: f64,
    half_width: f64,
) -> Result<SplitOverlap> {
    check_split_geometry(gap, half_width)?;
    let scale = SQRT_2 / geom.waist();
    let lo = gap / 2.0 * scale;
    let hi = (half_width * scale).min(XI_CUTOFF);
    let dim = n_max + 2;
    if lo >= hi {
        return Ok(SplitOverlap {
            coeffs: OverlapVector(vec![0.0; n_max + 1]),
            detected_fraction: 0.0,
        });
    }

    let integrand = |xi: f64, out: &mut [f64]| {
        hermite_functions(xi, &mut out[..=n_max]);
        let p0 = out[0];
        for v in out[..=n_max].iter_mut() {
            *v *= p0;
        }
        out[n_max + 1] = p0 * p0;
    };
    let right = integrate_vec(integrand, lo, hi, dim, SPLIT_TOL);
    let left = integrate_vec(integrand, -hi, -lo, dim, SPLIT_TOL);

    let coeffs = right[..=n_max]
        .iter()
        .zip(&left[..=n_max])
        .map(|(r, l)| r - l)
        .collect();
    Ok(SplitOverlap {
        coeffs: OverlapVector(coeffs),
        detected_fraction: right[n_max + 1] + left[n_max + 1],
    })
}

/// Split-detector coefficients `c_n`: the overlap of `u_n u_0` integrated over
/// the right half `[gap/2, half_width]` minus the left half
/// `[-half_width, -gap/2]`. `half_width` may be infinite.
pub fn split_overlap_coeffs(
    n_max: usize,
    geom: &BeamGeometry,
    gap: f64,
    half_width: f64,
) -> Result<OverlapVector> {
    split_overlap(n_max, geom, gap, half_width).map(|s| s.coeffs)
}

/// Hermite-Gauss coefficients of the flipped mode `sign(x) u_0(x)`.
///
/// Only odd orders are nonzero. Using `H_n e^{-xi^2} = -d/dxi (H_{n-1} e^{-xi^2})`
/// the half-line integral collapses to `H_{n-1}(0)`, which gives
/// `c_1 = sqrt(2/pi)` and `c_{2m+3} = -(2m+1)/sqrt((2m+2)(2m+3)) c_{2m+1}`.
pub fn flipped_mode_coeffs(n_max: usize) -> OverlapVector {
    let mut v = vec![0.0; n_max + 1];
    if n_max >= 1 {
        let mut c = FRAC_2_PI.sqrt();
        v[1] = c;
        let mut n = 1;
        while n + 2 <= n_max {
            let m = ((n - 1) / 2) as f64;
            c *= -(2.0 * m + 1.0) / ((2.0 * m + 2.0) * (2.0 * m + 3.0)).sqrt();
            n += 2;
            v[n] = c;
        }
    }
    OverlapVector(v)
}

/// Fraction of the flipped-mode norm captured by orders `<= n_max`.
pub fn flipped_captured_norm(n_max: usize) -> f64 {
    flipped_mode_coeffs(n_max).norm_sq()
}

/// `sum_n c_n^2 e^{i n psi}` over *all* orders, in closed form
/// `(2/pi) asin(e^{i psi})`.
///
/// This is the overlap of the flipped mode with itself after a Gouy
/// rotation `psi`; it equals 1 at `psi = 0`.
pub fn flipped_spectrum(psi: f64) -> Complex64 {
    let (s, c) = psi.sin_cos();
    if s == 0.0 {
        // e^{i psi} = +-1
        return Complex64::new(if c > 0.0 { 1.0 } else { -1.0 }, 0.0);
    }
    let z = Complex64::new(c, s);
    // 1 - z^2 = 2|sin psi| e^{i(psi -+ pi/2)}, square-rooted on the principal branch
    let arg = if s > 0.0 {
        psi - FRAC_PI_2
    } else {
        psi + FRAC_PI_2
    };
    let root = Complex64::from_polar((2.0 * s.abs()).sqrt(), 0.5 * arg);
    let i = Complex64::i();
    let asin = -i * (i * z + root).ln();
    asin * FRAC_2_PI
}

/// Part of [`flipped_spectrum`] carried by orders above `n_max`.
pub fn flipped_tail_spectrum(n_max: usize, psi: f64) -> Complex64 {
    let head: Complex64 = flipped_mode_coeffs(n_max)
        .iter()
        .enumerate()
        .map(|(n, c)| Complex64::from_polar(c * c, n as f64 * psi))
        .sum();
    flipped_spectrum(psi) - head
}
