use nalgebra::DVector;

use super::{Measurement, Setting, Warning};
use crate::beam::{propagate, Beam, QuadratureProjection};
use crate::error::{Error, Result};
use crate::modes::{flipped_mode_coeffs, flipped_tail_spectrum, split_overlap, OverlapVector};

/// Below this detected power fraction a measurement is flagged as apertured.
pub const APERTURE_WARNING_FRACTION: f64 = 0.5;

/// A split detector resolved in one plane.
#[derive(Debug, Clone)]
pub struct SplitView {
    /// The beam propagated to the detector plane.
    pub beam: Beam,
    /// Overlap coefficients at the local spot size.
    pub coeffs: OverlapVector,
    pub detected_fraction: f64,
    /// Quadrature combination the difference photocurrent reads.
    pub projection: QuadratureProjection,
}

/// Two-segment photodiode centred on the beam axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitDetector {
    gap: f64,
    half_width: f64,
}

impl SplitDetector {
    /// Zero gap and infinite extent.
    pub fn ideal() -> Self {
        SplitDetector {
            gap: 0.0,
            half_width: f64::INFINITY,
        }
    }

    /// Detector with a dead strip of width `gap` and segments reaching
    /// `half_width` from the axis.
    pub fn new(gap: f64, half_width: f64) -> Result<Self> {
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
        Ok(SplitDetector { gap, half_width })
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn is_ideal(&self) -> bool {
        self.gap == 0.0 && self.half_width == f64::INFINITY
    }

    /// Propagates `beam` to the plane `z` and resolves the detector there.
    pub fn resolve(&self, beam: &Beam, z: f64) -> Result<SplitView> {
        let at = propagate(beam, z);
        let n_max = at.n_max();
        let geom = at.geometry();
        let (coeffs, detected_fraction) = if self.is_ideal() {
            (flipped_mode_coeffs(n_max), 1.0)
        } else {
            let local = geom.with_waist(geom.spot_size(z))?;
            let s = split_overlap(n_max, &local, self.gap, self.half_width)?;
            (s.coeffs, s.detected_fraction)
        };
        let projection = self.noise_projection(&at, &coeffs, detected_fraction)?;
        Ok(SplitView {
            beam: at,
            coeffs,
            detected_fraction,
            projection,
        })
    }

    /// Measures `beam` after propagating it to the plane `z`.
    pub fn measure(&self, beam: &Beam, z: f64) -> Result<Measurement> {
        let view = self.resolve(beam, z)?;
        let amplitude: f64 = view
            .coeffs
            .iter()
            .zip(view.beam.field.coeffs())
            .skip(1)
            .map(|(c, alpha)| c * alpha.re)
            .sum();
        let signal = 4.0 * view.beam.photons() * amplitude * amplitude;
        let noise = view.beam.noise.variance(&view.projection);
        let mut m = Measurement::new(signal, noise, Setting::SplitPlane { z_m: z })?;
        if view.detected_fraction < APERTURE_WARNING_FRACTION {
            m.warnings.push(Warning::Apertured {
                detected_fraction: view.detected_fraction,
            });
        }
        Ok(m)
    }

    /// Amplitude-quadrature projection of the difference photocurrent, in
    /// units where coherent light gives the detected power fraction.
    ///
    /// Orders above `n_max` are resolved against the flipped remainder slot
    /// through the closed-form flipped spectrum; whatever is orthogonal to
    /// that slot is vacuum.
    fn noise_projection(
        &self,
        beam: &Beam,
        coeffs: &OverlapVector,
        fraction: f64,
    ) -> Result<QuadratureProjection> {
        let cov = &beam.noise;
        let n_max = cov.n_max();
        let rem = cov.remainder_slot();
        let mut v = DVector::zeros(cov.dim());
        for (n, c) in coeffs.iter().enumerate() {
            v[2 * n] = *c;
        }
        let flipped = flipped_mode_coeffs(n_max);
        let tail = (1.0 - flipped.norm_sq()).max(0.0).sqrt();
        let head_sq = coeffs.norm_sq();
        let psi = cov.remainder_phase();

        let (rho_plus, rho_minus, tail_norm_sq) = if self.is_ideal() {
            let t = flipped_tail_spectrum(n_max, psi);
            (t.re / tail, t.im / tail, tail * tail)
        } else if cov.slot_is_vacuum(rem) {
            (0.0, 0.0, fraction - head_sq)
        } else if psi == 0.0 {
            let cross = fraction - coeffs.dot(&flipped);
            (cross / tail, 0.0, fraction - head_sq)
        } else {
            return Err(Error::Unsupported(
                "finite split-detector geometry with a squeezed flipped remainder away from its reference plane".into(),
            ));
        };
        v[2 * rem] = rho_plus;
        v[2 * rem + 1] = rho_minus;
        let vacuum_weight = tail_norm_sq - rho_plus * rho_plus - rho_minus * rho_minus;
        Ok(QuadratureProjection {
            vector: v,
            vacuum_weight: vacuum_weight.max(0.0),
        })
    }
}

/// Split detection of `beam` in the plane `z` (m from the waist) with the
/// given gap and half-width (`f64::INFINITY` for an unbounded detector).
///
/// The signal is `4N (sum_n c_n Re alpha_n)^2` with the geometry's
/// coefficients `c_n` evaluated at the local spot size. The noise is
/// referenced to the shot noise of the whole incident beam, so coherent
/// light gives the detected power fraction (1 for the ideal detector).
pub fn split_detect(beam: &Beam, z: f64, gap: f64, half_width: f64) -> Result<Measurement> {
    SplitDetector::new(gap, half_width)?.measure(beam, z)
}
