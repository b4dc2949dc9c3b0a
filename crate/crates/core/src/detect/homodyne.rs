use num_complex::Complex64;

use super::{Measurement, Setting};
use crate::beam::{Beam, ModeShape, QuadratureProjection};
use crate::error::Result;
use crate::modes::OverlapVector;

/// Balanced homodyne detection with a bright local oscillator of transverse
/// shape `lo` at phase `phi_lo`.
///
/// The signal is `4N (sum_{n>=1} lo_n Re(alpha_n e^{-i phi_lo}))^2`: the
/// TEM10 case reads `d/w0` at `phi_lo = 0` and `p w0/2` at `pi/2`. The noise
/// is the variance of the LO-mode quadrature at `phi_lo`.
pub fn homodyne_detect(beam: &Beam, lo: &OverlapVector, phi_lo: f64) -> Result<Measurement> {
    let shape = ModeShape::Custom(lo.clone());
    let slots = shape.slot_vector(beam.n_max())?;
    let rot = Complex64::from_polar(1.0, -phi_lo);
    let amplitude: f64 = beam
        .field
        .coeffs()
        .iter()
        .zip(slots.iter())
        .skip(1)
        .map(|(alpha, l)| l * (alpha * rot).re)
        .sum();
    let signal = 4.0 * beam.photons() * amplitude * amplitude;
    let noise = beam
        .noise
        .variance(&QuadratureProjection::of_mode(&slots, phi_lo));
    Measurement::new(signal, noise, Setting::LoPhase { phi_lo_rad: phi_lo })
}

/// Quadrature combination a homodyne detector reads.
pub fn homodyne_projection(
    n_max: usize,
    lo: &OverlapVector,
    phi_lo: f64,
) -> Result<QuadratureProjection> {
    let slots = ModeShape::Custom(lo.clone()).slot_vector(n_max)?;
    Ok(QuadratureProjection::of_mode(&slots, phi_lo))
}
