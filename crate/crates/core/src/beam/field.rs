use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modes::{check_n_max, BeamGeometry};
use crate::{PLANCK, SPEED_OF_LIGHT};

/// Upper bound on `|d|/w0`, `|p| w0/2` and on every sideband amplitude.
pub const SMALL_SIGNAL_LIMIT: f64 = 0.1;

/// Photons detected in `integration_time` from a beam of `power` watts.
pub fn photon_number(power: f64, wavelength: f64, integration_time: f64) -> f64 {
    power * integration_time * wavelength / (PLANCK * SPEED_OF_LIGHT)
}

/// Exact tilt-to-momentum relation `p = 2 pi sin(theta) / lambda`.
pub fn tilt_to_momentum(tilt: f64, wavelength: f64) -> f64 {
    2.0 * std::f64::consts::PI * tilt.sin() / wavelength
}

/// Inverse of [`tilt_to_momentum`].
pub fn momentum_to_tilt(momentum: f64, wavelength: f64) -> Result<f64> {
    let s = momentum * wavelength / (2.0 * std::f64::consts::PI);
    if s.abs() > 1.0 {
        return Err(Error::usage(format!(
            "momentum {momentum} m^-1 exceeds 2 pi / lambda"
        )));
    }
    Ok(s.asin())
}

/// Transverse displacement and momentum (tilt) modulation of a beam.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Modulation {
    /// Displacement `d`, m.
    pub displacement: f64,
    /// Transverse momentum `p`, m^-1.
    pub momentum: f64,
    /// Modulation frequency, Hz. Bookkeeping only.
    pub frequency: f64,
}

impl Modulation {
    pub fn new(displacement: f64, momentum: f64) -> Self {
        Modulation {
            displacement,
            momentum,
            frequency: 0.0,
        }
    }

    pub fn displacement(d: f64) -> Self {
        Self::new(d, 0.0)
    }

    pub fn momentum(p: f64) -> Self {
        Self::new(0.0, p)
    }

    pub fn with_frequency(mut self, frequency: f64) -> Self {
        self.frequency = frequency;
        self
    }

    /// Splits a total TEM10 amplitude `sqrt((d/w0)^2 + (p w0/2)^2)` so that
    /// the tilt term carries `tilt_fraction` of the modulation power.
    pub fn from_power_split(amplitude: f64, tilt_fraction: f64, waist: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&tilt_fraction) {
            return Err(Error::usage(format!(
                "tilt fraction must be in [0, 1], got {tilt_fraction}"
            )));
        }
        if !(amplitude >= 0.0 && amplitude.is_finite()) || !(waist > 0.0) {
            return Err(Error::usage("amplitude must be finite and >= 0, waist > 0"));
        }
        Ok(Self::new(
            (1.0 - tilt_fraction).sqrt() * amplitude * waist,
            2.0 * tilt_fraction.sqrt() * amplitude / waist,
        ))
    }

    /// Sideband amplitudes `(d/w0, p w0/2)`.
    pub fn ratios(&self, waist: f64) -> (f64, f64) {
        (self.displacement / waist, self.momentum * waist / 2.0)
    }

    /// Fraction of the modulation power carried by the tilt term.
    pub fn tilt_fraction(&self, waist: f64) -> f64 {
        let (a, b) = self.ratios(waist);
        let total = a * a + b * b;
        if total == 0.0 {
            0.0
        } else {
            b * b / total
        }
    }

    /// Checks the small-signal window.
    pub fn validate(&self, waist: f64) -> Result<()> {
        let (a, b) = self.ratios(waist);
        for (quantity, r) in [("|d|/w0", a), ("|p| w0/2", b)] {
            if !r.is_finite() || r.abs() >= SMALL_SIGNAL_LIMIT {
                return Err(Error::Validity {
                    quantity,
                    ratio: r.abs(),
                    limit: SMALL_SIGNAL_LIMIT,
                });
            }
        }
        Ok(())
    }
}

/// Coherent part of a beam: Hermite-Gauss amplitudes relative to the
/// TEM00 carrier, plus the detected photon number.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalField {
    geom: BeamGeometry,
    coeffs: Vec<Complex64>,
    photons: f64,
    integration_time: f64,
    plane_z: f64,
}

impl ModalField {
    /// Pure TEM00 carrier at the waist plane.
    pub fn carrier(
        geom: BeamGeometry,
        photons: f64,
        integration_time: f64,
        n_max: usize,
    ) -> Result<Self> {
        check_n_max(n_max)?;
        if !(photons >= 0.0 && photons.is_finite()) {
            return Err(Error::usage(format!(
                "photon number must be finite and >= 0, got {photons}"
            )));
        }
        if !(integration_time > 0.0 && integration_time.is_finite()) {
            return Err(Error::usage(format!(
                "integration time must be > 0, got {integration_time}"
            )));
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n_max + 1];
        coeffs[0] = Complex64::new(1.0, 0.0);
        Ok(ModalField {
            geom,
            coeffs,
            photons,
            integration_time,
            plane_z: 0.0,
        })
    }

    /// Builds a field from explicit amplitudes (index 0 is the carrier).
    pub fn from_parts(
        geom: BeamGeometry,
        coeffs: Vec<Complex64>,
        photons: f64,
        integration_time: f64,
        plane_z: f64,
    ) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::usage("field needs at least the carrier amplitude"));
        }
        let mut f = Self::carrier(geom, photons, integration_time, coeffs.len() - 1)?;
        if !plane_z.is_finite() {
            return Err(Error::usage("plane position must be finite"));
        }
        if coeffs
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::usage("field amplitudes must be finite"));
        }
        if let Some((n, c)) = coeffs
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, c)| c.norm() >= SMALL_SIGNAL_LIMIT)
        {
            return Err(Error::Validity {
                quantity: if n == 1 { "|alpha_1|" } else { "|alpha_n|" },
                ratio: c.norm(),
                limit: SMALL_SIGNAL_LIMIT,
            });
        }
        f.coeffs = coeffs;
        f.plane_z = plane_z;
        Ok(f)
    }

    pub fn geometry(&self) -> &BeamGeometry {
        &self.geom
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coefficient(&self, n: usize) -> Result<Complex64> {
        self.coeffs.get(n).copied().ok_or(Error::Truncation {
            n,
            n_max: self.n_max(),
        })
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn photons(&self) -> f64 {
        self.photons
    }

    pub fn integration_time(&self) -> f64 {
        self.integration_time
    }

    /// Axial position of the plane this field is expressed in, m from the waist.
    pub fn plane_z(&self) -> f64 {
        self.plane_z
    }

    /// True when any odd-order amplitude is nonzero.
    pub fn has_odd_content(&self) -> bool {
        self.coeffs
            .iter()
            .skip(1)
            .step_by(2)
            .any(|c| c.norm() != 0.0)
    }

    pub(crate) fn with_coeffs(&self, coeffs: Vec<Complex64>, plane_z: f64) -> Self {
        ModalField {
            coeffs,
            plane_z,
            ..self.clone()
        }
    }
}

/// Adds `d/w0 + i w0 p/2` to the TEM10 amplitude.
///
/// The amplitudes are defined at the waist plane; the field must not have
/// been propagated yet.
pub fn apply_modulation(field: &ModalField, modulation: &Modulation) -> Result<ModalField> {
    if field.n_max() < 1 {
        return Err(Error::Truncation {
            n: 1,
            n_max: field.n_max(),
        });
    }
    if field.plane_z != 0.0 {
        return Err(Error::usage(
            "modulation must be applied at the waist plane",
        ));
    }
    modulation.validate(field.geom.waist())?;
    let (a, b) = modulation.ratios(field.geom.waist());
    let mut coeffs = field.coeffs.clone();
    coeffs[1] += Complex64::new(a, b);
    if coeffs[1].norm() >= SMALL_SIGNAL_LIMIT {
        return Err(Error::Validity {
            quantity: "|alpha_1|",
            ratio: coeffs[1].norm(),
            limit: SMALL_SIGNAL_LIMIT,
        });
    }
    Ok(field.with_coeffs(coeffs, 0.0))
}

/// Like [`apply_modulation`], but `modulation` describes the displacement
/// and tilt as seen in the plane `z` rather than at the waist.
///
/// The TEM10 amplitude is back-propagated so that [`super::propagate`] to `z`
/// yields exactly `d/w0 + i w0 p/2` there.
pub fn apply_modulation_at(
    field: &ModalField,
    modulation: &Modulation,
    z: f64,
) -> Result<ModalField> {
    let shifted = apply_modulation(field, modulation)?;
    let phase = Complex64::from_polar(1.0, field.geom.gouy_phase(z));
    let mut coeffs = shifted.coeffs;
    coeffs[1] = field.coeffs[1] + (coeffs[1] - field.coeffs[1]) * phase;
    Ok(field.with_coeffs(coeffs, 0.0))
}
