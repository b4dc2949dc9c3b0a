//! Beam state: coherent Hermite-Gauss amplitudes plus a multimode quadrature
//! noise covariance, and the operations an experiment applies to it.

mod field;
mod noise;
mod state;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::modes::BeamGeometry;

pub use field::{
    apply_modulation, apply_modulation_at, momentum_to_tilt, photon_number, tilt_to_momentum,
    ModalField, Modulation, SMALL_SIGNAL_LIMIT,
};
pub use noise::{
    inject_squeezed_mode, ModeShape, NoiseCovariance, Quadrature, QuadratureProjection,
    SHAPE_NORM_TOL,
};
pub use state::{BEAM_STATE_FORMAT, BEAM_STATE_ORDERING, BEAM_STATE_VERSION};

/// `10^(db/10)`.
pub fn variance_from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Variance of a quadrature squeezed by `db` decibels, `10^(-db/10)`.
pub fn variance_from_squeeze_db(db: f64) -> f64 {
    10f64.powf(-db / 10.0)
}

/// `10 log10(v)`.
pub fn db_from_variance(v: f64) -> f64 {
    10.0 * v.log10()
}

/// A complete beam: coherent field and quantum noise over the same modes.
#[derive(Debug, Clone, PartialEq)]
pub struct Beam {
    pub field: ModalField,
    pub noise: NoiseCovariance,
}

impl Beam {
    /// Pairs a field with a covariance of matching truncation.
    pub fn new(field: ModalField, noise: NoiseCovariance) -> Result<Self> {
        if field.n_max() != noise.n_max() {
            return Err(Error::usage(format!(
                "field n_max {} differs from covariance n_max {}",
                field.n_max(),
                noise.n_max()
            )));
        }
        Ok(Beam { field, noise })
    }

    pub fn geometry(&self) -> &BeamGeometry {
        self.field.geometry()
    }

    pub fn n_max(&self) -> usize {
        self.field.n_max()
    }

    pub fn photons(&self) -> f64 {
        self.field.photons()
    }

    pub fn modulated(&self, modulation: &Modulation) -> Result<Self> {
        Ok(Beam {
            field: apply_modulation(&self.field, modulation)?,
            noise: self.noise.clone(),
        })
    }

    pub fn squeezed(
        &self,
        shape: &ModeShape,
        squeeze_db: f64,
        antisqueeze_db: f64,
        angle: f64,
    ) -> Result<Self> {
        Ok(Beam {
            field: self.field.clone(),
            noise: inject_squeezed_mode(&self.noise, shape, squeeze_db, antisqueeze_db, angle)?,
        })
    }

    pub fn propagated(&self, z: f64) -> Self {
        propagate(self, z)
    }

    /// Serializes to the versioned JSON beam-state format.
    pub fn to_json(&self) -> Result<String> {
        state::to_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        state::from_json(text)
    }
}

/// Coherent beam of `power` watts observed with resolution bandwidth `rbw`.
///
/// The photon number counts photons detected in `T = 1/rbw`.
pub fn make_coherent_beam(
    power: f64,
    wavelength: f64,
    waist: f64,
    rbw: f64,
    n_max: usize,
) -> Result<Beam> {
    if !(power >= 0.0 && power.is_finite()) {
        return Err(Error::usage(format!(
            "power must be finite and >= 0, got {power}"
        )));
    }
    if !(rbw > 0.0 && rbw.is_finite()) {
        return Err(Error::usage(format!("RBW must be > 0, got {rbw}")));
    }
    let geom = BeamGeometry::new(waist, wavelength)?;
    let t = 1.0 / rbw;
    let field = ModalField::carrier(geom, photon_number(power, wavelength, t), t, n_max)?;
    Beam::new(field, NoiseCovariance::vacuum(n_max)?)
}

/// TEM10 amplitude-quadrature variance when the flipped mode carries
/// variance `v_f` and all other modes are coherent: `(2/pi) v_f + 1 - 2/pi`.
pub fn squeeze_transfer_flipped_to_tem10(v_f: f64) -> Result<f64> {
    if !(v_f >= 0.0 && v_f.is_finite()) {
        return Err(Error::usage(format!(
            "variance must be finite and >= 0, got {v_f}"
        )));
    }
    let k = 2.0 / std::f64::consts::PI;
    Ok(k * v_f + (1.0 - k))
}

/// Lossless parity combiner: the bright beam's even-mode coherent content
/// and the dim input's odd-mode noise exit the same port.
///
/// `efficiency < 1` acts as a loss channel on the odd modes only.
pub fn combine_mach_zehnder(bright: &Beam, dim: &NoiseCovariance, efficiency: f64) -> Result<Beam> {
    if bright.n_max() != dim.n_max() {
        return Err(Error::usage("bright and dim inputs must share n_max"));
    }
    if bright.field.has_odd_content() {
        return Err(Error::usage(
            "bright input carries odd-mode coherent content; the combiner requires an even bright beam",
        ));
    }
    if let Some(s) = (0..=bright.n_max())
        .step_by(2)
        .find(|&s| !dim.slot_is_vacuum(s))
    {
        return Err(Error::usage(format!(
            "dim input carries noise on even mode {s}"
        )));
    }
    if !(efficiency > 0.0 && efficiency <= 1.0) {
        return Err(Error::usage(format!(
            "combiner efficiency must be in (0, 1], got {efficiency}"
        )));
    }
    let odd: Vec<usize> = dim.odd_slots().collect();
    let noise = bright.noise.with_slots_from(dim, &odd);
    let noise = if efficiency < 1.0 {
        noise.with_loss(&odd, efficiency)?
    } else {
        noise
    };
    Beam::new(bright.field.clone(), noise)
}

/// Free-space propagation to the plane at axial position `z` (m from the
/// waist). Mode `n` picks up the relative Gouy phase `n dphi`, with
/// `dphi = phi_G(z) - phi_G(z_current)`.
pub fn propagate(beam: &Beam, z: f64) -> Beam {
    let geom = beam.geometry();
    let dphi = geom.gouy_phase(z) - geom.gouy_phase(beam.field.plane_z());
    let coeffs = beam
        .field
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| c * Complex64::from_polar(1.0, -(n as f64) * dphi))
        .collect();
    Beam {
        field: beam.field.with_coeffs(coeffs, z),
        noise: beam.noise.gouy_rotated(dphi),
    }
}
