use crate::beam::{momentum_to_tilt, variance_from_db};
use crate::error::{Error, Result};

fn check_photons(photons: f64) -> Result<()> {
    if photons > 0.0 && photons.is_finite() {
        Ok(())
    } else {
        Err(Error::UndefinedLimit(format!(
            "quantum noise limit needs a positive photon number, got {photons}"
        )))
    }
}

/// Displacement giving unit SNR with coherent light, `w0 / (2 sqrt(N))`.
pub fn qnl_displacement(waist: f64, photons: f64) -> Result<f64> {
    check_photons(photons)?;
    Ok(waist / (2.0 * photons.sqrt()))
}

/// Momentum giving unit SNR with coherent light, `1 / (w0 sqrt(N))`.
pub fn qnl_momentum(waist: f64, photons: f64) -> Result<f64> {
    check_photons(photons)?;
    Ok(1.0 / (waist * photons.sqrt()))
}

/// Tilt angle corresponding to [`qnl_momentum`].
pub fn qnl_tilt(waist: f64, wavelength: f64, photons: f64) -> Result<f64> {
    momentum_to_tilt(qnl_momentum(waist, photons)?, wavelength)
}

/// Displacement limit with the noise mode squeezed by `squeeze_db`.
pub fn sub_qnl_displacement(d_qnl: f64, squeeze_db: f64) -> Result<f64> {
    if !(squeeze_db >= 0.0 && squeeze_db.is_finite()) {
        return Err(Error::usage(format!(
            "squeeze_dB must be finite and >= 0, got {squeeze_db}"
        )));
    }
    Ok(d_qnl * 10f64.powf(-squeeze_db / 20.0))
}

/// Displacement whose homodyne signal reads `excess_db` above a noise floor
/// of variance `floor` (shot-noise units).
///
/// The signal power is `floor (10^(excess/10) - 1)` and, with a TEM10 local
/// oscillator at `phi_LO = 0`, equals `(d / d_QNL)^2`.
pub fn infer_displacement(d_qnl: f64, floor: f64, excess_db: f64) -> Result<f64> {
    if !(excess_db > 0.0) {
        return Err(Error::UndefinedLimit(format!(
            "signal {excess_db} dB above the floor is indistinguishable from noise"
        )));
    }
    if !(floor > 0.0) {
        return Err(Error::usage("noise floor must be positive"));
    }
    Ok(d_qnl * (floor * (variance_from_db(excess_db) - 1.0)).sqrt())
}
