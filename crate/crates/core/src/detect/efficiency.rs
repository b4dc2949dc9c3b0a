use serde::Serialize;

use super::Measurement;
use crate::beam::variance_from_db;
use crate::error::{Error, Result};

/// Split-versus-homodyne comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EfficiencyReport {
    /// `SNR_SD / SNR_HD` from the two measurements.
    pub measured: f64,
    /// Ideal-detector prediction `(2/pi) N_SD / N_HD`.
    pub theoretical: f64,
    /// `measured` rescaled to equal photon numbers.
    pub per_photon: f64,
}

/// Ratio of split-detection to homodyne SNR.
pub fn efficiency_ratio(
    split: &Measurement,
    homodyne: &Measurement,
    n_sd: f64,
    n_hd: f64,
) -> Result<EfficiencyReport> {
    if !(homodyne.snr > 0.0) {
        return Err(Error::UndefinedLimit(
            "homodyne SNR is zero; the efficiency ratio is undefined".into(),
        ));
    }
    if !(n_sd > 0.0 && n_hd > 0.0) {
        return Err(Error::UndefinedLimit(
            "photon numbers must be positive".into(),
        ));
    }
    let measured = split.snr / homodyne.snr;
    Ok(EfficiencyReport {
        measured,
        theoretical: std::f64::consts::FRAC_2_PI * n_sd / n_hd,
        per_photon: measured * n_hd / n_sd,
    })
}

/// Efficiency ratio reconstructed from spectrum-analyzer peak heights.
///
/// Each peak height `mod_db` is relative to the detector's own shot-noise
/// floor, so the signal-to-noise ratio is `10^(mod_db/10) - 1`. The result is
/// `(P_HD / P_SD) SNR_SD / SNR_HD`.
pub fn experimental_ratio_from_traces(
    p_sd: f64,
    p_hd: f64,
    mod_sd_db: f64,
    mod_hd_db: f64,
) -> Result<f64> {
    if !(p_sd > 0.0 && p_hd > 0.0) {
        return Err(Error::usage("detector powers must be positive"));
    }
    for (name, db) in [("split", mod_sd_db), ("homodyne", mod_hd_db)] {
        if !(db > 0.0 && db.is_finite()) {
            return Err(Error::UndefinedLimit(format!(
                "{name} modulation peak of {db} dB is indistinguishable from the noise floor"
            )));
        }
    }
    Ok(p_hd / p_sd * (variance_from_db(mod_sd_db) - 1.0) / (variance_from_db(mod_hd_db) - 1.0))
}
