use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Detector setting a measurement was taken at.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Setting {
    /// Split detector at axial position `z_m` from the waist.
    SplitPlane { z_m: f64 },
    /// Homodyne detector at local-oscillator phase `phi_lo_rad`.
    LoPhase { phi_lo_rad: f64 },
}

impl Setting {
    pub fn value(&self) -> f64 {
        match *self {
            Setting::SplitPlane { z_m } => z_m,
            Setting::LoPhase { phi_lo_rad } => phi_lo_rad,
        }
    }

    /// Column description for output headers.
    pub fn label(&self) -> &'static str {
        match self {
            Setting::SplitPlane { .. } => "z (m from waist)",
            Setting::LoPhase { .. } => "phi_LO (rad)",
        }
    }
}

/// Conditions worth surfacing alongside a result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    /// Less than half the beam power falls on the split detector.
    Apertured { detected_fraction: f64 },
}

/// Detector outcome at the modulation frequency, in shot-noise units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub signal_rel: f64,
    pub noise_rel: f64,
    pub snr: f64,
    pub setting: Setting,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<Warning>,
}

impl Measurement {
    pub fn new(signal_rel: f64, noise_rel: f64, setting: Setting) -> Result<Self> {
        if !(signal_rel >= 0.0 && signal_rel.is_finite()) {
            return Err(Error::Numeric(format!(
                "signal power {signal_rel} is not a finite non-negative value"
            )));
        }
        if !(noise_rel > 0.0 && noise_rel.is_finite()) {
            return Err(Error::Numeric(format!(
                "noise power {noise_rel} must be positive"
            )));
        }
        Ok(Measurement {
            signal_rel,
            noise_rel,
            snr: signal_rel / noise_rel,
            setting,
            warnings: Vec::new(),
        })
    }

    /// Analyzer reading `10 log10(signal + noise)` relative to shot noise.
    pub fn total_db(&self) -> f64 {
        10.0 * (self.signal_rel + self.noise_rel).log10()
    }

    pub fn is_apertured(&self) -> bool {
        self.warnings
            .iter()
            .any(|w| matches!(w, Warning::Apertured { .. }))
    }
}
