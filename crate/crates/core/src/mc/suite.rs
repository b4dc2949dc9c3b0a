use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use serde::Serialize;

use super::{mc_noise_power, McConfig, McEstimate};
use crate::beam::{make_coherent_beam, ModeShape};
use crate::detect::{homodyne_projection, SplitDetector};
use crate::error::Result;
use crate::modes::{OverlapVector, DEFAULT_N_MAX};

/// One analytic noise power and its Monte-Carlo estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteCheck {
    pub name: &'static str,
    pub analytic: f64,
    pub estimate: McEstimate,
}

impl SuiteCheck {
    pub fn pass(&self) -> bool {
        self.estimate.agrees_with(self.analytic)
    }
}

/// Re-measures the noise floor of every detector path by sampling: split
/// detection with coherent light and with 3.6 dB flipped-mode squeezing (at
/// the waist, at half a Rayleigh range and in the far field), and TEM10
/// homodyne detection with 2 dB / 8 dB squeezing at three LO phases.
pub fn validation_suite(cfg: &McConfig) -> Result<Vec<SuiteCheck>> {
    let n_max = DEFAULT_N_MAX;
    let coherent = make_coherent_beam(170e-6, 1064e-9, 106e-6, 1e5, n_max)?;
    let flipped = coherent.squeezed(&ModeShape::Flipped, 3.6, 3.6, 0.0)?;
    let tem10 = coherent.squeezed(&ModeShape::Tem10, 2.0, 8.0, 0.0)?;
    let zr = coherent.geometry().rayleigh_range();
    let split = SplitDetector::ideal();
    let lo = OverlapVector::tem10(n_max)?;

    let mut checks = Vec::new();
    let split_cases = [
        ("split, coherent, z = 0", &coherent, 0.0),
        ("split, flipped 3.6 dB, z = 0", &flipped, 0.0),
        ("split, flipped 3.6 dB, z = zR/2", &flipped, 0.5 * zr),
        ("split, flipped 3.6 dB, far field", &flipped, f64::INFINITY),
    ];
    for (name, beam, z) in split_cases {
        let view = split.resolve(beam, z)?;
        checks.push(SuiteCheck {
            name,
            analytic: view.beam.noise.variance(&view.projection),
            estimate: mc_noise_power(&view.beam.noise, &view.projection, cfg)?,
        });
    }
    let hd_cases = [
        ("homodyne, coherent, phi = 0", &coherent, 0.0),
        ("homodyne, 2/8 dB, phi = 0", &tem10, 0.0),
        ("homodyne, 2/8 dB, phi = pi/4", &tem10, FRAC_PI_4),
        ("homodyne, 2/8 dB, phi = pi/2", &tem10, FRAC_PI_2),
    ];
    for (name, beam, phi) in hd_cases {
        let p = homodyne_projection(n_max, &lo, phi)?;
        checks.push(SuiteCheck {
            name,
            analytic: beam.noise.variance(&p),
            estimate: mc_noise_power(&beam.noise, &p, cfg)?,
        });
    }
    Ok(checks)
}
