use std::f64::consts::FRAC_2_PI;

use super::{RunOutput, Scenario};
use crate::beam::{make_coherent_beam, photon_number, Modulation};
use crate::detect::{
    efficiency_ratio, experimental_ratio_from_traces, homodyne_detect, SplitDetector,
};
use crate::error::{Error, Result};
use crate::modes::{OverlapVector, DEFAULT_N_MAX};

enum Body {
    Scenario(&'static str),
    Report(fn(usize) -> Result<RunOutput>),
}

/// A bundled experiment together with the published values it reproduces.
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    /// `(summary key, published value)`.
    pub expected: &'static [(&'static str, f64)],
    body: Body,
}

impl Preset {
    /// The preset's scenario, or `None` for computed reports.
    pub fn scenario(&self) -> Option<Result<Scenario>> {
        match self.body {
            Body::Scenario(text) => Some(Scenario::from_toml_str(text)),
            Body::Report(_) => None,
        }
    }

    /// Scenario source text, if any.
    pub fn toml(&self) -> Option<&'static str> {
        match self.body {
            Body::Scenario(text) => Some(text),
            Body::Report(_) => None,
        }
    }

    /// Runs the preset with its bundled settings.
    pub fn run(&self) -> Result<RunOutput> {
        match self.body {
            Body::Scenario(text) => self.run_scenario(&Scenario::from_toml_str(text)?),
            Body::Report(_) => self.run_report(DEFAULT_N_MAX),
        }
    }

    /// Runs an edited copy of this preset's scenario.
    pub fn run_scenario(&self, scenario: &Scenario) -> Result<RunOutput> {
        let mut out = super::execute(scenario)?;
        self.annotate(&mut out);
        Ok(out)
    }

    /// Runs a report preset at the given truncation.
    pub fn run_report(&self, n_max: usize) -> Result<RunOutput> {
        match self.body {
            Body::Report(f) => {
                let mut out = f(n_max)?;
                self.annotate(&mut out);
                Ok(out)
            }
            Body::Scenario(_) => Err(Error::usage(format!(
                "preset `{}` is a scenario",
                self.name
            ))),
        }
    }

    /// Attaches the published values to matching summary items.
    pub fn annotate(&self, out: &mut RunOutput) {
        for item in &mut out.summary {
            if let Some((_, v)) = self.expected.iter().find(|(k, _)| *k == item.key) {
                item.expected = Some(*v);
            }
        }
    }
}

static PRESETS: &[Preset] = &[
    Preset {
        name: "qnl-table",
        description:
            "Quantum noise limits of the worked example (1 mW, 1 um, 100 um waist, 100 kHz)",
        expected: &[("d_qnl", 0.2), ("p_qnl", 0.04), ("theta_qnl", 7.0)],
        body: Body::Scenario(include_str!("../../presets/qnl-table.toml")),
    },
    Preset {
        name: "fig-split-scan",
        description: "Split-detector z-scan, 10% displacement / 90% tilt modulation at 4.2 mW",
        expected: &[("mod.peak", 23.0), ("mod.far_minus_near", 10.0)],
        body: Body::Scenario(include_str!("../../presets/fig-split-scan.toml")),
    },
    Preset {
        name: "fig-homodyne-scan",
        description: "TEM10 homodyne phase scan with QNL, SQZ, MOD and MOD-SQZ traces",
        expected: &[
            ("sqz.min", -2.0),
            ("sqz.peak", 8.0),
            ("mod.peak", 11.3),
            ("d_qnl", 0.6),
        ],
        body: Body::Scenario(include_str!("../../presets/fig-homodyne-scan.toml")),
    },
    Preset {
        name: "efficiency-comparison",
        description:
            "Split versus homodyne efficiency, theory and reconstruction from peak heights",
        expected: &[
            ("r_th_equal_power", 0.64),
            ("mod_sd_predicted", 23.0),
            ("r_exp", 0.64),
            ("r_exp_simulated", 0.64),
        ],
        body: Body::Report(efficiency_comparison),
    },
    Preset {
        name: "squeeze-transfer",
        description: "3.6 dB flipped-mode squeezing: split noise at the waist and TEM10 transfer",
        expected: &[
            ("squeezed_mode_variance", -3.6),
            ("tem10_amplitude_variance", -2.0),
            ("sqz.first", -3.6),
        ],
        body: Body::Scenario(include_str!("../../presets/squeeze-transfer.toml")),
    },
    Preset {
        name: "sub-qnl",
        description: "Sub-QNL displacement with 2 dB TEM10 squeezing at 170 uW",
        expected: &[
            ("d_qnl", 0.6),
            ("mod-sqz.excess_over_floor", 0.5),
            ("mod-sqz.inferred_displacement", 0.15),
        ],
        body: Body::Scenario(include_str!("../../presets/sub-qnl.toml")),
    },
];

/// All bundled presets.
pub fn presets() -> &'static [Preset] {
    PRESETS
}

pub fn preset(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

/// Split (4.2 mW) versus homodyne (170 uW) comparison.
fn efficiency_comparison(n_max: usize) -> Result<RunOutput> {
    const LAMBDA: f64 = 1064e-9;
    const WAIST: f64 = 106e-6;
    const RBW: f64 = 1e5;
    const P_SD: f64 = 4.2e-3;
    const P_HD: f64 = 170e-6;
    const MOD_SD_DB: f64 = 23.0;
    const MOD_HD_DB: f64 = 11.3;

    let mut out = RunOutput::new("efficiency-comparison");
    let lo = OverlapVector::tem10(n_max)?;
    let n_hd = photon_number(P_HD, LAMBDA, 1.0 / RBW);
    let n_sd = photon_number(P_SD, LAMBDA, 1.0 / RBW);

    // equal photon numbers, pure displacement, detector at the waist
    let probe = make_coherent_beam(P_HD, LAMBDA, WAIST, RBW, n_max)?
        .modulated(&Modulation::displacement(1e-3 * WAIST))?;
    let sd = SplitDetector::ideal().measure(&probe, 0.0)?;
    let hd = homodyne_detect(&probe, &lo, 0.0)?;
    let eq = efficiency_ratio(&sd, &hd, n_hd, n_hd)?;
    out.push("r_th_equal_power", eq.measured, "1");
    out.push("r_th_powers", FRAC_2_PI * n_sd / n_hd, "1");

    // modulation calibrated on the homodyne peak, seen by the split detector in the far field
    let amplitude = ((10f64.powf(MOD_HD_DB / 10.0) - 1.0) / (4.0 * n_hd)).sqrt();
    let tilt = make_coherent_beam(P_SD, LAMBDA, WAIST, RBW, n_max)?
        .modulated(&Modulation::from_power_split(amplitude, 1.0, WAIST)?)?;
    let far = SplitDetector::ideal().measure(&tilt, f64::INFINITY)?;
    let mod_sd = far.total_db();
    out.push("mod_sd_predicted", mod_sd, "dB");
    out.push("mod_hd", MOD_HD_DB, "dB");
    out.push(
        "r_exp",
        experimental_ratio_from_traces(P_SD, P_HD, MOD_SD_DB, MOD_HD_DB)?,
        "1",
    );
    out.push(
        "r_exp_simulated",
        experimental_ratio_from_traces(P_SD, P_HD, mod_sd, MOD_HD_DB)?,
        "1",
    );
    Ok(out)
}
