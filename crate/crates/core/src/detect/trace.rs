use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use super::{Measurement, Setting};
use crate::beam::variance_from_squeeze_db;
use crate::error::{Error, Result};

/// Spectrum-analyzer settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceConfig {
    /// Resolution bandwidth, Hz.
    pub rbw: f64,
    /// Video bandwidth, Hz.
    pub vbw: f64,
    pub seed: u64,
    /// Electronic noise floor in dB below shot noise; `None` for none.
    pub electronic_clearance_db: Option<f64>,
}

impl TraceConfig {
    pub fn new(rbw: f64, vbw: f64, seed: u64) -> Result<Self> {
        let cfg = TraceConfig {
            rbw,
            vbw,
            seed,
            electronic_clearance_db: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_electronic_clearance(mut self, clearance_db: f64) -> Self {
        self.electronic_clearance_db = Some(clearance_db);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rbw > 0.0 && self.rbw.is_finite() && self.vbw > 0.0) {
            return Err(Error::usage("RBW and VBW must be positive"));
        }
        if self.vbw > self.rbw {
            return Err(Error::usage(format!(
                "VBW ({}) must not exceed RBW ({})",
                self.vbw, self.rbw
            )));
        }
        if let Some(c) = self.electronic_clearance_db {
            if !c.is_finite() {
                return Err(Error::usage("electronic clearance must be finite"));
            }
        }
        Ok(())
    }

    /// Relative variance of one displayed power reading, `2 vbw / rbw`.
    pub fn relative_variance(&self) -> f64 {
        2.0 * self.vbw / self.rbw
    }

    /// Additive electronic noise in shot-noise units.
    pub fn electronic_floor(&self) -> f64 {
        self.electronic_clearance_db
            .map_or(0.0, variance_from_squeeze_db)
    }
}

/// One displayed reading.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub setting: Setting,
    pub signal_rel: f64,
    pub noise_rel: f64,
    pub snr: f64,
    /// Displayed power relative to shot noise, dB.
    pub db: f64,
}

/// Simulated analyzer trace over a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTrace {
    pub points: Vec<TracePoint>,
    pub rbw: f64,
    pub vbw: f64,
    pub seed: u64,
}

impl SpectrumTrace {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Mean displayed power in linear shot-noise units.
    pub fn mean_linear(&self) -> f64 {
        self.points
            .iter()
            .map(|p| 10f64.powf(p.db / 10.0))
            .sum::<f64>()
            / self.points.len() as f64
    }

    /// [`mean_linear`](Self::mean_linear) in dB.
    pub fn mean_db(&self) -> f64 {
        10.0 * self.mean_linear().log10()
    }

    pub fn db_values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.db).collect()
    }
}

/// Draws one analyzer reading per measurement.
///
/// The noise power (plus any electronic floor) is multiplied by a unit-mean
/// Gamma variate of relative variance `2 vbw / rbw`, the distribution of an
/// averaged power estimate, which stays positive for any bandwidth ratio.
/// Point `i` draws from its own stream `i` of a ChaCha generator keyed by the
/// seed, so readings do not depend on evaluation order.
pub fn spectrum_trace(sweep: &[Measurement], cfg: &TraceConfig) -> Result<SpectrumTrace> {
    cfg.validate()?;
    let shape = 1.0 / cfg.relative_variance();
    let gamma = Gamma::new(shape, 1.0 / shape).map_err(|e| Error::Numeric(e.to_string()))?;
    let floor = cfg.electronic_floor();
    let points = sweep
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i as u64);
            let chi: f64 = gamma.sample(&mut rng);
            TracePoint {
                setting: m.setting,
                signal_rel: m.signal_rel,
                noise_rel: m.noise_rel,
                snr: m.snr,
                db: 10.0 * (m.signal_rel + (m.noise_rel + floor) * chi).log10(),
            }
        })
        .collect();
    Ok(SpectrumTrace {
        points,
        rbw: cfg.rbw,
        vbw: cfg.vbw,
        seed: cfg.seed,
    })
}
