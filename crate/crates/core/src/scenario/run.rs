use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use super::{DetectorSpec, Scenario, TraceKind};
use crate::beam::{db_from_variance, momentum_to_tilt, Beam};
use crate::detect::{
    homodyne_detect, homodyne_projection, infer_displacement, qnl_displacement, qnl_momentum,
    spectrum_trace, write_trace, Measurement, OutputFormat, Setting, SpectrumTrace, SplitDetector,
    TraceConfig,
};
use crate::error::Result;
use crate::mc::{mc_noise_power, McConfig, McEstimate};
use crate::modes::OverlapVector;

/// One summary scalar.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryItem {
    pub key: String,
    pub value: f64,
    pub unit: &'static str,
    /// Published value for bundled presets.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedTrace {
    pub name: &'static str,
    #[serde(skip)]
    pub kind: TraceKind,
    pub trace: SpectrumTrace,
}

/// Monte-Carlo cross-check of one analytic noise power.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McCheck {
    pub setting: Setting,
    pub analytic: f64,
    pub estimate: McEstimate,
    pub pass: bool,
}

/// Everything a scenario run produces.
#[derive(Debug, Clone, Serialize)]
pub struct RunOutput {
    pub name: String,
    pub summary: Vec<SummaryItem>,
    pub traces: Vec<NamedTrace>,
    pub mc: Vec<McCheck>,
    #[serde(skip)]
    pub beam: Option<Beam>,
    #[serde(skip)]
    pub beam_state_path: Option<PathBuf>,
    #[serde(skip)]
    pub output_path: Option<PathBuf>,
}

impl RunOutput {
    pub fn new(name: impl Into<String>) -> Self {
        RunOutput {
            name: name.into(),
            summary: Vec::new(),
            traces: Vec::new(),
            mc: Vec::new(),
            beam: None,
            beam_state_path: None,
            output_path: None,
        }
    }

    pub fn push(&mut self, key: impl Into<String>, value: f64, unit: &'static str) {
        self.summary.push(SummaryItem {
            key: key.into(),
            value,
            unit,
            expected: None,
        });
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.summary.iter().find(|s| s.key == key).map(|s| s.value)
    }

    pub fn trace(&self, kind: TraceKind) -> Option<&SpectrumTrace> {
        self.traces
            .iter()
            .find(|t| t.kind == kind)
            .map(|t| &t.trace)
    }

    pub fn mc_passed(&self) -> bool {
        self.mc.iter().all(|c| c.pass)
    }

    /// Writes one file per trace, a JSON summary and, if requested, the
    /// beam state, under `dir`. Returns the paths written.
    pub fn write(&self, dir: &Path, format: OutputFormat) -> Result<Vec<PathBuf>> {
        let stem = self
            .output_path
            .clone()
            .unwrap_or_else(|| PathBuf::from(&self.name));
        let base = dir.join(stem);
        if let Some(parent) = base.parent() {
            std::fs::create_dir_all(parent)?;
        }
        let file_name = base
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let mut written = Vec::new();
        let notes = vec![format!("scenario: {}", self.name)];
        for t in &self.traces {
            let path =
                base.with_file_name(format!("{file_name}_{}.{}", t.name, format.extension()));
            let file = std::io::BufWriter::new(std::fs::File::create(&path)?);
            write_trace(file, format, t.name, &t.trace, &notes)?;
            written.push(path);
        }
        let summary = base.with_file_name(format!("{file_name}_summary.json"));
        std::fs::write(&summary, serde_json::to_string_pretty(self)?)?;
        written.push(summary);
        if let (Some(beam), Some(p)) = (&self.beam, &self.beam_state_path) {
            let path = dir.join(p);
            if let Some(parent) = path.parent() {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(&path, beam.to_json()?)?;
            written.push(path);
        }
        Ok(written)
    }
}

fn measure_all(scenario: &Scenario, beam: &Beam) -> Result<Vec<Measurement>> {
    let n_max = scenario.source.n_max;
    match &scenario.detector {
        DetectorSpec::Split { z, gap, half_width } => {
            let det = if *gap == 0.0 && half_width.is_infinite() {
                SplitDetector::ideal()
            } else {
                SplitDetector::new(*gap, *half_width)?
            };
            z.values()
                .par_iter()
                .map(|&z| det.measure(beam, z))
                .collect()
        }
        DetectorSpec::Homodyne { phi_lo } => {
            let lo = OverlapVector::tem10(n_max)?;
            phi_lo
                .values()
                .par_iter()
                .map(|&phi| homodyne_detect(beam, &lo, phi))
                .collect()
        }
    }
}

fn mc_checks(scenario: &Scenario, beam: &Beam) -> Result<Vec<McCheck>> {
    let Some(spec) = &scenario.mc else {
        return Ok(Vec::new());
    };
    let mut cfg = McConfig::new(spec.samples, spec.seed)?;
    if let Some(b) = spec.batch {
        cfg = cfg.with_batch(b)?;
    }
    let settings = match &scenario.detector {
        DetectorSpec::Split { z, .. } => z.values(),
        DetectorSpec::Homodyne { phi_lo } => phi_lo.values(),
    };
    let count = spec.points.min(settings.len());
    let picks: Vec<f64> = if count == 1 {
        vec![settings[0]]
    } else {
        (0..count)
            .map(|i| settings[i * (settings.len() - 1) / (count - 1)])
            .collect()
    };
    picks
        .into_iter()
        .map(|value| {
            let (setting, cov, projection) = match &scenario.detector {
                DetectorSpec::Split {
                    gap, half_width, ..
                } => {
                    let det = if *gap == 0.0 && half_width.is_infinite() {
                        SplitDetector::ideal()
                    } else {
                        SplitDetector::new(*gap, *half_width)?
                    };
                    let view = det.resolve(beam, value)?;
                    (
                        Setting::SplitPlane { z_m: value },
                        view.beam.noise,
                        view.projection,
                    )
                }
                DetectorSpec::Homodyne { .. } => {
                    let lo = OverlapVector::tem10(scenario.source.n_max)?;
                    (
                        Setting::LoPhase { phi_lo_rad: value },
                        beam.noise.clone(),
                        homodyne_projection(scenario.source.n_max, &lo, value)?,
                    )
                }
            };
            let analytic = cov.variance(&projection);
            let estimate = mc_noise_power(&cov, &projection, &cfg)?;
            Ok(McCheck {
                setting,
                analytic,
                pass: estimate.agrees_with(analytic),
                estimate,
            })
        })
        .collect()
}

fn trace_seed(base: u64, kind: TraceKind) -> u64 {
    base.wrapping_add(kind.code().wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Runs a validated scenario.
pub fn execute(scenario: &Scenario) -> Result<RunOutput> {
    scenario.validate()?;
    let src = &scenario.source;
    let mut out = RunOutput::new(&scenario.name);
    out.output_path = scenario.output.path.clone();
    out.beam_state_path = scenario.output.beam_state.clone();

    let photons = src.photons();
    out.push("photons", photons, "1");
    if photons > 0.0 {
        let d = qnl_displacement(src.waist, photons)?;
        let p = qnl_momentum(src.waist, photons)?;
        out.push("d_qnl", d * 1e9, "nm");
        out.push("p_qnl", p, "1/m");
        out.push(
            "theta_qnl",
            momentum_to_tilt(p, src.wavelength)? * 1e9,
            "nrad",
        );
    }
    if let Some(m) = scenario.modulation()? {
        let (a, b) = m.ratios(src.waist);
        out.push("modulation.displacement", m.displacement * 1e9, "nm");
        out.push("modulation.momentum", m.momentum, "1/m");
        out.push(
            "modulation.tilt",
            momentum_to_tilt(m.momentum, src.wavelength)? * 1e9,
            "nrad",
        );
        out.push(
            "modulation.homodyne_snr",
            4.0 * photons * (a * a + b * b),
            "1",
        );
    }

    let configured = scenario.beam(true, true)?;
    if let Some(q) = &scenario.squeezing {
        let v = configured.noise.shape_variance(&q.mode.shape(), q.angle)?;
        out.push("squeezed_mode_variance", db_from_variance(v), "dB");
        out.push(
            "tem10_amplitude_variance",
            db_from_variance(configured.noise.mode_variance(1, 0.0)?),
            "dB",
        );
    }

    let mut trace_cfg = TraceConfig::new(src.rbw, src.vbw, scenario.trace.seed)?;
    trace_cfg.electronic_clearance_db = scenario.trace.electronic_clearance_db;
    for &kind in &scenario.trace.kinds {
        let beam = scenario.beam_for(kind)?;
        let sweep = measure_all(scenario, &beam)?;
        let name = kind.name();
        let analytic: Vec<f64> = sweep.iter().map(Measurement::total_db).collect();
        let peak = analytic.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let floor = analytic.iter().copied().fold(f64::INFINITY, f64::min);
        out.push(format!("{name}.peak"), peak, "dB");
        out.push(format!("{name}.min"), floor, "dB");
        out.push(format!("{name}.first"), analytic[0], "dB");
        out.push(format!("{name}.last"), analytic[analytic.len() - 1], "dB");
        if sweep.iter().any(Measurement::is_apertured) {
            out.push(
                format!("{name}.apertured_points"),
                sweep.iter().filter(|m| m.is_apertured()).count() as f64,
                "1",
            );
        }
        let readings: Vec<Measurement> = sweep
            .iter()
            .flat_map(|m| std::iter::repeat(m.clone()).take(scenario.trace.readings))
            .collect();
        let cfg = TraceConfig {
            seed: trace_seed(scenario.trace.seed, kind),
            ..trace_cfg
        };
        let trace = spectrum_trace(&readings, &cfg)?;
        out.push(format!("{name}.trace_mean"), trace.mean_db(), "dB");
        out.traces.push(NamedTrace { name, kind, trace });
    }

    if let DetectorSpec::Split { .. } = scenario.detector {
        for kind in [TraceKind::Mod, TraceKind::Configured, TraceKind::ModSqz] {
            if let (Some(first), Some(last)) = (
                out.get(&format!("{}.first", kind.name())),
                out.get(&format!("{}.last", kind.name())),
            ) {
                out.push(
                    format!("{}.far_minus_near", kind.name()),
                    last - first,
                    "dB",
                );
            }
        }
    }
    if let (DetectorSpec::Homodyne { .. }, true) = (&scenario.detector, photons > 0.0) {
        let d_qnl = qnl_displacement(src.waist, photons)?;
        for (floor_kind, signal_kind) in [
            (TraceKind::Sqz, TraceKind::ModSqz),
            (TraceKind::Qnl, TraceKind::Mod),
        ] {
            if let (Some(f), Some(s)) = (out.trace(floor_kind), out.trace(signal_kind)) {
                let excess = s.mean_db() - f.mean_db();
                let floor = f.mean_linear();
                let prefix = signal_kind.name();
                out.push(format!("{prefix}.excess_over_floor"), excess, "dB");
                if excess > 0.0 {
                    out.push(
                        format!("{prefix}.inferred_displacement"),
                        infer_displacement(d_qnl, floor, excess)? * 1e9,
                        "nm",
                    );
                }
            }
        }
    }

    out.mc = mc_checks(scenario, &configured)?;
    out.beam = Some(configured);
    Ok(out)
}
