//! Declarative experiment descriptions.
//!
//! A scenario is a TOML document with `[source]`, optional `[modulation]`,
//! optional `[squeezing]`, exactly one of `[detector.split]` or
//! `[detector.homodyne]`, and optional `[trace]`, `[mc]` and `[output]`
//! sections. Every dimensional key carries its unit in the name
//! (`power_mW`, `waist_um`, `z_cm`, ...). See the README for the full list.

mod parse;
mod presets;
mod run;

use std::path::PathBuf;

use crate::beam::{
    apply_modulation_at, combine_mach_zehnder, inject_squeezed_mode, make_coherent_beam,
    photon_number, tilt_to_momentum, variance_from_db, Beam, ModeShape, Modulation,
    NoiseCovariance,
};
use crate::error::{Error, Result};
use crate::modes::{DEFAULT_N_MAX, MAX_N_MAX};
use parse::Section;

pub use parse::parse_angle;
pub use presets::{preset, presets, Preset};
pub use run::{execute, McCheck, NamedTrace, RunOutput, SummaryItem};

const POWER: &[(&str, f64)] = &[("W", 1.0), ("mW", 1e-3), ("uW", 1e-6)];
const WAVELENGTH: &[(&str, f64)] = &[("m", 1.0), ("um", 1e-6), ("nm", 1e-9)];
const LENGTH: &[(&str, f64)] = &[("m", 1.0), ("cm", 1e-2), ("mm", 1e-3), ("um", 1e-6)];
const FREQUENCY: &[(&str, f64)] = &[("Hz", 1.0), ("kHz", 1e3), ("MHz", 1e6)];

/// A set of detector settings.
#[derive(Debug, Clone, PartialEq)]
pub enum Sweep {
    Single(f64),
    Linear {
        start: f64,
        stop: f64,
        points: usize,
    },
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            Sweep::Single(v) => vec![v],
            Sweep::Linear {
                start, points: 1, ..
            } => vec![start],
            Sweep::Linear {
                start,
                stop,
                points,
            } => {
                let step = (stop - start) / (points - 1) as f64;
                (0..points)
                    .map(|i| {
                        if i + 1 == points {
                            stop
                        } else {
                            start + step * i as f64
                        }
                    })
                    .collect()
            }
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Sweep::Single(_) => 1,
            Sweep::Linear { points, .. } => *points,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Laser source and analyzer bandwidths.
#[derive(Debug, Clone, PartialEq)]
pub struct Source {
    /// W.
    pub power: f64,
    /// m.
    pub wavelength: f64,
    /// m.
    pub waist: f64,
    /// Hz.
    pub rbw: f64,
    /// Hz.
    pub vbw: f64,
    pub n_max: usize,
}

impl Source {
    pub fn integration_time(&self) -> f64 {
        1.0 / self.rbw
    }

    pub fn photons(&self) -> f64 {
        photon_number(self.power, self.wavelength, self.integration_time())
    }
}

/// How the modulation strength is specified.
#[derive(Debug, Clone, PartialEq)]
pub enum ModulationSpec {
    Explicit(Modulation),
    /// Total TEM10 amplitude inferred from a homodyne peak height (dB above
    /// shot noise) measured with `homodyne_power` watts, split so that tilt
    /// carries `tilt_fraction` of the modulation power.
    PowerSplit {
        tilt_fraction: f64,
        homodyne_peak_db: f64,
        homodyne_power: f64,
        frequency: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModulationConfig {
    pub spec: ModulationSpec,
    /// Plane (m from the waist) in which `d` and `p` are specified.
    pub reference_z: f64,
}

impl ModulationConfig {
    pub fn resolve(&self, source: &Source) -> Result<Modulation> {
        match self.spec {
            ModulationSpec::Explicit(m) => Ok(m),
            ModulationSpec::PowerSplit {
                tilt_fraction,
                homodyne_peak_db,
                homodyne_power,
                frequency,
            } => {
                let n_ref =
                    photon_number(homodyne_power, source.wavelength, source.integration_time());
                let snr = variance_from_db(homodyne_peak_db) - 1.0;
                let amplitude = (snr / (4.0 * n_ref)).sqrt();
                Ok(
                    Modulation::from_power_split(amplitude, tilt_fraction, source.waist)?
                        .with_frequency(frequency),
                )
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqueezeMode {
    Tem10,
    Flipped,
}

impl SqueezeMode {
    pub fn shape(&self) -> ModeShape {
        match self {
            SqueezeMode::Tem10 => ModeShape::Tem10,
            SqueezeMode::Flipped => ModeShape::Flipped,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Squeezing {
    pub mode: SqueezeMode,
    pub squeeze_db: f64,
    pub antisqueeze_db: f64,
    /// rad.
    pub angle: f64,
    pub combiner_efficiency: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DetectorSpec {
    /// Positions in m from the waist; gap and half-width in m.
    Split { z: Sweep, gap: f64, half_width: f64 },
    /// TEM10 local oscillator; phases in rad.
    Homodyne { phi_lo: Sweep },
}

/// Which beam a trace is computed for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum TraceKind {
    /// Modulation and squeezing as configured.
    Configured,
    /// Coherent light, no modulation.
    Qnl,
    /// Squeezing only.
    Sqz,
    /// Modulation only.
    Mod,
    /// Modulation and squeezing.
    ModSqz,
}

impl TraceKind {
    pub const ALL: [TraceKind; 5] = [
        TraceKind::Configured,
        TraceKind::Qnl,
        TraceKind::Sqz,
        TraceKind::Mod,
        TraceKind::ModSqz,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TraceKind::Configured => "configured",
            TraceKind::Qnl => "qnl",
            TraceKind::Sqz => "sqz",
            TraceKind::Mod => "mod",
            TraceKind::ModSqz => "mod-sqz",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    fn code(&self) -> u64 {
        *self as u64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceSpec {
    pub seed: u64,
    pub electronic_clearance_db: Option<f64>,
    pub kinds: Vec<TraceKind>,
    /// Analyzer readings per detector setting.
    pub readings: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McSpec {
    pub samples: usize,
    pub seed: u64,
    pub batch: Option<usize>,
    /// Number of sweep settings to validate.
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutputSpec {
    /// Result file prefix, relative to the output directory.
    pub path: Option<PathBuf>,
    /// Where to write the configured beam state at the waist.
    pub beam_state: Option<PathBuf>,
}

/// A validated experiment in SI units.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub source: Source,
    pub modulation: Option<ModulationConfig>,
    pub squeezing: Option<Squeezing>,
    pub detector: DetectorSpec,
    pub trace: TraceSpec,
    pub mc: Option<McSpec>,
    pub output: OutputSpec,
}

impl Scenario {
    /// Parses and validates a scenario document.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::Parse(e.to_string()))?;
        let scenario = from_table(&table)?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Re-checks every invariant; call after editing fields.
    pub fn validate(&self) -> Result<()> {
        let s = &self.source;
        let positive = |field: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(
                    field,
                    format!("must be positive and finite, got {v}"),
                ))
            }
        };
        if !(s.power >= 0.0 && s.power.is_finite()) {
            return Err(Error::invalid("source.power", "must be finite and >= 0"));
        }
        positive("source.wavelength", s.wavelength)?;
        positive("source.waist", s.waist)?;
        positive("source.rbw", s.rbw)?;
        positive("source.vbw", s.vbw)?;
        if s.vbw > s.rbw {
            return Err(Error::invalid("source.vbw", "must not exceed the RBW"));
        }
        if s.n_max < 1 || s.n_max > MAX_N_MAX {
            return Err(Error::invalid(
                "source.n_max",
                format!("must be in 1..={MAX_N_MAX}"),
            ));
        }

        if let Some(m) = &self.modulation {
            if !m.reference_z.is_finite() {
                return Err(Error::invalid("modulation.reference", "must be finite"));
            }
            if let ModulationSpec::PowerSplit {
                tilt_fraction,
                homodyne_peak_db,
                homodyne_power,
                ..
            } = m.spec
            {
                if !(0.0..=1.0).contains(&tilt_fraction) {
                    return Err(Error::invalid(
                        "modulation.tilt_fraction",
                        "must be in [0, 1]",
                    ));
                }
                if !(homodyne_peak_db > 0.0 && homodyne_peak_db.is_finite()) {
                    return Err(Error::invalid(
                        "modulation.homodyne_peak_dB",
                        "must be > 0 dB",
                    ));
                }
                positive("modulation.homodyne_power", homodyne_power)?;
            }
            m.resolve(s)?
                .validate(s.waist)
                .map_err(|e| Error::invalid("modulation", e.to_string()))?;
        }

        if let Some(q) = &self.squeezing {
            if !(q.squeeze_db >= 0.0 && q.squeeze_db.is_finite()) {
                return Err(Error::invalid(
                    "squeezing.squeeze_dB",
                    "must be finite and >= 0",
                ));
            }
            if !(q.antisqueeze_db >= q.squeeze_db && q.antisqueeze_db.is_finite()) {
                return Err(Error::invalid(
                    "squeezing.antisqueeze_dB",
                    "must be finite and >= squeeze_dB",
                ));
            }
            if !q.angle.is_finite() {
                return Err(Error::invalid("squeezing.angle", "must be finite"));
            }
            if !(q.combiner_efficiency > 0.0 && q.combiner_efficiency <= 1.0) {
                return Err(Error::invalid(
                    "squeezing.combiner_efficiency",
                    "must be in (0, 1]",
                ));
            }
        }

        match &self.detector {
            DetectorSpec::Split { z, gap, half_width } => {
                check_sweep("detector.split.z", z)?;
                if !(*gap >= 0.0 && gap.is_finite()) {
                    return Err(Error::invalid(
                        "detector.split.gap",
                        "must be finite and >= 0",
                    ));
                }
                if half_width.is_nan() || *half_width <= gap / 2.0 {
                    return Err(Error::invalid(
                        "detector.split.half_width",
                        "must exceed half the gap",
                    ));
                }
            }
            DetectorSpec::Homodyne { phi_lo } => check_sweep("detector.homodyne.phi_lo", phi_lo)?,
        }

        let t = &self.trace;
        if t.kinds.is_empty() {
            return Err(Error::invalid(
                "trace.traces",
                "must list at least one trace",
            ));
        }
        if t.readings == 0 {
            return Err(Error::invalid("trace.readings", "must be >= 1"));
        }
        if let Some(c) = t.electronic_clearance_db {
            if !c.is_finite() {
                return Err(Error::invalid(
                    "trace.electronic_clearance_dB",
                    "must be finite",
                ));
            }
        }
        if let Some(mc) = &self.mc {
            if mc.samples < crate::mc::MIN_SAMPLES {
                return Err(Error::invalid(
                    "mc.samples",
                    format!("must be >= {}", crate::mc::MIN_SAMPLES),
                ));
            }
            if mc.batch == Some(0) {
                return Err(Error::invalid("mc.batch", "must be >= 1"));
            }
            if mc.points == 0 {
                return Err(Error::invalid("mc.points", "must be >= 1"));
            }
        }
        Ok(())
    }

    pub fn modulation(&self) -> Result<Option<Modulation>> {
        self.modulation
            .as_ref()
            .map(|m| m.resolve(&self.source))
            .transpose()
    }

    /// The beam at the waist, with or without the configured modulation and
    /// squeezing.
    pub fn beam(&self, modulated: bool, squeezed: bool) -> Result<Beam> {
        let s = &self.source;
        let mut beam = make_coherent_beam(s.power, s.wavelength, s.waist, s.rbw, s.n_max)?;
        if let (true, Some(q)) = (squeezed, &self.squeezing) {
            let dim = inject_squeezed_mode(
                &NoiseCovariance::vacuum(s.n_max)?,
                &q.mode.shape(),
                q.squeeze_db,
                q.antisqueeze_db,
                q.angle,
            )?;
            beam = combine_mach_zehnder(&beam, &dim, q.combiner_efficiency)?;
        }
        if let (true, Some(m)) = (modulated, &self.modulation) {
            let field = apply_modulation_at(&beam.field, &m.resolve(s)?, m.reference_z)?;
            beam = Beam::new(field, beam.noise)?;
        }
        Ok(beam)
    }

    pub fn beam_for(&self, kind: TraceKind) -> Result<Beam> {
        match kind {
            TraceKind::Configured => self.beam(true, true),
            TraceKind::Qnl => self.beam(false, false),
            TraceKind::Sqz => self.beam(false, true),
            TraceKind::Mod => self.beam(true, false),
            TraceKind::ModSqz => self.beam(true, true),
        }
    }
}

fn check_sweep(field: &str, s: &Sweep) -> Result<()> {
    let ok = match *s {
        Sweep::Single(v) => v.is_finite(),
        Sweep::Linear {
            start,
            stop,
            points,
        } => start.is_finite() && stop.is_finite() && points >= 1,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::invalid(
            field,
            "sweep bounds must be finite with at least one point",
        ))
    }
}

fn require<T>(s: &Section<'_>, key: &str, v: Option<T>) -> Result<T> {
    v.ok_or_else(|| s.err(key, "missing"))
}

fn from_table(table: &toml::Table) -> Result<Scenario> {
    let root = Section::root(table);
    let name = root.string("name")?.unwrap_or("scenario").to_string();
    root.string("description")?;

    let src = require(&root, "source", root.section("source")?)?;
    let power = require(&src, "power_mW", src.quantity("power", POWER)?)?.0;
    let wavelength = require(
        &src,
        "wavelength_nm",
        src.quantity("wavelength", WAVELENGTH)?,
    )?
    .0;
    let waist = require(&src, "waist_um", src.quantity("waist", LENGTH)?)?.0;
    let rbw = require(&src, "rbw_kHz", src.quantity("rbw", FREQUENCY)?)?.0;
    let vbw = src.quantity("vbw", FREQUENCY)?.map_or(rbw / 100.0, |v| v.0);
    let n_max = match src.integer("n_max")? {
        Some(n) => usize::try_from(n).map_err(|_| src.err("n_max", "too large"))?,
        None => DEFAULT_N_MAX,
    };
    src.finish()?;
    let source = Source {
        power,
        wavelength,
        waist,
        rbw,
        vbw,
        n_max,
    };

    let modulation = match root.section("modulation")? {
        None => None,
        Some(m) => Some(parse_modulation(&m, &source)?),
    };

    let squeezing = match root.section("squeezing")? {
        None => None,
        Some(q) => {
            let mode = match require(&q, "mode", q.string("mode")?)? {
                "tem10" => SqueezeMode::Tem10,
                "flipped" => SqueezeMode::Flipped,
                other => {
                    return Err(q.err("mode", format!("`{other}` is not one of tem10, flipped")))
                }
            };
            let squeeze_db = require(&q, "squeeze_dB", q.finite("squeeze_dB")?)?;
            let antisqueeze_db = q.finite("antisqueeze_dB")?.unwrap_or(squeeze_db);
            let angle = q.angle("angle")?.unwrap_or(0.0);
            let combiner_efficiency = q.finite("combiner_efficiency")?.unwrap_or(1.0);
            q.finish()?;
            Some(Squeezing {
                mode,
                squeeze_db,
                antisqueeze_db,
                angle,
                combiner_efficiency,
            })
        }
    };

    let det = require(&root, "detector", root.section("detector")?)?;
    let detector = match (det.section("split")?, det.section("homodyne")?) {
        (Some(s), None) => {
            let z = match (s.quantity("z", LENGTH)?, s.sweep("z_sweep", LENGTH)?) {
                (Some((v, _)), None) => Sweep::Single(v),
                (None, Some((sw, _))) => sw,
                (Some(_), Some(_)) => {
                    return Err(s.err("z_sweep", "give either a single z or a sweep"))
                }
                (None, None) => return Err(s.err("z_cm", "missing (or z_sweep_cm)")),
            };
            let gap = s.quantity("gap", LENGTH)?.map_or(0.0, |v| v.0);
            let half_width = s
                .quantity("half_width", LENGTH)?
                .map_or(f64::INFINITY, |v| v.0);
            s.finish()?;
            DetectorSpec::Split { z, gap, half_width }
        }
        (None, Some(h)) => {
            if let Some(lo) = h.string("lo")? {
                if lo != "tem10" {
                    return Err(h.err("lo", format!("`{lo}` is not supported (tem10)")));
                }
            }
            let phi_lo = match (h.angle("phi_lo")?, h.angle_sweep("phi_sweep")?) {
                (Some(v), None) => Sweep::Single(v),
                (None, Some(sw)) => sw,
                (Some(_), Some(_)) => {
                    return Err(h.err("phi_sweep", "give either phi_lo or phi_sweep"))
                }
                (None, None) => return Err(h.err("phi_lo", "missing (or phi_sweep)")),
            };
            h.finish()?;
            DetectorSpec::Homodyne { phi_lo }
        }
        (Some(_), Some(_)) => return Err(det.err("split", "exactly one detector is allowed")),
        (None, None) => return Err(det.err("split", "missing detector (split or homodyne)")),
    };
    det.finish()?;

    let trace = match root.section("trace")? {
        None => TraceSpec {
            seed: 0,
            electronic_clearance_db: None,
            kinds: vec![TraceKind::Configured],
            readings: 1,
        },
        Some(t) => {
            let kinds = match t.strings("traces")? {
                None => vec![TraceKind::Configured],
                Some(list) => {
                    let mut kinds = Vec::new();
                    for name in list {
                        let k = TraceKind::parse(name).ok_or_else(|| {
                            t.err(
                                "traces",
                                format!(
                                    "`{name}` is not one of configured, qnl, sqz, mod, mod-sqz"
                                ),
                            )
                        })?;
                        if !kinds.contains(&k) {
                            kinds.push(k);
                        }
                    }
                    kinds
                }
            };
            let spec = TraceSpec {
                seed: t.integer("seed")?.unwrap_or(0),
                electronic_clearance_db: t.finite("electronic_clearance_dB")?,
                kinds,
                readings: t.integer("readings")?.unwrap_or(1) as usize,
            };
            t.finish()?;
            spec
        }
    };

    let mc = match root.section("mc")? {
        None => None,
        Some(m) => {
            let spec = McSpec {
                samples: require(&m, "samples", m.integer("samples")?)? as usize,
                seed: m.integer("seed")?.unwrap_or(trace.seed),
                batch: m.integer("batch")?.map(|b| b as usize),
                points: m.integer("points")?.unwrap_or(5) as usize,
            };
            m.finish()?;
            Some(spec)
        }
    };

    let output = match root.section("output")? {
        None => OutputSpec::default(),
        Some(o) => {
            let spec = OutputSpec {
                path: o.string("path")?.map(PathBuf::from),
                beam_state: o.string("beam_state")?.map(PathBuf::from),
            };
            o.finish()?;
            spec
        }
    };
    root.finish()?;

    Ok(Scenario {
        name,
        source,
        modulation,
        squeezing,
        detector,
        trace,
        mc,
        output,
    })
}

fn parse_modulation(m: &Section<'_>, source: &Source) -> Result<ModulationConfig> {
    let frequency = m.quantity("frequency", FREQUENCY)?.map_or(0.0, |v| v.0);
    let reference_z = m.quantity("reference", LENGTH)?.map_or(0.0, |v| v.0);
    let displacement = m.quantity(
        "displacement",
        &[("m", 1.0), ("um", 1e-6), ("nm", 1e-9), ("pm", 1e-12)],
    )?;
    let momentum = m.quantity("momentum", &[("per_m", 1.0)])?;
    let tilt = m.quantity("tilt", &[("rad", 1.0), ("urad", 1e-6), ("nrad", 1e-9)])?;
    let fraction = m.finite("tilt_fraction")?;
    let peak = m.finite("homodyne_peak_dB")?;
    let ref_power = m.quantity("homodyne_power", POWER)?;

    let explicit = displacement.is_some() || momentum.is_some() || tilt.is_some();
    let spec = match (explicit, fraction) {
        (true, Some(_)) => {
            return Err(m.err(
                "tilt_fraction",
                "cannot be combined with explicit displacement/tilt",
            ))
        }
        (true, None) => {
            if momentum.is_some() && tilt.is_some() {
                return Err(m.err("tilt", "give either momentum or tilt, not both"));
            }
            if peak.is_some() || ref_power.is_some() {
                return Err(m.err("homodyne_peak_dB", "only used with tilt_fraction"));
            }
            let p = match (momentum, tilt) {
                (Some((p, _)), _) => p,
                (None, Some((t, _))) => tilt_to_momentum(t, source.wavelength),
                (None, None) => 0.0,
            };
            ModulationSpec::Explicit(
                Modulation::new(displacement.map_or(0.0, |d| d.0), p).with_frequency(frequency),
            )
        }
        (false, Some(tilt_fraction)) => ModulationSpec::PowerSplit {
            tilt_fraction,
            homodyne_peak_db: require(m, "homodyne_peak_dB", peak)?,
            homodyne_power: ref_power.map_or(source.power, |p| p.0),
            frequency,
        },
        (false, None) => {
            return Err(m.err(
                "displacement_nm",
                "missing (or tilt_fraction with homodyne_peak_dB)",
            ))
        }
    };
    m.finish()?;
    Ok(ModulationConfig { spec, reference_z })
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = r#"
name = "basic"
[source]
power_uW = 170
wavelength_nm = 1064
waist_um = 106
rbw_kHz = 100
vbw_Hz = 100
[modulation]
displacement_nm = 0.15
[squeezing]
mode = "tem10"
squeeze_dB = 2
antisqueeze_dB = 8
angle = "0pi"
[detector.homodyne]
phi_sweep = { start = 0, stop = "2pi", points = 5 }
[trace]
seed = 4
traces = ["sqz", "mod-sqz"]
"#;

    #[test]
    fn parses_units() {
        let s = Scenario::from_toml_str(BASIC).unwrap();
        assert_eq!(s.name, "basic");
        assert!((s.source.power - 170e-6).abs() < 1e-18);
        assert!((s.source.wavelength - 1064e-9).abs() < 1e-21);
        assert_eq!(s.source.vbw, 100.0);
        assert_eq!(s.source.n_max, DEFAULT_N_MAX);
        let DetectorSpec::Homodyne { phi_lo } = &s.detector else {
            panic!()
        };
        let v = phi_lo.values();
        assert_eq!(v.len(), 5);
        assert_eq!(v[4], 2.0 * std::f64::consts::PI);
        assert_eq!(s.trace.kinds, vec![TraceKind::Sqz, TraceKind::ModSqz]);
    }

    #[test]
    fn reports_field_names() {
        let bad = BASIC.replace("waist_um = 106", "waist_um = -1");
        let e = Scenario::from_toml_str(&bad).unwrap_err();
        assert!(e.is_input_error());
        assert!(e.to_string().contains("source.waist"), "{e}");
        let bad = BASIC.replace("vbw_Hz = 100", "vbw_Hz = 100\ncolour = 3");
        assert!(Scenario::from_toml_str(&bad)
            .unwrap_err()
            .to_string()
            .contains("source.colour"));
        let bad = BASIC.replace(
            "[detector.homodyne]",
            "[detector.split]\nz_cm = 0\n[detector.homodyne]",
        );
        assert!(Scenario::from_toml_str(&bad)
            .unwrap_err()
            .to_string()
            .contains("exactly one"));
        let bad = BASIC.replace("displacement_nm = 0.15", "displacement_nm = 30000");
        assert!(Scenario::from_toml_str(&bad)
            .unwrap_err()
            .to_string()
            .contains("modulation"));
        match Scenario::from_toml_str("[source\n") {
            Err(Error::Parse(m)) => assert!(m.contains("line 1"), "{m}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn power_split_modulation() {
        let text = BASIC.replace(
            "displacement_nm = 0.15",
            "tilt_fraction = 0.9\nhomodyne_peak_dB = 11.3\nreference_cm = 1.6",
        );
        let s = Scenario::from_toml_str(&text).unwrap();
        let m = s.modulation().unwrap().unwrap();
        let (a, b) = m.ratios(s.source.waist);
        let snr = 4.0 * s.source.photons() * (a * a + b * b);
        assert!((10.0 * (1.0 + snr).log10() - 11.3).abs() < 1e-9);
        assert!((m.tilt_fraction(s.source.waist) - 0.9).abs() < 1e-12);
        assert_eq!(s.modulation.as_ref().unwrap().reference_z, 0.016);
    }

    #[test]
    fn sweep_values() {
        let s = Sweep::Linear {
            start: 0.0,
            stop: 1.0,
            points: 3,
        };
        assert_eq!(s.values(), vec![0.0, 0.5, 1.0]);
        assert_eq!(Sweep::Single(2.0).values(), vec![2.0]);
    }
}
