use std::io::Write;

use serde::{Deserialize, Serialize};

use super::SpectrumTrace;
use crate::error::Result;

/// Column header of every CSV result file.
pub const CSV_COLUMNS: [&str; 5] = ["setting", "signal_rel", "noise_rel", "snr", "dB"];

/// Result file encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    #[default]
    Csv,
    JsonLines,
}

impl OutputFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::JsonLines => "jsonl",
        }
    }
}

#[derive(Serialize)]
struct JsonRow<'a> {
    trace: &'a str,
    setting: f64,
    setting_unit: &'a str,
    signal_rel: f64,
    noise_rel: f64,
    snr: f64,
    #[serde(rename = "dB")]
    db: f64,
}

fn setting_label(trace: &SpectrumTrace) -> &'static str {
    trace
        .points
        .first()
        .map_or("setting", |p| p.setting.label())
}

/// Writes a trace as CSV preceded by `# ` comment lines giving units,
/// normalization and `notes`.
pub fn write_trace_csv<W: Write>(
    mut out: W,
    name: &str,
    trace: &SpectrumTrace,
    notes: &[String],
) -> Result<()> {
    writeln!(out, "# trace: {name}")?;
    writeln!(out, "# setting: {}", setting_label(trace))?;
    writeln!(
        out,
        "# signal_rel, noise_rel: power at the modulation frequency relative to the shot noise of the incident beam"
    )?;
    writeln!(
        out,
        "# snr = signal_rel / noise_rel; dB = displayed analyzer power relative to shot noise"
    )?;
    writeln!(
        out,
        "# rbw_Hz = {}, vbw_Hz = {}, seed = {}",
        trace.rbw, trace.vbw, trace.seed
    )?;
    for n in notes {
        writeln!(out, "# {n}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for p in &trace.points {
        w.write_record([
            p.setting.value().to_string(),
            p.signal_rel.to_string(),
            p.noise_rel.to_string(),
            p.snr.to_string(),
            p.db.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes one JSON object per point.
pub fn write_trace_json_lines<W: Write>(
    mut out: W,
    name: &str,
    trace: &SpectrumTrace,
) -> Result<()> {
    let unit = setting_label(trace);
    for p in &trace.points {
        let row = JsonRow {
            trace: name,
            setting: p.setting.value(),
            setting_unit: unit,
            signal_rel: p.signal_rel,
            noise_rel: p.noise_rel,
            snr: p.snr,
            db: p.db,
        };
        serde_json::to_writer(&mut out, &row)?;
        writeln!(out)?;
    }
    Ok(())
}

pub fn write_trace<W: Write>(
    out: W,
    format: OutputFormat,
    name: &str,
    trace: &SpectrumTrace,
    notes: &[String],
) -> Result<()> {
    match format {
        OutputFormat::Csv => write_trace_csv(out, name, trace, notes),
        OutputFormat::JsonLines => write_trace_json_lines(out, name, trace),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::{spectrum_trace, Measurement, Setting, TraceConfig};

    fn trace() -> SpectrumTrace {
        let sweep: Vec<_> = (0..3)
            .map(|i| {
                Measurement::new(
                    0.5,
                    1.0,
                    Setting::SplitPlane {
                        z_m: i as f64 * 0.1,
                    },
                )
                .unwrap()
            })
            .collect();
        spectrum_trace(&sweep, &TraceConfig::new(1e5, 1e2, 5).unwrap()).unwrap()
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_trace_csv(&mut buf, "mod", &trace(), &["preset: test".into()]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let data: Vec<_> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(data[0], "setting,signal_rel,noise_rel,snr,dB");
        assert_eq!(data.len(), 4);
        assert!(text.contains("# preset: test"));
        assert!(text.contains("z (m from waist)"));
    }

    #[test]
    fn json_lines_layout() {
        let mut buf = Vec::new();
        write_trace_json_lines(&mut buf, "mod", &trace()).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let rows: Vec<serde_json::Value> = text
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[1]["trace"], "mod");
        assert_eq!(rows[2]["setting"], 0.2);
    }
}
