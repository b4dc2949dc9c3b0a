//! `tem10`: run beam-metrology scenarios and print the headline numbers.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use tem10::beam::{
    db_from_variance, inject_squeezed_mode, make_coherent_beam, momentum_to_tilt,
    squeeze_transfer_flipped_to_tem10, variance_from_squeeze_db, ModeShape, NoiseCovariance,
};
use tem10::detect::{
    experimental_ratio_from_traces, qnl_displacement, qnl_momentum, sub_qnl_displacement,
    OutputFormat,
};
use tem10::mc::{validation_suite, McConfig};
use tem10::scenario::{preset, presets, DetectorSpec, Preset, RunOutput, Scenario, Sweep};
use tem10::Error;

#[derive(Parser)]
#[command(
    name = "tem10",
    version,
    about = "Quantum-limited beam displacement and tilt measurement simulator"
)]
struct Cli {
    /// Seed for analyzer traces and Monte-Carlo sampling.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory for result files.
    #[arg(long, global = true, env = "TEM10_OUT_DIR")]
    out: Option<PathBuf>,
    /// Result file format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Hermite-Gauss truncation order.
    #[arg(long, global = true)]
    nmax: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    JsonLines,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::JsonLines => OutputFormat::JsonLines,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Quantum noise limits for a beam.
    Qnl {
        #[arg(long, default_value_t = 1.0)]
        power_mw: f64,
        #[arg(long, default_value_t = 1000.0)]
        wavelength_nm: f64,
        #[arg(long, default_value_t = 100.0)]
        waist_um: f64,
        #[arg(long, default_value_t = 100.0)]
        rbw_khz: f64,
        /// Squeezing of the noise mode, dB.
        #[arg(long, default_value_t = 0.0)]
        squeeze_db: f64,
    },
    /// Split-detector z-scan (defaults to the fig-split-scan preset).
    SplitScan {
        #[arg(long)]
        power_mw: Option<f64>,
        #[arg(long)]
        z_start_cm: Option<f64>,
        #[arg(long)]
        z_stop_cm: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        gap_um: Option<f64>,
        #[arg(long)]
        half_width_mm: Option<f64>,
    },
    /// Homodyne LO phase scan (defaults to the fig-homodyne-scan preset).
    HomodyneScan {
        #[arg(long)]
        power_uw: Option<f64>,
        #[arg(long)]
        squeeze_db: Option<f64>,
        #[arg(long)]
        antisqueeze_db: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
    },
    /// Split versus homodyne efficiency from trace peak heights.
    Efficiency {
        #[arg(long, default_value_t = 4.2)]
        p_sd_mw: f64,
        #[arg(long, default_value_t = 170.0)]
        p_hd_uw: f64,
        #[arg(long, default_value_t = 23.0)]
        mod_sd_db: f64,
        #[arg(long, default_value_t = 11.3)]
        mod_hd_db: f64,
    },
    /// TEM10 variance produced by flipped-mode squeezing.
    SqueezeTransfer {
        #[arg(long, default_value_t = 3.6)]
        squeeze_db: f64,
        #[arg(long)]
        antisqueeze_db: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        efficiency: f64,
    },
    /// Monte-Carlo check of every analytic noise path.
    McValidate {
        #[arg(long, default_value_t = 200_000)]
        samples: usize,
        #[arg(long)]
        batch: Option<usize>,
    },
    /// Run a scenario file or a bundled preset.
    Run {
        /// Scenario TOML file or preset name.
        target: Option<String>,
        /// List bundled presets.
        #[arg(long)]
        list: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            let input = e.downcast_ref::<Error>().is_some_and(Error::is_input_error);
            ExitCode::from(if input { 2 } else { 1 })
        }
    }
}

/// Returns `Ok(false)` when a check failed without an error.
fn dispatch(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Qnl {
            power_mw,
            wavelength_nm,
            waist_um,
            rbw_khz,
            squeeze_db,
        } => qnl(
            cli,
            *power_mw * 1e-3,
            *wavelength_nm * 1e-9,
            *waist_um * 1e-6,
            *rbw_khz * 1e3,
            *squeeze_db,
        ),
        Command::SplitScan {
            power_mw,
            z_start_cm,
            z_stop_cm,
            points,
            gap_um,
            half_width_mm,
        } => {
            let p = preset("fig-split-scan").expect("bundled preset");
            let mut s = preset_scenario(p)?;
            if let Some(v) = power_mw {
                s.source.power = v * 1e-3;
            }
            if let DetectorSpec::Split { z, gap, half_width } = &mut s.detector {
                *z = edit_sweep(
                    z,
                    z_start_cm.map(|v| v * 1e-2),
                    z_stop_cm.map(|v| v * 1e-2),
                    *points,
                );
                if let Some(g) = gap_um {
                    *gap = g * 1e-6;
                }
                if let Some(h) = half_width_mm {
                    *half_width = h * 1e-3;
                }
            }
            run_scenario(cli, Some(p), s)
        }
        Command::HomodyneScan {
            power_uw,
            squeeze_db,
            antisqueeze_db,
            points,
        } => {
            let p = preset("fig-homodyne-scan").expect("bundled preset");
            let mut s = preset_scenario(p)?;
            if let Some(v) = power_uw {
                s.source.power = v * 1e-6;
            }
            if let Some(q) = &mut s.squeezing {
                if let Some(v) = squeeze_db {
                    q.squeeze_db = *v;
                }
                q.antisqueeze_db = antisqueeze_db.unwrap_or(q.antisqueeze_db.max(q.squeeze_db));
            }
            if let DetectorSpec::Homodyne { phi_lo } = &mut s.detector {
                *phi_lo = edit_sweep(phi_lo, None, None, *points);
            }
            run_scenario(cli, Some(p), s)
        }
        Command::Efficiency {
            p_sd_mw,
            p_hd_uw,
            mod_sd_db,
            mod_hd_db,
        } => {
            let (p_sd, p_hd) = (p_sd_mw * 1e-3, p_hd_uw * 1e-6);
            let r = experimental_ratio_from_traces(p_sd, p_hd, *mod_sd_db, *mod_hd_db)?;
            println!("P_SD = {p_sd_mw} mW, P_HD = {p_hd_uw} uW");
            println!("Mod_SD = {mod_sd_db} dB, Mod_HD = {mod_hd_db} dB");
            println!("R_exp = (P_HD/P_SD) (10^(Mod_SD/10) - 1) / (10^(Mod_HD/10) - 1) = {r:.4}");
            println!(
                "R_th (ideal detectors, equal photon number) = 2/pi = {:.4}",
                std::f64::consts::FRAC_2_PI
            );
            Ok(true)
        }
        Command::SqueezeTransfer {
            squeeze_db,
            antisqueeze_db,
            efficiency,
        } => squeeze_transfer(
            cli,
            *squeeze_db,
            antisqueeze_db.unwrap_or(*squeeze_db),
            *efficiency,
        ),
        Command::McValidate { samples, batch } => {
            let mut cfg = McConfig::new(*samples, cli.seed.unwrap_or(0))?;
            if let Some(b) = batch {
                cfg = cfg.with_batch(*b)?;
            }
            let checks = validation_suite(&cfg)?;
            println!(
                "M = {samples}, tolerance = 3 sqrt(2/M) = {:.5}",
                cfg.tolerance()
            );
            println!(
                "{:<36} {:>12} {:>12} {:>10}  result",
                "check", "analytic", "monte-carlo", "rel.err"
            );
            let mut ok = true;
            for c in &checks {
                let rel = (c.estimate.variance - c.analytic) / c.analytic;
                ok &= c.pass();
                println!(
                    "{:<36} {:>12.6} {:>12.6} {:>10.2e}  {}",
                    c.name,
                    c.analytic,
                    c.estimate.variance,
                    rel,
                    if c.pass() { "pass" } else { "FAIL" }
                );
            }
            Ok(ok)
        }
        Command::Run { target, list } => {
            if *list || target.is_none() {
                for p in presets() {
                    println!("{:<24} {}", p.name, p.description);
                }
                return Ok(true);
            }
            let target = target.as_deref().unwrap_or_default();
            let path = Path::new(target);
            if path.is_file() {
                let s = Scenario::from_file(path)?;
                run_scenario(cli, None, s)
            } else if let Some(p) = preset(target) {
                match p.scenario() {
                    Some(s) => run_scenario(cli, Some(p), s?),
                    None => {
                        let out = p.run_report(cli.nmax.unwrap_or(tem10::modes::DEFAULT_N_MAX))?;
                        emit(cli, &out)
                    }
                }
            } else {
                let names: Vec<_> = presets().iter().map(|p| p.name).collect();
                Err(Error::Validation {
                    field: "run".into(),
                    message: format!(
                        "`{target}` is neither a file nor a preset ({})",
                        names.join(", ")
                    ),
                })?
            }
        }
    }
}

fn preset_scenario(p: &Preset) -> Result<Scenario> {
    Ok(p.scenario().context("preset has no scenario")??)
}

fn edit_sweep(s: &Sweep, start: Option<f64>, stop: Option<f64>, points: Option<usize>) -> Sweep {
    let values = s.values();
    Sweep::Linear {
        start: start.unwrap_or(values[0]),
        stop: stop.unwrap_or(values[values.len() - 1]),
        points: points.unwrap_or(values.len()),
    }
}

fn apply_globals(cli: &Cli, s: &mut Scenario) {
    if let Some(seed) = cli.seed {
        s.trace.seed = seed;
        if let Some(mc) = &mut s.mc {
            mc.seed = seed;
        }
    }
    if let Some(n) = cli.nmax {
        s.source.n_max = n;
    }
}

fn run_scenario(cli: &Cli, p: Option<&Preset>, mut s: Scenario) -> Result<bool> {
    apply_globals(cli, &mut s);
    s.validate()?;
    let out = match p {
        Some(p) => p.run_scenario(&s)?,
        None => tem10::scenario::execute(&s)?,
    };
    emit(cli, &out)
}

fn emit(cli: &Cli, out: &RunOutput) -> Result<bool> {
    println!("{}", out.name);
    for item in &out.summary {
        let expected = item
            .expected
            .map(|e| format!("  (published: {e})"))
            .unwrap_or_default();
        println!(
            "  {:<34} {:>14.6} {:<5}{expected}",
            item.key, item.value, item.unit
        );
    }
    for c in &out.mc {
        println!(
            "  mc {:<31} analytic {:.6}  sampled {:.6}  {}",
            format!("{} = {:.4}", c.setting.label(), c.setting.value()),
            c.analytic,
            c.estimate.variance,
            if c.pass { "pass" } else { "FAIL" }
        );
    }
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    for path in out.write(&dir, cli.format.into())? {
        println!("wrote {}", path.display());
    }
    Ok(out.mc_passed())
}

fn qnl(
    cli: &Cli,
    power: f64,
    wavelength: f64,
    waist: f64,
    rbw: f64,
    squeeze_db: f64,
) -> Result<bool> {
    let beam = make_coherent_beam(power, wavelength, waist, rbw, cli.nmax.unwrap_or(1))?;
    let n = beam.photons();
    if n <= 0.0 {
        bail!(Error::UndefinedLimit(
            "zero power has no quantum noise limit".into()
        ));
    }
    let d = qnl_displacement(waist, n)?;
    let p = qnl_momentum(waist, n)?;
    println!("N (photons in 1/RBW)   {n:.4e}");
    println!("d_QNL                  {:.4} nm", d * 1e9);
    println!("p_QNL                  {p:.4e} 1/m");
    println!(
        "theta_QNL              {:.4} nrad",
        momentum_to_tilt(p, wavelength)? * 1e9
    );
    println!("d_QNL * p_QNL * 2N     {:.12}", d * p * 2.0 * n);
    if squeeze_db > 0.0 {
        println!(
            "d_SQZ ({squeeze_db} dB)         {:.4} nm",
            sub_qnl_displacement(d, squeeze_db)? * 1e9
        );
    }
    Ok(true)
}

fn squeeze_transfer(
    cli: &Cli,
    squeeze_db: f64,
    antisqueeze_db: f64,
    efficiency: f64,
) -> Result<bool> {
    let n_max = cli.nmax.unwrap_or(tem10::modes::DEFAULT_N_MAX);
    let v_f = variance_from_squeeze_db(squeeze_db);
    let scalar = squeeze_transfer_flipped_to_tem10(v_f)?;
    let dim = inject_squeezed_mode(
        &NoiseCovariance::vacuum(n_max)?,
        &ModeShape::Flipped,
        squeeze_db,
        antisqueeze_db,
        0.0,
    )?;
    let bright = make_coherent_beam(1e-3, 1064e-9, 106e-6, 1e5, n_max)?;
    let out = tem10::beam::combine_mach_zehnder(&bright, &dim, efficiency)?;
    let matrix = out.noise.mode_variance(1, 0.0)?;
    println!(
        "flipped-mode variance V_f      {v_f:.6} ({:.3} dB)",
        db_from_variance(v_f)
    );
    println!(
        "TEM10 X+ (2/pi) V_f + 1 - 2/pi {scalar:.6} ({:.3} dB)",
        db_from_variance(scalar)
    );
    println!(
        "TEM10 X+ covariance path       {matrix:.6} ({:.3} dB, combiner efficiency {efficiency})",
        db_from_variance(matrix)
    );
    Ok(true)
}
