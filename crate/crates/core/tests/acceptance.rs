//! Acceptance criteria, one pass/fail line each. Exits nonzero if any fail.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2, PI};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tem10::beam::{
    combine_mach_zehnder, db_from_variance, inject_squeezed_mode, make_coherent_beam,
    momentum_to_tilt, photon_number, squeeze_transfer_flipped_to_tem10, variance_from_squeeze_db,
    ModeShape, Modulation, NoiseCovariance,
};
use tem10::detect::{
    experimental_ratio_from_traces, homodyne_detect, homodyne_projection, infer_displacement,
    qnl_displacement, qnl_momentum, spectrum_trace, SplitDetector, TraceConfig,
};
use tem10::mc::{mc_noise_power, validation_suite, McConfig};
use tem10::modes::{
    flipped_mode_coeffs, split_overlap, split_overlap_coeffs, BeamGeometry, OverlapVector,
    QuadratureRule, DEFAULT_N_MAX,
};
use tem10::scenario::preset;
use tem10::Beam;

// Tolerances
const AC1_REL: f64 = 0.15;
const AC1_RUNTIME_S: f64 = 1e-3;
const AC2_ABS: f64 = 1e-9;
const AC3_ANALYTIC_ABS: f64 = 1e-9;
const AC3_MC_REL: f64 = 0.01;
const AC3_SAMPLES: usize = 1_000_000;
const AC4_PUBLISHED_DB: f64 = 0.1;
const AC4_PATHS_ABS: f64 = 1e-9;
const AC5_REL: f64 = 0.15;
const AC5_RANGE_NM: (f64, f64) = (0.15, 0.17);
const AC6_ABS: f64 = 0.03;
const AC7_NEAR_FAR_DB: f64 = 1.0;
const AC7_PLATEAU_DB: f64 = 0.5;
const AC8_ANALYTIC_ABS: f64 = 1e-9;
const AC8_MC_REL: f64 = 0.01;
const AC8_SAMPLES: usize = 1_000_000;
const AC9_GEOMETRIES: usize = 1000;
const AC9_ORTHO_ABS: f64 = 1e-10;
const AC9_PSD_SLACK: f64 = 1e-12;
const AC9_REL: f64 = 1e-9;
const AC10_SAMPLES: usize = 200_000;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn within(label: &str, got: f64, want: f64, tol: f64) -> Result<String, String> {
    let msg = format!("{label} = {got:.6} (target {want}, tol {tol})");
    if (got - want).abs() <= tol {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn within_rel(label: &str, got: f64, want: f64, rel: f64) -> Result<String, String> {
    within(label, got, want, rel * want.abs())
}

fn all(parts: Vec<Result<String, String>>) -> Check {
    let failed = parts.iter().any(Result::is_err);
    let text = parts
        .into_iter()
        .map(|p| match p {
            Ok(s) => s,
            Err(s) => format!("FAILED {s}"),
        })
        .collect::<Vec<_>>()
        .join("; ");
    if failed {
        Err(text)
    } else {
        Ok(text)
    }
}

fn err(e: tem10::Error) -> String {
    e.to_string()
}

fn ac1_qnl() -> Check {
    let (power, lambda, waist, rbw) = (1e-3, 1e-6, 100e-6, 1e5);
    let n = photon_number(power, lambda, 1.0 / rbw);
    let d = qnl_displacement(waist, n).map_err(err)?;
    let p = qnl_momentum(waist, n).map_err(err)?;
    let theta = momentum_to_tilt(p, lambda).map_err(err)?;

    let reps = 1000;
    let start = Instant::now();
    let mut sink = 0.0;
    for i in 0..reps {
        let n = photon_number(power * (1.0 + i as f64 * 1e-12), lambda, 1.0 / rbw);
        let d = qnl_displacement(waist, n).map_err(err)?;
        let p = qnl_momentum(waist, n).map_err(err)?;
        sink += d + momentum_to_tilt(p, lambda).map_err(err)?;
    }
    let per_call = start.elapsed().as_secs_f64() / reps as f64;
    std::hint::black_box(sink);

    all(vec![
        within_rel("d_QNL [nm]", d * 1e9, 0.2, AC1_REL),
        within_rel("p_QNL [1/m]", p, 0.04, AC1_REL),
        within_rel("theta_QNL [nrad]", theta * 1e9, 7.0, AC1_REL),
        if per_call < AC1_RUNTIME_S {
            Ok(format!("runtime {:.2e} s", per_call))
        } else {
            Err(format!("runtime {per_call:.2e} s >= {AC1_RUNTIME_S}"))
        },
    ])
}

fn ac2_flipped_c1() -> Check {
    let geom = BeamGeometry::new(106e-6, 1064e-9).map_err(err)?;
    let c = split_overlap_coeffs(DEFAULT_N_MAX, &geom, 0.0, f64::INFINITY).map_err(err)?;
    within("c_1 by quadrature", c.get(1), FRAC_2_PI.sqrt(), AC2_ABS)
}

fn snr_pair(beam: &Beam, cfg: &McConfig) -> Result<(f64, f64, f64, f64), String> {
    let split = SplitDetector::ideal();
    let lo = OverlapVector::tem10(beam.n_max()).map_err(err)?;
    let sd = split.measure(beam, 0.0).map_err(err)?;
    let hd = homodyne_detect(beam, &lo, 0.0).map_err(err)?;
    let view = split.resolve(beam, 0.0).map_err(err)?;
    let sd_noise = mc_noise_power(&view.beam.noise, &view.projection, cfg)
        .map_err(err)?
        .variance;
    let proj = homodyne_projection(beam.n_max(), &lo, 0.0).map_err(err)?;
    let hd_noise = mc_noise_power(&beam.noise, &proj, cfg)
        .map_err(err)?
        .variance;
    Ok((
        sd.snr,
        hd.snr,
        sd.signal_rel / sd_noise,
        hd.signal_rel / hd_noise,
    ))
}

fn ac3_efficiency() -> Check {
    let beam = make_coherent_beam(170e-6, 1064e-9, 106e-6, 1e5, DEFAULT_N_MAX)
        .and_then(|b| b.modulated(&Modulation::displacement(0.5e-9)))
        .map_err(err)?;
    let cfg = McConfig::new(AC3_SAMPLES, 3).map_err(err)?;
    let (sd, hd, sd_mc, hd_mc) = snr_pair(&beam, &cfg)?;
    all(vec![
        within(
            "analytic SNR_SD/SNR_HD",
            sd / hd,
            FRAC_2_PI,
            AC3_ANALYTIC_ABS,
        ),
        within_rel(
            "MC SNR_SD/SNR_HD (M = 1e6)",
            sd_mc / hd_mc,
            FRAC_2_PI,
            AC3_MC_REL,
        ),
    ])
}

fn ac4_transfer() -> Check {
    let v_f = variance_from_squeeze_db(3.6);
    let scalar = squeeze_transfer_flipped_to_tem10(v_f).map_err(err)?;
    let dim = inject_squeezed_mode(
        &NoiseCovariance::vacuum(DEFAULT_N_MAX).map_err(err)?,
        &ModeShape::Flipped,
        3.6,
        3.6,
        0.0,
    )
    .map_err(err)?;
    let bright = make_coherent_beam(1e-3, 1064e-9, 106e-6, 1e5, DEFAULT_N_MAX).map_err(err)?;
    let combined = combine_mach_zehnder(&bright, &dim, 1.0).map_err(err)?;
    let matrix = combined.noise.mode_variance(1, 0.0).map_err(err)?;
    all(vec![
        within(
            "TEM10 variance [dB]",
            db_from_variance(scalar),
            -2.0,
            AC4_PUBLISHED_DB,
        ),
        within(
            "covariance path - scalar",
            matrix - scalar,
            0.0,
            AC4_PATHS_ABS,
        ),
    ])
}

fn ac5_sub_qnl() -> Check {
    let out = preset("sub-qnl").unwrap().run().map_err(err)?;
    let d_qnl = out.get("d_qnl").ok_or("missing d_qnl")? * 1e-9;
    let floor = variance_from_squeeze_db(2.0);
    let inferred = infer_displacement(d_qnl, floor, 0.5).map_err(err)? * 1e9;
    let simulated = out
        .get("mod-sqz.inferred_displacement")
        .ok_or("missing inferred displacement")?;
    let range = if (AC5_RANGE_NM.0..=AC5_RANGE_NM.1).contains(&inferred) {
        Ok(format!("{inferred:.4} nm in {AC5_RANGE_NM:?}"))
    } else {
        Err(format!("{inferred:.4} nm outside {AC5_RANGE_NM:?}"))
    };
    all(vec![
        range,
        within_rel("d from 0.5 dB excess [nm]", inferred, 0.15, AC5_REL),
        within_rel(
            "sqrt(0.08) d_QNL [nm]",
            0.08f64.sqrt() * d_qnl * 1e9,
            0.15,
            AC5_REL,
        ),
        within_rel(
            "d recovered from simulated trace [nm]",
            simulated,
            0.15,
            AC5_REL,
        ),
    ])
}

fn ac6_ratio() -> Check {
    let r = experimental_ratio_from_traces(4.2e-3, 170e-6, 23.0, 11.3).map_err(err)?;
    within("R_exp", r, 0.64, AC6_ABS)
}

fn ac7_split_scan() -> Check {
    let out = preset("fig-split-scan").unwrap().run().map_err(err)?;
    let delta = out
        .get("mod.far_minus_near")
        .ok_or("missing far_minus_near")?;
    let peak = out.get("mod.peak").ok_or("missing peak")?;
    let first = out.get("mod.first").ok_or("missing first")?;
    let min = out.get("mod.min").ok_or("missing min")?;
    let near_min = if first == min {
        Ok("near field is the minimum".to_string())
    } else {
        Err(format!(
            "near field {first:.3} dB is not the minimum {min:.3} dB"
        ))
    };
    all(vec![
        within("far - near [dB]", delta, 10.0, AC7_NEAR_FAR_DB),
        within("plateau [dB]", peak, 23.0, AC7_PLATEAU_DB),
        near_min,
    ])
}

fn ac8_tradeoff() -> Check {
    let beam = make_coherent_beam(170e-6, 1064e-9, 106e-6, 1e5, DEFAULT_N_MAX)
        .and_then(|b| b.squeezed(&ModeShape::Tem10, 2.0, 8.0, 0.0))
        .map_err(err)?;
    let lo = OverlapVector::tem10(DEFAULT_N_MAX).map_err(err)?;
    let cfg = McConfig::new(AC8_SAMPLES, 8).map_err(err)?;
    let mut parts = Vec::new();
    for (phi, want) in [(0.0, 10f64.powf(-0.2)), (FRAC_PI_2, 10f64.powf(0.8))] {
        let m = homodyne_detect(&beam, &lo, phi).map_err(err)?;
        let proj = homodyne_projection(DEFAULT_N_MAX, &lo, phi).map_err(err)?;
        let mc = mc_noise_power(&beam.noise, &proj, &cfg).map_err(err)?;
        parts.push(within(
            &format!("floor at phi = {phi:.4}"),
            m.noise_rel,
            want,
            AC8_ANALYTIC_ABS,
        ));
        parts.push(within_rel(
            &format!("MC floor at phi = {phi:.4}"),
            mc.variance,
            want,
            AC8_MC_REL,
        ));
    }
    all(parts)
}

fn ac9_properties() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst_ortho: f64 = 0.0;
    let mut worst_parseval: f64 = 0.0;
    let mut worst_eig: f64 = f64::INFINITY;
    let mut worst_heisenberg: f64 = 0.0;
    let mut worst_period: f64 = 0.0;
    let mut worst_equiv: f64 = 0.0;

    for _ in 0..AC9_GEOMETRIES {
        let waist = 10f64.powf(rng.random_range(-5.0..-3.0));
        let lambda = rng.random_range(400e-9..2000e-9);
        let power = 10f64.powf(rng.random_range(-6.0..-1.0));
        let rbw = 10f64.powf(rng.random_range(3.0..6.0));
        let n_max = rng.random_range(3..=DEFAULT_N_MAX);
        let geom = BeamGeometry::new(waist, lambda).map_err(err)?;

        let rule = QuadratureRule::for_basis(&geom, n_max);
        let modes = rule.sample_modes(n_max);
        for (i, a) in modes.iter().enumerate() {
            for (j, b) in modes.iter().enumerate().skip(i) {
                let want = if i == j { 1.0 } else { 0.0 };
                let got = tem10::modes::overlap(a, b).map_err(err)?;
                worst_ortho = worst_ortho.max((got - want).abs());
            }
        }

        let gap = rng.random_range(0.0..waist);
        let half_width = gap / 2.0 + rng.random_range(0.1..3.0) * waist;
        let s = split_overlap(n_max, &geom, gap, half_width).map_err(err)?;
        worst_parseval = worst_parseval.max(s.coeffs.norm_sq() - s.detected_fraction);

        let beam = make_coherent_beam(power, lambda, waist, rbw, n_max).map_err(err)?;
        let sq = rng.random_range(0.0..10.0);
        let anti = sq + rng.random_range(0.0..10.0);
        let angle = rng.random_range(0.0..PI);
        let shape = if rng.random_bool(0.5) {
            ModeShape::Tem10
        } else {
            ModeShape::Flipped
        };
        let z = rng.random_range(-3.0..3.0) * geom.rayleigh_range();
        let eta = rng.random_range(0.0..=1.0);
        let squeezed = beam.squeezed(&shape, sq, anti, angle).map_err(err)?;
        let odd: Vec<usize> = squeezed.noise.odd_slots().collect();
        let lossy = squeezed.noise.with_loss(&odd, eta).map_err(err)?;
        let transformed = Beam::new(squeezed.field.clone(), lossy)
            .map_err(err)?
            .propagated(z);
        worst_eig = worst_eig.min(transformed.noise.min_eigenvalue());

        let n = beam.photons();
        let d = qnl_displacement(waist, n).map_err(err)?;
        let p = qnl_momentum(waist, n).map_err(err)?;
        worst_heisenberg = worst_heisenberg.max((d * p * 2.0 * n - 1.0).abs());

        let lo = OverlapVector::tem10(n_max).map_err(err)?;
        let phi = rng.random_range(0.0..2.0 * PI);
        let a = homodyne_detect(&transformed, &lo, phi).map_err(err)?;
        let b = homodyne_detect(&transformed, &lo, phi + PI).map_err(err)?;
        worst_period = worst_period.max((a.noise_rel - b.noise_rel).abs() / a.noise_rel);

        let modulated = beam
            .modulated(&Modulation::displacement(rng.random_range(0.1..10.0) * d))
            .map_err(err)?;
        let sd = SplitDetector::ideal()
            .measure(&modulated, 0.0)
            .map_err(err)?;
        let hd = homodyne_detect(&modulated, &lo, 0.0).map_err(err)?;
        let c = flipped_mode_coeffs(n_max).get(1);
        worst_equiv = worst_equiv.max((sd.snr / hd.snr - c * c).abs() / FRAC_2_PI);
    }

    let flag = |ok: bool, s: String| if ok { Ok(s) } else { Err(s) };
    all(vec![
        flag(
            worst_ortho <= AC9_ORTHO_ABS,
            format!("orthonormality {worst_ortho:.1e}"),
        ),
        flag(
            worst_parseval <= AC9_REL,
            format!("Parseval excess {worst_parseval:.1e}"),
        ),
        flag(
            worst_eig >= -AC9_PSD_SLACK,
            format!("min eigenvalue {worst_eig:.3e}"),
        ),
        flag(
            worst_heisenberg <= AC9_REL,
            format!("Heisenberg {worst_heisenberg:.1e}"),
        ),
        flag(
            worst_period <= AC9_REL,
            format!("pi-periodicity {worst_period:.1e}"),
        ),
        flag(
            worst_equiv <= AC9_REL,
            format!("SD/HD = 2/pi {worst_equiv:.1e}"),
        ),
        Ok(format!("{AC9_GEOMETRIES} geometries")),
    ])
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
        .install(f)
}

fn ac10_determinism() -> Check {
    let run = || -> Result<String, String> {
        let cfg = McConfig::new(AC10_SAMPLES, 10).map_err(err)?;
        let suite = validation_suite(&cfg).map_err(err)?;
        let batched = validation_suite(&cfg.with_batch(4096).map_err(err)?).map_err(err)?;
        let mut text = serde_json::to_string(&suite).map_err(|e| e.to_string())?;
        text += &serde_json::to_string(&batched).map_err(|e| e.to_string())?;
        for name in ["fig-homodyne-scan", "squeeze-transfer"] {
            let out = preset(name).unwrap().run().map_err(err)?;
            text += &serde_json::to_string(&out).map_err(|e| e.to_string())?;
        }
        let beam = make_coherent_beam(1e-3, 1064e-9, 106e-6, 1e5, 9).map_err(err)?;
        let lo = OverlapVector::tem10(9).map_err(err)?;
        let sweep = (0..500)
            .map(|i| homodyne_detect(&beam, &lo, i as f64 * 0.01))
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        let trace =
            spectrum_trace(&sweep, &TraceConfig::new(1e5, 1e2, 10).map_err(err)?).map_err(err)?;
        text += &serde_json::to_string(&trace).map_err(|e| e.to_string())?;
        Ok(text)
    };
    let one = in_pool(1, run)?;
    let again = in_pool(1, run)?;
    let four = in_pool(4, run)?;
    let batch_same = {
        let cfg = McConfig::new(AC10_SAMPLES, 10).map_err(err)?;
        let a = in_pool(4, || validation_suite(&cfg)).map_err(err)?;
        let b = in_pool(4, || validation_suite(&cfg.with_batch(4096).unwrap())).map_err(err)?;
        a.iter()
            .zip(&b)
            .all(|(x, y)| x.estimate.variance.to_bits() == y.estimate.variance.to_bits())
    };
    if one == again && one == four && batch_same {
        Ok(format!(
            "identical across reruns, 1/4 threads and batch sizes ({} bytes compared)",
            one.len()
        ))
    } else {
        Err(format!(
            "rerun equal: {}, 1 vs 4 threads equal: {}, batch sizes equal: {batch_same}",
            one == again,
            one == four
        ))
    }
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("AC1 quantum noise limits of the worked example", ac1_qnl),
        ("AC2 flipped-mode coefficient c_1", ac2_flipped_c1),
        ("AC3 split/homodyne efficiency 2/pi", ac3_efficiency),
        ("AC4 flipped to TEM10 squeezing transfer", ac4_transfer),
        ("AC5 sub-QNL displacement", ac5_sub_qnl),
        ("AC6 experimental ratio reconstruction", ac6_ratio),
        ("AC7 split-scan shape", ac7_split_scan),
        ("AC8 conjugate trade-off 2/8 dB", ac8_tradeoff),
        ("AC9 randomized property suite", ac9_properties),
        ("AC10 determinism", ac10_determinism),
    ];
    let mut failures = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let result = f();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {name}: {detail} [{secs:.2} s]"),
            Err(detail) => {
                failures += 1;
                println!("FAIL {name}: {detail} [{secs:.2} s]");
            }
        }
    }
    println!("{} of {} criteria passed", 10 - failures, 10);
    if failures > 0 {
        std::process::exit(1);
    }
}
