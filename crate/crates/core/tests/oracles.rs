//! Independent oracles for computed values and checks of the published numbers.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_4, PI};

use approx::assert_relative_eq;
use statrs::function::erf::erfc;

use tem10::beam::{
    db_from_variance, make_coherent_beam, squeeze_transfer_flipped_to_tem10,
    variance_from_squeeze_db,
};
use tem10::detect::{experimental_ratio_from_traces, qnl_displacement, qnl_momentum, qnl_tilt};
use tem10::modes::{
    flipped_captured_norm, flipped_mode_coeffs, flipped_spectrum, gouy_phase, split_overlap,
    BeamGeometry,
};
use tem10::scenario::preset;

/// Hermite-Gauss amplitude from explicit physicists' polynomials.
fn hg_explicit(n: usize, x: f64, w: f64) -> f64 {
    let s = std::f64::consts::SQRT_2 * x / w;
    let h = match n {
        0 => 1.0,
        1 => 2.0 * s,
        3 => 8.0 * s.powi(3) - 12.0 * s,
        _ => unimplemented!(),
    };
    let fact = [1.0, 1.0, 2.0, 6.0][n];
    (2.0 / PI).powf(0.25) / (2f64.powi(n as i32) * fact * w).sqrt() * h * (-(x * x) / (w * w)).exp()
}

/// Trapezoid rule for `sign(x) u_0 u_n` over `[a, b]` on both sides.
fn split_trapezoid(n: usize, w: f64, a: f64, b: f64, points: usize) -> f64 {
    let h = (b - a) / (points - 1) as f64;
    let mut sum = 0.0;
    for i in 0..points {
        let x = a + i as f64 * h;
        let weight = if i == 0 || i == points - 1 { 0.5 } else { 1.0 };
        let right = hg_explicit(0, x, w) * hg_explicit(n, x, w);
        let left = hg_explicit(0, -x, w) * hg_explicit(n, -x, w);
        sum += weight * (right - left);
    }
    sum * h
}

#[test]
fn flipped_coefficients_against_trapezoid() {
    let w = 1.0;
    let c = flipped_mode_coeffs(5);
    assert_relative_eq!(
        c.get(1),
        split_trapezoid(1, w, 0.0, 10.0, 1_000_001),
        epsilon = 1e-9
    );
    assert_relative_eq!(
        c.get(3),
        split_trapezoid(3, w, 0.0, 10.0, 1_000_001),
        epsilon = 1e-9
    );
    assert_eq!(c.get(0), 0.0);
    assert_eq!(c.get(2), 0.0);
}

#[test]
fn gapped_c1_against_trapezoid_and_closed_form() {
    let geom = BeamGeometry::new(106e-6, 1064e-9).unwrap();
    let w = geom.waist();
    let gap = w / 2.0;
    let s = split_overlap(7, &geom, gap, f64::INFINITY).unwrap();
    let trap = split_trapezoid(1, w, gap / 2.0, 12.0 * w, 1_000_000);
    // sqrt(2/pi) exp(-2 a^2 / w^2) with a = gap / 2
    let closed = FRAC_2_PI.sqrt() * (-2.0 * (gap / 2.0 / w).powi(2)).exp();
    assert_relative_eq!(s.coeffs.get(1), trap, epsilon = 1e-9);
    assert_relative_eq!(s.coeffs.get(1), closed, epsilon = 1e-9);
}

#[test]
fn detected_fraction_against_erfc() {
    let geom = BeamGeometry::new(100e-6, 1e-6).unwrap();
    let w = geom.waist();
    for (gap, half_width) in [
        (0.0, f64::INFINITY),
        (20e-6, f64::INFINITY),
        (30e-6, 80e-6),
        (0.0, 50e-6),
    ] {
        let s = split_overlap(11, &geom, gap, half_width).unwrap();
        let sqrt2 = std::f64::consts::SQRT_2;
        let expected = erfc(sqrt2 * gap / 2.0 / w) - erfc(sqrt2 * half_width / w);
        assert_relative_eq!(s.detected_fraction, expected, epsilon = 1e-9);
    }
}

#[test]
fn captured_norm_frozen() {
    assert_relative_eq!(flipped_captured_norm(41), 0.921471576, epsilon = 1e-9);
    assert_relative_eq!(flipped_captured_norm(1), FRAC_2_PI, epsilon = 1e-15);
    assert!(flipped_captured_norm(399) < 1.0);
    assert_relative_eq!(flipped_spectrum(0.0).re, 1.0);
}

#[test]
fn gouy_phase_at_rayleigh_range() {
    let geom = BeamGeometry::new(106e-6, 1064e-9).unwrap();
    assert_relative_eq!(
        gouy_phase(geom.rayleigh_range(), &geom),
        FRAC_PI_4,
        epsilon = 1e-15
    );
    assert_relative_eq!(
        geom.rayleigh_range(),
        PI * 106e-6 * 106e-6 / 1064e-9,
        epsilon = 1e-18
    );
}

#[test]
fn worked_example_limits() {
    // N = P / (h nu RBW)
    let n = 1e-3 / (6.626_070_15e-34 * 299_792_458.0 / 1e-6) / 1e5;
    let d = qnl_displacement(100e-6, n).unwrap();
    let p = qnl_momentum(100e-6, n).unwrap();
    let t = qnl_tilt(100e-6, 1e-6, n).unwrap();
    assert_relative_eq!(d, 100e-6 / (2.0 * n.sqrt()), max_relative = 1e-12);
    assert_relative_eq!(p, 1.0 / (100e-6 * n.sqrt()), max_relative = 1e-12);
    assert_relative_eq!(d * 1e9, 0.222848, max_relative = 1e-5);
    assert_relative_eq!(p, 0.044570, max_relative = 1e-4);
    assert_relative_eq!(t * 1e9, 7.093466, max_relative = 1e-5);
    // published to one significant figure
    assert_eq!(format!("{:.1}", d * 1e9), "0.2");
    assert_eq!(format!("{:.2}", p), "0.04");
    assert_eq!(format!("{:.0}", t * 1e9), "7");
}

#[test]
fn homodyne_scan_qnl_matches_published() {
    let beam = make_coherent_beam(170e-6, 1064e-9, 106e-6, 1e5, 5).unwrap();
    let d = qnl_displacement(106e-6, beam.photons()).unwrap();
    assert_eq!(format!("{:.1}", d * 1e9), "0.6");
}

#[test]
fn squeeze_transfer_frozen() {
    let v = squeeze_transfer_flipped_to_tem10(variance_from_squeeze_db(3.6)).unwrap();
    assert_relative_eq!(db_from_variance(v), -1.929558, epsilon = 1e-6);
    assert_eq!(format!("{:.0}", db_from_variance(v)), "-2");
}

#[test]
fn efficiency_ratio_published() {
    let r = experimental_ratio_from_traces(4.2e-3, 170e-6, 23.0, 11.3).unwrap();
    let oracle = (170e-6 / 4.2e-3) * (10f64.powf(2.3) - 1.0) / (10f64.powf(1.13) - 1.0);
    assert_relative_eq!(r, oracle, max_relative = 1e-14);
    assert_relative_eq!(r, 0.643381, epsilon = 1e-6);
    assert_eq!(format!("{r:.2}"), "0.64");
    assert_eq!(format!("{:.0}", 100.0 * FRAC_2_PI), "64");
}

#[test]
fn split_scan_frozen() {
    let out = preset("fig-split-scan").unwrap().run().unwrap();
    assert_relative_eq!(out.get("mod.first").unwrap(), 13.147939, epsilon = 1e-5);
    assert_relative_eq!(out.get("mod.last").unwrap(), 22.842171, epsilon = 1e-5);
    assert_relative_eq!(
        out.get("modulation.tilt").unwrap() / 56.129995,
        1.0,
        epsilon = 1e-7
    );
}

#[test]
fn sub_qnl_published() {
    let out = preset("sub-qnl").unwrap().run().unwrap();
    assert_relative_eq!(
        out.get("mod-sqz.excess_over_floor").unwrap(),
        0.474566,
        epsilon = 1e-5
    );
    assert_eq!(
        format!("{:.2}", out.get("mod-sqz.inferred_displacement").unwrap()),
        "0.15"
    );
    // without squeezing the same signal would sit 0.3 dB above the QNL
    let snr = out.get("modulation.homodyne_snr").unwrap();
    assert_eq!(format!("{:.1}", 10.0 * (1.0 + snr).log10()), "0.3");
}
