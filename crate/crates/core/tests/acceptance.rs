//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Exits 0 regardless of outcome unless `ACCEPTANCE_STRICT=1`, in which case
//! any FAIL makes the exit status nonzero.

mod common;

use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qpburst::campaign::{cmd_simulate, CampaignConfig, DATASETS_DIR};
use qpburst::detect::poisson_binomial_pmf;
use qpburst::device::{build_reference_device, GapEngineeringKind};
use qpburst::fit::{fit_power_scaling, steady_state_curve, SpectrumWeighting};
use qpburst::physics::{
    evolve_xqp, freq_shift_coefficient, gamma_qp, gap_profile, steady_state_xqp, JunctionGapProfile,
    QpDynamicsParams, QpEnvironment,
};

use common::*;

const ORACLE_POINTS: usize = 10_000_000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn ac1_gap_model() -> Outcome {
    let weak = gap_profile(30.0, 100.0).unwrap().gap_difference_GHz;
    let strong = gap_profile(15.0, 100.0).unwrap().gap_difference_GHz;
    outcome(
        (weak - 5.08).abs() <= 0.01 && (strong - 12.33).abs() <= 0.01,
        format!("weak dDelta/h = {weak:.4} GHz (5.08 +- 0.01), strong = {strong:.4} GHz (12.33 +- 0.01)"),
    )
}

fn ac2_freq_shift() -> Outcome {
    let a = freq_shift_coefficient(12.0, 6.5, 50.0).unwrap();
    outcome((a - 0.52).abs() <= 0.01, format!("a = {a:.4} (0.52 +- 0.01)"))
}

fn ac3_quadrature() -> Outcome {
    let profile = JunctionGapProfile::from_gaps(50.0, 5.0);
    let env = QpEnvironment::new(1e-5, 0.02, 0.15).unwrap();
    let t = Instant::now();
    let oracle = gamma_qp_trapezoid(6.5, &profile, &env, ORACLE_POINTS);
    let oracle_s = t.elapsed().as_secs_f64();

    let reps = 1000;
    let t = Instant::now();
    let mut v = 0.0;
    for _ in 0..reps {
        v = gamma_qp(std::hint::black_box(6.5), &profile, &env).unwrap();
    }
    let per_point_ms = t.elapsed().as_secs_f64() * 1e3 / reps as f64;
    let rel = (v / oracle - 1.0).abs();

    let mut argmax_ok = true;
    let mut offsets = Vec::new();
    for w in [0.05, 0.02] {
        let env = QpEnvironment::new(1e-5, 0.02, w).unwrap();
        let (mut best_f, mut best) = (0.0, f64::MIN);
        for i in 0..=4000 {
            let f = 3.0 + 4.0 * i as f64 / 4000.0;
            let g = gamma_qp(f, &profile, &env).unwrap();
            if g > best {
                best = g;
                best_f = f;
            }
        }
        let off = (best_f - profile.gap_difference_GHz).abs();
        argmax_ok &= off <= 2.0 * w;
        offsets.push(format!("w={w}: |f*-dDelta| = {off:.4} GHz"));
    }
    outcome(
        rel <= 1e-6 && argmax_ok && per_point_ms < 1.0 && oracle_s < 60.0,
        format!(
            "V = {v:.9e} /s, oracle {oracle:.9e} /s, rel {rel:.1e} (<= 1e-6); {}; {per_point_ms:.4} ms/point; oracle {oracle_s:.2} s",
            offsets.join(", ")
        ),
    )
}

fn ac4_strong_suppression() -> Outcome {
    let env = QpEnvironment::new(1e-5, 0.02, 0.15).unwrap();
    let weak = gap_profile(30.0, 100.0).unwrap();
    let strong = gap_profile(15.0, 100.0).unwrap();
    let ratio = gamma_qp(6.5, &strong, &env).unwrap() / gamma_qp(6.5, &weak, &env).unwrap();
    let oracle_ratio = gamma_qp_trapezoid(6.5, &strong, &env, ORACLE_POINTS)
        / gamma_qp_trapezoid(6.5, &weak, &env, ORACLE_POINTS);
    outcome(
        ratio < 1e-2 && oracle_ratio < 1e-2 && (ratio / oracle_ratio - 1.0).abs() <= 1e-6,
        format!("strong/weak = {ratio:.4e} (oracle {oracle_ratio:.4e}, < 1e-2)"),
    )
}

fn ac5_steady_state_vs_ode() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut log_uniform = |lo: f64, hi: f64| -> f64 { (lo.ln() + (hi.ln() - lo.ln()) * rng.random::<f64>()).exp() };
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let p = QpDynamicsParams::new(log_uniform(1e2, 1e4), log_uniform(1e5, 1e9), log_uniform(1e-4, 1e2)).unwrap();
        let xs = steady_state_xqp(&p).unwrap();
        let x0 = xs * log_uniform(1e-3, 5.0);
        let lambda = p.s_per_s + 2.0 * p.r_per_s * xs;
        let dt = 0.05 / (p.s_per_s + 2.0 * p.r_per_s * x0.max(xs));
        let n = (40.0 / lambda / dt).ceil() as usize;
        let traj = evolve_xqp(x0, &p, dt, n).unwrap();
        worst = worst.max((traj[n] / xs - 1.0).abs());
    }
    outcome(worst < 1e-9, format!("max relative gap {worst:.2e} over 100 draws (< 1e-9)"))
}

fn ac6_scaling_regimes() -> Outcome {
    // crossover where 4vP = 1
    let (u, v) = (1.0, 0.25);
    let span = |lo: f64, hi: f64| -> Vec<f64> { (0..30).map(|i| lo * (hi / lo).powf(i as f64 / 29.0)).collect() };
    let exponent = |p: Vec<f64>| {
        let x: Vec<f64> = p.iter().map(|&q| steady_state_curve(q, u, v)).collect();
        fit_power_scaling(&p, &x).unwrap().exponent
    };
    let lin = exponent(span(1e-6, 1e-4));
    let sqrt = exponent(span(1e4, 1e6));
    outcome(
        (lin - 1.0).abs() <= 0.02 && (sqrt - 0.5).abs() <= 0.02,
        format!("linear exponent {lin:.4} (1.00 +- 0.02), sqrt exponent {sqrt:.4} (0.50 +- 0.02)"),
    )
}

fn ac7_ratio_recovery() -> Outcome {
    let ok = (0..50).filter(|&s| ratio_round_trip(s)).count();
    outcome(ok >= 45, format!("r/s within 20% in {ok}/50 seeds (>= 45)"))
}

// Noise is proportional to 1/T1, so the fit uses relative weights; the
// unweighted count is printed alongside.
fn ac8_spectrum_round_trip() -> Outcome {
    let ok = (0..50)
        .filter(|&s| spectrum_round_trip(1000 + s, SpectrumWeighting::Relative))
        .count();
    let unweighted = (0..50)
        .filter(|&s| spectrum_round_trip(1000 + s, SpectrumWeighting::Unweighted))
        .count();
    outcome(
        ok >= 45,
        format!("all parameters in tolerance in {ok}/50 seeds with relative weights (>= 45); unweighted {unweighted}/50"),
    )
}

fn ac9_detection_round_trip() -> Outcome {
    let cfg = CampaignConfig::default();
    let out = detection_round_trip(&cfg, 10);
    let recall = out.truth.recall();
    let tau_rel = out.tau_fit_median_s / out.tau_injected_median_s - 1.0;
    outcome(
        recall >= 0.95 && out.control_false_positives <= 1 && tau_rel.abs() <= 0.15,
        format!(
            "recall {recall:.3} ({}/{}, >= 0.95), {} false positives in 10 controls (<= 1), median tau {:.2} ms vs injected {:.2} ms ({:+.1}%, within 15%)",
            out.truth.true_positives,
            out.truth.n_truth,
            out.control_false_positives,
            out.tau_fit_median_s * 1e3,
            out.tau_injected_median_s * 1e3,
            tau_rel * 100.0
        ),
    )
}

fn ac10_independence_null() -> Outcome {
    let cfg = CampaignConfig::default();
    let hist = campaign_histogram(&cfg, cfg.n_datasets, GapEngineeringKind::Strong);
    let chi = hist.chi_square().unwrap();

    let probs = [0.021, 0.043, 0.0305, 0.077, 0.012, 0.055];
    let dp = poisson_binomial_pmf(&probs).unwrap();
    let brute = brute_force_pmf(&probs);
    let err = dp.iter().zip(&brute).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    outcome(
        chi.p_value > 0.01 && err <= 1e-12,
        format!(
            "strong subset over {} x {} s: chi-square {:.2} on {} dof, p = {:.4} (> 0.01); DP vs 2^6 enumeration max |diff| {err:.1e} (<= 1e-12)",
            cfg.n_datasets, cfg.dataset_duration_s, chi.statistic, chi.dof, chi.p_value
        ),
    )
}

fn ac11_golden_device() -> Outcome {
    let bad = golden_mismatches(&build_reference_device());
    let n_cells: usize = parse_golden().values().map(|t| t.iter().map(Vec::len).sum::<usize>()).sum();
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            format!("all {n_cells} cells of 9 tables match")
        } else {
            format!("mismatches: {}", bad.join("; "))
        },
    )
}

fn dataset_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

fn ac12_determinism() -> Outcome {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let trees: Vec<_> = dirs
        .iter()
        .map(|d| {
            let cfg = CampaignConfig {
                n_datasets: 3,
                master_seed: 42,
                output_dir: d.path().to_path_buf(),
                ..CampaignConfig::default()
            };
            cmd_simulate(&cfg).unwrap();
            dataset_bytes(&d.path().join(DATASETS_DIR))
        })
        .collect();
    let bytes: usize = trees[0].iter().map(|f| f.1.len()).sum();
    outcome(
        trees[0] == trees[1] && !trees[0].is_empty(),
        format!("{} files, {bytes} bytes identical across two runs", trees[0].len()),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("gap model", ac1_gap_model),
        ("frequency-shift coefficient", ac2_freq_shift),
        ("gamma_qp quadrature", ac3_quadrature),
        ("strong-GE suppression", ac4_strong_suppression),
        ("steady state vs ODE", ac5_steady_state_vs_ode),
        ("scaling regimes", ac6_scaling_regimes),
        ("r/s recovery", ac7_ratio_recovery),
        ("spectrum-fit round trip", ac8_spectrum_round_trip),
        ("detection round trip", ac9_detection_round_trip),
        ("independence null", ac10_independence_null),
        ("reference-device golden file", ac11_golden_device),
        ("determinism", ac12_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = check();
        if !r.pass {
            failed += 1;
        }
        println!(
            "AC{:<2} {} {name}: {} [{:.1} s]",
            i + 1,
            if r.pass { "PASS" } else { "FAIL" },
            r.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {}/{} passed", criteria.len() - failed, criteria.len());
    if failed > 0 && std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
