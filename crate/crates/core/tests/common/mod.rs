#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use qpburst::campaign::CampaignConfig;
use qpburst::detect::{
    detect_in_dataset, match_to_truth, simultaneous_error_histogram, ErrorHistogram, TruthComparison,
};
use qpburst::device::{DeviceConfig, GapEngineeringKind};
use qpburst::fit::{
    fit_steady_state_curve, fit_t1_spectrum, spectrum_model, steady_state_curve, uv_from_rates, LmOptions,
    SpectrumDataset, SpectrumFitOptions, SpectrumWeighting,
};
use qpburst::physics::{JunctionGapProfile, PhysicalConstants, QpEnvironment, KB_OVER_H_GHZ_PER_K};
use qpburst::simulate::{rng::dataset_seed, simulate_rrecs, DeviceResponse, ImpactModel};

pub const GOLDEN_TABLES: &str = include_str!("../golden/reference_device_tables.txt");

pub fn parse_golden() -> BTreeMap<String, Vec<Vec<String>>> {
    let mut tables = BTreeMap::new();
    let mut current: Option<String> = None;
    for line in GOLDEN_TABLES.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            current = Some(name.to_string());
            tables.insert(name.to_string(), Vec::new());
        } else {
            let name = current.as_ref().expect("row before table header");
            let row = line.split_whitespace().map(String::from).collect();
            tables.get_mut(name).unwrap().push(row);
        }
    }
    tables
}

/// Every cell where the device disagrees with the golden tables.
pub fn golden_mismatches(device: &DeviceConfig) -> Vec<String> {
    let tables = parse_golden();
    let mut bad = Vec::new();
    if tables.len() != 9 {
        bad.push(format!("golden file has {} tables", tables.len()));
    }
    for (name, rows) in &tables {
        if rows.len() != 3 || rows.iter().any(|r| r.len() != 4) {
            bad.push(format!("{name}: not 3x4"));
            continue;
        }
        for (r, row) in rows.iter().enumerate() {
            for (c, cell) in row.iter().enumerate() {
                let Some(i) = device.index_of(r as u8, c as u8) else {
                    bad.push(format!("no qubit at ({r}, {c})"));
                    continue;
                };
                let q = &device.qubits[i];
                let ok = match name.as_str() {
                    "ge_kind" => {
                        let want = if cell == "weak" { GapEngineeringKind::Weak } else { GapEngineeringKind::Strong };
                        q.ge_kind == want
                    }
                    other => {
                        let want: f64 = cell.parse().unwrap();
                        let got = match other {
                            "anharmonicity_MHz" => q.anharmonicity_MHz,
                            "f_idle_GHz" => q.f_idle_GHz,
                            "f_max_GHz" => q.f_max_GHz,
                            "t1_us" => q.t1_baseline_us,
                            "resonator_f_GHz" => q.resonator_f_GHz,
                            "resonator_decay_ns" => q.resonator_decay_ns,
                            "resonator_coupling_MHz" => q.resonator_coupling_MHz,
                            "readout_fidelity_pct" => q.readout_assignment_fidelity * 100.0,
                            _ => f64::NAN,
                        };
                        (got - want).abs() <= 1e-9 * want.abs()
                    }
                };
                if !ok {
                    bad.push(format!("{name}[{r}][{c}] != {cell}"));
                }
            }
        }
    }
    bad
}

/// Re(1/√(a + ib)) on the principal branch, without complex arithmetic.
fn re_inv_sqrt(a: f64, b: f64) -> f64 {
    let m = a.hypot(b);
    ((m + a) / 2.0).sqrt() / m
}

/// Γ_qp by trapezoid on the raw energy grid above the thick-lead gap. The
/// 1/√(ε − Δ) edge is handled by subtracting its leading term and adding
/// that term's exact integral back.
pub fn gamma_qp_trapezoid(f_q: f64, profile: &JunctionGapProfile, env: &QpEnvironment, n: usize) -> f64 {
    let kt = KB_OVER_H_GHZ_PER_K * env.T_qp_K;
    let det = f_q - profile.gap_difference_GHz;
    let h = |e: f64| (-e / kt).exp() * re_inv_sqrt(e + det, env.w_GHz);
    let upper = 36.0 * kt;
    let h0 = h(0.0);
    let step = upper / n as f64;
    let mut sum = 0.0;
    for i in 1..=n {
        let e = i as f64 * step;
        let v = (h(e) - h0) / e.sqrt();
        sum += if i == n { 0.5 * v } else { v };
    }
    let integral = sum * step + 2.0 * h0 * upper.sqrt();
    2.0 * f_q * 1e9 * env.x_qp * integral * (profile.delta_thick_GHz / (2.0 * std::f64::consts::PI * kt)).sqrt()
}

pub const SPECTRUM_TRUTH: [f64; 4] = [5.0, 0.02, 1e-5, 0.15];

/// 40-point spectrum with 3% multiplicative noise; true when every fitted
/// parameter lands within 10% (w within 20%).
pub fn spectrum_round_trip(seed: u64, weighting: SpectrumWeighting) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, 0.03).unwrap();
    let pts: Vec<(f64, f64)> = (0..40)
        .map(|i| {
            let f = 4.0 + 2.5 * i as f64 / 39.0;
            let y = spectrum_model(f, &SPECTRUM_TRUTH, 50.0).unwrap();
            (f, y * (1.0 + normal.sample(&mut rng)))
        })
        .collect();
    let data = SpectrumDataset::from_measured(&pts, 0.0).unwrap();
    let opts = SpectrumFitOptions {
        weighting,
        ..SpectrumFitOptions::default()
    };
    let fit = fit_t1_spectrum(&data, None, &opts).unwrap();
    fit.converged
        && fit.params.iter().zip(SPECTRUM_TRUTH).enumerate().all(|(k, (got, want))| {
            let tol = if k == 3 { 0.2 } else { 0.1 };
            (got / want - 1.0).abs() < tol
        })
}

/// x_qp(P) with r/s = 1.4e5, crossover at 3e-4 and 5% noise; true when the
/// fitted r/s is within 20%.
pub fn ratio_round_trip(seed: u64) -> bool {
    let (s, r) = (700.0, 1.4e5 * 700.0);
    let v_true = 1.0 / (4.0 * 3e-4);
    let alpha = v_true * s * s / r;
    let (u, v) = uv_from_rates(s, r, alpha);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, 0.05).unwrap();
    let p: Vec<f64> = (0..20).map(|i| 3e-5 * (1.0f64 / 3e-5).powf(i as f64 / 19.0)).collect();
    let x: Vec<f64> = p
        .iter()
        .map(|&q| steady_state_curve(q, u, v) * (1.0 + normal.sample(&mut rng)))
        .collect();
    match fit_steady_state_curve(&p, &x, &LmOptions::default()) {
        Ok(f) => (f.r_over_s / 1.4e5 - 1.0).abs() < 0.2,
        Err(_) => false,
    }
}

pub struct DetectionOutcome {
    pub truth: TruthComparison,
    pub control_false_positives: usize,
    pub tau_fit_median_s: f64,
    pub tau_injected_median_s: f64,
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Simulates `n` event datasets and `n` event-free controls with `cfg`, then
/// runs detection on the weak subset.
pub fn detection_round_trip(cfg: &CampaignConfig, n: usize) -> DetectionOutcome {
    let device = cfg.device().unwrap();
    let weak = device.indices_of(GapEngineeringKind::Weak);
    let model = cfg.impact_model();
    let runs: Vec<(TruthComparison, Vec<f64>, Vec<f64>, usize)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let seed = dataset_seed(cfg.master_seed, i as u64);
            let events = model.sample_events_seeded(seed, cfg.dataset_duration_s);
            let ds = simulate_rrecs(&device, &events, &cfg.qp_environment, seed).unwrap();
            let found = detect_in_dataset(&ds, &weak, &cfg.detection).unwrap();
            let times: Vec<f64> = found.iter().map(|e| e.time_s).collect();
            let truth_t: Vec<f64> = events.iter().map(|e| e.t0_s).collect();
            let cmp = match_to_truth(&times, &truth_t, cfg.truth_match_tolerance_s);
            let fitted = cmp.matches.iter().map(|&(_, d)| found[d].tau_fit_s).collect();
            let injected = events.iter().map(|e| e.tau_decay_s).collect();

            let control_seed = dataset_seed(cfg.master_seed ^ 0x5eed_c0de, i as u64);
            let control = simulate_rrecs(&device, &[], &cfg.qp_environment, control_seed).unwrap();
            let fp = detect_in_dataset(&control, &weak, &cfg.detection).unwrap().len();
            (cmp, fitted, injected, fp)
        })
        .collect();
    let truth = TruthComparison::merge(&runs.iter().map(|r| r.0.clone()).collect::<Vec<_>>());
    DetectionOutcome {
        truth,
        control_false_positives: runs.iter().map(|r| r.3).sum(),
        tau_fit_median_s: median(runs.iter().flat_map(|r| r.1.clone()).collect()),
        tau_injected_median_s: median(runs.iter().flat_map(|r| r.2.clone()).collect()),
    }
}

/// Merged simultaneous-error histogram of `subset` over `n` simulated
/// datasets (events included) against the independent prediction at the
/// background density.
pub fn campaign_histogram(cfg: &CampaignConfig, n: usize, kind: GapEngineeringKind) -> ErrorHistogram {
    let device = cfg.device().unwrap();
    let subset = device.indices_of(kind);
    let model: ImpactModel = cfg.impact_model();
    let all = DeviceResponse::new(&device, &cfg.qp_environment, &PhysicalConstants::REFERENCE)
        .unwrap()
        .error_probs(cfg.qp_environment.x_qp);
    let probs: Vec<f64> = subset.iter().map(|&q| all[q]).collect();
    let parts: Vec<ErrorHistogram> = (0..n)
        .into_par_iter()
        .map(|i| {
            let seed = dataset_seed(cfg.master_seed, i as u64);
            let events = model.sample_events_seeded(seed, cfg.dataset_duration_s);
            let ds = simulate_rrecs(&device, &events, &cfg.qp_environment, seed).unwrap();
            ErrorHistogram::new(simultaneous_error_histogram(&ds, &subset).unwrap(), &probs).unwrap()
        })
        .collect();
    ErrorHistogram::merge(&parts).unwrap()
}

/// P(k errors) by enumerating all 2ⁿ outcomes.
pub fn brute_force_pmf(probs: &[f64]) -> Vec<f64> {
    let n = probs.len();
    let mut pmf = vec![0.0; n + 1];
    for mask in 0u32..(1 << n) {
        let mut p = 1.0;
        for (i, &q) in probs.iter().enumerate() {
            p *= if mask >> i & 1 == 1 { q } else { 1.0 - q };
        }
        pmf[mask.count_ones() as usize] += p;
    }
    pmf
}
