use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::config::{CampaignConfig, Subset};
use crate::detect::{
    detect_in_dataset, inter_event_stats, match_to_truth, simultaneous_error_histogram, ChiSquareResult,
    DetectedEvent, ErrorHistogram, IntervalStats, TailExcess, TruthComparison,
};
use crate::device::{load_device, save_device, DeviceConfig};
use crate::error::{Error, Result};
use crate::fit::{
    fit_steady_state_curve, fit_t1_spectrum, FitReport, LmOptions, ParamEstimate, SpectrumDataset,
    SPECTRUM_PARAM_NAMES, STEADY_STATE_PARAM_NAMES,
};
use crate::io_util;
use crate::physics::PhysicalConstants;
use crate::simulate::{format, rng, simulate_rrecs, DeviceResponse, RrecsDataset};

/// Tail z-score above which a histogram is flagged for high-k excess.
pub const EXCESS_Z: f64 = 5.0;

pub const CONFIG_FILE: &str = "config.json";
pub const DEVICE_FILE: &str = "device.json";
pub const SIMULATE_SUMMARY: &str = "simulate_summary.json";
pub const DATASETS_DIR: &str = "datasets";

pub fn dataset_file_name(index: usize) -> String {
    format!("ds_{index:04}.rrcs")
}

pub fn detection_dir(out: &Path, subset: Subset) -> PathBuf {
    out.join("detection").join(subset.name())
}

pub fn histogram_path(out: &Path, subset: Subset, ext: &str) -> PathBuf {
    out.join("histogram").join(format!("{}.{ext}", subset.name()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateSummary {
    pub n_datasets: usize,
    pub dataset_duration_s: f64,
    pub total_duration_s: f64,
    pub master_seed: u64,
    pub total_events_injected: usize,
    pub mean_rate_per_s: f64,
    pub injected_tau_median_s: Option<f64>,
    pub files: Vec<String>,
}

/// Simulates `n_datasets` datasets into `<output_dir>/datasets`.
pub fn cmd_simulate(cfg: &CampaignConfig) -> Result<SimulateSummary> {
    cfg.validate()?;
    let device = cfg.device()?;
    let model = cfg.impact_model();
    let out = &cfg.output_dir;
    io_util::write_atomic(&out.join(CONFIG_FILE), &io_util::to_json_pretty(cfg))?;
    save_device(&device, &out.join(DEVICE_FILE))?;

    let per_dataset: Vec<Vec<f64>> = (0..cfg.n_datasets)
        .into_par_iter()
        .map(|i| -> Result<Vec<f64>> {
            let seed = rng::dataset_seed(cfg.master_seed, i as u64);
            let events = model.sample_events_seeded(seed, cfg.dataset_duration_s);
            let ds = simulate_rrecs(&device, &events, &cfg.qp_environment, seed)?;
            format::save_dataset(&ds, &out.join(DATASETS_DIR).join(dataset_file_name(i)))?;
            Ok(events.iter().map(|e| e.tau_decay_s).collect())
        })
        .collect::<Result<_>>()?;

    let mut taus: Vec<f64> = per_dataset.iter().flatten().copied().collect();
    let total_events = taus.len();
    let total_duration = cfg.n_datasets as f64 * cfg.dataset_duration_s;
    let summary = SimulateSummary {
        n_datasets: cfg.n_datasets,
        dataset_duration_s: cfg.dataset_duration_s,
        total_duration_s: total_duration,
        master_seed: cfg.master_seed,
        total_events_injected: total_events,
        mean_rate_per_s: total_events as f64 / total_duration,
        injected_tau_median_s: median(&mut taus),
        files: (0..cfg.n_datasets).map(dataset_file_name).collect(),
    };
    io_util::write_atomic(&out.join(SIMULATE_SUMMARY), &io_util::to_json_pretty(&summary))?;
    Ok(summary)
}

/// Expands directories to their `.rrcs`/`.csv` files; with no inputs, uses
/// the campaign's dataset directory.
pub fn resolve_inputs(cfg: &CampaignConfig, inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let default = [cfg.output_dir.join(DATASETS_DIR)];
    let roots: &[PathBuf] = if inputs.is_empty() { &default } else { inputs };
    let mut files = Vec::new();
    let mut missing = Vec::new();
    for root in roots {
        if root.is_dir() {
            let mut found: Vec<PathBuf> = std::fs::read_dir(root)
                .map_err(|e| Error::io(root, e))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| {
                    p.is_file()
                        && p.extension().is_some_and(|x| x == "rrcs" || x == "csv")
                        && !p.file_name().is_some_and(|n| n.to_string_lossy().starts_with('.'))
                })
                .collect();
            found.sort();
            files.extend(found);
        } else if root.is_file() {
            files.push(root.clone());
        } else {
            missing.push(root.display().to_string());
        }
    }
    if !missing.is_empty() {
        return Err(Error::MissingInputs(missing));
    }
    if files.is_empty() {
        return Err(Error::MissingInputs(
            roots.iter().map(|r| format!("{} (no datasets)", r.display())).collect(),
        ));
    }
    Ok(files)
}

fn file_label(path: &Path) -> String {
    path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
}

fn fallback_device(cfg: &CampaignConfig) -> Result<DeviceConfig> {
    let snapshot = cfg.output_dir.join(DEVICE_FILE);
    if snapshot.exists() {
        load_device(&snapshot)
    } else {
        cfg.device()
    }
}

type Loaded = (String, RrecsDataset, bool);

/// Loads every input in parallel; the flag records whether a truth sidecar
/// was present. Failures are returned alongside.
fn load_all(cfg: &CampaignConfig, files: &[PathBuf]) -> Result<(Vec<Loaded>, Vec<(String, String)>)> {
    let device = fallback_device(cfg)?;
    let loaded: Vec<(String, Result<RrecsDataset>, bool)> = files
        .par_iter()
        .map(|p| {
            let has_sidecar = p.extension().is_some_and(|x| x == "rrcs") && format::sidecar_path(p).is_file();
            (file_label(p), format::load_dataset(p, &device), has_sidecar)
        })
        .collect();
    let mut ok = Vec::new();
    let mut failed = Vec::new();
    for (name, r, has_sidecar) in loaded {
        match r {
            Ok(d) => ok.push((name, d, has_sidecar)),
            Err(e) => failed.push((name, e.to_string())),
        }
    }
    if ok.is_empty() {
        return Err(Error::Data(format!(
            "no readable datasets: {}",
            failed.iter().map(|(n, e)| format!("{n}: {e}")).collect::<Vec<_>>().join("; ")
        )));
    }
    Ok((ok, failed))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetDetection {
    pub file: String,
    pub events_file: String,
    pub duration_s: f64,
    pub n_events: usize,
    pub has_truth: bool,
    pub truth: Option<TruthComparison>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectSummary {
    pub subset: Subset,
    pub threshold_sigma: f64,
    pub n_datasets: usize,
    pub failed: Vec<(String, String)>,
    pub total_duration_s: f64,
    pub total_events: usize,
    pub event_rate_per_s: f64,
    pub truth: Option<TruthComparison>,
    pub recall: Option<f64>,
    pub precision: Option<f64>,
    pub tau_fit_median_s: Option<f64>,
    pub tau_injected_median_s: Option<f64>,
    pub datasets: Vec<DatasetDetection>,
}

/// Detection over `inputs` on `subset`; per-dataset event arrays and a summary
/// go to `<output_dir>/detection/<subset>/`.
pub fn cmd_detect(cfg: &CampaignConfig, inputs: &[PathBuf], subset: Subset) -> Result<DetectSummary> {
    cfg.detection.validate()?;
    let files = resolve_inputs(cfg, inputs)?;
    let (datasets, failed) = load_all(cfg, &files)?;
    let dir = detection_dir(&cfg.output_dir, subset);

    let results: Vec<(DatasetDetection, Vec<DetectedEvent>, Vec<f64>)> = datasets
        .par_iter()
        .map(|(name, ds, has_truth)| -> Result<_> {
            let has_truth = *has_truth;
            let idx = subset.indices(&ds.device_ref)?;
            let events = detect_in_dataset(ds, &idx, &cfg.detection)?;
            let stem = name.rsplit_once('.').map_or(name.as_str(), |(s, _)| s);
            let events_file = format!("{stem}.events.json");
            io_util::write_atomic(&dir.join(&events_file), &io_util::to_json_pretty(&events))?;
            let truth = has_truth.then(|| {
                let det: Vec<f64> = events.iter().map(|e| e.time_s).collect();
                let tru: Vec<f64> = ds.truth_events.iter().map(|e| e.t0_s).collect();
                match_to_truth(&det, &tru, cfg.truth_match_tolerance_s)
            });
            let injected_taus = ds.truth_events.iter().map(|e| e.tau_decay_s).collect();
            Ok((
                DatasetDetection {
                    file: name.clone(),
                    events_file,
                    duration_s: ds.duration_s(),
                    n_events: events.len(),
                    has_truth,
                    truth,
                },
                events,
                injected_taus,
            ))
        })
        .collect::<Result<_>>()?;

    let total_duration: f64 = results.iter().map(|r| r.0.duration_s).sum();
    let total_events: usize = results.iter().map(|r| r.0.n_events).sum();
    let truths: Vec<TruthComparison> = results.iter().filter_map(|r| r.0.truth.clone()).collect();
    let truth = (!truths.is_empty()).then(|| TruthComparison::merge(&truths));
    let mut fitted: Vec<f64> = results.iter().flat_map(|r| r.1.iter().map(|e| e.tau_fit_s)).collect();
    let mut injected: Vec<f64> = results.iter().flat_map(|r| r.2.iter().copied()).collect();
    let summary = DetectSummary {
        subset,
        threshold_sigma: cfg.detection.threshold_sigma,
        n_datasets: results.len(),
        failed,
        total_duration_s: total_duration,
        total_events,
        event_rate_per_s: total_events as f64 / total_duration,
        recall: truth.as_ref().map(|t| t.recall()).filter(|r| r.is_finite()),
        precision: truth.as_ref().map(|t| t.precision()).filter(|r| r.is_finite()),
        truth,
        tau_fit_median_s: median(&mut fitted),
        tau_injected_median_s: median(&mut injected),
        datasets: results.into_iter().map(|r| r.0).collect(),
    };
    io_util::write_atomic(&dir.join("summary.json"), &io_util::to_json_pretty(&summary))?;
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramSummary {
    pub subset: Subset,
    pub n_datasets: usize,
    pub failed: Vec<(String, String)>,
    pub histogram: ErrorHistogram,
    pub chi_square: ChiSquareResult,
    pub tail_excess: Option<TailExcess>,
    pub high_k_excess: bool,
}

/// Simultaneous-error histogram over `inputs` against the independent-error
/// prediction at the configured background QP state.
pub fn cmd_histogram(cfg: &CampaignConfig, inputs: &[PathBuf], subset: Subset) -> Result<HistogramSummary> {
    let files = resolve_inputs(cfg, inputs)?;
    let (datasets, failed) = load_all(cfg, &files)?;
    let env = cfg.qp_environment;
    let parts: Vec<ErrorHistogram> = datasets
        .par_iter()
        .map(|(_, ds, _)| -> Result<ErrorHistogram> {
            let idx = subset.indices(&ds.device_ref)?;
            let response = DeviceResponse::new(&ds.device_ref, &env, &PhysicalConstants::REFERENCE)?;
            let all = response.error_probs(env.x_qp);
            let probs: Vec<f64> = idx.iter().map(|&q| all[q]).collect();
            ErrorHistogram::new(simultaneous_error_histogram(ds, &idx)?, &probs)
        })
        .collect::<Result<_>>()?;
    let histogram = ErrorHistogram::merge(&parts)?;
    let tail_excess = histogram.max_tail_excess();
    let summary = HistogramSummary {
        subset,
        n_datasets: parts.len(),
        failed,
        chi_square: histogram.chi_square()?,
        high_k_excess: tail_excess.is_some_and(|t| t.z > EXCESS_Z),
        tail_excess,
        histogram,
    };
    let out = &cfg.output_dir;
    io_util::write_atomic(&histogram_path(out, subset, "csv"), summary.histogram.to_csv().as_bytes())?;
    io_util::write_atomic(&histogram_path(out, subset, "json"), &io_util::to_json_pretty(&summary))?;
    Ok(summary)
}

/// Two-column numeric CSV; blank lines, `#` comments and a non-numeric
/// header row are skipped.
pub fn read_two_column_csv(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = io_util::read_to_string(path)?;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: Option<(f64, f64)> = match cols.as_slice() {
            [a, b, ..] => a.parse().ok().zip(b.parse().ok()),
            _ => None,
        };
        match parsed {
            Some(r) => rows.push(r),
            None if rows.is_empty() && lineno == 0 => continue,
            None => {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    message: format!("line {}: expected two numeric columns, got `{line}`", lineno + 1),
                })
            }
        }
    }
    if rows.is_empty() {
        return Err(Error::Data(format!("{} has no data rows", path.display())));
    }
    Ok(rows)
}

pub fn fits_dir(out: &Path) -> PathBuf {
    out.join("fits")
}

/// Four-parameter QP spectrum fit of a `f_q_GHz,inv_t1_per_s` CSV after
/// subtracting `gamma_bkgd_per_s`.
pub fn cmd_fit_spectrum(cfg: &CampaignConfig, csv: &Path, gamma_bkgd_per_s: f64) -> Result<FitReport> {
    let rows = read_two_column_csv(csv)?;
    let data = SpectrumDataset::from_measured(&rows, gamma_bkgd_per_s)?;
    let fit = fit_t1_spectrum(&data, None, &cfg.spectrum_fit)?;
    let mut report = FitReport::from_fit("qp_tunneling_spectrum", &SPECTRUM_PARAM_NAMES, data.points.len(), &fit);
    report
        .derived
        .push(ParamEstimate::new("gamma_bkgd_per_s", gamma_bkgd_per_s, f64::NAN));
    if data.n_clipped > 0 {
        report
            .notes
            .push(format!("{} points clipped to 0 after background subtraction", data.n_clipped));
    }
    io_util::write_atomic(&fits_dir(&cfg.output_dir).join("spectrum.json"), &io_util::to_json_pretty(&report))?;
    Ok(report)
}

/// Steady-state x_qp(P) fit of a `power,x_qp` CSV; reports r/s and the
/// trapping rate implied by the configured recombination rate.
pub fn cmd_fit_power(cfg: &CampaignConfig, csv: &Path) -> Result<FitReport> {
    let rows = read_two_column_csv(csv)?;
    let (p, x): (Vec<f64>, Vec<f64>) = rows.into_iter().unzip();
    let fit = fit_steady_state_curve(&p, &x, &LmOptions::default())?;
    let mut report = FitReport::from_fit("steady_state_xqp", &STEADY_STATE_PARAM_NAMES, p.len(), &fit.fit);
    let r = cfg.recombination_rate_per_s;
    let s = fit.trapping_rate_per_s(r);
    let rel = fit.r_over_s_sigma / fit.r_over_s;
    report.derived = vec![
        ParamEstimate::new("r_over_s", fit.r_over_s, fit.r_over_s_sigma),
        ParamEstimate::new("recombination_rate_per_s", r, f64::NAN),
        ParamEstimate::new("trapping_rate_per_s", s, s * rel),
        ParamEstimate::new("crossover_power", fit.crossover_power(), f64::NAN),
    ];
    if fit.ratio_indeterminate {
        report
            .notes
            .push("r/s indeterminate: v uncertainty exceeds 100% (data do not span the crossover)".into());
    }
    io_util::write_atomic(&fits_dir(&cfg.output_dir).join("power.json"), &io_util::to_json_pretty(&report))?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quantiles {
    pub n: usize,
    pub mean: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub max: f64,
}

impl Quantiles {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let q = |f: f64| -> f64 {
            let pos = f * (v.len() - 1) as f64;
            let lo = pos.floor() as usize;
            let hi = pos.ceil() as usize;
            v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
        };
        Some(Quantiles {
            n: v.len(),
            mean: v.iter().sum::<f64>() / v.len() as f64,
            q25: q(0.25),
            median: q(0.5),
            q75: q(0.75),
            max: v[v.len() - 1],
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluxReport {
    pub events_per_s_per_chip: f64,
    pub chip_area_cm2: f64,
    pub events_per_s_per_cm2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramDigest {
    pub chi_square: ChiSquareResult,
    pub tail_excess: Option<TailExcess>,
    pub high_k_excess: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub n_datasets: usize,
    pub total_duration_s: f64,
    pub master_seed: u64,
    pub injected_events: usize,
    pub injected_rate_per_s: f64,
    pub injected_tau_median_s: Option<f64>,
    pub detection_subset: Subset,
    pub detected_events: usize,
    pub event_rate_per_s: f64,
    pub mean_inter_event_time_s: Option<f64>,
    pub recall: Option<f64>,
    pub precision: Option<f64>,
    pub flux: FluxReport,
    pub tau_fit_s: Option<Quantiles>,
    pub peak_height: Option<Quantiles>,
    pub intervals: IntervalStats,
    pub histogram_weak: HistogramDigest,
    pub histogram_strong: HistogramDigest,
    /// Detections on the strong subset, when that detection was run.
    pub strong_subset_events: Option<usize>,
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = io_util::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Bundles prior artifacts under `dir` into `dir/report/`.
pub fn cmd_report(dir: &Path) -> Result<CampaignReport> {
    let weak_dir = detection_dir(dir, Subset::Weak);
    let required = [
        dir.join(CONFIG_FILE),
        dir.join(DEVICE_FILE),
        dir.join(SIMULATE_SUMMARY),
        weak_dir.join("summary.json"),
        histogram_path(dir, Subset::Weak, "json"),
        histogram_path(dir, Subset::Strong, "json"),
    ];
    let missing: Vec<String> = required
        .iter()
        .filter(|p| !p.is_file())
        .map(|p| p.display().to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingInputs(missing));
    }
    let device = load_device(&required[1])?;
    let sim: SimulateSummary = read_json(&required[2])?;
    let det: DetectSummary = read_json(&required[3])?;
    let h_weak: HistogramSummary = read_json(&required[4])?;
    let h_strong: HistogramSummary = read_json(&required[5])?;

    let event_files: Vec<PathBuf> = det.datasets.iter().map(|d| weak_dir.join(&d.events_file)).collect();
    let missing: Vec<String> = event_files
        .iter()
        .filter(|p| !p.is_file())
        .map(|p| p.display().to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingInputs(missing));
    }

    let mut boundaries = vec![0.0];
    let mut global_times = Vec::new();
    let mut tau_rows = String::from("dataset,cycle_index,time_s,peak_height,tau_fit_s,fit_rms_residual\n");
    let mut taus = Vec::new();
    let mut heights = Vec::new();
    for (d, path) in det.datasets.iter().zip(&event_files) {
        let events: Vec<DetectedEvent> = read_json(path)?;
        let start = *boundaries.last().expect("non-empty");
        for e in &events {
            global_times.push(start + e.time_s);
            taus.push(e.tau_fit_s);
            heights.push(e.peak_height);
            tau_rows.push_str(&format!(
                "{},{},{},{},{},{}\n",
                d.file, e.cycle_index, e.time_s, e.peak_height, e.tau_fit_s, e.fit_rms_residual
            ));
        }
        boundaries.push(start + d.duration_s);
    }
    let intervals = inter_event_stats(&global_times, &boundaries, 12)?;
    let mut interval_rows = String::from("lo_s,hi_s,observed,expected_exponential,expected_windowed\n");
    for b in &intervals.histogram {
        interval_rows.push_str(&format!(
            "{},{},{},{},{}\n",
            b.lo_s, b.hi_s, b.observed, b.expected_exponential, b.expected_windowed
        ));
    }

    let strong_summary = detection_dir(dir, Subset::Strong).join("summary.json");
    let strong_subset_events = if strong_summary.is_file() {
        Some(read_json::<DetectSummary>(&strong_summary)?.total_events)
    } else {
        None
    };
    let rate = det.event_rate_per_s;
    let mean_interval = (!intervals.intervals_s.is_empty())
        .then(|| intervals.intervals_s.iter().sum::<f64>() / intervals.intervals_s.len() as f64);
    let digest = |h: &HistogramSummary| HistogramDigest {
        chi_square: h.chi_square,
        tail_excess: h.tail_excess,
        high_k_excess: h.high_k_excess,
    };
    let report = CampaignReport {
        n_datasets: det.n_datasets,
        total_duration_s: det.total_duration_s,
        master_seed: sim.master_seed,
        injected_events: sim.total_events_injected,
        injected_rate_per_s: sim.mean_rate_per_s,
        injected_tau_median_s: sim.injected_tau_median_s,
        detection_subset: det.subset,
        detected_events: det.total_events,
        event_rate_per_s: rate,
        mean_inter_event_time_s: mean_interval,
        recall: det.recall,
        precision: det.precision,
        flux: FluxReport {
            events_per_s_per_chip: rate,
            chip_area_cm2: device.chip_area_cm2,
            events_per_s_per_cm2: rate / device.chip_area_cm2,
        },
        tau_fit_s: Quantiles::of(&taus),
        peak_height: Quantiles::of(&heights),
        intervals,
        histogram_weak: digest(&h_weak),
        histogram_strong: digest(&h_strong),
        strong_subset_events,
    };
    let out = dir.join("report");
    io_util::write_atomic(&out.join("report.json"), &io_util::to_json_pretty(&report))?;
    io_util::write_atomic(&out.join("tau.csv"), tau_rows.as_bytes())?;
    io_util::write_atomic(&out.join("intervals.csv"), interval_rows.as_bytes())?;
    io_util::write_atomic(&out.join("histogram_weak.csv"), h_weak.histogram.to_csv().as_bytes())?;
    io_util::write_atomic(&out.join("histogram_strong.csv"), h_strong.histogram.to_csv().as_bytes())?;
    Ok(report)
}

fn median(v: &mut [f64]) -> Option<f64> {
    Quantiles::of(v).map(|q| q.median)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg(out: &Path) -> CampaignConfig {
        CampaignConfig::load(
            None,
            &[
                "n_datasets=2".into(),
                "dataset_duration_s=2".into(),
                "event_rate_per_s=1".into(),
                "event_amplitude_range=[1e-5,1e-5]".into(),
                format!("output_dir={}", out.display()),
            ],
        )
        .unwrap()
    }

    fn read_tree(dir: &Path) -> Vec<(String, Vec<u8>)> {
        let mut files: Vec<_> = std::fs::read_dir(dir)
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|p| p.is_file())
            .map(|p| (file_label(&p), std::fs::read(&p).unwrap()))
            .collect();
        files.sort();
        files
    }

    #[test]
    fn simulate_is_byte_deterministic() {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        cmd_simulate(&small_cfg(a.path())).unwrap();
        cmd_simulate(&small_cfg(b.path())).unwrap();
        let ta = read_tree(&a.path().join(DATASETS_DIR));
        let tb = read_tree(&b.path().join(DATASETS_DIR));
        assert_eq!(ta.len(), 4);
        assert_eq!(ta, tb);
    }

    #[test]
    fn zero_rate_dataset_has_no_events() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = small_cfg(dir.path());
        cfg.n_datasets = 1;
        cfg.event_rate_per_s = 0.0;
        let s = cmd_simulate(&cfg).unwrap();
        assert_eq!(s.total_events_injected, 0);
        assert_eq!(s.injected_tau_median_s, None);
        let d = cmd_detect(&cfg, &[], Subset::Weak).unwrap();
        assert_eq!(d.total_events, 0);
        assert_eq!(d.truth.unwrap().n_truth, 0);
    }

    #[test]
    fn pipeline_then_report() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = small_cfg(dir.path());
        cmd_simulate(&cfg).unwrap();
        cmd_detect(&cfg, &[], Subset::Weak).unwrap();
        cmd_histogram(&cfg, &[], Subset::Weak).unwrap();
        cmd_histogram(&cfg, &[], Subset::Strong).unwrap();
        let r = cmd_report(dir.path()).unwrap();
        assert_eq!(r.n_datasets, 2);
        assert_eq!(r.strong_subset_events, None);
        for f in ["report.json", "tau.csv", "intervals.csv", "histogram_weak.csv", "histogram_strong.csv"] {
            assert!(dir.path().join("report").join(f).is_file(), "{f}");
        }
    }

    #[test]
    fn report_on_empty_dir_lists_everything() {
        let dir = tempfile::tempdir().unwrap();
        match cmd_report(dir.path()) {
            Err(Error::MissingInputs(m)) => assert_eq!(m.len(), 6),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_inputs_reported() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = small_cfg(dir.path());
        assert!(matches!(resolve_inputs(&cfg, &[]), Err(Error::MissingInputs(_))));
        let ghost = dir.path().join("ghost.rrcs");
        match resolve_inputs(&cfg, &[ghost]) {
            Err(Error::MissingInputs(m)) => assert!(m[0].contains("ghost.rrcs")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn csv_parsing() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.csv");
        std::fs::write(&p, "f_q_GHz,inv_t1_per_s\n# note\n\n4.0, 100\n4.1,200\n").unwrap();
        assert_eq!(read_two_column_csv(&p).unwrap(), vec![(4.0, 100.0), (4.1, 200.0)]);
        std::fs::write(&p, "x,y\n1,2\n3,oops\n").unwrap();
        assert!(matches!(read_two_column_csv(&p), Err(Error::Parse { .. })));
        std::fs::write(&p, "x,y\n").unwrap();
        assert!(matches!(read_two_column_csv(&p), Err(Error::Data(_))));
    }

    #[test]
    fn quantiles_interpolate() {
        let q = Quantiles::of(&[4.0, 1.0, 3.0, 2.0]).unwrap();
        assert_eq!(q.median, 2.5);
        assert_eq!(q.q25, 1.75);
        assert_eq!(q.max, 4.0);
        assert!(Quantiles::of(&[]).is_none());
    }
}
