//! Matched filtering, event detection, per-event decay fits, simultaneous
//! error histograms and inter-event statistics.

mod decay;
mod filter;
mod histogram;
mod intervals;
mod peaks;
mod series;
mod truth;

pub use decay::{fit_event_decay, DecayFit, DecayFitOptions};
pub use filter::{matched_filter, matched_filter_with, FilterTemplate};
pub use histogram::{
    chi_square_test, poisson_binomial_pmf, poisson_binomial_prediction, simultaneous_error_histogram,
    ChiSquareResult, ErrorHistogram, TailExcess,
};
pub use intervals::{inter_event_stats, IntervalBin, IntervalStats};
pub use peaks::{detect_events, robust_sigma};
pub use series::summed_error_series;
pub use truth::{match_to_truth, TruthComparison};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simulate::RrecsDataset;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectionConfig {
    pub threshold_sigma: f64,
    pub template_tau_s: f64,
    pub min_separation_s: f64,
    pub template_length_tau: f64,
    pub decay_window_s: f64,
    pub decay: DecayFitOptions,
}

impl Default for DetectionConfig {
    fn default() -> Self {
        DetectionConfig {
            threshold_sigma: 6.0,
            template_tau_s: 10e-3,
            min_separation_s: 50e-3,
            template_length_tau: 5.0,
            decay_window_s: 50e-3,
            decay: DecayFitOptions::default(),
        }
    }
}

impl DetectionConfig {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("threshold_sigma", self.threshold_sigma),
            ("template_tau_s", self.template_tau_s),
            ("template_length_tau", self.template_length_tau),
            ("decay_window_s", self.decay_window_s),
        ];
        for (name, v) in checks {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("detection.{name} must be > 0, got {v}")));
            }
        }
        if !(self.min_separation_s >= 0.0) {
            return Err(Error::Config(format!(
                "detection.min_separation_s must be >= 0, got {}",
                self.min_separation_s
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectedEvent {
    pub cycle_index: usize,
    pub time_s: f64,
    pub peak_height: f64,
    pub tau_fit_s: f64,
    pub fit_rms_residual: f64,
    /// Matched-filter output at the onset, in robust σ units.
    pub score: f64,
    pub fit_converged: bool,
}

/// Full pipeline on one summed error series sampled every `dt_s`.
pub fn detect_in_series(series: &[f64], dt_s: f64, config: &DetectionConfig) -> Result<Vec<DetectedEvent>> {
    config.validate()?;
    let template = FilterTemplate::with_length(config.template_tau_s, dt_s, config.template_length_tau)?;
    let filtered = matched_filter(series, &template)?;
    let onsets = detect_events(&filtered, config.threshold_sigma, config.min_separation_s, dt_s)?;
    let sigma = robust_sigma(&filtered);
    let mut events = Vec::with_capacity(onsets.len());
    for (i, &onset) in onsets.iter().enumerate() {
        let mut window_s = config.decay_window_s;
        if let Some(&next) = onsets.get(i + 1) {
            window_s = window_s.min((next - onset) as f64 * dt_s);
        }
        let fit = match fit_event_decay(series, onset, window_s, dt_s, &config.decay) {
            Ok(f) => f,
            // fewer than the minimum samples left in the series
            Err(Error::Domain(_)) => continue,
            Err(e) => return Err(e),
        };
        events.push(DetectedEvent {
            cycle_index: onset,
            time_s: onset as f64 * dt_s,
            peak_height: fit.peak_height,
            tau_fit_s: fit.tau_fit_s,
            fit_rms_residual: fit.rms,
            score: filtered[onset] / sigma,
            fit_converged: fit.converged,
        });
    }
    Ok(events)
}

/// [`detect_in_series`] on the summed errors of `subset`.
pub fn detect_in_dataset(
    dataset: &RrecsDataset,
    subset: &[usize],
    config: &DetectionConfig,
) -> Result<Vec<DetectedEvent>> {
    let series: Vec<f64> = summed_error_series(dataset, subset)?
        .into_iter()
        .map(f64::from)
        .collect();
    detect_in_series(&series, dataset.cycle_period_s(), config)
}
