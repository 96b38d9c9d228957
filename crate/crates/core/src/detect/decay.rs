use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::{levenberg_marquardt, LmOptions};

const MIN_WINDOW_SAMPLES: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecayFitOptions {
    pub bin_s: f64,
    /// Span before onset whose mean fixes the baseline b.
    pub baseline_window_s: f64,
    pub tau_init_s: f64,
}

impl Default for DecayFitOptions {
    fn default() -> Self {
        DecayFitOptions {
            bin_s: 0.5e-3,
            baseline_window_s: 50e-3,
            tau_init_s: 10e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub tau_fit_s: f64,
    /// h in h·exp(−(t−t0)/τ) + b, error-count units.
    pub peak_height: f64,
    pub baseline: f64,
    /// RMS of binned residuals, error-count units.
    pub rms: f64,
    pub converged: bool,
    pub message: String,
    pub n_iterations: usize,
}

/// Fit h·exp(−(t−t0)/τ) + b to `series` from `onset_index` over `window_s`,
/// with b held at the pre-onset mean. The series is averaged into bins of
/// `bin_s` and the model is averaged over each bin the same way.
pub fn fit_event_decay(
    series: &[f64],
    onset_index: usize,
    window_s: f64,
    dt_s: f64,
    options: &DecayFitOptions,
) -> Result<DecayFit> {
    if !(dt_s > 0.0 && window_s > 0.0) {
        return Err(Error::Domain(format!("need dt, window > 0 (got {dt_s}, {window_s})")));
    }
    let want = (window_s / dt_s).round() as usize;
    let end = (onset_index + want).min(series.len());
    let n_window = end.saturating_sub(onset_index);
    if n_window < MIN_WINDOW_SAMPLES {
        return Err(Error::Domain(format!(
            "decay window has {n_window} samples after onset, need >= {MIN_WINDOW_SAMPLES}"
        )));
    }
    let bin = ((options.bin_s / dt_s).round() as usize).clamp(1, n_window / 3);
    let n_bins = n_window / bin;

    let pre = ((options.baseline_window_s / dt_s).round() as usize).min(onset_index);
    let baseline = if pre > 0 {
        mean(&series[onset_index - pre..onset_index])
    } else if end < series.len() {
        mean(&series[end..])
    } else {
        0.0
    };

    let data: Vec<f64> = (0..n_bins)
        .map(|j| mean(&series[onset_index + j * bin..onset_index + (j + 1) * bin]))
        .collect();
    let bin_start_t: Vec<f64> = (0..n_bins).map(|j| (j * bin) as f64 * dt_s).collect();
    let model = |h: f64, tau: f64| -> Vec<f64> {
        let inner = (0..bin).map(|k| (-(k as f64) * dt_s / tau).exp()).sum::<f64>() / bin as f64;
        bin_start_t.iter().map(|t| baseline + h * (-t / tau).exp() * inner).collect()
    };
    let residuals = |theta: &[f64]| -> Vec<f64> {
        model(theta[0].exp(), theta[1].exp())
            .iter()
            .zip(&data)
            .map(|(m, d)| m - d)
            .collect()
    };
    let h0 = (data[0] - baseline).max(0.1);
    let fit = levenberg_marquardt(residuals, &[h0.ln(), options.tau_init_s.ln()], &LmOptions::default());
    Ok(DecayFit {
        peak_height: fit.params[0].exp(),
        tau_fit_s: fit.params[1].exp(),
        baseline,
        rms: fit.rms_residual,
        converged: fit.converged,
        message: fit.message,
        n_iterations: fit.n_iterations,
    })
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}
