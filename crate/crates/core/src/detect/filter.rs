use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Decaying-exponential pulse shape, zero-mean and unit L2 norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterTemplate {
    pub tau_s: f64,
    pub dt_s: f64,
    pub n_samples: usize,
    pub values: Vec<f64>,
}

impl FilterTemplate {
    pub fn exponential(tau_s: f64, dt_s: f64, n_samples: usize) -> Result<Self> {
        if !(tau_s > 0.0 && dt_s > 0.0 && tau_s.is_finite() && dt_s.is_finite()) {
            return Err(Error::Domain(format!("template needs tau, dt > 0 (got {tau_s}, {dt_s})")));
        }
        if n_samples < 2 {
            return Err(Error::Domain(format!("template needs >= 2 samples, got {n_samples}")));
        }
        let raw: Vec<f64> = (0..n_samples).map(|k| (-(k as f64) * dt_s / tau_s).exp()).collect();
        let mean = raw.iter().sum::<f64>() / n_samples as f64;
        let centered: Vec<f64> = raw.iter().map(|v| v - mean).collect();
        let norm = centered.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::Domain("template is flat at this tau/dt".into()));
        }
        Ok(FilterTemplate {
            tau_s,
            dt_s,
            n_samples,
            values: centered.iter().map(|v| v / norm).collect(),
        })
    }

    /// Template spanning `length_in_tau`·τ.
    pub fn with_length(tau_s: f64, dt_s: f64, length_in_tau: f64) -> Result<Self> {
        let n = (length_in_tau * tau_s / dt_s).round();
        if !(n.is_finite() && n >= 2.0) {
            return Err(Error::Domain(format!("template length {length_in_tau}·τ is too short")));
        }
        Self::exponential(tau_s, dt_s, n as usize)
    }
}

/// Sliding normalized cross-correlation. Output index i scores a pulse
/// starting at i; the last n−1 indices are zero.
pub fn matched_filter(series: &[f64], template: &FilterTemplate) -> Result<Vec<f64>> {
    matched_filter_with(series, template, true)
}

/// As [`matched_filter`]; `normalize = false` skips division by the window σ,
/// leaving a filter that is linear in `series`.
pub fn matched_filter_with(series: &[f64], template: &FilterTemplate, normalize: bool) -> Result<Vec<f64>> {
    let n = template.values.len();
    let len = series.len();
    if n >= len {
        return Err(Error::Domain(format!(
            "template ({n} samples) must be shorter than the series ({len} samples)"
        )));
    }
    let mut out = vec![0.0; len];
    let t_sum: f64 = template.values.iter().sum();

    let mut prefix = Vec::with_capacity(len + 1);
    let mut prefix_sq = Vec::with_capacity(len + 1);
    prefix.push(0.0);
    prefix_sq.push(0.0);
    let (mut acc, mut acc_sq) = (0.0, 0.0);
    for &x in series {
        acc += x;
        acc_sq += x * x;
        prefix.push(acc);
        prefix_sq.push(acc_sq);
    }
    let global_mean = acc / len as f64;
    let global_sd = (series.iter().map(|x| (x - global_mean).powi(2)).sum::<f64>() / len as f64).sqrt();
    if normalize && global_sd == 0.0 {
        return Ok(out);
    }
    let floor = global_sd / 10.0;
    let nf = n as f64;

    for i in 0..=(len - n) {
        let mean = (prefix[i + n] - prefix[i]) / nf;
        let corr = dot(&series[i..i + n], &template.values) - mean * t_sum;
        out[i] = if normalize {
            let var = ((prefix_sq[i + n] - prefix_sq[i]) / nf - mean * mean).max(0.0);
            corr / var.sqrt().max(floor)
        } else {
            corr
        };
    }
    Ok(out)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let ca = a.chunks_exact(4);
    let cb = b.chunks_exact(4);
    let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x * y).sum();
    for (x, y) in ca.zip(cb) {
        for k in 0..4 {
            acc[k] += x[k] * y[k];
        }
    }
    acc.iter().sum::<f64>() + tail
}
