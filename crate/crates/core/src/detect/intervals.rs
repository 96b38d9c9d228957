use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalBin {
    pub lo_s: f64,
    pub hi_s: f64,
    pub observed: u64,
    /// Counts from the pure exponential law at the campaign rate.
    pub expected_exponential: f64,
    /// Counts from the same law restricted to pairs inside finite datasets.
    pub expected_windowed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalStats {
    pub intervals_s: Vec<f64>,
    pub n_events: usize,
    pub total_duration_s: f64,
    pub rate_per_s: f64,
    pub histogram: Vec<IntervalBin>,
    pub ks_exponential: Option<f64>,
    pub ks_windowed: Option<f64>,
    pub ks_critical_95: Option<f64>,
}

/// Neighbour intervals within each dataset and their comparison with a
/// Poisson process at λ = events / total duration.
///
/// `event_times_s` are campaign-global times; dataset d spans
/// [boundaries[d], boundaries[d+1]). Intervals are never formed across a
/// boundary. Because only pairs that fit inside one dataset are observed,
/// the interval law seen through windows of length L has density
/// ∝ (L − x)·e^{−λx}; both this and the plain exponential are reported.
pub fn inter_event_stats(event_times_s: &[f64], dataset_boundaries_s: &[f64], n_bins: usize) -> Result<IntervalStats> {
    if dataset_boundaries_s.len() < 2 {
        return Err(Error::Domain("need at least one dataset (two boundaries)".into()));
    }
    if dataset_boundaries_s.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain("dataset boundaries must be strictly increasing".into()));
    }
    if n_bins == 0 {
        return Err(Error::Domain("need at least one histogram bin".into()));
    }
    let mut times = event_times_s.to_vec();
    times.sort_by(f64::total_cmp);
    let lengths: Vec<f64> = dataset_boundaries_s.windows(2).map(|w| w[1] - w[0]).collect();
    let total: f64 = lengths.iter().sum();
    let rate = times.len() as f64 / total;

    let mut intervals = Vec::new();
    let mut current: Option<(usize, f64)> = None;
    for &t in &times {
        let d = dataset_boundaries_s.partition_point(|&b| b <= t);
        if d == 0 || d >= dataset_boundaries_s.len() {
            return Err(Error::Domain(format!("event at {t} s lies outside all datasets")));
        }
        if let Some((prev_d, prev_t)) = current {
            if prev_d == d {
                intervals.push(t - prev_t);
            }
        }
        current = Some((d, t));
    }

    let law = WindowedExponential::new(rate, &lengths);
    let max_len = lengths.iter().cloned().fold(0.0, f64::max);
    let width = max_len / n_bins as f64;
    let n = intervals.len() as f64;
    let histogram = (0..n_bins)
        .map(|b| {
            let lo = b as f64 * width;
            let hi = lo + width;
            let observed = intervals
                .iter()
                .filter(|&&x| x >= lo && (x < hi || (b + 1 == n_bins && x <= hi)))
                .count() as u64;
            IntervalBin {
                lo_s: lo,
                hi_s: hi,
                observed,
                expected_exponential: n * (exp_cdf(rate, hi) - exp_cdf(rate, lo)),
                expected_windowed: law.as_ref().map_or(f64::NAN, |l| n * (l.cdf(hi) - l.cdf(lo))),
            }
        })
        .collect();

    let (ks_exponential, ks_windowed, ks_critical_95) = if intervals.is_empty() || rate == 0.0 {
        (None, None, None)
    } else {
        let mut sorted = intervals.clone();
        sorted.sort_by(f64::total_cmp);
        let sn = (sorted.len() as f64).sqrt();
        (
            Some(ks_statistic(&sorted, |x| exp_cdf(rate, x))),
            law.as_ref().map(|l| ks_statistic(&sorted, |x| l.cdf(x))),
            Some(1.358 / (sn + 0.12 + 0.11 / sn)),
        )
    };

    Ok(IntervalStats {
        intervals_s: intervals,
        n_events: times.len(),
        total_duration_s: total,
        rate_per_s: rate,
        histogram,
        ks_exponential,
        ks_windowed,
        ks_critical_95,
    })
}

fn exp_cdf(rate: f64, x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -(-rate * x).exp_m1()
    }
}

/// Interval law of a rate-λ Poisson process seen in windows of lengths L_d:
/// a mixture of densities ∝ (L_d − x)₊·e^{−λx}.
struct WindowedExponential {
    rate: f64,
    lengths: Vec<f64>,
    total_mass: f64,
}

impl WindowedExponential {
    fn new(rate: f64, lengths: &[f64]) -> Option<Self> {
        if !(rate > 0.0) {
            return None;
        }
        let total_mass = lengths.iter().map(|&l| partial_mass(rate, l, l)).sum();
        Some(WindowedExponential {
            rate,
            lengths: lengths.to_vec(),
            total_mass,
        })
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let m: f64 = self.lengths.iter().map(|&l| partial_mass(self.rate, l, x.min(l))).sum();
        (m / self.total_mass).min(1.0)
    }
}

/// ∫₀ˣ (L − t)·e^{−λt} dt for 0 ≤ x ≤ L.
fn partial_mass(rate: f64, l: f64, x: f64) -> f64 {
    let e = (-rate * x).exp();
    // L(1 − e)/λ + (x·e)/λ − (1 − e)/λ²
    let one_minus_e = -(-rate * x).exp_m1();
    l * one_minus_e / rate + x * e / rate - one_minus_e / (rate * rate)
}

fn ks_statistic(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            ((i + 1) as f64 / n - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max)
}
