use rand::Rng;
use rand_distr::{Distribution, Exp, Normal};
use serde::{Deserialize, Serialize};

use super::rng;
use crate::error::{Error, Result};

/// A high-energy impact: chip-wide QP surge that decays exponentially.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImpactEvent {
    pub t0_s: f64,
    pub x0: f64,
    pub tau_decay_s: f64,
}

impl ImpactEvent {
    pub fn new(t0_s: f64, x0: f64, tau_decay_s: f64) -> Result<Self> {
        if !(t0_s >= 0.0 && x0 > 0.0 && tau_decay_s > 0.0) {
            return Err(Error::Domain(format!(
                "impact event needs t0 >= 0, x0 > 0, tau > 0 (got {t0_s}, {x0}, {tau_decay_s})"
            )));
        }
        Ok(ImpactEvent { t0_s, x0, tau_decay_s })
    }

    /// Contribution to x_qp at time `t_s` (zero before onset).
    pub fn density_at(&self, t_s: f64) -> f64 {
        if t_s < self.t0_s {
            0.0
        } else {
            self.x0 * (-(t_s - self.t0_s) / self.tau_decay_s).exp()
        }
    }
}

/// Homogeneous Poisson arrival times on [0, duration) from exponential gaps.
pub fn sample_impact_times(rate_per_s: f64, duration_s: f64, seed: u64) -> Vec<f64> {
    sample_times_with(&mut rng::stream(seed, rng::EVENT_STREAM), rate_per_s, duration_s)
}

fn sample_times_with<R: Rng>(rng: &mut R, rate_per_s: f64, duration_s: f64) -> Vec<f64> {
    let mut times = Vec::new();
    if !(rate_per_s > 0.0) || !(duration_s > 0.0) {
        return times;
    }
    let gap = Exp::new(rate_per_s).expect("positive rate");
    let mut t = gap.sample(rng);
    while t < duration_s {
        times.push(t);
        t += gap.sample(rng);
    }
    times
}

/// QP density at `t_s`: floor plus the superposed tails of all events that
/// have started. `events` must be sorted by onset.
pub fn xqp_at(t_s: f64, events: &[ImpactEvent], x_floor: f64) -> f64 {
    x_floor
        + events
            .iter()
            .take_while(|e| e.t0_s <= t_s)
            .map(|e| e.density_at(t_s))
            .sum::<f64>()
}

/// Distribution of impact events used for synthetic campaigns.
///
/// Peak densities are log-uniform over `amplitude_range` and recovery times
/// Gaussian, redrawn until at least `tau_min_s`. Neither law is measured;
/// both are placeholders for a deposited-energy model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImpactModel {
    pub rate_per_s: f64,
    pub amplitude_range: (f64, f64),
    pub tau_mean_s: f64,
    pub tau_sigma_s: f64,
    pub tau_min_s: f64,
}

impl Default for ImpactModel {
    fn default() -> Self {
        ImpactModel {
            rate_per_s: 1.0 / 38.96,
            amplitude_range: (1e-6, 1e-5),
            tau_mean_s: 8.5e-3,
            tau_sigma_s: 2e-3,
            tau_min_s: 1e-3,
        }
    }
}

impl ImpactModel {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.amplitude_range;
        if !(self.rate_per_s >= 0.0 && self.rate_per_s.is_finite()) {
            return Err(Error::Config(format!("event rate must be >= 0, got {}", self.rate_per_s)));
        }
        if !(lo > 0.0 && hi >= lo) {
            return Err(Error::Config(format!("amplitude range must satisfy 0 < lo <= hi, got ({lo}, {hi})")));
        }
        if !(self.tau_mean_s > 0.0 && self.tau_sigma_s >= 0.0 && self.tau_min_s > 0.0) {
            return Err(Error::Config("tau mean/min must be > 0 and sigma >= 0".into()));
        }
        Ok(())
    }

    /// Draws the events of one dataset, sorted by onset.
    pub fn sample_events<R: Rng>(&self, rng: &mut R, duration_s: f64) -> Vec<ImpactEvent> {
        let times = sample_times_with(rng, self.rate_per_s, duration_s);
        let (lo, hi) = self.amplitude_range;
        let (ln_lo, ln_hi) = (lo.ln(), hi.ln());
        let tau_dist = Normal::new(self.tau_mean_s, self.tau_sigma_s).expect("valid normal");
        times
            .into_iter()
            .map(|t0_s| {
                let x0 = if hi > lo {
                    (ln_lo + (ln_hi - ln_lo) * rng.random::<f64>()).exp()
                } else {
                    lo
                };
                let tau_decay_s = loop {
                    let tau = tau_dist.sample(rng);
                    if tau >= self.tau_min_s {
                        break tau;
                    }
                };
                ImpactEvent { t0_s, x0, tau_decay_s }
            })
            .collect()
    }

    pub fn sample_events_seeded(&self, seed: u64, duration_s: f64) -> Vec<ImpactEvent> {
        self.sample_events(&mut rng::stream(seed, rng::EVENT_STREAM), duration_s)
    }
}
