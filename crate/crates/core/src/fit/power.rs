use serde::{Deserialize, Serialize};

use super::lm::{levenberg_marquardt, FitResult, LmOptions};
use super::spectrum::to_natural;
use crate::error::{Error, Result};

pub const STEADY_STATE_PARAM_NAMES: [&str; 2] = ["u", "v"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLaw {
    pub exponent: f64,
    pub prefactor: f64,
}

/// OLS fit of log V = exponent·log P + log prefactor.
pub fn fit_power_scaling(powers: &[f64], values: &[f64]) -> Result<PowerLaw> {
    if powers.len() != values.len() {
        return Err(Error::Domain(format!(
            "length mismatch: {} powers, {} values",
            powers.len(),
            values.len()
        )));
    }
    if powers.len() < 3 {
        return Err(Error::Domain(format!("need >= 3 points, got {}", powers.len())));
    }
    if let Some((p, v)) = powers
        .iter()
        .zip(values)
        .find(|(p, v)| !(**p > 0.0 && **v > 0.0 && p.is_finite() && v.is_finite()))
    {
        return Err(Error::Domain(format!("power law needs positive inputs, got ({p}, {v})")));
    }
    let n = powers.len() as f64;
    let xs: Vec<f64> = powers.iter().map(|p| p.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::Domain("all powers are identical".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok(PowerLaw {
        exponent: slope,
        prefactor: (my - slope * mx).exp(),
    })
}

/// x(P) = 2uP / (1 + √(1 + 4vP)).
pub fn steady_state_curve(power: f64, u: f64, v: f64) -> f64 {
    2.0 * u * power / (1.0 + (1.0 + 4.0 * v * power).sqrt())
}

/// (u, v) = (α/s, α·r/s²) for generation g = α·P.
pub fn uv_from_rates(s_per_s: f64, r_per_s: f64, alpha_per_s: f64) -> (f64, f64) {
    (alpha_per_s / s_per_s, alpha_per_s * r_per_s / (s_per_s * s_per_s))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteadyStateFit {
    /// Natural-scale (u, v).
    pub fit: FitResult,
    pub r_over_s: f64,
    pub r_over_s_sigma: f64,
    /// Set when the data cannot pin v (relative σ above 100% or undefined).
    pub ratio_indeterminate: bool,
}

impl SteadyStateFit {
    pub fn u(&self) -> f64 {
        self.fit.params[0]
    }

    pub fn v(&self) -> f64 {
        self.fit.params[1]
    }

    /// Power where 4vP = 1, the linear/√ boundary.
    pub fn crossover_power(&self) -> f64 {
        1.0 / (4.0 * self.v())
    }

    /// s = r / (r/s) for an externally supplied recombination rate.
    pub fn trapping_rate_per_s(&self, r_per_s: f64) -> f64 {
        r_per_s / self.r_over_s
    }
}

/// Fit of the (u, v) steady-state curve in log-residuals (multiplicative
/// noise), over log-parameters.
pub fn fit_steady_state_curve(powers: &[f64], x_qp: &[f64], options: &LmOptions) -> Result<SteadyStateFit> {
    if powers.len() != x_qp.len() {
        return Err(Error::Domain(format!(
            "length mismatch: {} powers, {} densities",
            powers.len(),
            x_qp.len()
        )));
    }
    if powers.len() < 3 {
        return Err(Error::Domain(format!("need >= 3 points, got {}", powers.len())));
    }
    if let Some((p, x)) = powers
        .iter()
        .zip(x_qp)
        .find(|(p, x)| !(**p > 0.0 && **x > 0.0 && p.is_finite() && x.is_finite()))
    {
        return Err(Error::Domain(format!("steady-state fit needs positive inputs, got ({p}, {x})")));
    }
    let mut idx: Vec<usize> = (0..powers.len()).collect();
    idx.sort_by(|&a, &b| powers[a].total_cmp(&powers[b]));
    let (p_lo, x_lo) = (powers[idx[0]], x_qp[idx[0]]);
    let (p_hi, x_hi) = (powers[idx[idx.len() - 1]], x_qp[idx[idx.len() - 1]]);

    // u from the lowest point assuming it is linear, v by inverting the curve
    // at the highest point
    let u0 = x_lo / p_lo;
    let k = 2.0 * u0 * p_hi / x_hi - 1.0;
    let v_est = (k * k - 1.0) / (4.0 * p_hi);
    let v0 = if v_est > 0.0 && v_est.is_finite() { v_est } else { 1e-3 / p_hi };

    let log_x: Vec<f64> = x_qp.iter().map(|x| x.ln()).collect();
    let residuals = |theta: &[f64]| -> Vec<f64> {
        let (u, v) = (theta[0].exp(), theta[1].exp());
        powers
            .iter()
            .zip(&log_x)
            .map(|(&p, lx)| steady_state_curve(p, u, v).ln() - lx)
            .collect()
    };
    let fit = to_natural(levenberg_marquardt(residuals, &[u0.ln(), v0.ln()], options));

    let (u, v) = (fit.params[0], fit.params[1]);
    let r_over_s = v / u;
    // σ of ln(v/u) from the covariance in log space
    let rel_u = fit.param_sigmas[0] / u;
    let rel_v = fit.param_sigmas[1] / v;
    let rho = fit.covariance[0][1] / (u * v);
    let var_ln = rel_u * rel_u + rel_v * rel_v - 2.0 * rho;
    let r_over_s_sigma = r_over_s * var_ln.max(0.0).sqrt();
    let ratio_indeterminate = !(rel_v.is_finite() && rel_v <= 1.0);
    Ok(SteadyStateFit {
        fit,
        r_over_s,
        r_over_s_sigma,
        ratio_indeterminate,
    })
}
