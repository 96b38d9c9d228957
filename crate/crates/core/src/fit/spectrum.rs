use serde::{Deserialize, Serialize};

use super::lm::{levenberg_marquardt, FitResult, LmOptions};
use crate::error::{Error, Result};
use crate::physics::{gamma_qp, JunctionGapProfile, QpEnvironment};

pub const SPECTRUM_PARAM_NAMES: [&str; 4] = ["gap_difference_GHz", "T_qp_K", "x_qp", "w_GHz"];

const MIN_POINTS: usize = 8;

/// Baseline-subtracted QP decay spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumDataset {
    /// (f_q in GHz, Γ_qp in s⁻¹), f_q strictly increasing.
    pub points: Vec<(f64, f64)>,
    pub gamma_bkgd_per_s: f64,
    /// Points whose subtracted rate came out negative and were set to 0.
    pub n_clipped: usize,
}

impl SpectrumDataset {
    /// Build from measured total 1/T1 values, subtracting `gamma_bkgd_per_s`.
    pub fn from_measured(raw: &[(f64, f64)], gamma_bkgd_per_s: f64) -> Result<Self> {
        if !(gamma_bkgd_per_s >= 0.0 && gamma_bkgd_per_s.is_finite()) {
            return Err(Error::Domain(format!(
                "background rate must be >= 0, got {gamma_bkgd_per_s}"
            )));
        }
        let mut n_clipped = 0;
        let mut points = Vec::with_capacity(raw.len());
        for (i, &(f, rate)) in raw.iter().enumerate() {
            if !(f > 0.0 && f.is_finite() && rate.is_finite()) {
                return Err(Error::Data(format!("spectrum point {i} is not finite/positive: ({f}, {rate})")));
            }
            if let Some(&(prev, _)) = points.last() {
                if f <= prev {
                    return Err(Error::Data(format!(
                        "frequencies must be strictly increasing (point {i}: {f} after {prev})"
                    )));
                }
            }
            let sub = rate - gamma_bkgd_per_s;
            if sub < 0.0 {
                n_clipped += 1;
            }
            points.push((f, sub.max(0.0)));
        }
        Ok(SpectrumDataset {
            points,
            gamma_bkgd_per_s,
            n_clipped,
        })
    }

    pub fn frequencies(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumWeighting {
    #[default]
    Unweighted,
    /// Residuals divided by the measured rate (floored at 1e-3 of the peak).
    Relative,
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumFitOptions {
    pub delta_thick_GHz: f64,
    pub weighting: SpectrumWeighting,
    pub lm: LmOptions,
}

impl Default for SpectrumFitOptions {
    fn default() -> Self {
        SpectrumFitOptions {
            delta_thick_GHz: 50.0,
            weighting: SpectrumWeighting::Unweighted,
            lm: LmOptions::default(),
        }
    }
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumInit {
    pub gap_difference_GHz: f64,
    pub env: QpEnvironment,
}

impl SpectrumInit {
    fn to_vec(self) -> [f64; 4] {
        [self.gap_difference_GHz, self.env.T_qp_K, self.env.x_qp, self.env.w_GHz]
    }
}

/// Γ_qp(f) for natural-scale parameters (δΔ, T_qp, x_qp, w).
pub fn spectrum_model(f_q_ghz: f64, params: &[f64; 4], delta_thick_ghz: f64) -> Result<f64> {
    let profile = JunctionGapProfile::from_gaps(delta_thick_ghz, params[0]);
    let env = QpEnvironment::new(params[2], params[1], params[3])?;
    gamma_qp(f_q_ghz, &profile, &env)
}

/// Initialization from the data alone: δΔ at the spectrum argmax, T_qp = 20 mK,
/// w = 0.15 GHz, x_qp matched to the peak height.
pub fn heuristic_init(data: &SpectrumDataset, delta_thick_ghz: f64) -> Result<SpectrumInit> {
    let (f_peak, y_peak) = argmax(&data.points).ok_or_else(|| Error::Data("empty spectrum".into()))?;
    let unit = spectrum_model(f_peak, &[f_peak, 0.02, 1.0, 0.15], delta_thick_ghz)?;
    let x = if y_peak > 0.0 && unit > 0.0 { y_peak / unit } else { 1e-6 };
    Ok(SpectrumInit {
        gap_difference_GHz: f_peak,
        env: QpEnvironment::new(x, 0.02, 0.15)?,
    })
}

fn argmax(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    points.iter().copied().max_by(|a, b| a.1.total_cmp(&b.1))
}

/// Four-parameter fit of the QP tunneling model to a baseline-subtracted
/// spectrum. Parameters come back on the natural scale in the order of
/// [`SPECTRUM_PARAM_NAMES`].
pub fn fit_t1_spectrum(
    data: &SpectrumDataset,
    init: Option<&SpectrumInit>,
    options: &SpectrumFitOptions,
) -> Result<FitResult> {
    let n = data.points.len();
    if n < MIN_POINTS {
        return Err(Error::Domain(format!("spectrum fit needs >= {MIN_POINTS} points, got {n}")));
    }
    if !(options.delta_thick_GHz > 0.0) {
        return Err(Error::Config(format!(
            "delta_thick_GHz must be > 0, got {}",
            options.delta_thick_GHz
        )));
    }
    let f_min = data.points[0].0;
    let f_max = data.points[n - 1].0;
    let init = match init {
        Some(i) => {
            i.env.validate()?;
            *i
        }
        None => heuristic_init(data, options.delta_thick_GHz)?,
    };
    let init_vec = init.to_vec();

    let peak_idx = data
        .points
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    if peak_idx == 0 || peak_idx == n - 1 {
        return Ok(FitResult::not_run(init_vec.to_vec(), "resonance not bracketed"));
    }

    let y_max = data.points[peak_idx].1;
    if !(y_max > 0.0) {
        return Err(Error::Data("spectrum is identically zero after baseline subtraction".into()));
    }
    let scales: Vec<f64> = data
        .points
        .iter()
        .map(|&(_, y)| match options.weighting {
            SpectrumWeighting::Unweighted => 1.0 / y_max,
            SpectrumWeighting::Relative => 1.0 / y.max(1e-3 * y_max),
        })
        .collect();
    let delta_thick = options.delta_thick_GHz;
    let residuals = |theta: &[f64]| -> Vec<f64> {
        let p = [theta[0].exp(), theta[1].exp(), theta[2].exp(), theta[3].exp()];
        data.points
            .iter()
            .zip(&scales)
            .map(|(&(f, y), s)| match spectrum_model(f, &p, delta_thick) {
                Ok(m) => (m - y) * s,
                Err(_) => f64::NAN,
            })
            .collect()
    };
    let theta0: Vec<f64> = init_vec.iter().map(|v| v.ln()).collect();
    if theta0.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain(format!("initial parameters must be > 0, got {init_vec:?}")));
    }
    let fit = levenberg_marquardt(residuals, &theta0, &options.lm);
    // rms stays in the scaled units: fraction of the peak rate when unweighted
    let mut out = to_natural(fit);
    if !(out.params[0] >= f_min && out.params[0] <= f_max) {
        out.converged = false;
        out.message = "resonance not bracketed".into();
    }
    Ok(out)
}

/// Map a fit over log-parameters to natural scale (delta method for σ).
pub(crate) fn to_natural(mut fit: FitResult) -> FitResult {
    let vals: Vec<f64> = fit.params.iter().map(|t| t.exp()).collect();
    fit.param_sigmas = fit.param_sigmas.iter().zip(&vals).map(|(s, v)| s * v).collect();
    for (i, row) in fit.covariance.iter_mut().enumerate() {
        for (j, c) in row.iter_mut().enumerate() {
            *c *= vals[i] * vals[j];
        }
    }
    fit.params = vals;
    fit
}
