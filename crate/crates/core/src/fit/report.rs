use serde::{Deserialize, Serialize};

use super::lm::FitResult;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamEstimate {
    pub name: String,
    pub value: f64,
    /// None when the linearized σ is undefined.
    pub sigma: Option<f64>,
}

impl ParamEstimate {
    pub fn new(name: impl Into<String>, value: f64, sigma: f64) -> Self {
        ParamEstimate {
            name: name.into(),
            value,
            sigma: sigma.is_finite().then_some(sigma),
        }
    }
}

/// Serializable summary of one fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub model: String,
    pub n_points: usize,
    pub params: Vec<ParamEstimate>,
    pub rms_residual: Option<f64>,
    pub n_iterations: usize,
    pub converged: bool,
    pub message: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub derived: Vec<ParamEstimate>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl FitReport {
    pub fn from_fit(model: impl Into<String>, names: &[&str], n_points: usize, fit: &FitResult) -> Self {
        let params = names
            .iter()
            .zip(fit.params.iter().zip(&fit.param_sigmas))
            .map(|(n, (v, s))| ParamEstimate::new(*n, *v, *s))
            .collect();
        FitReport {
            model: model.into(),
            n_points,
            params,
            rms_residual: fit.rms_residual.is_finite().then_some(fit.rms_residual),
            n_iterations: fit.n_iterations,
            converged: fit.converged,
            message: fit.message.clone(),
            derived: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn param(&self, name: &str) -> Option<&ParamEstimate> {
        self.params.iter().chain(&self.derived).find(|p| p.name == name)
    }
}
