//! Levenberg-Marquardt engine and the model fits built on it.

mod lm;
mod power;
mod report;
mod spectrum;

pub use lm::{central_jacobian, forward_jacobian, levenberg_marquardt, FitResult, LmOptions};
pub use power::{
    fit_power_scaling, fit_steady_state_curve, steady_state_curve, uv_from_rates, PowerLaw, SteadyStateFit,
    STEADY_STATE_PARAM_NAMES,
};
pub use report::{FitReport, ParamEstimate};
pub use spectrum::{
    fit_t1_spectrum, heuristic_init, spectrum_model, SpectrumDataset, SpectrumFitOptions, SpectrumInit,
    SpectrumWeighting, SPECTRUM_PARAM_NAMES,
};
