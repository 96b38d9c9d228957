//! The 12-qubit checkerboard device and independent-error probabilities.

mod config;
mod reference;

pub use config::{load_device, save_device, DeviceConfig, GapEngineeringKind, QubitSpec};
pub use reference::build_reference_device;

/// Probability that a qubit prepared in |1⟩ reads 0 after idling.
///
/// Relaxation during the idle and a symmetric assignment error compose as
/// independent survival probabilities: p = 1 − exp(−idle/T1)·F.
/// `t1_effective_us = f64::INFINITY` means no relaxation.
pub fn per_cycle_error_prob(spec: &QubitSpec, t1_effective_us: f64, idle_time_us: f64) -> f64 {
    debug_assert!(t1_effective_us > 0.0 && idle_time_us >= 0.0);
    let survive = (-idle_time_us / t1_effective_us).exp();
    (1.0 - survive * spec.readout_assignment_fidelity).clamp(0.0, 1.0)
}

/// Same as [`per_cycle_error_prob`] with the total decay rate (s⁻¹) in place
/// of T1, so a zero rate needs no infinity.
pub fn per_cycle_error_prob_from_rate(
    decay_rate_per_s: f64,
    idle_time_us: f64,
    readout_assignment_fidelity: f64,
) -> f64 {
    let survive = (-decay_rate_per_s * idle_time_us * 1e-6).exp();
    (1.0 - survive * readout_assignment_fidelity).clamp(0.0, 1.0)
}
