use serde::{Deserialize, Serialize};

use crate::device::DeviceConfig;
use crate::error::{Error, Result};
use crate::physics::{
    freq_shift_coefficient, frequency_shift, gamma_qp, steady_state_xqp, PhysicalConstants,
    QpDynamicsParams, QpEnvironment,
};

/// QP dynamics under illumination: generation g = g_dark + α·P.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IlluminationModel {
    pub s_per_s: f64,
    pub r_per_s: f64,
    pub g_dark_per_s: f64,
    /// Generation rate per unit normalized optical power.
    pub alpha_per_s: f64,
}

impl IlluminationModel {
    pub fn dynamics_at(&self, power: f64) -> Result<QpDynamicsParams> {
        QpDynamicsParams::new(self.s_per_s, self.r_per_s, self.g_dark_per_s + self.alpha_per_s * power)
    }
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IlluminationPoint {
    pub normalized_power: f64,
    pub x_qp_ss: f64,
    pub per_qubit_t1_us: Vec<f64>,
    /// `None` where δΔ ≤ h·f_idle and the shift formula does not apply.
    pub per_qubit_freq_shift_GHz: Vec<Option<f64>>,
}

/// Steady-state response of every qubit at each optical power.
///
/// `t_qp_per_power`, when given, overrides the template QP temperature
/// point by point (heating under strong illumination).
pub fn simulate_illumination(
    device: &DeviceConfig,
    powers: &[f64],
    model: &IlluminationModel,
    env_template: &QpEnvironment,
    t_qp_per_power: Option<&[f64]>,
) -> Result<Vec<IlluminationPoint>> {
    simulate_illumination_with(device, powers, model, env_template, t_qp_per_power, &PhysicalConstants::REFERENCE)
}

pub fn simulate_illumination_with(
    device: &DeviceConfig,
    powers: &[f64],
    model: &IlluminationModel,
    env_template: &QpEnvironment,
    t_qp_per_power: Option<&[f64]>,
    constants: &PhysicalConstants,
) -> Result<Vec<IlluminationPoint>> {
    if powers.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(Error::Domain("normalized optical powers must lie in [0, 1]".into()));
    }
    if powers.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Domain("optical powers must be sorted".into()));
    }
    if let Some(t) = t_qp_per_power {
        if t.len() != powers.len() {
            return Err(Error::Domain("one T_qp per power required".into()));
        }
    }
    let profiles = device
        .qubits
        .iter()
        .map(|q| q.gap_profile(constants))
        .collect::<Result<Vec<_>>>()?;

    powers
        .iter()
        .enumerate()
        .map(|(i, &power)| {
            let x_ss = steady_state_xqp(&model.dynamics_at(power)?)?;
            let mut env = env_template.with_x_qp(x_ss);
            if let Some(t) = t_qp_per_power {
                env.T_qp_K = t[i];
            }
            let mut t1 = Vec::with_capacity(device.n_qubits());
            let mut shifts = Vec::with_capacity(device.n_qubits());
            for (q, profile) in device.qubits.iter().zip(&profiles) {
                let rate = q.gamma_bkgd_per_s() + gamma_qp(q.f_idle_GHz, profile, &env)?;
                t1.push(1e6 / rate);
                shifts.push(if profile.gap_difference_GHz > q.f_idle_GHz {
                    let a = freq_shift_coefficient(
                        profile.gap_difference_GHz,
                        q.f_idle_GHz,
                        constants.bulk_gap_over_h_GHz,
                    )?;
                    Some(frequency_shift(q.f_idle_GHz, x_ss, a))
                } else {
                    None
                });
            }
            Ok(IlluminationPoint {
                normalized_power: power,
                x_qp_ss: x_ss,
                per_qubit_t1_us: t1,
                per_qubit_freq_shift_GHz: shifts,
            })
        })
        .collect()
}
