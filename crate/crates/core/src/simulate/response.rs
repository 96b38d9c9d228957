use crate::device::{per_cycle_error_prob_from_rate, DeviceConfig};
use crate::error::Result;
use crate::physics::{gamma_qp_per_unit_density, PhysicalConstants, QpEnvironment};

#[derive(Debug, Clone, Copy)]
struct QubitResponse {
    gamma_bkgd_per_s: f64,
    gamma_qp_per_unit_x: f64,
    fidelity: f64,
}

/// Per-qubit error probability as a function of the chip-wide QP density.
///
/// Γ_qp is linear in x_qp, so the tunneling integral is evaluated once per
/// qubit at construction.
#[derive(Debug, Clone)]
pub struct DeviceResponse {
    qubits: Vec<QubitResponse>,
    idle_time_us: f64,
}

impl DeviceResponse {
    pub fn new(device: &DeviceConfig, env: &QpEnvironment, constants: &PhysicalConstants) -> Result<Self> {
        env.validate()?;
        let qubits = device
            .qubits
            .iter()
            .map(|q| {
                let profile = q.gap_profile(constants)?;
                Ok(QubitResponse {
                    gamma_bkgd_per_s: q.gamma_bkgd_per_s(),
                    gamma_qp_per_unit_x: gamma_qp_per_unit_density(
                        q.f_idle_GHz,
                        &profile,
                        env.T_qp_K,
                        env.w_GHz,
                    )?,
                    fidelity: q.readout_assignment_fidelity,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DeviceResponse {
            qubits,
            idle_time_us: device.idle_time_us,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.qubits.len()
    }

    /// Total decay rate of qubit `q` at density `x_qp` (s⁻¹).
    pub fn decay_rate(&self, q: usize, x_qp: f64) -> f64 {
        let r = &self.qubits[q];
        r.gamma_bkgd_per_s + r.gamma_qp_per_unit_x * x_qp
    }

    pub fn gamma_qp_per_unit_x(&self, q: usize) -> f64 {
        self.qubits[q].gamma_qp_per_unit_x
    }

    pub fn error_prob(&self, q: usize, x_qp: f64) -> f64 {
        per_cycle_error_prob_from_rate(self.decay_rate(q, x_qp), self.idle_time_us, self.qubits[q].fidelity)
    }

    pub fn error_probs(&self, x_qp: f64) -> Vec<f64> {
        (0..self.qubits.len()).map(|q| self.error_prob(q, x_qp)).collect()
    }
}
