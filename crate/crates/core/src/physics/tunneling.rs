use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::quadrature::GaussLegendre;
use super::{JunctionGapProfile, KB_OVER_H_GHZ_PER_K};
use crate::error::{Error, Result};

/// Upper limit of the substituted variable u, where ε − Δ_thick = u²·k_B·T_qp.
/// exp(−36) < 3e−16, below double precision relative to the integral.
pub(crate) const U_MAX: f64 = 6.0;

/// Quasiparticle state seen by a junction.
#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QpEnvironment {
    pub x_qp: f64,
    pub T_qp_K: f64,
    pub w_GHz: f64,
}

impl QpEnvironment {
    pub fn new(x_qp: f64, t_qp_k: f64, w_ghz: f64) -> Result<Self> {
        let env = QpEnvironment {
            x_qp,
            T_qp_K: t_qp_k,
            w_GHz: w_ghz,
        };
        env.validate()?;
        Ok(env)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_qp >= 0.0 && self.x_qp.is_finite()) {
            return Err(Error::Domain(format!("x_qp must be >= 0, got {}", self.x_qp)));
        }
        if !(self.T_qp_K > 0.0 && self.T_qp_K.is_finite()) {
            return Err(Error::Domain(format!("T_qp must be > 0, got {}", self.T_qp_K)));
        }
        if !(self.w_GHz > 0.0 && self.w_GHz.is_finite()) {
            return Err(Error::Domain(format!("w must be > 0, got {}", self.w_GHz)));
        }
        Ok(())
    }

    pub fn with_x_qp(mut self, x_qp: f64) -> Self {
        self.x_qp = x_qp;
        self
    }
}

/// QP-tunneling decay rate Γ↓,qp (s⁻¹) for a qubit at `f_q_ghz`.
///
/// Only thick→thin tunneling that absorbs the qubit quantum is counted. The
/// energy integral is taken over u with ε = Δ_thick + k_B·T_qp·u², which
/// removes the inverse-square-root edge singularity.
pub fn gamma_qp(f_q_ghz: f64, profile: &JunctionGapProfile, env: &QpEnvironment) -> Result<f64> {
    gamma_qp_with_rule(GaussLegendre::standard(), f_q_ghz, profile, env)
}

pub fn gamma_qp_with_rule(
    rule: &GaussLegendre,
    f_q_ghz: f64,
    profile: &JunctionGapProfile,
    env: &QpEnvironment,
) -> Result<f64> {
    if !(f_q_ghz > 0.0) {
        return Err(Error::Domain(format!("qubit frequency must be > 0, got {f_q_ghz}")));
    }
    env.validate()?;
    Ok(unit_rate(rule, f_q_ghz, profile, env.T_qp_K, env.w_GHz) * env.x_qp)
}

/// Γ↓,qp per unit x_qp. The rate is linear in x_qp, so simulators evaluate
/// this once per qubit and scale.
pub fn gamma_qp_per_unit_density(
    f_q_ghz: f64,
    profile: &JunctionGapProfile,
    t_qp_k: f64,
    w_ghz: f64,
) -> Result<f64> {
    let env = QpEnvironment::new(1.0, t_qp_k, w_ghz)?;
    gamma_qp(f_q_ghz, profile, &env)
}

fn unit_rate(
    rule: &GaussLegendre,
    f_q_ghz: f64,
    profile: &JunctionGapProfile,
    t_qp_k: f64,
    w_ghz: f64,
) -> f64 {
    let kt = KB_OVER_H_GHZ_PER_K * t_qp_k;
    let detuning = f_q_ghz - profile.gap_difference_GHz;
    let integral = rule.integrate(0.0, U_MAX, |u| {
        let z = Complex64::new(kt * u * u + detuning, w_ghz);
        // Re(1/√z) = Re(√z)/|z| on the principal branch
        (-u * u).exp() * z.sqrt().re / z.norm()
    });
    let prefactor = (2.0 * profile.delta_thick_GHz / PI).sqrt();
    2.0 * f_q_ghz * 1e9 * prefactor * integral
}

/// 1/T1 = Γ_bkgd + Γ_qp. Returns seconds.
pub fn t1_from_rates(gamma_bkgd_per_s: f64, gamma_qp_per_s: f64) -> Result<f64> {
    let total = gamma_bkgd_per_s + gamma_qp_per_s;
    if !(total > 0.0) || gamma_bkgd_per_s < 0.0 || gamma_qp_per_s < 0.0 {
        return Err(Error::Domain(format!(
            "decay rates must be non-negative with a positive sum, got {gamma_bkgd_per_s} + {gamma_qp_per_s}"
        )));
    }
    Ok(1.0 / total)
}

/// Coefficient a in Δf_q/f_q = −a·x_qp, valid for δΔ > h·f_q.
pub fn freq_shift_coefficient(gap_difference_ghz: f64, f_q_ghz: f64, bulk_gap_ghz: f64) -> Result<f64> {
    if !(gap_difference_ghz > f_q_ghz) {
        return Err(Error::Domain(format!(
            "frequency-shift formula needs δΔ/h > f_q ({gap_difference_ghz} <= {f_q_ghz} GHz)"
        )));
    }
    if !(f_q_ghz > 0.0 && bulk_gap_ghz > 0.0) {
        return Err(Error::Domain("f_q and Δ must be positive".into()));
    }
    let plus = (2.0 * bulk_gap_ghz / (gap_difference_ghz + f_q_ghz)).sqrt();
    let minus = (2.0 * bulk_gap_ghz / (gap_difference_ghz - f_q_ghz)).sqrt();
    Ok(0.5 * (plus + minus) / (2.0 * PI))
}

/// Absolute qubit frequency shift in GHz (always ≤ 0).
pub fn frequency_shift(f_q_ghz: f64, x_qp: f64, a: f64) -> f64 {
    -a * x_qp * f_q_ghz
}
