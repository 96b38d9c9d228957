use std::f64::consts::PI;

use super::PhysicalConstants;
use crate::error::{Error, Result};

const T_MIN_K: f64 = 1e-3;

fn ln_xqp(c: &PhysicalConstants, t_k: f64, bulk_gap_ghz: f64) -> f64 {
    let ratio = c.thermal_ghz(t_k) / bulk_gap_ghz;
    0.5 * (2.0 * PI * ratio).ln() - 1.0 / ratio
}

impl PhysicalConstants {
    /// Thermal-equilibrium QP density √(2π k_B T/Δ)·exp(−Δ/k_B T).
    pub fn bcs_equilibrium_xqp(&self, t_k: f64, bulk_gap_ghz: f64) -> Result<f64> {
        if !(t_k > 0.0) || !(bulk_gap_ghz > 0.0) {
            return Err(Error::Domain(format!(
                "temperature and gap must be positive, got T={t_k} K, Δ={bulk_gap_ghz} GHz"
            )));
        }
        Ok(ln_xqp(self, t_k, bulk_gap_ghz).exp())
    }

    /// Temperature at which the equilibrium density equals `x_qp`, by
    /// bisection on [1 mK, Δ/k_B].
    pub fn bcs_temperature_for_xqp(&self, x_qp: f64, bulk_gap_ghz: f64) -> Result<f64> {
        if !(x_qp > 0.0 && x_qp < 1.0) || !(bulk_gap_ghz > 0.0) {
            return Err(Error::Domain(format!("x_qp must lie in (0, 1), got {x_qp}")));
        }
        let target = x_qp.ln();
        let mut lo = T_MIN_K;
        let mut hi = bulk_gap_ghz / self.kB_over_h_GHz_per_K;
        let ln_lo = ln_xqp(self, lo, bulk_gap_ghz);
        let ln_hi = ln_xqp(self, hi, bulk_gap_ghz);
        if !(target > ln_lo && target < ln_hi) {
            return Err(Error::Domain(format!(
                "x_qp = {x_qp} is outside the reachable range ({:e}, {:e})",
                ln_lo.exp(),
                ln_hi.exp()
            )));
        }
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            let ln_mid = ln_xqp(self, mid, bulk_gap_ghz);
            // |x(T)/x − 1| < 1e−10 ⇔ |Δln x| < ~1e−10
            if (ln_mid - target).abs() < 1e-11 {
                return Ok(mid);
            }
            if ln_mid < target {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= f64::EPSILON * hi {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

pub fn bcs_equilibrium_xqp(t_k: f64, bulk_gap_ghz: f64) -> Result<f64> {
    PhysicalConstants::REFERENCE.bcs_equilibrium_xqp(t_k, bulk_gap_ghz)
}

pub fn bcs_temperature_for_xqp(x_qp: f64, bulk_gap_ghz: f64) -> Result<f64> {
    PhysicalConstants::REFERENCE.bcs_temperature_for_xqp(x_qp, bulk_gap_ghz)
}
