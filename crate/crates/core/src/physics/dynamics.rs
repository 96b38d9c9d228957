use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rates in ẋ = −s·x − r·x² + g.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QpDynamicsParams {
    /// Single-particle trapping rate.
    pub s_per_s: f64,
    /// Recombination rate.
    pub r_per_s: f64,
    /// Generation rate.
    pub g_per_s: f64,
}

impl QpDynamicsParams {
    pub fn new(s_per_s: f64, r_per_s: f64, g_per_s: f64) -> Result<Self> {
        let p = QpDynamicsParams {
            s_per_s,
            r_per_s,
            g_per_s,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("s", self.s_per_s), ("r", self.r_per_s), ("g", self.g_per_s)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("rate {name} must be finite and >= 0, got {v}")));
            }
        }
        if self.g_per_s > 0.0 && self.s_per_s == 0.0 && self.r_per_s == 0.0 {
            return Err(Error::Domain(
                "generation without trapping or recombination has no stationary state".into(),
            ));
        }
        Ok(())
    }

    fn rhs(&self, x: f64) -> f64 {
        -self.s_per_s * x - self.r_per_s * x * x + self.g_per_s
    }
}

/// Stationary density 2g/(s + √(s² + 4gr)).
pub fn steady_state_xqp(params: &QpDynamicsParams) -> Result<f64> {
    params.validate()?;
    let QpDynamicsParams {
        s_per_s: s,
        r_per_s: r,
        g_per_s: g,
    } = *params;
    if g == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * g / (s + (s * s + 4.0 * g * r).sqrt()))
}

/// RK4 trajectory of x_qp. Returns `n_steps + 1` samples starting at `x0`.
///
/// Requires dt·(s + 2r·max(x0, x_ss)) < 0.1.
pub fn evolve_xqp(x0: f64, params: &QpDynamicsParams, dt_s: f64, n_steps: usize) -> Result<Vec<f64>> {
    if !(x0 >= 0.0 && x0.is_finite()) {
        return Err(Error::Domain(format!("initial density must be >= 0, got {x0}")));
    }
    if !(dt_s > 0.0) {
        return Err(Error::Config(format!("time step must be positive, got {dt_s}")));
    }
    let x_ss = steady_state_xqp(params)?;
    let stiffness = params.s_per_s + 2.0 * params.r_per_s * x0.max(x_ss);
    if dt_s * stiffness >= 0.1 {
        return Err(Error::Config(format!(
            "time step {dt_s:e} s violates the RK4 stability bound; use dt <= {:e} s",
            0.05 / stiffness
        )));
    }
    let mut traj = Vec::with_capacity(n_steps + 1);
    let mut x = x0;
    traj.push(x);
    for _ in 0..n_steps {
        let k1 = params.rhs(x);
        let k2 = params.rhs(x + 0.5 * dt_s * k1);
        let k3 = params.rhs(x + 0.5 * dt_s * k2);
        let k4 = params.rhs(x + dt_s * k3);
        x += dt_s / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        traj.push(x);
    }
    Ok(traj)
}
