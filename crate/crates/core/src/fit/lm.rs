use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LmOptions {
    pub max_iterations: usize,
    pub rel_cost_tol: f64,
    pub grad_tol: f64,
    pub lambda_init: f64,
    /// Damping beyond which the engine gives up on a point.
    pub lambda_max: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        LmOptions {
            max_iterations: 200,
            rel_cost_tol: 1e-10,
            grad_tol: 1e-8,
            lambda_init: 1e-6,
            lambda_max: 1e16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub params: Vec<f64>,
    /// Linearized 1σ from s²·(JᵀJ)⁻¹; NaN where the Jacobian is rank deficient.
    pub param_sigmas: Vec<f64>,
    pub rms_residual: f64,
    pub n_iterations: usize,
    pub converged: bool,
    pub message: String,
    pub covariance: Vec<Vec<f64>>,
    /// Cost ½Σr² at the start and after every accepted step.
    pub cost_history: Vec<f64>,
}

impl FitResult {
    /// Result for a fit that was never started.
    pub fn not_run(params: Vec<f64>, message: impl Into<String>) -> Self {
        let n = params.len();
        FitResult {
            param_sigmas: vec![f64::NAN; n],
            covariance: vec![vec![f64::NAN; n]; n],
            params,
            rms_residual: f64::NAN,
            n_iterations: 0,
            converged: false,
            message: message.into(),
            cost_history: Vec::new(),
        }
    }
}

fn fd_step(p: f64) -> f64 {
    (1e-7 * p.abs()).max(1e-10)
}

fn cost_of(r: &[f64]) -> f64 {
    0.5 * r.iter().map(|v| v * v).sum::<f64>()
}

fn all_finite(r: &[f64]) -> bool {
    r.iter().all(|v| v.is_finite())
}

/// Forward-difference Jacobian, m×n, given r0 = f(p).
pub fn forward_jacobian<F>(f: &F, p: &[f64], r0: &[f64]) -> DMatrix<f64>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let m = r0.len();
    let mut jac = DMatrix::zeros(m, p.len());
    let mut q = p.to_vec();
    for j in 0..p.len() {
        let h = fd_step(p[j]);
        q[j] = p[j] + h;
        // actual step after rounding
        let h_eff = q[j] - p[j];
        let r1 = f(&q);
        for i in 0..m {
            jac[(i, j)] = (r1[i] - r0[i]) / h_eff;
        }
        q[j] = p[j];
    }
    jac
}

/// Central-difference Jacobian with the same step rule; used as a cross-check.
pub fn central_jacobian<F>(f: &F, p: &[f64]) -> DMatrix<f64>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let mut q = p.to_vec();
    let mut cols = Vec::with_capacity(p.len());
    for j in 0..p.len() {
        let h = fd_step(p[j]);
        q[j] = p[j] + h;
        let up = f(&q);
        q[j] = p[j] - h;
        let down = f(&q);
        q[j] = p[j];
        cols.push(DVector::from_iterator(
            up.len(),
            up.iter().zip(&down).map(|(a, b)| (a - b) / (2.0 * h)),
        ));
    }
    DMatrix::from_columns(&cols)
}

fn covariance(jac: &DMatrix<f64>, cost: f64) -> (Vec<Vec<f64>>, Vec<f64>) {
    let (m, n) = jac.shape();
    let nan = || (vec![vec![f64::NAN; n]; n], vec![f64::NAN; n]);
    if n == 0 || m == 0 {
        return nan();
    }
    let svd = jac.clone().svd(false, true);
    let v_t = match svd.v_t {
        Some(v) => v,
        None => return nan(),
    };
    let s_max = svd.singular_values.max();
    // forward differences resolve the Jacobian to about √ε
    let cutoff = s_max * 10.0 * f64::EPSILON.sqrt();
    if !(s_max > 0.0) || svd.singular_values.iter().any(|&s| s <= cutoff) {
        return nan();
    }
    let s2 = if m > n { 2.0 * cost / (m - n) as f64 } else { f64::NAN };
    let mut cov = vec![vec![0.0; n]; n];
    for (a, row) in cov.iter_mut().enumerate() {
        for (b, c) in row.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in 0..n {
                let sk = svd.singular_values[k];
                acc += v_t[(k, a)] * v_t[(k, b)] / (sk * sk);
            }
            *c = acc * s2;
        }
    }
    let sig = (0..n).map(|k| cov[k][k].sqrt()).collect();
    (cov, sig)
}

/// Solve (A + λ·diag(A))δ = −g; zero diagonal entries are damped as 1.
fn damped_step(a: &DMatrix<f64>, g: &DVector<f64>, lambda: f64) -> Option<DVector<f64>> {
    let mut lhs = a.clone();
    for k in 0..a.nrows() {
        let d = a[(k, k)];
        lhs[(k, k)] += lambda * if d > 0.0 { d } else { 1.0 };
    }
    let chol = lhs.cholesky()?;
    let step = chol.solve(&(-g));
    step.iter().all(|v| v.is_finite()).then_some(step)
}

/// Damped Gauss-Newton minimization of ½Σr(p)².
///
/// Non-finite residuals at a trial point count as a rejected step.
pub fn levenberg_marquardt<F>(residual_fn: F, init: &[f64], options: &LmOptions) -> FitResult
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let n = init.len();
    let mut p = init.to_vec();
    let mut r = residual_fn(&p);
    if !all_finite(&r) || r.is_empty() {
        return FitResult::not_run(p, "residuals not finite at initial point");
    }
    let m = r.len();
    let mut cost = cost_of(&r);
    let mut history = vec![cost];
    let mut lambda = options.lambda_init;
    let mut converged = false;
    let mut message = String::from("iteration limit reached");
    let mut iterations = 0;

    'outer: while iterations < options.max_iterations {
        iterations += 1;
        let jac = forward_jacobian(&residual_fn, &p, &r);
        let rv = DVector::from_column_slice(&r);
        let g = jac.tr_mul(&rv);
        if g.amax() < options.grad_tol {
            converged = true;
            message = "gradient tolerance met".into();
            break;
        }
        let a = jac.tr_mul(&jac);
        loop {
            if lambda > options.lambda_max {
                message = "damping limit reached without reducing cost".into();
                break 'outer;
            }
            let step = match damped_step(&a, &g, lambda) {
                Some(s) => s,
                None => {
                    lambda *= 10.0;
                    continue;
                }
            };
            let trial: Vec<f64> = p.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let r_trial = residual_fn(&trial);
            let cost_trial = if all_finite(&r_trial) { cost_of(&r_trial) } else { f64::INFINITY };
            if cost_trial < cost {
                let rel = (cost - cost_trial) / cost;
                p = trial;
                r = r_trial;
                cost = cost_trial;
                history.push(cost);
                lambda = (lambda / 10.0).max(1e-300);
                if rel < options.rel_cost_tol || cost == 0.0 {
                    converged = true;
                    message = "relative cost change below tolerance".into();
                    break 'outer;
                }
                break;
            }
            // predicted reduction of the linearized model; a negligible one
            // means p is already stationary to working precision
            let predicted = -(g.dot(&step)) - 0.5 * (&a * &step).dot(&step);
            if predicted.abs() <= options.rel_cost_tol * cost {
                converged = true;
                message = "predicted reduction below tolerance".into();
                break 'outer;
            }
            lambda *= 10.0;
        }
    }

    let jac = forward_jacobian(&residual_fn, &p, &r);
    let (covariance, param_sigmas) = covariance(&jac, cost);
    debug_assert_eq!(param_sigmas.len(), n);
    FitResult {
        params: p,
        param_sigmas,
        rms_residual: (2.0 * cost / m as f64).sqrt(),
        n_iterations: iterations,
        converged,
        message,
        covariance,
        cost_history: history,
    }
}
