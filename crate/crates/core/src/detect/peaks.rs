use crate::error::{Error, Result};

/// Median absolute deviation scaled to σ for Gaussian data. Falls back to the
/// standard deviation when more than half the values coincide.
pub fn robust_sigma(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut v = values.to_vec();
    let med = median_in_place(&mut v);
    for x in v.iter_mut() {
        *x = (*x - med).abs();
    }
    let mad = median_in_place(&mut v);
    if mad > 0.0 {
        return 1.4826 * mad;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    (values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt()
}

fn median_in_place(v: &mut [f64]) -> f64 {
    let mid = v.len() / 2;
    let (_, m, _) = v.select_nth_unstable_by(mid, f64::total_cmp);
    let upper = *m;
    if v.len() % 2 == 1 {
        upper
    } else {
        let lower = v[..mid].iter().cloned().fold(f64::MIN, f64::max);
        0.5 * (lower + upper)
    }
}

/// Indices of local maxima above `threshold_sigma`·robust σ, chosen greedily
/// by descending score so that no two lie within `min_separation_s`.
/// Returned in increasing order.
pub fn detect_events(filtered: &[f64], threshold_sigma: f64, min_separation_s: f64, dt_s: f64) -> Result<Vec<usize>> {
    if !(threshold_sigma > 0.0) {
        return Err(Error::Domain(format!("threshold must be > 0, got {threshold_sigma}")));
    }
    if !(min_separation_s >= 0.0 && dt_s > 0.0) {
        return Err(Error::Domain(format!(
            "need min_separation >= 0 and dt > 0 (got {min_separation_s}, {dt_s})"
        )));
    }
    let sigma = robust_sigma(filtered);
    if !(sigma > 0.0) {
        return Ok(Vec::new());
    }
    let level = threshold_sigma * sigma;
    let n = filtered.len();
    let mut candidates: Vec<usize> = (0..n)
        .filter(|&i| {
            let v = filtered[i];
            v > level && (i == 0 || v >= filtered[i - 1]) && (i + 1 == n || v > filtered[i + 1])
        })
        .collect();
    candidates.sort_by(|&a, &b| filtered[b].total_cmp(&filtered[a]).then(a.cmp(&b)));
    let radius = (min_separation_s / dt_s).round() as usize;
    let mut accepted: Vec<usize> = Vec::new();
    for c in candidates {
        if accepted.iter().all(|&a| a.abs_diff(c) >= radius.max(1)) {
            accepted.push(c);
        }
    }
    accepted.sort_unstable();
    Ok(accepted)
}
