use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::simulate::RrecsDataset;

/// Counts of cycles with k = 0..=|subset| simultaneous errors.
pub fn simultaneous_error_histogram(dataset: &RrecsDataset, subset: &[usize]) -> Result<Vec<u64>> {
    let mask = dataset.errors.mask(subset)?;
    let mut counts = vec![0u64; subset.len() + 1];
    for c in 0..dataset.n_cycles {
        counts[dataset.errors.count_masked(c, &mask) as usize] += 1;
    }
    Ok(counts)
}

/// Distribution of the number of successes among independent Bernoulli trials.
pub fn poisson_binomial_pmf(probs: &[f64]) -> Result<Vec<f64>> {
    if let Some(p) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::Domain(format!("probability outside [0, 1]: {p}")));
    }
    let mut pmf = vec![0.0; probs.len() + 1];
    pmf[0] = 1.0;
    for (i, &p) in probs.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            pmf[k] = pmf[k] * (1.0 - p) + pmf[k - 1] * p;
        }
        pmf[0] *= 1.0 - p;
    }
    Ok(pmf)
}

/// Independent-error prediction for `n_samples` cycles.
pub fn poisson_binomial_prediction(probs: &[f64], n_samples: u64) -> Result<Vec<f64>> {
    Ok(poisson_binomial_pmf(probs)?
        .into_iter()
        .map(|q| q * n_samples as f64)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub n_pooled_bins: usize,
}

/// Pearson chi-square with adjacent bins pooled until each expected count is
/// at least 5.
pub fn chi_square_test(observed: &[u64], expected: &[f64]) -> Result<ChiSquareResult> {
    if observed.len() != expected.len() {
        return Err(Error::Domain("observed and expected lengths differ".into()));
    }
    let mut pooled: Vec<(f64, f64)> = Vec::new();
    let (mut o, mut e) = (0.0, 0.0);
    for (&ob, &ex) in observed.iter().zip(expected) {
        o += ob as f64;
        e += ex;
        if e >= 5.0 {
            pooled.push((o, e));
            o = 0.0;
            e = 0.0;
        }
    }
    if e > 0.0 || o > 0.0 {
        match pooled.last_mut() {
            Some(last) => {
                last.0 += o;
                last.1 += e;
            }
            None => pooled.push((o, e)),
        }
    }
    let statistic: f64 = pooled
        .iter()
        .map(|&(o, e)| if e > 0.0 { (o - e).powi(2) / e } else { 0.0 })
        .sum();
    let dof = pooled.len().saturating_sub(1);
    let p_value = if dof == 0 {
        1.0
    } else {
        let dist = ChiSquared::new(dof as f64).map_err(|e| Error::Domain(e.to_string()))?;
        dist.sf(statistic)
    };
    Ok(ChiSquareResult {
        statistic,
        dof,
        p_value,
        n_pooled_bins: pooled.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorHistogram {
    pub observed_counts: Vec<u64>,
    pub predicted_counts: Vec<f64>,
    pub n_samples: u64,
}

/// Largest upper-tail excess of observed over predicted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailExcess {
    pub k: usize,
    pub observed_tail: u64,
    pub predicted_tail: f64,
    /// (observed − predicted)/√max(predicted, 1)
    pub z: f64,
}

impl ErrorHistogram {
    pub fn new(observed_counts: Vec<u64>, probs: &[f64]) -> Result<Self> {
        if observed_counts.len() != probs.len() + 1 {
            return Err(Error::Domain(format!(
                "histogram has {} bins for {} qubits",
                observed_counts.len(),
                probs.len()
            )));
        }
        let n_samples = observed_counts.iter().sum();
        Ok(ErrorHistogram {
            predicted_counts: poisson_binomial_prediction(probs, n_samples)?,
            observed_counts,
            n_samples,
        })
    }

    /// Element-wise sum of histograms over the same subset.
    pub fn merge(parts: &[ErrorHistogram]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::Domain("nothing to merge".into()))?;
        let mut out = ErrorHistogram {
            observed_counts: vec![0; first.observed_counts.len()],
            predicted_counts: vec![0.0; first.predicted_counts.len()],
            n_samples: 0,
        };
        for h in parts {
            if h.observed_counts.len() != out.observed_counts.len() {
                return Err(Error::Domain("histograms have different widths".into()));
            }
            for (a, b) in out.observed_counts.iter_mut().zip(&h.observed_counts) {
                *a += b;
            }
            for (a, b) in out.predicted_counts.iter_mut().zip(&h.predicted_counts) {
                *a += b;
            }
            out.n_samples += h.n_samples;
        }
        Ok(out)
    }

    pub fn chi_square(&self) -> Result<ChiSquareResult> {
        chi_square_test(&self.observed_counts, &self.predicted_counts)
    }

    /// Tail comparison over k ≥ 2 with the largest z.
    pub fn max_tail_excess(&self) -> Option<TailExcess> {
        let n = self.observed_counts.len();
        (2..n)
            .map(|k| {
                let observed_tail: u64 = self.observed_counts[k..].iter().sum();
                let predicted_tail: f64 = self.predicted_counts[k..].iter().sum();
                TailExcess {
                    k,
                    observed_tail,
                    predicted_tail,
                    z: (observed_tail as f64 - predicted_tail) / predicted_tail.max(1.0).sqrt(),
                }
            })
            .max_by(|a, b| a.z.total_cmp(&b.z))
    }

    /// Flags a high-k excess beyond `z_threshold`.
    pub fn has_high_k_excess(&self, z_threshold: f64) -> bool {
        self.max_tail_excess().is_some_and(|t| t.z > z_threshold)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,observed,predicted\n");
        for (k, (o, p)) in self.observed_counts.iter().zip(&self.predicted_counts).enumerate() {
            s.push_str(&format!("{k},{o},{p}\n"));
        }
        s
    }
}
