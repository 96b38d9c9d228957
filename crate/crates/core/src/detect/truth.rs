use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthComparison {
    pub n_truth: usize,
    pub n_detected: usize,
    pub true_positives: usize,
    pub false_positives: usize,
    pub missed: usize,
    /// (truth index, detection index)
    pub matches: Vec<(usize, usize)>,
}

impl TruthComparison {
    /// NaN when there is no truth.
    pub fn recall(&self) -> f64 {
        self.true_positives as f64 / self.n_truth as f64
    }

    pub fn precision(&self) -> f64 {
        self.true_positives as f64 / self.n_detected as f64
    }

    pub fn merge(parts: &[TruthComparison]) -> TruthComparison {
        let mut out = TruthComparison {
            n_truth: 0,
            n_detected: 0,
            true_positives: 0,
            false_positives: 0,
            missed: 0,
            matches: Vec::new(),
        };
        for p in parts {
            out.n_truth += p.n_truth;
            out.n_detected += p.n_detected;
            out.true_positives += p.true_positives;
            out.false_positives += p.false_positives;
            out.missed += p.missed;
        }
        out
    }
}

/// One-to-one matching of detections to truth onsets, closest pairs first,
/// pairs farther apart than `tolerance_s` never match.
pub fn match_to_truth(detected_s: &[f64], truth_s: &[f64], tolerance_s: f64) -> TruthComparison {
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (ti, t) in truth_s.iter().enumerate() {
        for (di, d) in detected_s.iter().enumerate() {
            let gap = (t - d).abs();
            if gap <= tolerance_s {
                pairs.push((gap, ti, di));
            }
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut truth_used = vec![false; truth_s.len()];
    let mut det_used = vec![false; detected_s.len()];
    let mut matches = Vec::new();
    for (_, ti, di) in pairs {
        if !truth_used[ti] && !det_used[di] {
            truth_used[ti] = true;
            det_used[di] = true;
            matches.push((ti, di));
        }
    }
    matches.sort_unstable();
    let tp = matches.len();
    TruthComparison {
        n_truth: truth_s.len(),
        n_detected: detected_s.len(),
        true_positives: tp,
        false_positives: detected_s.len() - tp,
        missed: truth_s.len() - tp,
        matches,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_to_one_closest_first() {
        let c = match_to_truth(&[1.001, 1.004, 5.0], &[1.0, 3.0], 0.01);
        assert_eq!(c.matches, vec![(0, 0)]);
        assert_eq!((c.true_positives, c.false_positives, c.missed), (1, 2, 1));
        assert_eq!(c.recall(), 0.5);
    }

    #[test]
    fn empty_inputs() {
        let c = match_to_truth(&[], &[], 0.01);
        assert_eq!(c.true_positives, 0);
        assert!(c.recall().is_nan());
    }
}
