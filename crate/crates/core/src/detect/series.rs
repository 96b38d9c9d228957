use crate::error::{Error, Result};
use crate::simulate::RrecsDataset;

/// Per-cycle number of erring qubits within `subset`.
pub fn summed_error_series(dataset: &RrecsDataset, subset: &[usize]) -> Result<Vec<u32>> {
    if subset.is_empty() {
        return Err(Error::Domain("qubit subset is empty".into()));
    }
    let mask = dataset.errors.mask(subset)?;
    Ok((0..dataset.n_cycles)
        .map(|c| dataset.errors.count_masked(c, &mask))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::build_reference_device;
    use crate::simulate::ErrorMatrix;

    fn dataset(errors: ErrorMatrix) -> RrecsDataset {
        RrecsDataset::from_matrix(errors, 0, Vec::new(), build_reference_device())
    }

    #[test]
    fn all_zero() {
        let d = dataset(ErrorMatrix::zeros(50, 12));
        assert_eq!(summed_error_series(&d, &[0, 3, 11]).unwrap(), vec![0; 50]);
    }

    #[test]
    fn alternating_single_qubit() {
        let mut m = ErrorMatrix::zeros(10, 12);
        for c in (1..10).step_by(2) {
            m.set(c, 4, true);
        }
        let d = dataset(m);
        let s = summed_error_series(&d, &[4]).unwrap();
        assert_eq!(s, vec![0, 1, 0, 1, 0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn six_qubits_at_once() {
        let mut m = ErrorMatrix::zeros(20, 12);
        let subset = [0, 2, 5, 7, 8, 10];
        for &q in &subset {
            m.set(13, q, true);
        }
        m.set(13, 1, true);
        let d = dataset(m);
        let s = summed_error_series(&d, &subset).unwrap();
        assert_eq!(s[13], 6);
        assert_eq!(s.iter().sum::<u32>(), 6);
    }

    #[test]
    fn bad_subsets() {
        let d = dataset(ErrorMatrix::zeros(5, 12));
        assert!(summed_error_series(&d, &[]).is_err());
        assert!(summed_error_series(&d, &[12]).is_err());
    }
}
