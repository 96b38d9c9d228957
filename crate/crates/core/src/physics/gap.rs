use serde::{Deserialize, Serialize};

use super::PhysicalConstants;
use crate::error::{Error, Result};

/// Superconducting gaps on the two leads of a junction, as frequencies.
#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JunctionGapProfile {
    pub thin_thickness_nm: f64,
    pub thick_thickness_nm: f64,
    pub delta_thin_GHz: f64,
    pub delta_thick_GHz: f64,
    pub gap_difference_GHz: f64,
}

impl JunctionGapProfile {
    /// Builds a profile directly from the thick-lead gap and the gap
    /// difference, for fits that treat δΔ as a free parameter. Thicknesses
    /// are unknown and set to NaN.
    pub fn from_gaps(delta_thick_ghz: f64, gap_difference_ghz: f64) -> Self {
        let delta_thin = delta_thick_ghz + gap_difference_ghz;
        JunctionGapProfile {
            thin_thickness_nm: f64::NAN,
            thick_thickness_nm: f64::NAN,
            delta_thin_GHz: delta_thin,
            delta_thick_GHz: delta_thick_ghz,
            // recompute so the difference is exactly thin − thick
            gap_difference_GHz: delta_thin - delta_thick_ghz,
        }
    }
}

impl PhysicalConstants {
    /// Δ = Δ_bulk + A/t in µeV.
    pub fn gap_from_thickness(&self, t_nm: f64) -> Result<f64> {
        if !(t_nm > 0.0) {
            return Err(Error::Domain(format!(
                "film thickness must be positive, got {t_nm} nm"
            )));
        }
        Ok(self.delta_bulk_ueV + self.gap_slope_A_ueV_nm / t_nm)
    }

    pub fn gap_profile(&self, thin_nm: f64, thick_nm: f64) -> Result<JunctionGapProfile> {
        let thin = self.gap_from_thickness(thin_nm)? * self.ueV_to_GHz;
        let thick = self.gap_from_thickness(thick_nm)? * self.ueV_to_GHz;
        Ok(JunctionGapProfile {
            thin_thickness_nm: thin_nm,
            thick_thickness_nm: thick_nm,
            delta_thin_GHz: thin,
            delta_thick_GHz: thick,
            gap_difference_GHz: thin - thick,
        })
    }
}

pub fn gap_from_thickness(t_nm: f64) -> Result<f64> {
    PhysicalConstants::REFERENCE.gap_from_thickness(t_nm)
}

pub fn gap_profile(thin_nm: f64, thick_nm: f64) -> Result<JunctionGapProfile> {
    PhysicalConstants::REFERENCE.gap_profile(thin_nm, thick_nm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gap_values() {
        assert!((gap_from_thickness(100.0).unwrap() - 189.0).abs() < 1e-12);
        assert!((gap_from_thickness(30.0).unwrap() - 210.0).abs() < 1e-12);
        assert!((gap_from_thickness(1e15).unwrap() - 180.0).abs() < 1e-9);
    }

    #[test]
    fn non_positive_thickness_rejected() {
        assert!(matches!(gap_from_thickness(0.0), Err(Error::Domain(_))));
        assert!(matches!(gap_from_thickness(-3.0), Err(Error::Domain(_))));
        assert!(gap_from_thickness(f64::NAN).is_err());
        assert!(gap_profile(30.0, 0.0).is_err());
    }

    #[test]
    fn reference_gap_differences() {
        let weak = gap_profile(30.0, 100.0).unwrap();
        assert!((weak.gap_difference_GHz - 21.0 * 0.241799).abs() < 1e-9);
        assert!((weak.gap_difference_GHz - 5.08).abs() < 0.01);
        let strong = gap_profile(15.0, 100.0).unwrap();
        assert!((strong.gap_difference_GHz - 51.0 * 0.241799).abs() < 1e-9);
        assert!((strong.gap_difference_GHz - 12.33).abs() < 0.01);
        assert_eq!(gap_profile(42.0, 42.0).unwrap().gap_difference_GHz, 0.0);
    }

    proptest! {
        #[test]
        fn thinner_lead_has_larger_gap(a in 1.0f64..500.0, b in 1.0f64..500.0) {
            let (thin, thick) = if a <= b { (a, b) } else { (b, a) };
            let p = gap_profile(thin, thick).unwrap();
            prop_assert!(p.delta_thin_GHz >= p.delta_thick_GHz);
            prop_assert_eq!(p.gap_difference_GHz, p.delta_thin_GHz - p.delta_thick_GHz);
        }
    }
}
