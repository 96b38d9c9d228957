use serde::{Deserialize, Serialize};

/// µeV → GHz (E/h).
pub const UEV_TO_GHZ: f64 = 0.241_799_0;
/// k_B/h in GHz per kelvin.
pub const KB_OVER_H_GHZ_PER_K: f64 = 20.836_619;

/// Material and conversion constants.
///
/// `delta_bulk_ueV` feeds the film-thickness gap model only. QP formulas
/// (frequency-shift coefficient, BCS density) take the rounded
/// `bulk_gap_over_h_GHz` instead; the two are not interchangeable.
#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalConstants {
    pub delta_bulk_ueV: f64,
    pub gap_slope_A_ueV_nm: f64,
    pub bulk_gap_over_h_GHz: f64,
    pub ueV_to_GHz: f64,
    pub kB_over_h_GHz_per_K: f64,
}

impl PhysicalConstants {
    pub const REFERENCE: PhysicalConstants = PhysicalConstants {
        delta_bulk_ueV: 180.0,
        gap_slope_A_ueV_nm: 900.0,
        bulk_gap_over_h_GHz: 50.0,
        ueV_to_GHz: UEV_TO_GHZ,
        kB_over_h_GHz_per_K: KB_OVER_H_GHZ_PER_K,
    };

    pub fn is_valid(&self) -> bool {
        [
            self.delta_bulk_ueV,
            self.gap_slope_A_ueV_nm,
            self.bulk_gap_over_h_GHz,
            self.ueV_to_GHz,
            self.kB_over_h_GHz_per_K,
        ]
        .iter()
        .all(|v| v.is_finite() && *v > 0.0)
    }

    /// Thermal energy k_B·T expressed in GHz.
    pub fn thermal_ghz(&self, temperature_k: f64) -> f64 {
        self.kB_over_h_GHz_per_K * temperature_k
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::REFERENCE
    }
}
