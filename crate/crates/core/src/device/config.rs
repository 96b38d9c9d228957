use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io_util;
use crate::physics::{JunctionGapProfile, PhysicalConstants};

pub const GRID_ROWS: u8 = 3;
pub const GRID_COLS: u8 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GapEngineeringKind {
    Weak,
    Strong,
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitSpec {
    pub row: u8,
    pub col: u8,
    pub ge_kind: GapEngineeringKind,
    pub thin_nm: f64,
    pub thick_nm: f64,
    pub f_idle_GHz: f64,
    pub f_max_GHz: f64,
    pub anharmonicity_MHz: f64,
    pub t1_baseline_us: f64,
    pub readout_assignment_fidelity: f64,
    pub resonator_f_GHz: f64,
    pub resonator_decay_ns: f64,
    pub resonator_coupling_MHz: f64,
}

impl QubitSpec {
    /// Column label used in dataset CSV headers, e.g. `q12`.
    pub fn label(&self) -> String {
        format!("q{}{}", self.row, self.col)
    }

    pub fn gap_profile(&self, constants: &PhysicalConstants) -> Result<JunctionGapProfile> {
        constants.gap_profile(self.thin_nm, self.thick_nm)
    }

    /// Background decay rate 1/T1 in s⁻¹.
    pub fn gamma_bkgd_per_s(&self) -> f64 {
        1e6 / self.t1_baseline_us
    }

    fn validate(&self) -> Result<()> {
        let tag = self.label();
        if self.row >= GRID_ROWS || self.col >= GRID_COLS {
            return Err(Error::Validation(format!(
                "{tag}: position ({}, {}) outside the {GRID_ROWS}x{GRID_COLS} grid",
                self.row, self.col
            )));
        }
        if !(self.readout_assignment_fidelity > 0.0 && self.readout_assignment_fidelity <= 1.0) {
            return Err(Error::Validation(format!(
                "{tag}: readout_assignment_fidelity {} not in (0, 1]",
                self.readout_assignment_fidelity
            )));
        }
        if !(self.f_idle_GHz <= self.f_max_GHz) || !(self.f_idle_GHz > 0.0) {
            return Err(Error::Validation(format!(
                "{tag}: need 0 < f_idle_GHz <= f_max_GHz, got {} / {}",
                self.f_idle_GHz, self.f_max_GHz
            )));
        }
        if !(self.t1_baseline_us > 0.0) || !self.t1_baseline_us.is_finite() {
            return Err(Error::Validation(format!(
                "{tag}: t1_baseline_us must be positive, got {}",
                self.t1_baseline_us
            )));
        }
        if !(self.thin_nm > 0.0 && self.thick_nm > 0.0) {
            return Err(Error::Validation(format!("{tag}: lead thicknesses must be positive")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceConfig {
    pub chip_area_cm2: f64,
    pub cycle_period_us: f64,
    pub idle_time_us: f64,
    pub samples_per_dataset: u32,
    pub qubits: Vec<QubitSpec>,
}

impl DeviceConfig {
    pub fn validate(&self) -> Result<()> {
        let expected = GRID_ROWS as usize * GRID_COLS as usize;
        if self.qubits.len() != expected {
            return Err(Error::Validation(format!(
                "expected {expected} qubits, found {}",
                self.qubits.len()
            )));
        }
        let mut seen = HashSet::new();
        for q in &self.qubits {
            q.validate()?;
            if !seen.insert((q.row, q.col)) {
                return Err(Error::Validation(format!(
                    "duplicate qubit position ({}, {})",
                    q.row, q.col
                )));
            }
        }
        for a in &self.qubits {
            for b in &self.qubits {
                let adjacent = a.row.abs_diff(b.row) + a.col.abs_diff(b.col) == 1;
                if adjacent && a.ge_kind == b.ge_kind {
                    return Err(Error::Validation(format!(
                        "checkerboard violated: neighbours {} and {} are both {:?}",
                        a.label(),
                        b.label(),
                        a.ge_kind
                    )));
                }
            }
        }
        if !(self.chip_area_cm2 > 0.0) {
            return Err(Error::Validation("chip_area_cm2 must be positive".into()));
        }
        if !(self.cycle_period_us > 0.0) {
            return Err(Error::Validation("cycle_period_us must be positive".into()));
        }
        if !(self.idle_time_us >= 0.0 && self.idle_time_us <= self.cycle_period_us) {
            return Err(Error::Validation(
                "idle_time_us must lie in [0, cycle_period_us]".into(),
            ));
        }
        if self.samples_per_dataset == 0 {
            return Err(Error::Validation("samples_per_dataset must be positive".into()));
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn cycle_period_s(&self) -> f64 {
        self.cycle_period_us * 1e-6
    }

    /// Indices (into `qubits`) of all qubits of one kind.
    pub fn indices_of(&self, kind: GapEngineeringKind) -> Vec<usize> {
        self.qubits
            .iter()
            .enumerate()
            .filter(|(_, q)| q.ge_kind == kind)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn index_of(&self, row: u8, col: u8) -> Option<usize> {
        self.qubits.iter().position(|q| q.row == row && q.col == col)
    }
}

pub fn load_device(path: &Path) -> Result<DeviceConfig> {
    let text = io_util::read_to_string(path)?;
    let config: DeviceConfig = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    config.validate()?;
    Ok(config)
}

pub fn save_device(config: &DeviceConfig, path: &Path) -> Result<()> {
    config.validate()?;
    io_util::write_atomic(path, &io_util::to_json_pretty(config))
}
