use rand::Rng;
use rayon::prelude::*;

use super::events::{xqp_at, ImpactEvent};
use super::response::DeviceResponse;
use super::rng;
use crate::device::DeviceConfig;
use crate::error::{Error, Result};
use crate::physics::{PhysicalConstants, QpEnvironment};

/// Bit matrix of errors, one packed row per cycle.
///
/// Qubit `q` lives in byte `q / 8`, bit `q % 8` (least significant first);
/// padding bits are always zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorMatrix {
    n_cycles: usize,
    n_qubits: usize,
    row_bytes: usize,
    data: Vec<u8>,
}

impl ErrorMatrix {
    pub fn zeros(n_cycles: usize, n_qubits: usize) -> Self {
        let row_bytes = n_qubits.div_ceil(8);
        ErrorMatrix {
            n_cycles,
            n_qubits,
            row_bytes,
            data: vec![0; n_cycles * row_bytes],
        }
    }

    /// Wraps an already packed payload, rejecting set padding bits.
    pub fn from_packed(n_cycles: usize, n_qubits: usize, data: Vec<u8>) -> Result<Self> {
        let row_bytes = n_qubits.div_ceil(8);
        if data.len() != n_cycles * row_bytes {
            return Err(Error::Data(format!(
                "payload has {} bytes, expected {} for {n_cycles}x{n_qubits}",
                data.len(),
                n_cycles * row_bytes
            )));
        }
        let m = ErrorMatrix {
            n_cycles,
            n_qubits,
            row_bytes,
            data,
        };
        let pad = m.padding_mask();
        if pad != 0 && m.data.chunks(row_bytes).any(|row| row[row_bytes - 1] & pad != 0) {
            return Err(Error::Data("padding bits set in packed error rows".into()));
        }
        Ok(m)
    }

    fn padding_mask(&self) -> u8 {
        match self.n_qubits % 8 {
            0 => 0,
            used => !((1u8 << used) - 1),
        }
    }

    pub fn n_cycles(&self) -> usize {
        self.n_cycles
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn row_bytes(&self) -> usize {
        self.row_bytes
    }

    pub fn packed(&self) -> &[u8] {
        &self.data
    }

    pub fn row(&self, cycle: usize) -> &[u8] {
        &self.data[cycle * self.row_bytes..(cycle + 1) * self.row_bytes]
    }

    pub fn get(&self, cycle: usize, qubit: usize) -> bool {
        assert!(qubit < self.n_qubits);
        self.data[cycle * self.row_bytes + qubit / 8] >> (qubit % 8) & 1 == 1
    }

    pub fn set(&mut self, cycle: usize, qubit: usize, value: bool) {
        assert!(qubit < self.n_qubits);
        let byte = &mut self.data[cycle * self.row_bytes + qubit / 8];
        let bit = 1u8 << (qubit % 8);
        if value {
            *byte |= bit;
        } else {
            *byte &= !bit;
        }
    }

    /// Packed mask selecting `qubits`, for use with [`Self::count_masked`].
    pub fn mask(&self, qubits: &[usize]) -> Result<Vec<u8>> {
        let mut mask = vec![0u8; self.row_bytes];
        for &q in qubits {
            if q >= self.n_qubits {
                return Err(Error::Data(format!(
                    "qubit index {q} out of range for {} qubits",
                    self.n_qubits
                )));
            }
            mask[q / 8] |= 1 << (q % 8);
        }
        Ok(mask)
    }

    pub fn count_masked(&self, cycle: usize, mask: &[u8]) -> u32 {
        self.row(cycle)
            .iter()
            .zip(mask)
            .map(|(b, m)| (b & m).count_ones())
            .sum()
    }
}

/// Result of one correlated-sampling run.
#[derive(Debug, Clone, PartialEq)]
pub struct RrecsDataset {
    pub n_cycles: usize,
    pub n_qubits: usize,
    pub errors: ErrorMatrix,
    pub seed: u64,
    /// Injected events; empty for ingested hardware data.
    pub truth_events: Vec<ImpactEvent>,
    pub device_ref: DeviceConfig,
}

impl RrecsDataset {
    pub fn from_matrix(
        errors: ErrorMatrix,
        seed: u64,
        truth_events: Vec<ImpactEvent>,
        device_ref: DeviceConfig,
    ) -> Self {
        RrecsDataset {
            n_cycles: errors.n_cycles(),
            n_qubits: errors.n_qubits(),
            errors,
            seed,
            truth_events,
            device_ref,
        }
    }

    pub fn cycle_period_s(&self) -> f64 {
        self.device_ref.cycle_period_s()
    }

    pub fn duration_s(&self) -> f64 {
        self.n_cycles as f64 * self.cycle_period_s()
    }
}

/// Simulates one correlated-sampling dataset.
///
/// Every cycle starts with all qubits in |1⟩; qubit q errs with the
/// probability implied by its background T1, the QP tunneling rate at the
/// chip-wide density, and its readout fidelity. `env_template.x_qp` is the
/// density floor in the absence of events. Each qubit draws one uniform per
/// cycle from its own stream of `seed`.
pub fn simulate_rrecs(
    device: &DeviceConfig,
    events: &[ImpactEvent],
    env_template: &QpEnvironment,
    seed: u64,
) -> Result<RrecsDataset> {
    simulate_rrecs_with(device, events, env_template, seed, &PhysicalConstants::REFERENCE)
}

pub(crate) fn simulate_rrecs_with(
    device: &DeviceConfig,
    events: &[ImpactEvent],
    env_template: &QpEnvironment,
    seed: u64,
    constants: &PhysicalConstants,
) -> Result<RrecsDataset> {
    device.validate()?;
    let mut sorted = events.to_vec();
    sorted.sort_by(|a, b| a.t0_s.total_cmp(&b.t0_s));
    let n_cycles = device.samples_per_dataset as usize;
    let n_qubits = device.n_qubits();
    let period = device.cycle_period_s();
    let duration = n_cycles as f64 * period;
    if let Some(e) = sorted.iter().find(|e| e.t0_s < 0.0 || e.t0_s > duration) {
        return Err(Error::Domain(format!(
            "event at {} s lies outside the dataset [0, {duration}] s",
            e.t0_s
        )));
    }
    let response = DeviceResponse::new(device, env_template, constants)?;
    let floor = env_template.x_qp;
    let density: Vec<f64> = (0..n_cycles)
        .map(|k| xqp_at(k as f64 * period, &sorted, floor))
        .collect();

    let columns: Vec<Vec<bool>> = (0..n_qubits)
        .into_par_iter()
        .map(|q| {
            let mut rng = rng::stream(seed, q as u64);
            let p_quiet = response.error_prob(q, floor);
            density
                .iter()
                .map(|&x| {
                    let p = if x == floor { p_quiet } else { response.error_prob(q, x) };
                    rng.random::<f64>() < p
                })
                .collect()
        })
        .collect();

    let mut errors = ErrorMatrix::zeros(n_cycles, n_qubits);
    for (q, col) in columns.iter().enumerate() {
        for (k, &bit) in col.iter().enumerate() {
            if bit {
                errors.set(k, q, true);
            }
        }
    }
    Ok(RrecsDataset::from_matrix(errors, seed, sorted, device.clone()))
}
