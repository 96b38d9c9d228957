use super::config::{DeviceConfig, GapEngineeringKind, QubitSpec, GRID_COLS, GRID_ROWS};

// Row-major 3x4 tables of the characterised device.
const ANHARMONICITY_MHZ: [[f64; 4]; 3] = [
    [198.0, 196.0, 198.0, 200.0],
    [206.0, 197.0, 199.0, 198.0],
    [198.0, 199.0, 198.0, 199.0],
];
const F_IDLE_GHZ: [[f64; 4]; 3] = [
    [6.480, 6.320, 6.370, 6.410],
    [6.510, 6.490, 6.400, 6.450],
    [6.460, 6.385, 6.420, 6.550],
];
const F_MAX_GHZ: [[f64; 4]; 3] = [
    [7.01, 7.29, 6.95, 7.28],
    [7.30, 7.08, 7.33, 7.04],
    [7.14, 7.31, 7.11, 7.25],
];
const T1_US: [[f64; 4]; 3] = [
    [53.0, 23.0, 51.0, 63.0],
    [82.0, 49.0, 61.0, 50.0],
    [62.0, 55.0, 52.0, 58.0],
];
const RESONATOR_F_GHZ: [[f64; 4]; 3] = [
    [7.43, 7.38, 7.34, 7.33],
    [7.41, 7.36, 7.32, 7.31],
    [7.43, 7.38, 7.34, 7.33],
];
const RESONATOR_DECAY_NS: [[f64; 4]; 3] = [
    [35.0, 16.0, 8.0, 43.0],
    [33.0, 22.0, 23.0, 53.0],
    [31.0, 16.0, 7.0, 36.0],
];
const RESONATOR_COUPLING_MHZ: [[f64; 4]; 3] = [
    [68.0, 59.0, 69.0, 45.0],
    [61.0, 65.0, 52.0, 60.0],
    [60.0, 73.0, 58.0, 54.0],
];
const READOUT_FIDELITY_PCT: [[f64; 4]; 3] = [
    [98.0, 99.0, 97.0, 97.0],
    [99.0, 96.0, 98.0, 95.0],
    [98.0, 99.0, 97.0, 98.0],
];

const WEAK_THIN_NM: f64 = 30.0;
const STRONG_THIN_NM: f64 = 15.0;
const THICK_NM: f64 = 100.0;

/// The characterised 12-qubit device, qubits in row-major order.
pub fn build_reference_device() -> DeviceConfig {
    let mut qubits = Vec::with_capacity(12);
    for r in 0..GRID_ROWS as usize {
        for c in 0..GRID_COLS as usize {
            // (0, 0) is weak; kinds alternate along rows and columns
            let ge_kind = if (r + c) % 2 == 0 {
                GapEngineeringKind::Weak
            } else {
                GapEngineeringKind::Strong
            };
            let thin_nm = match ge_kind {
                GapEngineeringKind::Weak => WEAK_THIN_NM,
                GapEngineeringKind::Strong => STRONG_THIN_NM,
            };
            qubits.push(QubitSpec {
                row: r as u8,
                col: c as u8,
                ge_kind,
                thin_nm,
                thick_nm: THICK_NM,
                f_idle_GHz: F_IDLE_GHZ[r][c],
                f_max_GHz: F_MAX_GHZ[r][c],
                anharmonicity_MHz: ANHARMONICITY_MHZ[r][c],
                t1_baseline_us: T1_US[r][c],
                readout_assignment_fidelity: READOUT_FIDELITY_PCT[r][c] / 100.0,
                resonator_f_GHz: RESONATOR_F_GHZ[r][c],
                resonator_decay_ns: RESONATOR_DECAY_NS[r][c],
                resonator_coupling_MHz: RESONATOR_COUPLING_MHZ[r][c],
            });
        }
    }
    DeviceConfig {
        chip_area_cm2: 1.0,
        cycle_period_us: 100.0,
        idle_time_us: 1.0,
        samples_per_dataset: 600_000,
        qubits,
    }
}
