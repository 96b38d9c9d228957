//! Dataset persistence.
//!
//! Binary layout: magic `RRCS`, version byte `0x01`, `u32` LE cycle count,
//! `u16` LE qubit count, then one packed row per cycle (see
//! [`ErrorMatrix`]). Seed, injected events and the device snapshot go in a
//! JSON sidecar next to the binary file.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{ErrorMatrix, ImpactEvent, RrecsDataset};
use crate::device::DeviceConfig;
use crate::error::{Error, Result};
use crate::io_util;

pub const MAGIC: &[u8; 4] = b"RRCS";
pub const VERSION: u8 = 0x01;
const HEADER_LEN: usize = 4 + 1 + 4 + 2;

pub fn encode_binary(errors: &ErrorMatrix) -> Result<Vec<u8>> {
    let n_cycles = u32::try_from(errors.n_cycles())
        .map_err(|_| Error::Data("too many cycles for the binary format".into()))?;
    let n_qubits = u16::try_from(errors.n_qubits())
        .map_err(|_| Error::Data("too many qubits for the binary format".into()))?;
    let mut out = Vec::with_capacity(HEADER_LEN + errors.packed().len());
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.extend_from_slice(&n_cycles.to_le_bytes());
    out.extend_from_slice(&n_qubits.to_le_bytes());
    out.extend_from_slice(errors.packed());
    Ok(out)
}

pub fn decode_binary(bytes: &[u8]) -> Result<ErrorMatrix> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Data(format!("file too short for header ({} bytes)", bytes.len())));
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::Data("bad magic, expected RRCS".into()));
    }
    if bytes[4] != VERSION {
        return Err(Error::Data(format!("unsupported format version {:#04x}", bytes[4])));
    }
    let n_cycles = u32::from_le_bytes(bytes[5..9].try_into().unwrap()) as usize;
    let n_qubits = u16::from_le_bytes(bytes[9..11].try_into().unwrap()) as usize;
    ErrorMatrix::from_packed(n_cycles, n_qubits, bytes[HEADER_LEN..].to_vec())
}

/// CSV with header `cycle,q00,q01,...` and one 0/1 row per cycle.
pub fn encode_csv(errors: &ErrorMatrix, labels: &[String]) -> Result<String> {
    if labels.len() != errors.n_qubits() {
        return Err(Error::Data(format!(
            "{} labels for {} qubits",
            labels.len(),
            errors.n_qubits()
        )));
    }
    let mut out = String::with_capacity(errors.n_cycles() * (2 * labels.len() + 8));
    out.push_str("cycle");
    for l in labels {
        out.push(',');
        out.push_str(l);
    }
    out.push('\n');
    for k in 0..errors.n_cycles() {
        write!(out, "{k}").unwrap();
        for q in 0..errors.n_qubits() {
            out.push(',');
            out.push(if errors.get(k, q) { '1' } else { '0' });
        }
        out.push('\n');
    }
    Ok(out)
}

/// Parses the CSV form. Returns the matrix and the column labels.
pub fn decode_csv(text: &str) -> Result<(ErrorMatrix, Vec<String>)> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| Error::Data("empty CSV".into()))?;
    let mut cols = header.split(',').map(str::trim);
    if cols.next() != Some("cycle") {
        return Err(Error::Data("CSV header must start with `cycle`".into()));
    }
    let labels: Vec<String> = cols.map(String::from).collect();
    let rows: Vec<(usize, &str)> = lines.collect();
    let mut m = ErrorMatrix::zeros(rows.len(), labels.len());
    for (k, (lineno, line)) in rows.iter().enumerate() {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != labels.len() + 1 {
            return Err(Error::Data(format!(
                "line {}: expected {} fields, found {}",
                lineno + 1,
                labels.len() + 1,
                fields.len()
            )));
        }
        if fields[0].parse::<usize>().ok() != Some(k) {
            return Err(Error::Data(format!("line {}: expected cycle index {k}", lineno + 1)));
        }
        for (q, f) in fields[1..].iter().enumerate() {
            match *f {
                "0" => {}
                "1" => m.set(k, q, true),
                other => {
                    return Err(Error::Data(format!(
                        "line {}: value {other:?} is not 0 or 1",
                        lineno + 1
                    )))
                }
            }
        }
    }
    Ok((m, labels))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sidecar {
    pub seed: u64,
    pub n_cycles: usize,
    pub n_qubits: usize,
    pub truth_events: Vec<ImpactEvent>,
    pub device: DeviceConfig,
}

pub fn sidecar_path(dataset_path: &Path) -> PathBuf {
    dataset_path.with_extension("json")
}

/// Writes the binary dataset and its sidecar.
pub fn save_dataset(dataset: &RrecsDataset, path: &Path) -> Result<()> {
    io_util::write_atomic(path, &encode_binary(&dataset.errors)?)?;
    let sidecar = Sidecar {
        seed: dataset.seed,
        n_cycles: dataset.n_cycles,
        n_qubits: dataset.n_qubits,
        truth_events: dataset.truth_events.clone(),
        device: dataset.device_ref.clone(),
    };
    io_util::write_atomic(&sidecar_path(path), &io_util::to_json_pretty(&sidecar))
}

pub fn save_dataset_csv(dataset: &RrecsDataset, path: &Path) -> Result<()> {
    let labels: Vec<String> = dataset.device_ref.qubits.iter().map(|q| q.label()).collect();
    io_util::write_atomic(path, encode_csv(&dataset.errors, &labels)?.as_bytes())
}

/// Loads a `.rrcs` or `.csv` dataset. Without a sidecar the dataset has no
/// truth events, seed 0, and `fallback_device` as its device snapshot.
pub fn load_dataset(path: &Path, fallback_device: &DeviceConfig) -> Result<RrecsDataset> {
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let errors = if is_csv {
        decode_csv(&io_util::read_to_string(path)?)?.0
    } else {
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        decode_binary(&bytes)?
    };
    let side = sidecar_path(path);
    let (seed, truth, device) = if !is_csv && side.exists() {
        let text = io_util::read_to_string(&side)?;
        let sc: Sidecar = serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: side.clone(),
            message: e.to_string(),
        })?;
        if sc.n_cycles != errors.n_cycles() || sc.n_qubits != errors.n_qubits() {
            return Err(Error::Data(format!(
                "sidecar {} disagrees with dataset dimensions",
                side.display()
            )));
        }
        (sc.seed, sc.truth_events, sc.device)
    } else {
        (0, Vec::new(), fallback_device.clone())
    };
    if device.n_qubits() != errors.n_qubits() {
        return Err(Error::Data(format!(
            "dataset has {} qubits but device describes {}",
            errors.n_qubits(),
            device.n_qubits()
        )));
    }
    Ok(RrecsDataset::from_matrix(errors, seed, truth, device))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::build_reference_device;
    use proptest::prelude::*;

    fn matrix_from(bits: &[Vec<bool>], n_qubits: usize) -> ErrorMatrix {
        let mut m = ErrorMatrix::zeros(bits.len(), n_qubits);
        for (k, row) in bits.iter().enumerate() {
            for (q, &b) in row.iter().enumerate() {
                m.set(k, q, b);
            }
        }
        m
    }

    #[test]
    fn binary_header_layout() {
        let mut m = ErrorMatrix::zeros(2, 12);
        m.set(0, 0, true);
        m.set(1, 11, true);
        let bytes = encode_binary(&m).unwrap();
        assert_eq!(&bytes[..5], b"RRCS\x01");
        assert_eq!(&bytes[5..9], &2u32.to_le_bytes());
        assert_eq!(&bytes[9..11], &12u16.to_le_bytes());
        assert_eq!(&bytes[11..], &[0x01, 0x00, 0x00, 0x08]);
    }

    #[test]
    fn corrupt_binary_rejected() {
        assert!(decode_binary(b"RRC").is_err());
        assert!(decode_binary(b"XXXX\x01\x00\x00\x00\x00\x0c\x00").is_err());
        assert!(decode_binary(b"RRCS\x02\x00\x00\x00\x00\x0c\x00").is_err());
        assert!(decode_binary(b"RRCS\x01\x01\x00\x00\x00\x0c\x00\x00").is_err());
    }

    #[test]
    fn csv_header_and_rows() {
        let dev = build_reference_device();
        let labels: Vec<String> = dev.qubits.iter().map(|q| q.label()).collect();
        let mut m = ErrorMatrix::zeros(2, 12);
        m.set(1, 4, true);
        let text = encode_csv(&m, &labels).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "cycle,q00,q01,q02,q03,q10,q11,q12,q13,q20,q21,q22,q23"
        );
        assert_eq!(lines.next().unwrap(), "0,0,0,0,0,0,0,0,0,0,0,0,0");
        assert_eq!(lines.next().unwrap(), "1,0,0,0,0,1,0,0,0,0,0,0,0");
    }

    #[test]
    fn malformed_csv_rejected() {
        assert!(decode_csv("").is_err());
        assert!(decode_csv("idx,q00\n0,1\n").is_err());
        assert!(decode_csv("cycle,q00\n0,2\n").is_err());
        assert!(decode_csv("cycle,q00\n0,1,1\n").is_err());
        assert!(decode_csv("cycle,q00\n3,1\n").is_err());
    }

    #[test]
    fn dataset_files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let dev = build_reference_device();
        let mut m = ErrorMatrix::zeros(10, 12);
        m.set(3, 7, true);
        let events = vec![ImpactEvent::new(1e-4, 1e-5, 8.5e-3).unwrap()];
        let ds = RrecsDataset::from_matrix(m, 99, events, dev.clone());
        let path = dir.path().join("d.rrcs");
        save_dataset(&ds, &path).unwrap();
        assert_eq!(load_dataset(&path, &dev).unwrap(), ds);

        let csv = dir.path().join("d.csv");
        save_dataset_csv(&ds, &csv).unwrap();
        let back = load_dataset(&csv, &dev).unwrap();
        assert_eq!(back.errors, ds.errors);
        assert!(back.truth_events.is_empty());
    }

    proptest! {
        #[test]
        fn encodings_are_lossless(n_qubits in 1usize..20, bits in proptest::collection::vec(proptest::collection::vec(any::<bool>(), 20), 0..40)) {
            let rows: Vec<Vec<bool>> = bits.iter().map(|r| r[..n_qubits].to_vec()).collect();
            let m = matrix_from(&rows, n_qubits);
            prop_assert_eq!(&decode_binary(&encode_binary(&m).unwrap()).unwrap(), &m);
            let labels: Vec<String> = (0..n_qubits).map(|q| format!("c{q}")).collect();
            let (back, l) = decode_csv(&encode_csv(&m, &labels).unwrap()).unwrap();
            prop_assert_eq!(&back, &m);
            prop_assert_eq!(l, labels);
        }
    }
}
