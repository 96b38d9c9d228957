use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::detect::DetectionConfig;
use crate::device::{build_reference_device, load_device, DeviceConfig, GapEngineeringKind};
use crate::error::{Error, Result};
use crate::fit::SpectrumFitOptions;
use crate::io_util;
use crate::physics::QpEnvironment;
use crate::simulate::ImpactModel;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CampaignConfig {
    /// None selects the built-in reference device.
    pub device_path: Option<PathBuf>,
    pub n_datasets: usize,
    pub dataset_duration_s: f64,
    pub event_rate_per_s: f64,
    pub event_amplitude_range: (f64, f64),
    pub tau_mean_s: f64,
    pub tau_sigma_s: f64,
    pub tau_min_s: f64,
    pub master_seed: u64,
    /// Background QP state; `x_qp` is the density floor between events.
    pub qp_environment: QpEnvironment,
    pub detection: DetectionConfig,
    /// Largest onset offset for a detection to count as a truth match.
    pub truth_match_tolerance_s: f64,
    pub spectrum_fit: SpectrumFitOptions,
    /// Literature recombination rate used to turn r/s into s.
    pub recombination_rate_per_s: f64,
    pub output_dir: PathBuf,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        let m = ImpactModel::default();
        CampaignConfig {
            device_path: None,
            n_datasets: 100,
            dataset_duration_s: 60.0,
            event_rate_per_s: m.rate_per_s,
            event_amplitude_range: m.amplitude_range,
            tau_mean_s: m.tau_mean_s,
            tau_sigma_s: m.tau_sigma_s,
            tau_min_s: m.tau_min_s,
            master_seed: 1,
            qp_environment: QpEnvironment {
                x_qp: 0.0,
                T_qp_K: 0.02,
                w_GHz: 0.15,
            },
            detection: DetectionConfig::default(),
            truth_match_tolerance_s: 10e-3,
            spectrum_fit: SpectrumFitOptions::default(),
            recombination_rate_per_s: 1e7,
            output_dir: PathBuf::from("campaign"),
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_datasets < 1 {
            return Err(Error::Config("n_datasets must be >= 1".into()));
        }
        if !(self.dataset_duration_s > 0.0 && self.dataset_duration_s.is_finite()) {
            return Err(Error::Config(format!(
                "dataset_duration_s must be > 0, got {}",
                self.dataset_duration_s
            )));
        }
        if !(self.truth_match_tolerance_s >= 0.0) {
            return Err(Error::Config("truth_match_tolerance_s must be >= 0".into()));
        }
        if !(self.recombination_rate_per_s > 0.0) {
            return Err(Error::Config("recombination_rate_per_s must be > 0".into()));
        }
        self.impact_model().validate().map_err(as_config)?;
        self.qp_environment.validate().map_err(as_config)?;
        self.detection.validate()
    }

    pub fn impact_model(&self) -> ImpactModel {
        ImpactModel {
            rate_per_s: self.event_rate_per_s,
            amplitude_range: self.event_amplitude_range,
            tau_mean_s: self.tau_mean_s,
            tau_sigma_s: self.tau_sigma_s,
            tau_min_s: self.tau_min_s,
        }
    }

    /// The configured device with its sample count set to cover one dataset.
    pub fn device(&self) -> Result<DeviceConfig> {
        let mut device = match &self.device_path {
            Some(p) => load_device(p)?,
            None => build_reference_device(),
        };
        let samples = self.dataset_duration_s / device.cycle_period_s();
        let rounded = samples.round();
        if (samples - rounded).abs() > 1e-6 * samples.max(1.0) || rounded < 1.0 || rounded > u32::MAX as f64 {
            return Err(Error::Config(format!(
                "dataset_duration_s = {} is not a whole number of {} µs cycles",
                self.dataset_duration_s, device.cycle_period_us
            )));
        }
        device.samples_per_dataset = rounded as u32;
        Ok(device)
    }

    /// Loads an optional JSON file over the defaults, then applies dotted
    /// `key=value` overrides. Override values are parsed as JSON when
    /// possible and taken as strings otherwise.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let mut value = serde_json::to_value(CampaignConfig::default()).expect("serializable default");
        if let Some(p) = path {
            let text = io_util::read_to_string(p)?;
            let file: Value = serde_json::from_str(&text).map_err(|e| Error::Parse {
                path: p.to_path_buf(),
                message: e.to_string(),
            })?;
            merge(&mut value, file, "")?;
        }
        for ov in overrides {
            apply_override(&mut value, ov)?;
        }
        let cfg: CampaignConfig =
            serde_json::from_value(value).map_err(|e| Error::Config(format!("invalid config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn as_config(e: Error) -> Error {
    match e {
        Error::Domain(m) | Error::Validation(m) => Error::Config(m),
        other => other,
    }
}

fn merge(base: &mut Value, patch: Value, prefix: &str) -> Result<()> {
    match (base, patch) {
        (Value::Object(b), Value::Object(p)) => {
            for (k, v) in p {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v, &key)?,
                    None => return Err(Error::Config(format!("unknown config key `{key}`"))),
                }
            }
            Ok(())
        }
        (slot, v) => {
            *slot = v;
            Ok(())
        }
    }
}

fn apply_override(value: &mut Value, entry: &str) -> Result<()> {
    let (key, raw) = entry
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override `{entry}` is not key=value")))?;
    let key = key.trim();
    let parsed = serde_json::from_str::<Value>(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut slot = value;
    for part in key.split('.') {
        slot = slot
            .as_object_mut()
            .and_then(|o| o.get_mut(part))
            .ok_or_else(|| Error::Config(format!("unknown config key `{key}`")))?;
    }
    *slot = parsed;
    Ok(())
}

/// Qubit selection for detection and histograms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subset {
    Weak,
    Strong,
    All,
}

impl Subset {
    pub fn name(self) -> &'static str {
        match self {
            Subset::Weak => "weak",
            Subset::Strong => "strong",
            Subset::All => "all",
        }
    }

    pub fn indices(self, device: &DeviceConfig) -> Result<Vec<usize>> {
        let idx = match self {
            Subset::Weak => device.indices_of(GapEngineeringKind::Weak),
            Subset::Strong => device.indices_of(GapEngineeringKind::Strong),
            Subset::All => (0..device.n_qubits()).collect(),
        };
        if idx.is_empty() {
            return Err(Error::Config(format!("qubit subset `{}` is empty on this device", self.name())));
        }
        Ok(idx)
    }
}

impl std::str::FromStr for Subset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weak" => Ok(Subset::Weak),
            "strong" => Ok(Subset::Strong),
            "all" => Ok(Subset::All),
            other => Err(Error::Config(format!("unknown subset `{other}` (weak|strong|all)"))),
        }
    }
}
