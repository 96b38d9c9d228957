//! Forward simulation of correlated-sampling datasets and illumination sweeps.

mod dataset;
mod events;
pub mod format;
mod illumination;
mod response;
pub mod rng;

pub use dataset::{simulate_rrecs, ErrorMatrix, RrecsDataset};
pub use events::{sample_impact_times, xqp_at, ImpactEvent, ImpactModel};
pub use illumination::{simulate_illumination, IlluminationModel, IlluminationPoint};
pub use response::DeviceResponse;
