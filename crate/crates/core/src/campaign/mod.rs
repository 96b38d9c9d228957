//! Campaign configuration and the command implementations behind the
//! `qpburst` binary.

mod commands;
mod config;

pub use commands::*;
pub use config::{CampaignConfig, Subset};
