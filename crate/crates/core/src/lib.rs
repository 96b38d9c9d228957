//! Simulation and analysis of correlated error bursts in gap-engineered
//! transmon arrays.
//!
//! - [`physics`]: gap model, QP tunneling rate, frequency shift, BCS density,
//!   QP population dynamics.
//! - [`device`]: the 12-qubit checkerboard device and its config files.
//! - [`simulate`]: Poisson impact events, correlated-sampling datasets and
//!   illumination sweeps.
//! - [`detect`]: matched filtering, event detection, decay fits, error
//!   histograms and inter-event statistics.
//! - [`fit`]: Levenberg-Marquardt engine and the spectrum / power-law /
//!   steady-state fits built on it.
//! - [`campaign`]: config, command implementations and report bundles behind
//!   the `qpburst` binary.

pub mod error;
pub mod device;
pub(crate) mod io_util;
pub mod physics;
pub mod simulate;
pub mod fit;
pub mod detect;
pub mod campaign;

pub use error::{Error, Result};
