//! Closed-form quasiparticle physics for gap-engineered junctions.
//!
//! Energies are carried as frequencies (E/h, GHz), times in seconds and
//! temperatures in kelvin throughout. The two conversion constants live in
//! [`PhysicalConstants`].

mod bcs;
mod constants;
mod dynamics;
mod gap;
pub mod quadrature;
mod tunneling;

pub use bcs::{bcs_equilibrium_xqp, bcs_temperature_for_xqp};
pub use constants::{PhysicalConstants, KB_OVER_H_GHZ_PER_K, UEV_TO_GHZ};
pub use dynamics::{evolve_xqp, steady_state_xqp, QpDynamicsParams};
pub use gap::{gap_from_thickness, gap_profile, JunctionGapProfile};
pub use tunneling::{
    freq_shift_coefficient, frequency_shift, gamma_qp, gamma_qp_per_unit_density,
    gamma_qp_with_rule, t1_from_rates, QpEnvironment,
};
