//! Capacity, error probability and energy efficiency.

pub mod abep;
pub mod capacity;
pub mod energy;
pub mod mimo;

pub use abep::{
    abep, abep_with, antenna_abep, antenna_detection_prob, average_antenna_detection_prob,
    gray_gamma, mod_bep, AbepReport, AntennaAbep,
};
pub use capacity::{dcmc_capacity, CapacityEstimate};
pub use energy::{energy_efficiency, PowerModel, System};
pub use mimo::{logdet_capacity, mimo_capacity_baseline, mimo_channel};
