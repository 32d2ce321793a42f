//! Link-level simulator and analytic evaluator for orbital-angular-momentum
//! spatial modulation (OAM-SM) over line-of-sight millimeter-wave links.
//!
//! A transmitter with `M` antennas sends, per channel use, the index of the
//! active antenna, the OAM state of its Laguerre-Gaussian beam and one PSK
//! symbol. Each receive pair sits on the intensity ring of the facing transmit
//! antenna. The crate builds that free-space channel, simulates the
//! encode/transmit/demodulate chain and evaluates discrete-input capacity,
//! average bit error probability and energy efficiency, with a conventional
//! line-of-sight MIMO link as baseline.

pub mod beam;
pub mod channel;
pub mod config;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod metrics;
pub mod modem;
pub mod numerics;
pub(crate) mod rng;

pub use error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
