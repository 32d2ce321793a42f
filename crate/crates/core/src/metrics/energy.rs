//! Energy efficiency of the transmitter.

use crate::config::SystemConfig;
use crate::error::{Error, Result};

/// Transmitter power consumption `N_C rho_C + alpha rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerModel {
    /// Circuit power per active antenna, watts.
    pub circuit_power: f64,
    /// Load-dependent slope on the radiated power.
    pub load_slope: f64,
}

impl PowerModel {
    pub fn new(circuit_power: f64, load_slope: f64) -> Result<Self> {
        if !(circuit_power >= 0.0) || !circuit_power.is_finite() {
            return Err(Error::config("circuit_power", format!("must be nonnegative, got {circuit_power}")));
        }
        if !(load_slope >= 0.0) || !load_slope.is_finite() {
            return Err(Error::config("load_slope", format!("must be nonnegative, got {load_slope}")));
        }
        Ok(Self {
            circuit_power,
            load_slope,
        })
    }

    pub fn from_config(config: &SystemConfig) -> Result<Self> {
        Self::new(config.circuit_power, config.load_slope)
    }

    /// Consumed power with `active` antennas sharing total radiated power `rho`.
    pub fn consumption(&self, active: usize, rho: f64) -> f64 {
        active as f64 * self.circuit_power + self.load_slope * rho
    }
}

/// Which transmitter the power model describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum System {
    /// One active antenna at a time.
    OamSm,
    /// All `antennas` active, each radiating `rho / antennas`.
    Mimo { antennas: usize },
}

impl System {
    pub fn active_antennas(&self) -> usize {
        match *self {
            System::OamSm => 1,
            System::Mimo { antennas } => antennas,
        }
    }
}

/// Bits per joule: `W C / (N_C rho_C + alpha rho)`.
pub fn energy_efficiency(
    capacity_bits: f64,
    bandwidth: f64,
    rho: f64,
    model: PowerModel,
    system: System,
) -> Result<f64> {
    let den = model.consumption(system.active_antennas(), rho);
    if !(den > 0.0) || !den.is_finite() {
        return Err(Error::config("circuit_power", format!("power consumption must be positive, got {den}")));
    }
    Ok(bandwidth * capacity_bits / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_numbers() {
        let pm = PowerModel::new(6.8, 4.0).unwrap();
        let e = energy_efficiency(7.0, 20e6, 1.0, pm, System::OamSm).unwrap();
        assert!((e - 20e6 * 7.0 / 10.8).abs() < 1e-6);
        assert!((pm.consumption(4, 1.0) - 31.2).abs() < 1e-12);
        assert_eq!(energy_efficiency(0.0, 20e6, 1.0, pm, System::OamSm).unwrap(), 0.0);
    }

    #[test]
    fn zero_denominator_rejected() {
        let pm = PowerModel::new(0.0, 4.0).unwrap();
        assert!(matches!(
            energy_efficiency(1.0, 1.0, 0.0, pm, System::Mimo { antennas: 4 }),
            Err(Error::Config { .. })
        ));
    }
}
