//! Transmit array and receive-pair placement.
//!
//! Coordinates are cylindrical and centred on the active transmit antenna
//! `Tx_m`, with the beam along the longitudinal axis. `Tx_j` sits at
//! `((j - m) xi, 0, 0)`. The receive pair facing `Tx_j` sits on that
//! antenna's intensity ring at azimuths `pi/2` and `pi/2 + beta`. All antenna
//! indices are 1-based.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

/// Linear transmit array and the receive plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayLayout {
    antennas: usize,
    spacing: f64,
    distance: f64,
    beta: f64,
    ring_radius: f64,
}

/// Distances, azimuths and radial offsets from `Tx_m` to both antennas of
/// receive pair `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairGeometry {
    pub d1: f64,
    pub d2: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub r1: f64,
    pub r2: f64,
}

impl ArrayLayout {
    /// `max_state` is the largest `|l|` in use; `beta` must lie in `(0, pi / max_state)`.
    pub fn new(
        antennas: usize,
        spacing: f64,
        distance: f64,
        beta: f64,
        ring_radius: f64,
        max_state: u32,
    ) -> Result<Self> {
        if antennas == 0 {
            return Err(Error::config("antennas", "need at least one antenna"));
        }
        for (key, v) in [("xi", spacing), ("distance", distance), ("ring_radius", ring_radius)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::config(key, format!("must be positive and finite, got {v}")));
            }
        }
        if max_state == 0 {
            return Err(Error::config("oam_states", "largest |l| must be nonzero"));
        }
        let limit = PI / max_state as f64;
        if !(beta > 0.0 && beta < limit) {
            return Err(Error::config(
                "beta",
                format!("must lie in (0, pi/{max_state}) = (0, {limit}), got {beta}"),
            ));
        }
        Ok(Self {
            antennas,
            spacing,
            distance,
            beta,
            ring_radius,
        })
    }

    pub fn antennas(&self) -> usize {
        self.antennas
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn distance(&self) -> f64 {
        self.distance
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn ring_radius(&self) -> f64 {
        self.ring_radius
    }

    fn offset(&self, m: usize, j: usize) -> Result<f64> {
        for (key, v) in [("m", m), ("j", j)] {
            if v == 0 || v > self.antennas {
                return Err(Error::config(
                    key,
                    format!("antenna index {v} outside 1..={}", self.antennas),
                ));
            }
        }
        Ok((j as f64 - m as f64) * self.spacing)
    }

    /// Distances from `Tx_m` to `Rx_{j,1}` and `Rx_{j,2}`.
    pub fn pair_distances(&self, m: usize, j: usize) -> Result<(f64, f64)> {
        let (r1, r2) = self.radial_offsets(m, j)?;
        let z2 = self.distance * self.distance;
        Ok(((z2 + r1 * r1).sqrt(), (z2 + r2 * r2).sqrt()))
    }

    /// Radial distances of `Rx_{j,1}` and `Rx_{j,2}` from the beam axis of `Tx_m`.
    pub fn radial_offsets(&self, m: usize, j: usize) -> Result<(f64, f64)> {
        let dx = self.offset(m, j)?;
        let r = self.ring_radius;
        let (s, c) = self.beta.sin_cos();
        let r1 = dx.hypot(r);
        let r2 = if m == j { r } else { (dx - r * s).hypot(r * c) };
        Ok((r1, r2))
    }

    /// Azimuths of `Rx_{j,1}` and `Rx_{j,2}` around the beam axis of `Tx_m`.
    ///
    /// For `j > m` the second antenna's angle is `atan2(r cos(beta), |j-m| xi - r sin(beta))`,
    /// which equals the plain arctangent of that ratio whenever the
    /// denominator is positive and stays in `(0, pi)` when it is negative.
    /// A zero denominator is rejected.
    pub fn pair_azimuths(&self, m: usize, j: usize) -> Result<(f64, f64)> {
        let dx = self.offset(m, j)?;
        let r = self.ring_radius;
        let (s, c) = self.beta.sin_cos();
        if m == j {
            return Ok((FRAC_PI_2, FRAC_PI_2 + self.beta));
        }
        let adx = dx.abs();
        if j > m {
            let den = adx - r * s;
            if den == 0.0 {
                return Err(Error::DegenerateGeometry { m, j });
            }
            Ok(((r / adx).atan(), (r * c).atan2(den)))
        } else {
            let den = adx + r * s;
            Ok((PI - (r / adx).atan(), PI - (r * c / den).atan()))
        }
    }

    /// Everything about pair `j` as seen from `Tx_m`.
    pub fn pair_geometry(&self, m: usize, j: usize) -> Result<PairGeometry> {
        let (d1, d2) = self.pair_distances(m, j)?;
        let (phi1, phi2) = self.pair_azimuths(m, j)?;
        let (r1, r2) = self.radial_offsets(m, j)?;
        Ok(PairGeometry {
            d1,
            d2,
            phi1,
            phi2,
            r1,
            r2,
        })
    }
}
