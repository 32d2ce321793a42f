//! Laguerre-Gaussian beams with radial index zero.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficient set used when matching waists across OAM states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoeffMode {
    /// `A = w^2 |l| pi^2`, as printed alongside the matching condition.
    Printed,
    /// `A = w^2 |l'| pi^2`, which makes the quadratic equivalent to equal ring radii.
    #[default]
    Rederived,
}

/// A Laguerre-Gaussian beam of state `l` with waist `w0` at `z = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamParams {
    waist: f64,
    state: i32,
    wavelength: f64,
}

impl BeamParams {
    pub fn new(waist: f64, state: i32, wavelength: f64) -> Result<Self> {
        if !(waist > 0.0) || !waist.is_finite() {
            return Err(Error::config("waist", format!("must be positive, got {waist}")));
        }
        if !(wavelength > 0.0) || !wavelength.is_finite() {
            return Err(Error::config(
                "wavelength",
                format!("must be positive, got {wavelength}"),
            ));
        }
        if state == 0 {
            return Err(Error::config("oam_states", "state 0 has no intensity ring"));
        }
        Ok(Self {
            waist,
            state,
            wavelength,
        })
    }

    pub fn waist(&self) -> f64 {
        self.waist
    }

    pub fn state(&self) -> i32 {
        self.state
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    pub fn rayleigh_distance(&self) -> f64 {
        PI * self.waist * self.waist / self.wavelength
    }

    /// `gamma / sqrt(pi |l|!)` with `gamma = 1`.
    pub fn norm(&self) -> f64 {
        let l = self.state.unsigned_abs() as f64;
        (PI * libm::tgamma(l + 1.0)).sqrt().recip()
    }

    fn check_z(z: f64) -> Result<()> {
        if !(z >= 0.0) || !z.is_finite() {
            return Err(Error::domain(format!("propagation distance must be finite and >= 0, got {z}")));
        }
        Ok(())
    }

    /// `w(z) = w0 sqrt(1 + (z / z_R)^2)`.
    pub fn spot_size(&self, z: f64) -> Result<f64> {
        Self::check_z(z)?;
        Ok(self.spot(z))
    }

    fn spot(&self, z: f64) -> f64 {
        self.waist * (z / self.rayleigh_distance()).hypot(1.0)
    }

    /// Radius of peak intensity, `sqrt(|l| / 2) w(z)`.
    pub fn ring_radius(&self, z: f64) -> Result<f64> {
        Self::check_z(z)?;
        Ok(self.ring(z))
    }

    fn ring(&self, z: f64) -> f64 {
        (0.5 * self.state.unsigned_abs() as f64).sqrt() * self.spot(z)
    }

    /// Wavefront curvature radius `z (1 + (z_R / z)^2)`.
    pub fn curvature_radius(&self, z: f64) -> Result<f64> {
        Self::check_z(z)?;
        if z == 0.0 {
            return Err(Error::domain("wavefront is flat at z = 0; curvature radius is infinite"));
        }
        let q = self.rayleigh_distance() / z;
        Ok(z * (1.0 + q * q))
    }

    /// Gouy phase `atan(z / z_R)`.
    pub fn gouy_phase(&self, z: f64) -> Result<f64> {
        Self::check_z(z)?;
        Ok((z / self.rayleigh_distance()).atan())
    }

    /// Complex field amplitude at cylindrical position `(r, phi, z)`.
    pub fn field(&self, r: f64, phi: f64, z: f64) -> Result<Complex64> {
        Self::check_z(z)?;
        if !(r >= 0.0) || !r.is_finite() || !phi.is_finite() {
            return Err(Error::domain(format!("invalid field point r = {r}, phi = {phi}")));
        }
        let w = self.spot(z);
        let l = self.state.unsigned_abs() as i32;
        let x = r / w;
        let amp = self.norm() / w * (x * std::f64::consts::SQRT_2).powi(l) * (-x * x).exp();
        let curvature = if z == 0.0 {
            0.0
        } else {
            -PI * r * r / (self.wavelength * self.curvature_radius(z)?)
        };
        let gouy = (l + 1) as f64 * self.gouy_phase(z)?;
        let helical = -(self.state as f64) * phi;
        Ok(Complex64::from_polar(amp, curvature + gouy + helical))
    }

    /// Waist for state `l_prime` whose intensity ring at distance `z` has the
    /// same radius as this beam's ring there.
    ///
    /// Solves `A u^2 - B u + C = 0` for `u = w'^2` with
    /// `B = |l| (pi^2 w^4 + z^2 lambda^2)`, `C = w^2 |l'| z^2 lambda^2` and
    /// `A` chosen by `mode`. Of the two roots, the one lying on the same side
    /// of `sqrt(C / A)` as `w^2` is returned (the larger one on ties), which
    /// is the branch continuous with the `z = 0` solution and maps `l' = l`
    /// back to `w`.
    pub fn waist_for_state(&self, l_prime: i32, z: f64, mode: CoeffMode) -> Result<f64> {
        Self::check_z(z)?;
        if l_prime == 0 {
            return Err(Error::config("oam_states", "state 0 has no intensity ring"));
        }
        let w2 = self.waist * self.waist;
        let l = self.state.unsigned_abs() as f64;
        let lp = l_prime.unsigned_abs() as f64;
        let zl2 = (z * self.wavelength).powi(2);
        let pi2 = PI * PI;
        let a = match mode {
            CoeffMode::Printed => w2 * l * pi2,
            CoeffMode::Rederived => w2 * lp * pi2,
        };
        let b = l * (pi2 * w2 * w2 + zl2);
        let c = w2 * lp * zl2;
        let disc = b * b - 4.0 * a * c;
        if disc < 0.0 {
            // Relative rounding slack around a double root.
            if disc > -1e-14 * b * b {
                return Ok((b / (2.0 * a)).sqrt());
            }
            return Err(Error::NoMatchingWaist { state: l_prime, z });
        }
        let big = (b + disc.sqrt()) / (2.0 * a);
        let small = if big > 0.0 { c / (a * big) } else { 0.0 };
        let split = (c / a).sqrt();
        let u = if w2 >= split { big } else { small };
        if !(u > 0.0) {
            return Err(Error::NoMatchingWaist { state: l_prime, z });
        }
        Ok(u.sqrt())
    }
}

/// Relative mismatch between the ring radii of two beams at distance `z`.
pub fn ring_mismatch(a: &BeamParams, b: &BeamParams, z: f64) -> Result<f64> {
    let ra = a.ring_radius(z)?;
    let rb = b.ring_radius(z)?;
    Ok((ra - rb).abs() / ra)
}
