//! Line-of-sight MIMO baseline on the same array geometry.
//!
//! Receive antenna `j` faces transmit antenna `j` at distance `z`, so
//! `h_jm = G lambda / (4 pi d_jm) e^{-i k d_jm}` with
//! `d_jm = sqrt(z^2 + (j - m)^2 xi^2)` and the same gain constant `G` as the
//! OAM link.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::config::{MimoMode, SystemConfig};
use crate::error::{Error, Result};
use crate::metrics::capacity::{dcmc_vector, CapacityEstimate};
use crate::numerics::Constellation;

/// `M x M` channel, row `j` (receive) by column `m` (transmit), row-major.
pub fn mimo_channel(config: &SystemConfig) -> Result<Vec<Complex64>> {
    config.validate()?;
    let n = config.antennas;
    let lambda = config.wavelength();
    let k = 2.0 * PI / lambda;
    let xi = config.spacing();
    let z = config.distance;
    let g = config.gain();
    let mut h = Vec::with_capacity(n * n);
    for j in 0..n {
        for m in 0..n {
            let dx = (j as f64 - m as f64) * xi;
            let d = z.hypot(dx);
            h.push(Complex64::from_polar(g * lambda / (4.0 * PI * d), -k * d));
        }
    }
    Ok(h)
}

/// Determinant of a square complex matrix by partially pivoted elimination.
fn determinant(mut a: Vec<Complex64>, n: usize) -> Complex64 {
    let mut det = Complex64::new(1.0, 0.0);
    for c in 0..n {
        let p = (c..n)
            .max_by(|&x, &y| a[x * n + c].norm().total_cmp(&a[y * n + c].norm()))
            .expect("nonempty pivot range");
        if a[p * n + c].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if p != c {
            for k in 0..n {
                a.swap(p * n + k, c * n + k);
            }
            det = -det;
        }
        let piv = a[c * n + c];
        det *= piv;
        for r in c + 1..n {
            let f = a[r * n + c] / piv;
            for k in c..n {
                let v = a[c * n + k];
                a[r * n + k] -= f * v;
            }
        }
    }
    det
}

/// `log2 det(I + rho / (M sigma^2) H H^H)`.
pub fn logdet_capacity(h: &[Complex64], n: usize, rho_total: f64, noise_var: f64) -> f64 {
    let snr = rho_total / (n as f64 * noise_var);
    let mut a = vec![Complex64::new(0.0, 0.0); n * n];
    for r in 0..n {
        for c in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..n {
                s += h[r * n + k] * h[c * n + k].conj();
            }
            a[r * n + c] = s * snr;
        }
        a[r * n + r] += 1.0;
    }
    determinant(a, n).re.max(1.0).log2()
}

/// Capacity of the MIMO baseline at total transmit power `rho_total`, split
/// evenly across the `M` antennas.
pub fn mimo_capacity_baseline(
    config: &SystemConfig,
    rho_total: f64,
    noise_var: f64,
    mode: MimoMode,
    samples: usize,
    seed: u64,
) -> Result<CapacityEstimate> {
    if !(noise_var > 0.0) || !(rho_total >= 0.0) {
        return Err(Error::domain(format!(
            "need rho >= 0 and noise_var > 0, got {rho_total}, {noise_var}"
        )));
    }
    let h = mimo_channel(config)?;
    let n = config.antennas;
    match mode {
        MimoMode::Logdet => Ok(CapacityEstimate {
            value: logdet_capacity(&h, n, rho_total, noise_var),
            std_error: 0.0,
            samples: 0,
        }),
        MimoMode::DcmcPsk => {
            let c = Constellation::for_order(config.constellation)?;
            let p = c.order();
            let k = p.pow(n as u32);
            let amp = (rho_total / n as f64).sqrt();
            let mut points = Vec::with_capacity(k * n);
            let mut x = vec![Complex64::new(0.0, 0.0); n];
            for idx in 0..k {
                let mut rest = idx;
                for xm in x.iter_mut() {
                    *xm = c.point(rest % p) * amp;
                    rest /= p;
                }
                for j in 0..n {
                    let y: Complex64 = (0..n).map(|m| h[j * n + m] * x[m]).sum();
                    points.push(y);
                }
            }
            dcmc_vector(&points, n, noise_var, samples, seed)
        }
    }
}
