//! Numerical kernels: special functions, quadrature, log-sum-exp and PSK
//! constellations.

pub mod constellation;
pub mod quadrature;
pub mod special;

pub use constellation::{psk_constellation, Constellation};
pub use quadrature::{integrate, integrate_panels, integrate_with_tail, Upper, DEFAULT_TOL};
pub use special::{
    log_bessel_i0, marcum_q1, ncx2_cdf, ncx2_pdf, q_function, NoncentralChiSq2,
};

use crate::error::{Error, Result};

/// `ln sum exp(v_i)` without overflow. Entries may be `-inf`.
pub fn log_sum_exp(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::domain("log_sum_exp of an empty list"));
    }
    if values.iter().any(|v| v.is_nan() || *v == f64::INFINITY) {
        return Err(Error::domain("log_sum_exp entries must be finite or -inf"));
    }
    Ok(lse(values))
}

/// Unchecked log-sum-exp.
pub(crate) fn lse(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    let s: f64 = values.iter().map(|v| (v - max).exp()).sum();
    max + s.ln()
}
