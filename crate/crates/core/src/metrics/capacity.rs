//! Discrete-input continuous-output capacity by Monte Carlo over the noise.
//!
//! For hypotheses with noiseless receive points `s_k`, the capacity is
//! `log2 K - E[log2 sum_k exp(-(|s_t - s_k + w|^2 - |w|^2) / sigma^2)]`,
//! averaged over the true input `t`. Noise draws are shared by every term
//! and used in antithetic pairs `(w, -w)`, which cancels the part of each
//! exponent linear in `w`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::channel::ChannelTensor;
use crate::error::{Error, Result};
use crate::rng::{complex_gaussian, substream, Domain};

/// Capacity in bits per channel use with its Monte Carlo standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityEstimate {
    pub value: f64,
    pub std_error: f64,
    /// Noise realizations evaluated (both members of each antithetic pair).
    pub samples: usize,
}

/// Exponents below this (relative to the running maximum) are dropped; the
/// true hypothesis always contributes `e^0`, so the dropped mass is below
/// `K e^{-40}` relative.
const CUTOFF: f64 = 40.0;

/// Streaming `ln sum exp(v)` seeded with the true hypothesis' `v = 0`.
#[derive(Clone, Copy)]
struct Lse {
    max: f64,
    sum: f64,
}

impl Lse {
    #[inline]
    fn new() -> Self {
        Self { max: 0.0, sum: 1.0 }
    }

    #[inline]
    fn push(&mut self, v: f64) {
        if v <= self.max {
            if v > self.max - CUTOFF {
                self.sum += (v - self.max).exp();
            }
        } else {
            self.sum = self.sum * (self.max - v).exp() + 1.0;
            self.max = v;
        }
    }

    #[inline]
    fn value(&self) -> f64 {
        self.max + self.sum.ln()
    }
}

/// Pairwise difference table for one set of receive points, pre-scaled by
/// the noise variance: `|d|^2 / sigma^2` and `2 d / sigma^2` per dimension.
struct Differences {
    k: usize,
    dim: usize,
    dist: Vec<f64>,
    cross: Vec<Complex64>,
}

impl Differences {
    /// `points` holds `k` hypotheses of `dim` components each, row-major.
    fn new(points: &[Complex64], dim: usize, noise_var: f64) -> Self {
        let k = points.len() / dim;
        let mut dist = Vec::with_capacity(k * k);
        let mut cross = Vec::with_capacity(k * k * dim);
        for t in 0..k {
            for q in 0..k {
                let mut d2 = 0.0;
                for c in 0..dim {
                    let d = points[t * dim + c] - points[q * dim + c];
                    d2 += d.norm_sqr();
                    cross.push(d * (2.0 / noise_var));
                }
                dist.push(d2 / noise_var);
            }
        }
        Self { k, dim, dist, cross }
    }

    /// `(ln sum F(w), ln sum F(-w))` for true hypothesis `t`.
    #[inline]
    fn pair(&self, t: usize, w: &[Complex64]) -> (f64, f64) {
        let mut plus = Lse::new();
        let mut minus = Lse::new();
        let base = t * self.k;
        for q in 0..self.k {
            if q == t {
                continue;
            }
            let d2 = self.dist[base + q];
            let cr = &self.cross[(base + q) * self.dim..(base + q + 1) * self.dim];
            let mut lin = 0.0;
            for (c, wc) in cr.iter().zip(w) {
                lin += c.re * wc.re + c.im * wc.im;
            }
            plus.push(-(d2 + lin));
            minus.push(-(d2 - lin));
        }
        (plus.value(), minus.value())
    }
}

fn finish(per_pair: &[f64], k: usize) -> CapacityEstimate {
    let n = per_pair.len() as f64;
    let mean = per_pair.iter().sum::<f64>() / n;
    let var = if per_pair.len() > 1 {
        per_pair.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let ceiling = (k as f64).log2();
    CapacityEstimate {
        value: mean.clamp(0.0, ceiling) + 0.0,
        std_error: (var / n).sqrt(),
        samples: 2 * per_pair.len(),
    }
}

fn pair_count(samples: usize) -> Result<usize> {
    if samples == 0 {
        return Err(Error::config("samples", "must be at least 1"));
    }
    Ok(samples.div_ceil(2))
}

/// Capacity of the OAM-SM link measured on the first antenna of each
/// receive pair and averaged over pairs.
pub fn dcmc_capacity(
    h: &ChannelTensor,
    rho: f64,
    noise_var: f64,
    samples: usize,
    seed: u64,
) -> Result<CapacityEstimate> {
    if !(noise_var > 0.0) || !(rho >= 0.0) {
        return Err(Error::domain(format!(
            "need rho >= 0 and noise_var > 0, got {rho}, {noise_var}"
        )));
    }
    let pairs = pair_count(samples)?;
    let m_count = h.antennas();
    let l_count = h.states().len();
    let constellation = h.constellation();
    let k = m_count * l_count * constellation.order();
    let ln_k = (k as f64).ln();
    let sr = rho.sqrt();

    let noise: Vec<Complex64> = (0..pairs)
        .into_par_iter()
        .map(|n| complex_gaussian(&mut substream(seed, Domain::Capacity, n as u64), noise_var))
        .collect();

    let mut acc = vec![0.0; pairs];
    for m_rx in 1..=m_count {
        let mut points = Vec::with_capacity(k);
        for m in 1..=m_count {
            for li in 0..l_count {
                let g = sr * h.at(m, li, m_rx, 1);
                points.extend(constellation.points().iter().map(|x| g * x));
            }
        }
        let diffs = Differences::new(&points, 1, noise_var);
        let contrib: Vec<f64> = noise
            .par_iter()
            .map(|w| {
                let w = std::slice::from_ref(w);
                (0..k)
                    .map(|t| {
                        let (a, b) = diffs.pair(t, w);
                        0.5 * (a + b) - ln_k
                    })
                    .sum::<f64>()
            })
            .collect();
        for (a, c) in acc.iter_mut().zip(&contrib) {
            *a += c;
        }
    }
    let scale = -1.0 / ((m_count * k) as f64 * std::f64::consts::LN_2);
    let per_pair: Vec<f64> = acc.iter().map(|a| a * scale).collect();
    Ok(finish(&per_pair, k))
}

/// Capacity of a vector channel with receive points `points` (`k` rows of
/// `dim` components) in white noise of variance `noise_var` per component.
/// Draw `n` takes true input `n mod k`, so every input is visited equally
/// often.
pub(crate) fn dcmc_vector(
    points: &[Complex64],
    dim: usize,
    noise_var: f64,
    samples: usize,
    seed: u64,
) -> Result<CapacityEstimate> {
    let pairs = pair_count(samples)?;
    let diffs = Differences::new(points, dim, noise_var);
    let k = diffs.k;
    let ln_k = (k as f64).ln();
    let per_pair: Vec<f64> = (0..pairs)
        .into_par_iter()
        .map(|n| {
            let mut rng = substream(seed, Domain::Mimo, n as u64);
            let w: Vec<Complex64> = (0..dim).map(|_| complex_gaussian(&mut rng, noise_var)).collect();
            let (a, b) = diffs.pair(n % k, &w);
            -(0.5 * (a + b) - ln_k) / std::f64::consts::LN_2
        })
        .collect();
    Ok(finish(&per_pair, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streaming_lse_matches_direct() {
        let vals = [-3.0, 2.5, 0.7, -50.0, 2.4];
        let mut s = Lse::new();
        for v in vals {
            s.push(v);
        }
        let direct = (1.0 + vals.iter().map(|v: &f64| v.exp()).sum::<f64>()).ln();
        assert!((s.value() - direct).abs() < 1e-15);
    }

    #[test]
    fn separated_points_reach_ceiling() {
        let pts: Vec<Complex64> = (0..4).map(|k| Complex64::new(100.0 * k as f64, 0.0)).collect();
        let c = dcmc_vector(&pts, 1, 1.0, 200, 3).unwrap();
        assert_eq!(c.value, 2.0);
        assert_eq!(c.std_error, 0.0);
    }

    #[test]
    fn coincident_points_carry_nothing() {
        let pts = vec![Complex64::new(1.0, 0.0); 8];
        let c = dcmc_vector(&pts, 1, 1.0, 50, 3).unwrap();
        assert_eq!(c.value, 0.0);
    }
}
