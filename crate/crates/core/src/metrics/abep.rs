//! Average bit error probability of the three-step detector.
//!
//! The antenna decision compares `|y_{j,1}|^2` across pairs. Scaled by the
//! per-component noise variance `sigma0^2 = sigma^2 / 2`, each is a
//! noncentral chi-square variate with two degrees of freedom, and the
//! probability of a correct decision is
//! `int_0^inf prod_{j != m} F(g; lambda_j) f(g; lambda_m) dg`.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::channel::ChannelTensor;
use crate::config::{DistanceMode, NoncentralityMode, SystemConfig};
use crate::error::Result;
use crate::numerics::special::{marcum_pair, q_tail};
use crate::numerics::{integrate_panels, Constellation, NoncentralChiSq2, DEFAULT_TOL};

/// Noncentralities `lambda_{j,1}` of the first antenna of every pair when
/// `Tx_m` sends point `x` on the state with index `li`.
pub fn noncentralities(
    h: &ChannelTensor,
    m: usize,
    li: usize,
    x: Complex64,
    rho: f64,
    noise_var: f64,
    mode: NoncentralityMode,
) -> Vec<f64> {
    let sigma0_sq = 0.5 * noise_var;
    (1..=h.antennas())
        .map(|j| {
            let hx = h.at(m, li, j, 1) * x;
            match mode {
                NoncentralityMode::Consistent => rho * hx.norm_sqr() / sigma0_sq,
                NoncentralityMode::Printed => (rho * hx).norm_sqr() / sigma0_sq,
            }
        })
        .collect()
}

/// Window `[lo, hi]` outside which the law with noncentrality `lam` has less
/// than `eps` mass on either side.
fn window(lam: f64, eps: f64) -> (f64, f64) {
    let d = NoncentralChiSq2::new(lam).expect("noncentrality is finite and nonnegative");
    let mean = lam + 2.0;
    let sd = (4.0 * lam + 4.0).sqrt();
    let mut k = 4.0;
    let hi = loop {
        let g = mean + k * sd;
        if marcum_pair(lam.sqrt(), g.sqrt()).0 < eps {
            break g;
        }
        k *= 1.5;
    };
    let mut k = 4.0;
    let lo = loop {
        let g = mean - k * sd;
        if g <= 0.0 {
            break 0.0;
        }
        if d.cdf_unchecked(g) < eps {
            break g;
        }
        k *= 1.5;
    };
    (lo, hi)
}

/// Probability that pair `m` (0-based position in `lams`) shows the largest
/// statistic, for independent statistics with the given noncentralities.
pub fn detection_prob_from_noncentralities(lams: &[f64], m: usize, tol: f64) -> Result<f64> {
    if lams.len() <= 1 {
        return Ok(1.0);
    }
    let own = NoncentralChiSq2::new(lams[m])?;
    let others: Vec<(f64, f64)> = lams
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != m)
        .map(|(_, &l)| {
            NoncentralChiSq2::new(l).map(|_| (l.sqrt(), l))
        })
        .collect::<Result<_>>()?;
    // The integrand is at most the density of the own statistic, so the
    // truncated tails together carry less than tol / 10.
    let (lo, hi) = window(lams[m], tol / 20.0);
    let f = |g: f64| {
        let dens = own.pdf_unchecked(g);
        if dens == 0.0 {
            return 0.0;
        }
        let sg = g.sqrt();
        others
            .iter()
            .fold(dens, |acc, &(a, _)| acc * marcum_pair(a, sg).1)
    };
    let panels = 16;
    let breaks: Vec<f64> = (0..=panels)
        .map(|i| lo + (hi - lo) * i as f64 / panels as f64)
        .collect();
    let v = integrate_panels(&f, &breaks, 0.9 * tol, 2000)?;
    Ok(v.clamp(0.0, 1.0))
}

/// Probability that the antenna decision is correct when `Tx_m` sends `x` on
/// state `l`.
pub fn antenna_detection_prob(
    h: &ChannelTensor,
    m: usize,
    l: i32,
    x: Complex64,
    rho: f64,
    noise_var: f64,
) -> Result<f64> {
    let li = h
        .state_index(l)
        .ok_or_else(|| crate::Error::domain(format!("state {l} not in the channel")))?;
    if m == 0 || m > h.antennas() {
        return Err(crate::Error::domain(format!("antenna {m} outside 1..={}", h.antennas())));
    }
    let lams = noncentralities(h, m, li, x, rho, noise_var, h.config().noncentrality_mode);
    detection_prob_from_noncentralities(&lams, m - 1, DEFAULT_TOL)
}

/// Correct-decision probability averaged uniformly over antenna, state and
/// constellation point. Inputs with identical noncentrality patterns (up to
/// a permutation of the other pairs) share one evaluation.
pub fn average_antenna_detection_prob(h: &ChannelTensor, rho: f64, noise_var: f64) -> Result<f64> {
    let mode = h.config().noncentrality_mode;
    let constellation = h.constellation();
    let mut cache: HashMap<Vec<u64>, f64> = HashMap::new();
    let mut total = 0.0;
    let mut count = 0usize;
    for m in 1..=h.antennas() {
        for li in 0..h.states().len() {
            for &x in constellation.points() {
                let lams = noncentralities(h, m, li, x, rho, noise_var, mode);
                let mut key: Vec<u64> = vec![lams[m - 1].to_bits()];
                let mut rest: Vec<u64> = lams
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != m - 1)
                    .map(|(_, v)| v.to_bits())
                    .collect();
                rest.sort_unstable();
                key.extend(rest);
                let p = match cache.get(&key) {
                    Some(&p) => p,
                    None => {
                        let p = detection_prob_from_noncentralities(&lams, m - 1, DEFAULT_TOL)?;
                        cache.insert(key, p);
                        p
                    }
                };
                total += p;
                count += 1;
            }
        }
    }
    Ok(total / count as f64)
}

/// `gamma_n = gamma_{n-1} + (2^{n-1} - gamma_{n-1}) / (2^n - 1)`, `gamma_0 = 0`.
pub fn gray_gamma(n: u32) -> f64 {
    let mut g = 0.0;
    for k in 1..=n {
        let half = 2f64.powi(k as i32 - 1);
        g += (half - g) / (2f64.powi(k as i32) - 1.0);
    }
    g
}

/// Antenna-index error probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntennaAbep {
    /// Probability of choosing the wrong antenna.
    pub symbol_error: f64,
    /// Bit error probability of the antenna bits.
    pub bit_error: f64,
}

impl AntennaAbep {
    /// Probability that the antenna bits are correct.
    pub fn bit_success(&self) -> f64 {
        1.0 - self.bit_error
    }
}

/// Antenna-bit error probability, converting symbol errors with the Gray
/// penalty `gamma_{log2 M} / log2 M`. With one antenna there are no antenna bits.
pub fn antenna_abep(h: &ChannelTensor, rho: f64, noise_var: f64) -> Result<AntennaAbep> {
    let m = h.antennas();
    if m == 1 {
        return Ok(AntennaAbep {
            symbol_error: 0.0,
            bit_error: 0.0,
        });
    }
    let es = 1.0 - average_antenna_detection_prob(h, rho, noise_var)?;
    let nbits = m.trailing_zeros();
    Ok(AntennaAbep {
        symbol_error: es,
        bit_error: es * gray_gamma(nbits) / nbits as f64,
    })
}

/// Bit error probability of the radiated symbol over scalar gain `h`.
///
/// This is the pairwise union bound, so at low SNR and `P >= 4` it can reach
/// or exceed one.
pub fn mod_bep(
    h: Complex64,
    rho: f64,
    noise_var: f64,
    constellation: &Constellation,
    mode: DistanceMode,
) -> f64 {
    let p_n = constellation.order();
    let bits = constellation.bits_per_symbol();
    if bits == 0 {
        return 0.0;
    }
    let scale = rho / (2.0 * noise_var) * h.norm_sqr();
    let mut sum = 0.0;
    for p in 0..p_n {
        let xp = constellation.point(p);
        for q in 0..p_n {
            if q == p {
                continue;
            }
            let xq = constellation.point(q);
            let dist = match mode {
                DistanceMode::Euclidean => (xp - xq).norm(),
                DistanceMode::Printed => 2.0 * (xp * (xp - xq).conj()).re,
            };
            let arg = (scale * dist * dist).sqrt();
            sum += constellation.hamming(p, q) as f64 * q_tail(arg);
        }
    }
    sum / (p_n as f64 * bits as f64)
}

/// Error probabilities of one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbepReport {
    pub antenna: AntennaAbep,
    /// Constellation-bit error probability, averaged over antenna and state
    /// and capped at one.
    pub modulation: f64,
    /// `1 - (1 - e_ant)(1 - e_mod)`.
    pub total: f64,
}

/// Error probabilities for `config` at transmit power `rho`.
pub fn abep(config: &SystemConfig, rho: f64) -> Result<AbepReport> {
    let h = ChannelTensor::build(config)?;
    abep_with(&h, rho)
}

/// As [`abep`] for a prebuilt channel.
pub fn abep_with(h: &ChannelTensor, rho: f64) -> Result<AbepReport> {
    let config = h.config();
    let noise_var = config.noise_var();
    let antenna = antenna_abep(h, rho, noise_var)?;
    let mut e_mod = 0.0;
    let mut n = 0usize;
    for m in 1..=h.antennas() {
        for li in 0..h.states().len() {
            e_mod += mod_bep(h.at(m, li, m, 1), rho, noise_var, h.constellation(), config.distance_mode);
            n += 1;
        }
    }
    // The union bound is capped so the composed value stays a probability.
    let modulation = (e_mod / n as f64).min(1.0);
    let total = 1.0 - antenna.bit_success() * (1.0 - modulation);
    Ok(AbepReport {
        antenna,
        modulation,
        total,
    })
}
