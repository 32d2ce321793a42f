//! Gaussian tail, modified Bessel, Marcum Q and the noncentral chi-square
//! distribution with two degrees of freedom.

use crate::error::{Error, Result};
use crate::numerics::quadrature::gauss_kronrod_15;

/// Gaussian tail probability `Q(x) = P(N(0,1) > x)`.
pub fn q_function(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!("q_function argument {x} is not finite")));
    }
    Ok(q_tail(x))
}

/// Unchecked Gaussian tail, used in inner loops with arguments known finite.
#[inline]
pub(crate) fn q_tail(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Natural log of the modified Bessel function `I0(x)`.
pub fn log_bessel_i0(x: f64) -> Result<f64> {
    if !(x >= 0.0) || x.is_infinite() {
        return Err(Error::domain(format!("log_bessel_i0 requires finite x >= 0, got {x}")));
    }
    Ok(ln_i0(x))
}

const SERIES_LIMIT: f64 = 20.0;

pub(crate) fn ln_i0(x: f64) -> f64 {
    ln_i0e(x) + x
}

/// `ln I0(x) - x`, without the cancellation of forming `ln I0(x)` first.
fn ln_i0e(x: f64) -> f64 {
    if x < SERIES_LIMIT {
        // I0(x) = sum (x^2/4)^k / (k!)^2
        let q = 0.25 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        loop {
            term *= q / (k * k);
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
            k += 1.0;
        }
        sum.ln() - x
    } else {
        // I0(x) ~ e^x / sqrt(2 pi x) * sum ((2k-1)!!)^2 / (k! (8x)^k)
        let mut c = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        loop {
            let next = c * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * x * k);
            if next > c || next < 1e-17 * sum {
                break;
            }
            c = next;
            sum += c;
            k += 1.0;
        }
        -0.5 * (2.0 * std::f64::consts::PI * x).ln() + sum.ln()
    }
}

/// Exponentially scaled `I0(x) e^{-x}`.
#[inline]
fn i0e(x: f64) -> f64 {
    ln_i0e(x).exp()
}

#[inline]
fn ln_poisson_pmf(k: u64, mu: f64) -> f64 {
    if mu == 0.0 {
        return if k == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    let kf = k as f64;
    -mu + kf * mu.ln() - libm::lgamma(kf + 1.0)
}

/// Returns `(P(N <= k), P(N > k))` for `N ~ Poisson(mu)`, each summed directly
/// on the side where it is the smaller tail so neither loses relative accuracy.
fn poisson_cdf_pair(k: u64, mu: f64) -> (f64, f64) {
    if mu == 0.0 {
        return (1.0, 0.0);
    }
    let kf = k as f64;
    if kf < mu {
        let mut p = ln_poisson_pmf(k, mu).exp();
        let mut sum = p;
        let mut i = k;
        while i > 0 && p > 1e-18 * sum {
            p *= i as f64 / mu;
            sum += p;
            i -= 1;
        }
        let lower = sum.min(1.0);
        (lower, 1.0 - lower)
    } else {
        let mut i = k + 1;
        let mut p = ln_poisson_pmf(i, mu).exp();
        let mut sum = p;
        while p > 1e-18 * sum {
            i += 1;
            p *= mu / i as f64;
            sum += p;
        }
        let upper = sum.min(1.0);
        (1.0 - upper, upper)
    }
}

/// Mass of the Poisson(mu) law outside `[k_lo, k_hi]` is below this bound.
const WINDOW_EPS: f64 = 1e-20;
/// Above this Poisson mean the series is replaced by the Rice integral.
const SERIES_MEAN_LIMIT: f64 = 2000.0;

/// First-order Marcum Q function `Q1(a, b)`.
pub fn marcum_q1(a: f64, b: f64) -> Result<f64> {
    check_marcum(a, b)?;
    Ok(marcum_pair(a, b).0)
}

fn check_marcum(a: f64, b: f64) -> Result<()> {
    if !(a >= 0.0) || !(b >= 0.0) || a.is_infinite() || b.is_infinite() {
        return Err(Error::domain(format!(
            "marcum_q1 requires finite a, b >= 0, got ({a}, {b})"
        )));
    }
    Ok(())
}

/// Returns `(Q1(a,b), 1 - Q1(a,b))` with both members accurate in relative terms.
pub(crate) fn marcum_pair(a: f64, b: f64) -> (f64, f64) {
    if b == 0.0 {
        return (1.0, 0.0);
    }
    let t = 0.5 * b * b;
    if t == 0.0 {
        return (1.0, 0.0);
    }
    if a == 0.0 {
        let q = (-t).exp();
        return (q, -(-t).exp_m1());
    }
    let mu = 0.5 * a * a;
    if mu > SERIES_MEAN_LIMIT {
        return marcum_rice(a, b);
    }
    marcum_series(mu, t)
}

/// Poisson mixture form: `Q1 = P(N <= K)` with `K ~ Pois(a^2/2)`, `N ~ Pois(b^2/2)`.
fn marcum_series(mu: f64, t: f64) -> (f64, f64) {
    let mode = mu.floor() as u64;

    // Upper end of the K window: tail beyond k is at most p(k) r/(1-r), r = mu/(k+1).
    let mut k_hi = mode;
    let mut ln_p = ln_poisson_pmf(k_hi, mu);
    loop {
        let r = mu / (k_hi as f64 + 1.0);
        if r < 1.0 && ln_p.exp() * r / (1.0 - r) < WINDOW_EPS {
            break;
        }
        k_hi += 1;
        ln_p += mu.ln() - (k_hi as f64).ln();
    }
    // Lower end: mass below k is at most p(k) r/(1-r), r = k/mu.
    let mut k_lo = mode;
    let mut ln_p = ln_poisson_pmf(k_lo, mu);
    while k_lo > 0 {
        let r = k_lo as f64 / mu;
        if r < 1.0 && ln_p.exp() * r / (1.0 - r) < WINDOW_EPS {
            break;
        }
        ln_p += (k_lo as f64).ln() - mu.ln();
        k_lo -= 1;
    }

    let ln_mu = mu.ln();
    let ln_t = t.ln();

    // Forward pass: sum p_K(k) P(N <= k).
    let mut lower_sum = 0.0;
    let (mut f_n, _) = poisson_cdf_pair(k_lo, t);
    let mut ln_pk = ln_poisson_pmf(k_lo, mu);
    let mut ln_pn = ln_poisson_pmf(k_lo, t);
    for k in k_lo..=k_hi {
        if k > k_lo {
            let kf = k as f64;
            ln_pk += ln_mu - kf.ln();
            ln_pn += ln_t - kf.ln();
            f_n += ln_pn.exp();
        }
        lower_sum += ln_pk.exp() * f_n;
    }

    // Backward pass: sum p_K(k) P(N > k).
    let mut upper_sum = 0.0;
    let (_, mut g_n) = poisson_cdf_pair(k_hi, t);
    let mut ln_pk = ln_poisson_pmf(k_hi, mu);
    let mut ln_pn = ln_poisson_pmf(k_hi, t);
    let mut k = k_hi;
    loop {
        upper_sum += ln_pk.exp() * g_n;
        if k == k_lo {
            break;
        }
        // step from k to k-1: G(k-1) = G(k) + p_N(k)
        g_n += ln_pn.exp();
        let kf = k as f64;
        ln_pk += kf.ln() - ln_mu;
        ln_pn += kf.ln() - ln_t;
        k -= 1;
    }

    if lower_sum <= upper_sum {
        let q = lower_sum.clamp(0.0, 1.0);
        (q, 1.0 - q)
    } else {
        let c = upper_sum.clamp(0.0, 1.0);
        (1.0 - c, c)
    }
}

/// Rice density integral for large `a`:
/// `Q1(a,b) = int_b^inf x exp(-(x-a)^2/2) I0e(a x) dx`.
fn marcum_rice(a: f64, b: f64) -> (f64, f64) {
    let f = |x: f64| {
        if x <= 0.0 {
            0.0
        } else {
            x * (-0.5 * (x - a) * (x - a)).exp() * i0e(a * x)
        }
    };
    // The Gaussian factor is below e^{-50} of its edge value ten units away.
    const REACH: f64 = 10.0;
    let panel_sum = |lo: f64, hi: f64| {
        let n = ((hi - lo) / 0.5).ceil().max(1.0) as usize;
        let h = (hi - lo) / n as f64;
        (0..n)
            .map(|i| gauss_kronrod_15(&f, lo + i as f64 * h, lo + (i + 1) as f64 * h).0)
            .sum::<f64>()
    };
    if b >= a {
        let q = panel_sum(b, b + REACH).clamp(0.0, 1.0);
        (q, 1.0 - q)
    } else {
        let c = panel_sum((b - REACH).max(0.0), b).clamp(0.0, 1.0);
        (1.0 - c, c)
    }
}

/// Noncentral chi-square law with two degrees of freedom and unit-variance
/// components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoncentralChiSq2 {
    noncentrality: f64,
}

impl NoncentralChiSq2 {
    pub fn new(noncentrality: f64) -> Result<Self> {
        if !(noncentrality >= 0.0) || noncentrality.is_infinite() {
            return Err(Error::domain(format!(
                "noncentrality must be finite and >= 0, got {noncentrality}"
            )));
        }
        Ok(Self { noncentrality })
    }

    pub fn noncentrality(&self) -> f64 {
        self.noncentrality
    }

    pub fn pdf(&self, g: f64) -> Result<f64> {
        check_arg(g)?;
        Ok(self.pdf_unchecked(g))
    }

    pub fn cdf(&self, g: f64) -> Result<f64> {
        check_arg(g)?;
        Ok(self.cdf_unchecked(g))
    }

    /// Upper tail `1 - cdf(g)`, accurate when small.
    pub fn sf(&self, g: f64) -> Result<f64> {
        check_arg(g)?;
        Ok(marcum_pair(self.noncentrality.sqrt(), g.sqrt()).0)
    }

    pub(crate) fn pdf_unchecked(&self, g: f64) -> f64 {
        let lam = self.noncentrality;
        // (g + lam) / 2 - sqrt(lam g) = (sqrt(g) - sqrt(lam))^2 / 2
        let d = g.sqrt() - lam.sqrt();
        0.5 * (-0.5 * d * d + ln_i0e((lam * g).sqrt())).exp()
    }

    pub(crate) fn cdf_unchecked(&self, g: f64) -> f64 {
        marcum_pair(self.noncentrality.sqrt(), g.sqrt()).1
    }
}

fn check_arg(g: f64) -> Result<()> {
    if !(g >= 0.0) {
        return Err(Error::domain(format!("chi-square argument must be >= 0, got {g}")));
    }
    Ok(())
}

/// Density of the noncentral chi-square law at `g`.
pub fn ncx2_pdf(g: f64, dist: NoncentralChiSq2) -> Result<f64> {
    dist.pdf(g)
}

/// Distribution function of the noncentral chi-square law at `g`.
pub fn ncx2_cdf(g: f64, dist: NoncentralChiSq2) -> Result<f64> {
    dist.cdf(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_basics() {
        assert_eq!(q_function(0.0).unwrap(), 0.5);
        let far = q_function(40.0).unwrap();
        assert!((0.0..1e-300).contains(&far));
        assert!(q_function(f64::NAN).is_err());
        assert!(q_function(f64::INFINITY).is_err());
    }

    #[test]
    fn i0_small_values() {
        assert_eq!(log_bessel_i0(0.0).unwrap(), 0.0);
        assert!((log_bessel_i0(1.0).unwrap() - 1.266_065_877_752_008_4_f64.ln()).abs() < 1e-15);
        assert!(log_bessel_i0(-1.0).is_err());
    }

    #[test]
    fn i0_branches_meet() {
        // Evaluate the series past its switch point and compare with the asymptotic branch.
        let x: f64 = SERIES_LIMIT;
        let q = 0.25 * x * x;
        let (mut term, mut sum, mut k) = (1.0_f64, 1.0_f64, 1.0_f64);
        while term > 1e-18 * sum {
            term *= q / (k * k);
            sum += term;
            k += 1.0;
        }
        assert!((sum.ln() - ln_i0(x)).abs() < 1e-13);
    }

    #[test]
    fn i0_huge_argument_is_finite() {
        let v = log_bessel_i0(1e6).unwrap();
        assert!(v.is_finite());
    }

    #[test]
    fn marcum_edges() {
        assert_eq!(marcum_q1(3.0, 0.0).unwrap(), 1.0);
        let b: f64 = 1.7;
        assert!((marcum_q1(0.0, b).unwrap() - (-b * b / 2.0).exp()).abs() < 1e-15);
        assert!(marcum_q1(-1.0, 1.0).is_err());
    }

    #[test]
    fn rice_branch_matches_series_near_switch() {
        // Both routes evaluated for the same (a, b) straddling the switch.
        let a = (2.0 * SERIES_MEAN_LIMIT).sqrt() * 0.999;
        for db in [-3.0, -1.0, 0.0, 0.5, 2.0] {
            let b: f64 = a + db;
            let s = marcum_series(0.5 * a * a, 0.5 * b * b);
            let r = marcum_rice(a, b);
            assert!((s.0 - r.0).abs() < 1e-12, "db={db}: {s:?} vs {r:?}");
            assert!((s.1 - r.1).abs() < 1e-12);
        }
    }

    #[test]
    fn poisson_pair_sums_to_one() {
        for &(k, mu) in &[(0u64, 0.3), (5, 5.0), (3, 40.0), (80, 40.0), (1000, 999.5)] {
            let (lo, hi) = poisson_cdf_pair(k, mu);
            assert!((lo + hi - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn ncx2_closed_forms() {
        let d0 = NoncentralChiSq2::new(0.0).unwrap();
        assert_eq!(d0.pdf(0.0).unwrap(), 0.5);
        assert!((d0.pdf(2.0).unwrap() - 0.5 * (-1.0f64).exp()).abs() < 1e-16);
        assert!((d0.cdf(2.0).unwrap() - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        let d = NoncentralChiSq2::new(7.0).unwrap();
        assert_eq!(d.cdf(0.0).unwrap(), 0.0);
        assert!(d.pdf(-1.0).is_err());
        assert!(NoncentralChiSq2::new(-0.1).is_err());
    }
}
