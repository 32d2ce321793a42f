//! Adaptive Gauss-Kronrod quadrature.
//!
//! Finite intervals are bisected globally, always splitting the panel with the
//! largest error estimate, until the summed estimate drops below the absolute
//! tolerance. A semi-infinite range `[a, inf)` is mapped onto `[0, 1)` through
//! `g = a + t / (1 - t)`.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// 7-point Gauss weights on the odd Kronrod abscissae (and the centre).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Default absolute tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Default cap on the number of panels.
pub const DEFAULT_MAX_PANELS: usize = 4000;

/// One 15-point Kronrod evaluation over `[a, b]`; returns the estimate and
/// `|K15 - G7|`.
pub fn gauss_kronrod_15<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Upper limit of integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Upper {
    Finite(f64),
    Infinity,
}

impl From<f64> for Upper {
    fn from(x: f64) -> Self {
        if x == f64::INFINITY {
            Upper::Infinity
        } else {
            Upper::Finite(x)
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Integrates `f` over `[lower, upper]` to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lower: f64, upper: impl Into<Upper>, tol: f64) -> Result<f64> {
    match upper.into() {
        Upper::Finite(b) => integrate_panels(&f, &[lower, b], tol, DEFAULT_MAX_PANELS),
        Upper::Infinity => {
            let g = |t: f64| {
                let s = 1.0 - t;
                f(lower + t / s) / (s * s)
            };
            // Start from a few panels so a narrow peak far from the origin is sampled.
            let breaks = [0.0, 0.5, 0.75, 0.875, 0.9375, 1.0];
            integrate_panels(&g, &breaks, tol, DEFAULT_MAX_PANELS)
        }
    }
}

/// Integrates over `[lower, inf)` where `tail(c)` bounds `int_c^inf |f|`.
/// The range is cut at the first `c` (doubling from `lower + 1`) whose tail
/// bound is below `tol / 10`, then the transformed integral is taken over the
/// retained part.
pub fn integrate_with_tail<F, T>(f: F, lower: f64, tail: T, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    T: Fn(f64) -> f64,
{
    let mut span = 1.0;
    while tail(lower + span) >= 0.1 * tol {
        span *= 2.0;
        if !span.is_finite() || span > 1e300 {
            return Err(Error::Numeric {
                reason: "tail bound never drops below tolerance".into(),
                estimate: f64::NAN,
                bound: f64::INFINITY,
            });
        }
    }
    let t_cut = span / (1.0 + span);
    let g = |t: f64| {
        let s = 1.0 - t;
        f(lower + t / s) / (s * s)
    };
    let breaks: Vec<f64> = (0..=8).map(|i| t_cut * i as f64 / 8.0).collect();
    integrate_panels(&g, &breaks, 0.9 * tol, DEFAULT_MAX_PANELS)
}

/// Adaptive integration starting from the given breakpoints (ascending).
pub fn integrate_panels<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    breaks: &[f64],
    tol: f64,
    max_panels: usize,
) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    if breaks.len() < 2 || breaks.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("integration limits must be finite"));
    }
    let mut heap = BinaryHeap::new();
    for w in breaks.windows(2) {
        if w[1] < w[0] {
            return Err(Error::domain("breakpoints must be ascending"));
        }
        if w[1] > w[0] {
            let (value, err) = gauss_kronrod_15(f, w[0], w[1]);
            heap.push(Panel { a: w[0], b: w[1], value, err });
        }
    }
    loop {
        let total: f64 = heap.iter().map(|p| p.value).sum();
        let err: f64 = heap.iter().map(|p| p.err).sum();
        if !total.is_finite() || !err.is_finite() {
            return Err(Error::Numeric {
                reason: "integrand produced a non-finite value".into(),
                estimate: total,
                bound: err,
            });
        }
        if err <= tol || err <= 50.0 * f64::EPSILON * total.abs() {
            return Ok(total);
        }
        if heap.len() >= max_panels {
            return Err(Error::Numeric {
                reason: format!("no convergence after {max_panels} panels"),
                estimate: total,
                bound: err,
            });
        }
        let worst = heap.pop().expect("heap is nonempty while error is positive");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel cannot be split further in floating point; accept its estimate.
            heap.push(Panel { err: 0.0, ..worst });
            continue;
        }
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            let (value, err) = gauss_kronrod_15(f, a, b);
            heap.push(Panel { a, b, value, err });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_interval_length() {
        let k: f64 = WGK[7] + 2.0 * WGK[..7].iter().sum::<f64>();
        let g: f64 = WG[3] + 2.0 * WG[..3].iter().sum::<f64>();
        assert!((k - 2.0).abs() < 1e-15);
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn kronrod_rule_is_exact_for_degree_22() {
        for n in 0..=22 {
            let (v, _) = gauss_kronrod_15(&|x: f64| x.powi(n), 0.0, 1.0);
            assert!((v - 1.0 / (n as f64 + 1.0)).abs() < 1e-14, "degree {n}");
        }
    }

    #[test]
    fn gauss_rule_is_exact_for_degree_13() {
        for n in 0..=13 {
            let (v, e) = gauss_kronrod_15(&|x: f64| x.powi(n), -1.0, 1.0);
            let exact = if n % 2 == 0 { 2.0 / (n as f64 + 1.0) } else { 0.0 };
            assert!((v - exact).abs() < 1e-14);
            assert!(e < 1e-14, "degree {n}: gauss and kronrod disagree by {e}");
        }
    }

    #[test]
    fn polynomial_and_exponential() {
        let v = integrate(|g| 3.0 * g * g, 0.0, 1.0, 1e-12).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        let v = integrate(|g: f64| 0.5 * (-0.5 * g).exp(), 0.0, f64::INFINITY, 1e-10).unwrap();
        assert!((v - 1.0).abs() < 1e-10);
    }

    #[test]
    fn tail_truncation() {
        let v = integrate_with_tail(|g: f64| (-g).exp(), 0.0, |c: f64| (-c).exp(), 1e-11).unwrap();
        assert!((v - 1.0).abs() < 1e-11);
    }

    #[test]
    fn non_convergence_reports_bound() {
        let err = integrate_panels(&|x: f64| (1.0 / x).sin(), &[1e-9, 1.0], 1e-15, 8).unwrap_err();
        match err {
            Error::Numeric { estimate, bound, .. } => {
                assert!(estimate.is_finite());
                assert!(bound > 0.0);
            }
            e => panic!("unexpected {e}"),
        }
    }
}
