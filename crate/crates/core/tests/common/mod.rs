//! Oracles shared by the integration tests. Nothing here calls into the
//! library's numerics.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;

/// `P(k+1, x)`: probability that a Poisson(x) variate is at most `k`, complemented.
fn gamma_p_int(k: usize, x: f64) -> f64 {
    // 1 - e^{-x} sum_{i<=k} x^i / i!
    let mut term = (-x).exp();
    let mut s = term;
    for i in 1..=k {
        term *= x / i as f64;
        s += term;
    }
    1.0 - s
}

/// Noncentral chi-square CDF with two degrees of freedom as a Poisson
/// mixture of central chi-square laws.
pub fn ncx2_cdf_series(g: f64, lam: f64) -> f64 {
    if g <= 0.0 {
        return 0.0;
    }
    let mu = lam / 2.0;
    let mut w = (-mu).exp();
    let mut total = 0.0;
    let mut k = 0usize;
    loop {
        total += w * gamma_p_int(k, g / 2.0);
        k += 1;
        w *= mu / k as f64;
        if (k as f64 > mu && w < 1e-18) || k > 5000 {
            break;
        }
    }
    total
}

/// Noncentral chi-square density with two degrees of freedom as a Poisson
/// mixture of central densities.
pub fn ncx2_pdf_series(g: f64, lam: f64) -> f64 {
    if g < 0.0 {
        return 0.0;
    }
    let mu = lam / 2.0;
    let x = g / 2.0;
    // central chi2 with 2k+2 dof: x^k e^{-x} / (2 k!)
    let mut w = (-mu).exp();
    let mut c = (-x).exp() / 2.0;
    let mut total = w * c;
    for k in 1..5000 {
        w *= mu / k as f64;
        c *= x / k as f64;
        total += w * c;
        if (k as f64) * (k as f64) > mu * x && w * c < 1e-18 * total {
            break;
        }
    }
    total
}

/// Physicists' Gauss-Hermite nodes and weights for `int e^{-x^2} f(x) dx`.
pub fn gauss_hermite(n: usize) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0); n];
    let m = n.div_ceil(2);
    let pim4 = PI.powf(-0.25);
    let mut z = 0.0f64;
    for i in 0..m {
        z = match i {
            0 => (2.0 * n as f64 + 1.0).sqrt() - 1.85575 * (2.0 * n as f64 + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * (n as f64).powf(0.426) / z,
            2 => 1.86 * z - 0.86 * out[0].0,
            3 => 1.91 * z - 0.91 * out[1].0,
            _ => 2.0 * z - out[i - 2].0,
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = z * (2.0 / (j as f64 + 1.0)).sqrt() * p2 - (j as f64 / (j as f64 + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * n as f64).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / (pp * pp);
        out[i] = (z, w);
        out[n - 1 - i] = (-z, w);
    }
    out
}

/// Composite Simpson rule with `n` (even) intervals.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let x = a + i as f64 * h;
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(x);
    }
    s * h / 3.0
}

/// Laguerre-Gaussian field with radial index zero, written out directly.
pub fn lg_field(w0: f64, l: i32, lambda: f64, r: f64, phi: f64, z: f64) -> Complex64 {
    let zr = PI * w0 * w0 / lambda;
    let w = w0 * (1.0 + (z / zr).powi(2)).sqrt();
    let la = l.unsigned_abs() as i32;
    let fact: f64 = (1..=la).map(|i| i as f64).product();
    let norm = 1.0 / (PI * fact).sqrt();
    let amp = norm / w * (2f64.sqrt() * r / w).powi(la) * (-(r * r) / (w * w)).exp();
    let curv = if z == 0.0 {
        0.0
    } else {
        let rz = z * (1.0 + (zr / z).powi(2));
        -PI * r * r / (lambda * rz)
    };
    let gouy = (la as f64 + 1.0) * (z / zr).atan();
    Complex64::from_polar(amp, curv + gouy - l as f64 * phi)
}

/// Spot size `w(z)` of a Gaussian-family beam.
pub fn spot(w0: f64, lambda: f64, z: f64) -> f64 {
    let zr = PI * w0 * w0 / lambda;
    w0 * (1.0 + (z / zr).powi(2)).sqrt()
}

/// Discrete-input capacity averaged over receive pairs, with the noise
/// expectation done by an `n x n` Gauss-Hermite product rule. `points[j]`
/// holds the noiseless samples of every hypothesis at pair `j`.
pub fn dcmc_gauss_hermite(points: &[Vec<Complex64>], noise_var: f64, n: usize) -> f64 {
    let gh = gauss_hermite(n);
    let sigma = noise_var.sqrt();
    let mut total = 0.0;
    for pts in points {
        let k = pts.len();
        let mut acc = 0.0;
        for t in 0..k {
            let mut e = 0.0;
            for &(xr, wr) in &gh {
                for &(xi, wi) in &gh {
                    let w = Complex64::new(xr, xi) * sigma;
                    let v: Vec<f64> = pts
                        .iter()
                        .map(|s| -((pts[t] - s + w).norm_sqr() - w.norm_sqr()) / noise_var)
                        .collect();
                    let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                    let lse = max + v.iter().map(|x| (x - max).exp()).sum::<f64>().ln();
                    e += wr * wi * lse;
                }
            }
            acc += e / PI;
        }
        total += (k as f64).log2() - acc / (k as f64 * std::f64::consts::LN_2);
    }
    total / points.len() as f64
}

/// Bit error rate of BPSK over scalar gain `h` with coherent detection.
pub fn bpsk_monte_carlo(h: Complex64, rho: f64, noise_var: f64, trials: usize, seed: u64) -> (f64, f64) {
    use rand::{Rng, SeedableRng};
    use rand_distr::StandardNormal;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let sd = (noise_var / 2.0).sqrt();
    let g = h * rho.sqrt();
    let mut errors = 0usize;
    for _ in 0..trials {
        let bit = rng.random::<bool>();
        let x = if bit { -1.0 } else { 1.0 };
        let nr: f64 = rng.sample(StandardNormal);
        let ni: f64 = rng.sample(StandardNormal);
        let y = g * x + Complex64::new(nr * sd, ni * sd);
        let decided = (y * g.conj()).re < 0.0;
        errors += (decided != bit) as usize;
    }
    let p = errors as f64 / trials as f64;
    (p, (p * (1.0 - p) / trials as f64).sqrt())
}
