//! Counter-based random substreams.
//!
//! Every Monte Carlo draw is addressed by `(seed, domain, index)`. The seed and
//! domain pick a ChaCha key; the index picks the stream. Results therefore do
//! not depend on how work is split across threads.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Separates the random numbers of different estimators that share a seed.
#[derive(Debug, Clone, Copy)]
#[repr(u64)]
pub(crate) enum Domain {
    Ber = 1,
    Capacity = 2,
    Mimo = 3,
}

pub(crate) fn substream(seed: u64, domain: Domain, index: u64) -> ChaCha8Rng {
    let key = seed ^ (domain as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    rng.set_stream(index);
    rng
}

/// Circularly symmetric complex Gaussian with total variance `var`.
#[inline]
pub(crate) fn complex_gaussian<R: Rng>(rng: &mut R, var: f64) -> Complex64 {
    let s = (0.5 * var).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(s * re, s * im)
}
