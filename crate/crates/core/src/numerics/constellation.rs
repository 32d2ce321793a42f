//! Unit-energy PSK constellations with binary-reflected Gray labels.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A PSK constellation. Point `k` sits at angle `2 pi k / P` and carries the
/// label `k ^ (k >> 1)`, written most significant bit first.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    points: Vec<Complex64>,
    labels: Vec<u32>,
    bits: u32,
}

/// Builds the `P`-point PSK constellation.
pub fn psk_constellation(order: usize) -> Result<Constellation> {
    if order < 2 || !order.is_power_of_two() {
        return Err(Error::config(
            "constellation",
            format!("PSK order must be a power of two >= 2, got {order}"),
        ));
    }
    Ok(Constellation::psk_unchecked(order))
}

impl Constellation {
    fn psk_unchecked(order: usize) -> Self {
        let points = (0..order)
            .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / order as f64))
            .collect();
        let labels = (0..order as u32).map(|k| k ^ (k >> 1)).collect();
        Self {
            points,
            labels,
            bits: order.trailing_zeros(),
        }
    }

    /// The one-point alphabet `{1}` carrying no bits, used when a link sends
    /// no constellation information.
    pub fn single_point() -> Self {
        Self {
            points: vec![Complex64::new(1.0, 0.0)],
            labels: vec![0],
            bits: 0,
        }
    }

    /// Either `psk_constellation(order)` or, for `order == 1`, the one-point alphabet.
    pub fn for_order(order: usize) -> Result<Self> {
        if order == 1 {
            Ok(Self::single_point())
        } else {
            psk_constellation(order)
        }
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn bits_per_symbol(&self) -> u32 {
        self.bits
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn point(&self, k: usize) -> Complex64 {
        self.points[k]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, k: usize) -> u32 {
        self.labels[k]
    }

    /// Position of the point carrying `label`.
    pub fn index_of_label(&self, label: u32) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    /// Number of differing label bits between points `a` and `b`.
    pub fn hamming(&self, a: usize, b: usize) -> u32 {
        (self.labels[a] ^ self.labels[b]).count_ones()
    }

    /// Index of the point closest to `y`.
    pub fn nearest(&self, y: Complex64) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (k, p) in self.points.iter().enumerate() {
            let d = (y - p).norm_sqr();
            if d < best_d {
                best_d = d;
                best = k;
            }
        }
        best
    }
}
