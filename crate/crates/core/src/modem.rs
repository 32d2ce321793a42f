//! Bit mapping, transmission over the channel tensor, detection and Monte
//! Carlo bit error measurement.
//!
//! A symbol carries `log2 M` antenna bits (natural binary, antenna `m` is the
//! value plus one), then `log2 L` state bits (index into the ascending state
//! table), then `log2 P` Gray-labelled constellation bits.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::channel::ChannelTensor;
use crate::config::{Detector, SystemConfig};
use crate::error::{Error, Result};
use crate::numerics::Constellation;
use crate::rng::{complex_gaussian, substream, Domain};

/// One transmitted codeword.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OamSymbol {
    /// Active transmit antenna, 1-based.
    pub m: usize,
    /// OAM state value.
    pub l: i32,
    /// Position of the radiated point in the constellation.
    pub p: usize,
}

impl OamSymbol {
    pub fn point(&self, constellation: &Constellation) -> Complex64 {
        constellation.point(self.p)
    }
}

/// Maps bits to symbols and back.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    antennas: usize,
    states: Vec<i32>,
    constellation: Constellation,
}

fn log2_exact(n: usize, key: &str) -> Result<u32> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::config(key, format!("{n} is not a power of two")));
    }
    Ok(n.trailing_zeros())
}

fn push_bits(out: &mut Vec<u8>, value: u32, width: u32) {
    for k in (0..width).rev() {
        out.push(((value >> k) & 1) as u8);
    }
}

fn read_bits(bits: &[u8]) -> u32 {
    bits.iter().fold(0, |acc, &b| (acc << 1) | (b & 1) as u32)
}

impl Codebook {
    /// `states` is sorted ascending to form the bit table.
    pub fn new(antennas: usize, states: &[i32], constellation: Constellation) -> Result<Self> {
        log2_exact(antennas, "antennas")?;
        log2_exact(states.len(), "oam_states")?;
        let mut states = states.to_vec();
        states.sort_unstable();
        Ok(Self {
            antennas,
            states,
            constellation,
        })
    }

    pub fn from_config(config: &SystemConfig) -> Result<Self> {
        Self::new(config.antennas, &config.oam_states, config.constellation()?)
    }

    pub fn antennas(&self) -> usize {
        self.antennas
    }

    pub fn states(&self) -> &[i32] {
        &self.states
    }

    pub fn constellation(&self) -> &Constellation {
        &self.constellation
    }

    /// `M L P`.
    pub fn size(&self) -> usize {
        self.antennas * self.states.len() * self.constellation.order()
    }

    fn widths(&self) -> (u32, u32, u32) {
        (
            self.antennas.trailing_zeros(),
            self.states.len().trailing_zeros(),
            self.constellation.bits_per_symbol(),
        )
    }

    pub fn bits_per_symbol(&self) -> usize {
        let (a, b, c) = self.widths();
        (a + b + c) as usize
    }

    pub fn encode(&self, bits: &[u8]) -> Result<OamSymbol> {
        let n = self.bits_per_symbol();
        if bits.len() != n {
            return Err(Error::Framing {
                expected: n,
                got: bits.len(),
            });
        }
        let (wa, ws, _) = self.widths();
        let (wa, ws) = (wa as usize, ws as usize);
        let m = read_bits(&bits[..wa]) as usize + 1;
        let l = self.states[read_bits(&bits[wa..wa + ws]) as usize];
        let label = read_bits(&bits[wa + ws..]);
        let p = self
            .constellation
            .index_of_label(label)
            .expect("every label of a full Gray code is present");
        Ok(OamSymbol { m, l, p })
    }

    pub fn decode(&self, sym: &OamSymbol) -> Result<Vec<u8>> {
        let (wa, ws, wp) = self.widths();
        let li = self
            .states
            .iter()
            .position(|&s| s == sym.l)
            .ok_or_else(|| Error::domain(format!("state {} not in the table", sym.l)))?;
        if sym.m == 0 || sym.m > self.antennas || sym.p >= self.constellation.order() {
            return Err(Error::domain(format!("symbol {sym:?} outside the codebook")));
        }
        let mut out = Vec::with_capacity(self.bits_per_symbol());
        push_bits(&mut out, (sym.m - 1) as u32, wa);
        push_bits(&mut out, li as u32, ws);
        push_bits(&mut out, self.constellation.label(sym.p), wp);
        Ok(out)
    }

    /// The symbol with flat index `k` in `(m, state index, p)` row-major order.
    pub fn symbol(&self, k: usize) -> OamSymbol {
        let p_n = self.constellation.order();
        let l_n = self.states.len();
        OamSymbol {
            m: k / (l_n * p_n) + 1,
            l: self.states[(k / p_n) % l_n],
            p: k % p_n,
        }
    }

    pub fn symbols(&self) -> impl Iterator<Item = OamSymbol> + '_ {
        (0..self.size()).map(|k| self.symbol(k))
    }
}

/// Samples at all receive antennas: one `[a=1, a=2]` row per pair.
#[derive(Debug, Clone, PartialEq)]
pub struct RxFrame {
    pub y: Vec<[Complex64; 2]>,
}

/// `y = sqrt(rho) h x + w` with `w ~ CN(0, noise_var)` per sample.
pub fn transmit<R: Rng>(
    sym: &OamSymbol,
    h: &ChannelTensor,
    rho: f64,
    noise_var: f64,
    rng: &mut R,
) -> Result<RxFrame> {
    let li = h
        .state_index(sym.l)
        .ok_or_else(|| Error::domain(format!("state {} not in the channel", sym.l)))?;
    let s = rho.sqrt() * h.constellation().point(sym.p);
    let row = h.row(sym.m, li);
    let y = row
        .chunks_exact(2)
        .map(|pair| {
            let mut out = [pair[0] * s, pair[1] * s];
            if noise_var > 0.0 {
                out[0] += complex_gaussian(rng, noise_var);
                out[1] += complex_gaussian(rng, noise_var);
            }
            out
        })
        .collect();
    Ok(RxFrame { y })
}

fn wrap(x: f64) -> f64 {
    let t = x.rem_euclid(2.0 * PI);
    if t > PI {
        t - 2.0 * PI
    } else {
        t
    }
}

/// Three-step detector: strongest first antenna, pair phase difference, then
/// nearest scaled constellation point.
pub fn demodulate_stepwise(frame: &RxFrame, h: &ChannelTensor, rho: f64) -> OamSymbol {
    let mut m_hat = 1;
    let mut best = f64::NEG_INFINITY;
    for (j, pair) in frame.y.iter().enumerate() {
        let p = pair[0].norm_sqr();
        if p > best {
            best = p;
            m_hat = j + 1;
        }
    }
    let pair = frame.y[m_hat - 1];
    let theta = (pair[0] * pair[1].conj()).arg();
    let beta = h.beta();
    let states = h.states();
    let mut li_hat = 0;
    let mut best = f64::INFINITY;
    for (li, &l) in states.iter().enumerate() {
        let d = wrap(theta - beta * l as f64).abs();
        if d < best {
            best = d;
            li_hat = li;
        }
    }
    let g = rho.sqrt() * h.at(m_hat, li_hat, m_hat, 1);
    let constellation = h.constellation();
    let mut p_hat = 0;
    let mut best = f64::INFINITY;
    for (p, x) in constellation.points().iter().enumerate() {
        let d = (pair[0] - g * x).norm_sqr();
        if d < best {
            best = d;
            p_hat = p;
        }
    }
    OamSymbol {
        m: m_hat,
        l: states[li_hat],
        p: p_hat,
    }
}

/// Exhaustive maximum-likelihood detection over all `M L P` hypotheses.
pub fn demodulate_ml(frame: &RxFrame, h: &ChannelTensor, rho: f64) -> OamSymbol {
    let constellation = h.constellation();
    let sr = rho.sqrt();
    let states = h.states();
    let mut best = (f64::INFINITY, OamSymbol { m: 1, l: states[0], p: 0 });
    for m in 1..=h.antennas() {
        for (li, &l) in states.iter().enumerate() {
            let row = h.row(m, li);
            for (p, x) in constellation.points().iter().enumerate() {
                let s = sr * x;
                let mut d = 0.0;
                for (pair, hh) in frame.y.iter().zip(row.chunks_exact(2)) {
                    d += (pair[0] - hh[0] * s).norm_sqr() + (pair[1] - hh[1] * s).norm_sqr();
                }
                if d < best.0 {
                    best = (d, OamSymbol { m, l, p });
                }
            }
        }
    }
    best.1
}

/// Monte Carlo error statistics of one SNR point.
#[derive(Debug, Clone, PartialEq)]
pub struct BerReport {
    pub trials: usize,
    pub bits_per_symbol: usize,
    pub bit_error_rate: f64,
    pub bit_error_se: f64,
    pub antenna_error_rate: f64,
    pub antenna_error_se: f64,
    pub state_error_rate: f64,
    pub state_error_se: f64,
    pub point_error_rate: f64,
    pub point_error_se: f64,
    pub symbol_error_rate: f64,
    pub symbol_error_se: f64,
}

#[derive(Default, Clone, Copy)]
struct Tally {
    bit_errors: u64,
    bit_errors_sq: u64,
    antenna: u64,
    state: u64,
    point: u64,
    symbol: u64,
}

impl Tally {
    fn add(self, o: Tally) -> Tally {
        Tally {
            bit_errors: self.bit_errors + o.bit_errors,
            bit_errors_sq: self.bit_errors_sq + o.bit_errors_sq,
            antenna: self.antenna + o.antenna,
            state: self.state + o.state,
            point: self.point + o.point,
            symbol: self.symbol + o.symbol,
        }
    }
}

fn binomial(count: u64, n: usize) -> (f64, f64) {
    let p = count as f64 / n as f64;
    (p, (p * (1.0 - p) / n as f64).sqrt())
}

/// Simulates `trials` uniformly random symbols at `snr_db` (`-inf` sends
/// nothing). Trial `t` draws from its own substream of `seed`.
pub fn simulate_ber(
    config: &SystemConfig,
    snr_db: f64,
    trials: usize,
    seed: u64,
    detector: Detector,
) -> Result<BerReport> {
    let h = ChannelTensor::build(config)?;
    simulate_ber_with(&h, snr_db, trials, seed, detector)
}

/// As [`simulate_ber`] for a prebuilt channel.
pub fn simulate_ber_with(
    h: &ChannelTensor,
    snr_db: f64,
    trials: usize,
    seed: u64,
    detector: Detector,
) -> Result<BerReport> {
    if trials == 0 {
        return Err(Error::config("trials", "must be at least 1"));
    }
    let config = h.config();
    let codebook = Codebook::from_config(config)?;
    let rho = config.rho_from_snr_db(snr_db);
    let noise_var = config.noise_var();
    let nbits = codebook.bits_per_symbol();

    let run = |t: usize| -> Tally {
        let mut rng = substream(seed, Domain::Ber, t as u64);
        let sym = codebook.symbol(rng.random_range(0..codebook.size()));
        let frame = transmit(&sym, h, rho, noise_var, &mut rng).expect("symbol comes from the codebook");
        let hat = match detector {
            Detector::Stepwise => demodulate_stepwise(&frame, h, rho),
            Detector::Ml => demodulate_ml(&frame, h, rho),
        };
        let a = codebook.decode(&sym).expect("codebook symbol");
        let b = codebook.decode(&hat).expect("detector returns codebook symbols");
        let e = a.iter().zip(&b).filter(|(x, y)| x != y).count() as u64;
        Tally {
            bit_errors: e,
            bit_errors_sq: e * e,
            antenna: (sym.m != hat.m) as u64,
            state: (sym.l != hat.l) as u64,
            point: (sym.p != hat.p) as u64,
            symbol: (sym != hat) as u64,
        }
    };
    const CHUNK: usize = 1024;
    let chunks: Vec<Tally> = (0..trials.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            (c * CHUNK..((c + 1) * CHUNK).min(trials))
                .map(run)
                .fold(Tally::default(), Tally::add)
        })
        .collect();
    let tally = chunks.into_iter().fold(Tally::default(), Tally::add);

    let n = trials as f64;
    let (ber, ber_se) = if nbits == 0 {
        (0.0, 0.0)
    } else {
        let mean = tally.bit_errors as f64 / n;
        let var = (tally.bit_errors_sq as f64 / n - mean * mean).max(0.0);
        (mean / nbits as f64, (var / n).sqrt() / nbits as f64)
    };
    let (ant, ant_se) = binomial(tally.antenna, trials);
    let (st, st_se) = binomial(tally.state, trials);
    let (pt, pt_se) = binomial(tally.point, trials);
    let (sy, sy_se) = binomial(tally.symbol, trials);
    Ok(BerReport {
        trials,
        bits_per_symbol: nbits,
        bit_error_rate: ber,
        bit_error_se: ber_se,
        antenna_error_rate: ant,
        antenna_error_se: ant_se,
        state_error_rate: st,
        state_error_se: st_se,
        point_error_rate: pt,
        point_error_se: pt_se,
        symbol_error_rate: sy,
        symbol_error_se: sy_se,
    })
}
