//! Free-space OAM channel: Friis attenuation on the intensity ring and the
//! Laguerre-Gaussian envelope away from it.

use std::f64::consts::{FRAC_PI_4, PI};
use std::io::Write;

use num_complex::Complex64;

use crate::beam::BeamParams;
use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::geometry::ArrayLayout;
use crate::numerics::Constellation;

/// Responses from `Tx_m` to its own receive pair, which sits on the ring.
pub fn in_ring_response(
    m: usize,
    l: i32,
    layout: &ArrayLayout,
    gain: f64,
    wavelength: f64,
) -> Result<(Complex64, Complex64)> {
    let (d1, d2) = layout.pair_distances(m, m)?;
    let k = 2.0 * PI / wavelength;
    let lf = l as f64;
    let h1 = Complex64::from_polar(
        gain * wavelength / (4.0 * PI * d1),
        -k * d1 - FRAC_PI_4 * lf,
    );
    let h2 = Complex64::from_polar(
        gain * wavelength / (4.0 * PI * d2),
        -k * d2 - (FRAC_PI_4 + layout.beta()) * lf,
    );
    Ok((h1, h2))
}

/// Responses from `Tx_m` to receive pair `j != m`, for the beam state and
/// waist carried by `beam`.
pub fn off_ring_response(
    m: usize,
    j: usize,
    layout: &ArrayLayout,
    beam: &BeamParams,
    gain: f64,
) -> Result<(Complex64, Complex64)> {
    if m == j {
        return Err(Error::domain("off-ring response needs j != m"));
    }
    let g = layout.pair_geometry(m, j)?;
    let z = layout.distance();
    let rmax = layout.ring_radius();
    let (d_mm, _) = layout.pair_distances(m, m)?;
    let w = beam.spot_size(z)?;
    let curv = beam.curvature_radius(z)?;
    let lambda = beam.wavelength();
    let k = beam.wavenumber();
    let l = beam.state();
    let labs = l.unsigned_abs() as i32;
    let base = gain * lambda / (4.0 * PI * d_mm);
    let one = |r: f64, phi: f64| {
        let dr2 = r * r - rmax * rmax;
        let amp = base * (r / rmax).powi(labs) * (-dr2 / (w * w)).exp();
        let phase = -PI * dr2 / (lambda * curv) - k * d_mm - l as f64 * phi;
        Complex64::from_polar(amp, phase)
    };
    Ok((one(g.r1, g.phi1), one(g.r2, g.phi2)))
}

/// All channel responses `h^l_{mj,a}` of one configuration.
#[derive(Debug, Clone)]
pub struct ChannelTensor {
    antennas: usize,
    states: Vec<i32>,
    layout: ArrayLayout,
    beams: Vec<BeamParams>,
    entries: Vec<Complex64>,
    constellation: Constellation,
    config: SystemConfig,
}

/// Builds the tensor for `config`.
pub fn build_channel_tensor(config: &SystemConfig) -> Result<ChannelTensor> {
    ChannelTensor::build(config)
}

impl ChannelTensor {
    pub fn build(config: &SystemConfig) -> Result<Self> {
        config.validate()?;
        let layout = config.layout()?;
        let reference = config.reference_beam()?;
        let wavelength = config.wavelength();
        let gain = config.gain();
        let states = config.sorted_states();
        let z = config.distance;
        let beams = states
            .iter()
            .map(|&l| {
                let w = reference.waist_for_state(l, z, config.coeff_mode)?;
                BeamParams::new(w, l, wavelength)
            })
            .collect::<Result<Vec<_>>>()?;
        let m_count = config.antennas;
        let mut entries = Vec::with_capacity(m_count * states.len() * m_count * 2);
        for m in 1..=m_count {
            for (li, beam) in beams.iter().enumerate() {
                for j in 1..=m_count {
                    let (h1, h2) = if j == m {
                        in_ring_response(m, states[li], &layout, gain, wavelength)?
                    } else {
                        off_ring_response(m, j, &layout, beam, gain)?
                    };
                    entries.push(h1);
                    entries.push(h2);
                }
            }
        }
        Ok(Self {
            antennas: m_count,
            states,
            layout,
            beams,
            entries,
            constellation: config.constellation()?,
            config: config.clone(),
        })
    }

    pub fn antennas(&self) -> usize {
        self.antennas
    }

    /// State table in ascending order.
    pub fn states(&self) -> &[i32] {
        &self.states
    }

    pub fn state_index(&self, l: i32) -> Option<usize> {
        self.states.iter().position(|&s| s == l)
    }

    pub fn layout(&self) -> &ArrayLayout {
        &self.layout
    }

    pub fn beta(&self) -> f64 {
        self.layout.beta()
    }

    /// Beam of the `li`-th state in the table.
    pub fn beam(&self, li: usize) -> &BeamParams {
        &self.beams[li]
    }

    pub fn config(&self) -> &SystemConfig {
        &self.config
    }

    pub fn constellation(&self) -> &Constellation {
        &self.constellation
    }

    /// Responses at all `2M` receive antennas for transmit antenna `m`
    /// (1-based) and state index `li`, ordered `[j=1 a=1, j=1 a=2, j=2 a=1, ...]`.
    pub fn row(&self, m: usize, li: usize) -> &[Complex64] {
        let n = 2 * self.antennas;
        let start = ((m - 1) * self.states.len() + li) * n;
        &self.entries[start..start + n]
    }

    /// `h^l_{mj,a}` by state index; all antenna indices are 1-based.
    #[inline]
    pub fn at(&self, m: usize, li: usize, j: usize, a: usize) -> Complex64 {
        self.row(m, li)[2 * (j - 1) + (a - 1)]
    }

    /// `h^l_{mj,a}` by state value, or `None` when an index is out of range.
    pub fn get(&self, m: usize, l: i32, j: usize, a: usize) -> Option<Complex64> {
        let li = self.state_index(l)?;
        let ok = (1..=self.antennas).contains(&m)
            && (1..=self.antennas).contains(&j)
            && (a == 1 || a == 2);
        ok.then(|| self.at(m, li, j, a))
    }

    /// Writes `m,l,j,a,re,im` rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "m,l,j,a,re,im")?;
        for m in 1..=self.antennas {
            for (li, &l) in self.states.iter().enumerate() {
                for j in 1..=self.antennas {
                    for a in 1..=2 {
                        let h = self.at(m, li, j, a);
                        writeln!(out, "{m},{l},{j},{a},{:e},{:e}", h.re, h.im)?;
                    }
                }
            }
        }
        Ok(())
    }
}
