//! System configuration: defaults, flat `key = value` loading and validation.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::beam::{BeamParams, CoeffMode};
use crate::error::{Error, Result};
use crate::geometry::ArrayLayout;
use crate::numerics::Constellation;
use crate::SPEED_OF_LIGHT;

/// Pairwise symbol distance used in the modulation bit error probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DistanceMode {
    /// `2 Re[x_p (x_p - x_q)*]`.
    Printed,
    /// `|x_p - x_q|`.
    #[default]
    Euclidean,
}

/// Noncentrality of the received-power statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NoncentralityMode {
    /// `rho |h x|^2 / sigma0^2`, matching the mean `sqrt(rho) h x`.
    #[default]
    Consistent,
    /// `|rho h x|^2 / sigma0^2`.
    Printed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Detector {
    #[default]
    Stepwise,
    Ml,
}

/// Capacity model of the MIMO baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MimoMode {
    /// Gaussian-input log-determinant capacity.
    Logdet,
    /// Discrete-input capacity with independent PSK per antenna.
    #[default]
    DcmcPsk,
}

/// Where a configuration value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Paper,
    Decision,
    User,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Paper => "paper",
            Provenance::Decision => "decision",
            Provenance::User => "user",
        })
    }
}

/// Element spacing, either absolute or in carrier wavelengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Spacing {
    Meters(f64),
    Wavelengths(f64),
}

/// Gain constant of the in-ring link budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gain {
    /// `4 pi d_ref / lambda`: unit in-ring path gain at the reference distance.
    Auto,
    Value(f64),
}

/// Full experiment parameterization.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    pub carrier_freq: f64,
    pub bandwidth: f64,
    /// Noise power spectral density in dBm/Hz.
    pub noise_psd: f64,
    pub antennas: usize,
    pub oam_states: Vec<i32>,
    pub constellation: usize,
    pub distance: f64,
    pub xi: Spacing,
    /// `None` selects `pi / (2 max|l|)`.
    pub beta: Option<f64>,
    /// Reference beam waist in meters.
    pub waist: f64,
    pub ref_state: i32,
    pub gain: Gain,
    pub gain_reference_distance: f64,
    pub circuit_power: f64,
    pub load_slope: f64,
    pub coeff_mode: CoeffMode,
    pub distance_mode: DistanceMode,
    pub noncentrality_mode: NoncentralityMode,
    pub detector: Detector,
    pub mimo_mode: MimoMode,
    /// SNR used by sweeps whose axis is not SNR.
    pub snr_db: f64,
    pub seed: u64,
    pub trials: usize,
    pub samples: usize,
    provenance: BTreeMap<&'static str, Provenance>,
}

/// Every accepted key, in output order.
pub const KEYS: [&str; 24] = [
    "carrier_freq",
    "bandwidth",
    "noise_psd",
    "antennas",
    "oam_states",
    "constellation",
    "distance",
    "xi",
    "beta",
    "waist",
    "ref_state",
    "gain",
    "gain_reference_distance",
    "circuit_power",
    "load_slope",
    "coeff_mode",
    "distance_mode",
    "noncentrality_mode",
    "detector",
    "mimo_mode",
    "snr_db",
    "seed",
    "trials",
    "samples",
];

fn default_provenance(key: &str) -> Provenance {
    match key {
        "carrier_freq" | "bandwidth" | "noise_psd" | "antennas" | "constellation" | "distance"
        | "xi" | "circuit_power" | "load_slope" => Provenance::Paper,
        _ => Provenance::Decision,
    }
}

/// The default state set for `L` states: `{+-1, ..., +-L/2}`, or `{1}` when `L = 1`.
pub fn default_states(count: usize) -> Vec<i32> {
    if count <= 1 {
        return vec![1];
    }
    let half = (count / 2) as i32;
    (-half..=half).filter(|&l| l != 0).collect()
}

impl Default for SystemConfig {
    fn default() -> Self {
        let provenance = KEYS
            .iter()
            .map(|&k| (k, default_provenance(k)))
            .collect();
        Self {
            carrier_freq: 60e9,
            bandwidth: 20e6,
            noise_psd: -174.0,
            antennas: 4,
            oam_states: default_states(8),
            constellation: 4,
            distance: 50.0,
            xi: Spacing::Wavelengths(20.0),
            beta: None,
            waist: 0.04,
            ref_state: 1,
            gain: Gain::Auto,
            gain_reference_distance: 50.0,
            circuit_power: 6.8,
            load_slope: 4.0,
            coeff_mode: CoeffMode::Rederived,
            distance_mode: DistanceMode::Euclidean,
            noncentrality_mode: NoncentralityMode::Consistent,
            detector: Detector::Stepwise,
            mimo_mode: MimoMode::DcmcPsk,
            snr_db: 20.0,
            seed: 1,
            trials: 20_000,
            samples: 20_000,
            provenance,
        }
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::config(key, format!("cannot parse '{value}'")))
}

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    let v: f64 = parse_num(key, value)?;
    if !v.is_finite() {
        return Err(Error::config(key, format!("must be finite, got '{value}'")));
    }
    Ok(v)
}

fn parse_choice<T: Copy>(key: &str, value: &str, choices: &[(&str, T)]) -> Result<T> {
    let v = value.trim().to_ascii_lowercase();
    choices
        .iter()
        .find(|(name, _)| *name == v)
        .map(|(_, t)| *t)
        .ok_or_else(|| {
            let names: Vec<&str> = choices.iter().map(|(n, _)| *n).collect();
            Error::config(key, format!("'{value}' is not one of {}", names.join(", ")))
        })
}

impl SystemConfig {
    /// Sets one key from its text form and marks it as user-provided.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        let stored: &'static str = match KEYS.iter().find(|&&k| k == key) {
            Some(k) => k,
            None => return Err(Error::config(key, "unknown key")),
        };
        match key {
            "carrier_freq" => self.carrier_freq = parse_f64(key, value)?,
            "bandwidth" => self.bandwidth = parse_f64(key, value)?,
            "noise_psd" => self.noise_psd = parse_f64(key, value)?,
            "antennas" => self.antennas = parse_num(key, value)?,
            "oam_states" => {
                let body = value.trim_start_matches('[').trim_end_matches(']');
                self.oam_states = body
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(|s| parse_num(key, s))
                    .collect::<Result<_>>()?;
            }
            "constellation" => {
                let v = value.to_ascii_lowercase();
                let digits = v.trim_end_matches("psk");
                self.constellation = parse_num(key, digits)?;
            }
            "distance" => self.distance = parse_f64(key, value)?,
            "xi" => {
                let v = value.to_ascii_lowercase();
                self.xi = if let Some(n) = v.strip_suffix("lambda") {
                    Spacing::Wavelengths(parse_f64(key, n)?)
                } else {
                    Spacing::Meters(parse_f64(key, &v)?)
                };
            }
            "beta" => {
                self.beta = if value.eq_ignore_ascii_case("auto") {
                    None
                } else {
                    Some(parse_f64(key, value)?)
                };
            }
            "waist" => self.waist = parse_f64(key, value)?,
            "ref_state" => self.ref_state = parse_num(key, value)?,
            "gain" => {
                self.gain = if value.eq_ignore_ascii_case("auto") {
                    Gain::Auto
                } else {
                    Gain::Value(parse_f64(key, value)?)
                };
            }
            "gain_reference_distance" => self.gain_reference_distance = parse_f64(key, value)?,
            "circuit_power" => self.circuit_power = parse_f64(key, value)?,
            "load_slope" => self.load_slope = parse_f64(key, value)?,
            "coeff_mode" => {
                self.coeff_mode = parse_choice(
                    key,
                    value,
                    &[("printed", CoeffMode::Printed), ("rederived", CoeffMode::Rederived)],
                )?
            }
            "distance_mode" => {
                self.distance_mode = parse_choice(
                    key,
                    value,
                    &[("printed", DistanceMode::Printed), ("euclidean", DistanceMode::Euclidean)],
                )?
            }
            "noncentrality_mode" => {
                self.noncentrality_mode = parse_choice(
                    key,
                    value,
                    &[
                        ("consistent", NoncentralityMode::Consistent),
                        ("printed", NoncentralityMode::Printed),
                    ],
                )?
            }
            "detector" => {
                self.detector =
                    parse_choice(key, value, &[("stepwise", Detector::Stepwise), ("ml", Detector::Ml)])?
            }
            "mimo_mode" => {
                self.mimo_mode = parse_choice(
                    key,
                    value,
                    &[("logdet", MimoMode::Logdet), ("dcmc_psk", MimoMode::DcmcPsk)],
                )?
            }
            "snr_db" => self.snr_db = parse_f64(key, value)?,
            "seed" => self.seed = parse_num(key, value)?,
            "trials" => self.trials = parse_num(key, value)?,
            "samples" => self.samples = parse_num(key, value)?,
            _ => unreachable!("key list and match arms agree"),
        }
        self.provenance.insert(stored, Provenance::User);
        Ok(())
    }

    /// Parses flat `key = value` text. `#` starts a comment.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::config(format!("line {}", n + 1), format!("expected 'key = value', got '{line}'"))
            })?;
            cfg.set(key.trim(), value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn provenance(&self, key: &str) -> Option<Provenance> {
        self.provenance.get(key).copied()
    }

    /// Overrides the provenance tag of a key (presets mark their own choices).
    pub fn mark(&mut self, key: &'static str, p: Provenance) {
        self.provenance.insert(key, p);
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_freq
    }

    pub fn spacing(&self) -> f64 {
        match self.xi {
            Spacing::Meters(v) => v,
            Spacing::Wavelengths(n) => n * self.wavelength(),
        }
    }

    pub fn max_state(&self) -> u32 {
        self.oam_states.iter().map(|l| l.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn beta(&self) -> f64 {
        self.beta.unwrap_or_else(|| PI / (2.0 * self.max_state().max(1) as f64))
    }

    pub fn gain(&self) -> f64 {
        match self.gain {
            Gain::Auto => 4.0 * PI * self.gain_reference_distance / self.wavelength(),
            Gain::Value(v) => v,
        }
    }

    /// Noise power `N0 W` in watts.
    pub fn noise_var(&self) -> f64 {
        10f64.powf((self.noise_psd - 30.0) / 10.0) * self.bandwidth
    }

    /// Transmit power for a transmission SNR in dB (`-inf` gives zero power).
    pub fn rho_from_snr_db(&self, snr_db: f64) -> f64 {
        10f64.powf(snr_db / 10.0) * self.noise_var()
    }

    /// State table sorted ascending; bit patterns index into it.
    pub fn sorted_states(&self) -> Vec<i32> {
        let mut s = self.oam_states.clone();
        s.sort_unstable();
        s
    }

    pub fn constellation(&self) -> Result<Constellation> {
        Constellation::for_order(self.constellation)
    }

    pub fn reference_beam(&self) -> Result<BeamParams> {
        BeamParams::new(self.waist, self.ref_state, self.wavelength())
    }

    /// Array layout with receive pairs on the reference beam's ring at `distance`.
    pub fn layout(&self) -> Result<ArrayLayout> {
        let ring = self.reference_beam()?.ring_radius(self.distance)?;
        ArrayLayout::new(
            self.antennas,
            self.spacing(),
            self.distance,
            self.beta(),
            ring,
            self.max_state(),
        )
    }

    pub fn validate(&self) -> Result<()> {
        for (key, v) in [
            ("carrier_freq", self.carrier_freq),
            ("bandwidth", self.bandwidth),
            ("distance", self.distance),
            ("waist", self.waist),
            ("gain_reference_distance", self.gain_reference_distance),
            ("xi", self.spacing()),
            ("gain", self.gain()),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::config(key, format!("must be positive, got {v}")));
            }
        }
        for (key, v) in [("circuit_power", self.circuit_power), ("load_slope", self.load_slope)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::config(key, format!("must be nonnegative, got {v}")));
            }
        }
        if !self.noise_psd.is_finite() {
            return Err(Error::config("noise_psd", "must be finite"));
        }
        if self.antennas == 0 || !self.antennas.is_power_of_two() {
            return Err(Error::config("antennas", format!("must be a power of two, got {}", self.antennas)));
        }
        let l = self.oam_states.len();
        if l == 0 || !l.is_power_of_two() {
            return Err(Error::config("oam_states", format!("count must be a power of two, got {l}")));
        }
        if self.oam_states.contains(&0) {
            return Err(Error::config("oam_states", "state 0 is not allowed"));
        }
        let sorted = self.sorted_states();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::config("oam_states", "states must be distinct"));
        }
        if self.constellation == 0 || !self.constellation.is_power_of_two() {
            return Err(Error::config(
                "constellation",
                format!("must be a power of two, got {}", self.constellation),
            ));
        }
        if self.ref_state == 0 {
            return Err(Error::config("ref_state", "state 0 is not allowed"));
        }
        let beta = self.beta();
        let limit = PI / self.max_state() as f64;
        if !(beta > 0.0 && beta < limit) {
            return Err(Error::config("beta", format!("must lie in (0, {limit}), got {beta}")));
        }
        if self.trials == 0 {
            return Err(Error::config("trials", "must be at least 1"));
        }
        if self.samples == 0 {
            return Err(Error::config("samples", "must be at least 1"));
        }
        Ok(())
    }

    /// Resolved values as `(key, text, provenance)` triples in a fixed order.
    pub fn resolved(&self) -> Vec<(&'static str, String, Provenance)> {
        let text = |key: &str| -> String {
            match key {
                "carrier_freq" => format!("{}", self.carrier_freq),
                "bandwidth" => format!("{}", self.bandwidth),
                "noise_psd" => format!("{}", self.noise_psd),
                "antennas" => format!("{}", self.antennas),
                "oam_states" => {
                    let v: Vec<String> = self.oam_states.iter().map(|l| l.to_string()).collect();
                    v.join(",")
                }
                "constellation" => format!("{}", self.constellation),
                "distance" => format!("{}", self.distance),
                "xi" => match self.xi {
                    Spacing::Meters(v) => format!("{v}"),
                    Spacing::Wavelengths(n) => format!("{n}lambda ({} m)", self.spacing()),
                },
                "beta" => format!("{}", self.beta()),
                "waist" => format!("{}", self.waist),
                "ref_state" => format!("{}", self.ref_state),
                "gain" => format!("{}", self.gain()),
                "gain_reference_distance" => format!("{}", self.gain_reference_distance),
                "circuit_power" => format!("{}", self.circuit_power),
                "load_slope" => format!("{}", self.load_slope),
                "coeff_mode" => format!("{:?}", self.coeff_mode).to_ascii_lowercase(),
                "distance_mode" => format!("{:?}", self.distance_mode).to_ascii_lowercase(),
                "noncentrality_mode" => format!("{:?}", self.noncentrality_mode).to_ascii_lowercase(),
                "detector" => format!("{:?}", self.detector).to_ascii_lowercase(),
                "mimo_mode" => match self.mimo_mode {
                    MimoMode::Logdet => "logdet".into(),
                    MimoMode::DcmcPsk => "dcmc_psk".into(),
                },
                "snr_db" => format!("{}", self.snr_db),
                "seed" => format!("{}", self.seed),
                "trials" => format!("{}", self.trials),
                "samples" => format!("{}", self.samples),
                _ => String::new(),
            }
        };
        KEYS.iter()
            .map(|&k| (k, text(k), self.provenance(k).unwrap_or(Provenance::Decision)))
            .collect()
    }
}

/// Reads and validates a configuration file.
pub fn load_config(path: impl AsRef<Path>) -> Result<SystemConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    SystemConfig::from_text(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_gives_defaults() {
        let c = SystemConfig::from_text("").unwrap();
        assert_eq!(c, SystemConfig::default());
        assert_eq!(c.antennas, 4);
        assert_eq!(c.oam_states, vec![-4, -3, -2, -1, 1, 2, 3, 4]);
        assert!((c.beta() - PI / 8.0).abs() < 1e-15);
        assert_eq!(c.provenance("carrier_freq"), Some(Provenance::Paper));
        assert_eq!(c.provenance("waist"), Some(Provenance::Decision));
    }

    #[test]
    fn xi_shorthand() {
        let c = SystemConfig::from_text("xi = 20lambda\ncarrier_freq = 30e9").unwrap();
        assert!((c.spacing() - 20.0 * SPEED_OF_LIGHT / 30e9).abs() < 1e-15);
        assert_eq!(c.provenance("xi"), Some(Provenance::User));
        let c = SystemConfig::from_text("xi = 0.25").unwrap();
        assert_eq!(c.spacing(), 0.25);
    }

    #[test]
    fn rejects_wide_beta_and_unknown_keys() {
        let e = SystemConfig::from_text(&format!("beta = {}", PI / 2.0)).unwrap_err();
        assert!(matches!(e, Error::Config { ref key, .. } if key == "beta"));
        let e = SystemConfig::from_text("colour = blue").unwrap_err();
        assert!(matches!(e, Error::Config { ref key, .. } if key == "colour"));
        assert!(SystemConfig::from_text("antennas = 3").is_err());
        assert!(SystemConfig::from_text("oam_states = 1, 0").is_err());
        assert!(SystemConfig::from_text("oam_states = 1, 1").is_err());
    }

    #[test]
    fn parses_lists_choices_and_comments() {
        let c = SystemConfig::from_text(
            "# tiny link\noam_states = [-1, 1]\nconstellation = 2psk  # bpsk\ndetector = ML\n",
        )
        .unwrap();
        assert_eq!(c.oam_states, vec![-1, 1]);
        assert_eq!(c.constellation, 2);
        assert_eq!(c.detector, Detector::Ml);
        assert!((c.beta() - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn noise_power() {
        let c = SystemConfig::default();
        let want = 1e-3 * 10f64.powf(-17.4) * 20e6;
        assert!((c.noise_var() / want - 1.0).abs() < 1e-12);
        assert_eq!(c.rho_from_snr_db(f64::NEG_INFINITY), 0.0);
    }
}
