//! Parameter sweeps, figure presets and CSV output.

use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;

use crate::channel::ChannelTensor;
use crate::config::{default_states, SystemConfig};
use crate::error::{Error, Result};
use crate::metrics::{
    abep_with, dcmc_capacity, energy_efficiency, mimo_capacity_baseline, PowerModel, System,
};
use crate::modem::simulate_ber_with;

/// Swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    Snr,
    Distance,
    Antennas,
    States,
    Constellation,
}

impl SweepKind {
    /// Column name of the swept variable.
    pub fn column(&self) -> &'static str {
        match self {
            SweepKind::Snr => "snr_db",
            SweepKind::Distance => "distance_m",
            SweepKind::Antennas => "antennas",
            SweepKind::States => "states",
            SweepKind::Constellation => "constellation",
        }
    }

    /// Antenna, state and constellation counts take the powers of two in
    /// `[from, to]`; the others a uniform grid.
    pub fn is_discrete(&self) -> bool {
        matches!(self, SweepKind::Antennas | SweepKind::States | SweepKind::Constellation)
    }

    /// Writes grid value `v` into `config`.
    pub fn apply(&self, config: &mut SystemConfig, v: f64) {
        match self {
            SweepKind::Snr => config.snr_db = v,
            SweepKind::Distance => config.distance = v,
            SweepKind::Antennas => config.antennas = v as usize,
            SweepKind::States => {
                config.oam_states = default_states(v as usize);
                config.beta = None;
            }
            SweepKind::Constellation => config.constellation = v as usize,
        }
    }
}

impl FromStr for SweepKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "snr" => SweepKind::Snr,
            "distance" => SweepKind::Distance,
            "antennas" | "m" => SweepKind::Antennas,
            "states" | "l" => SweepKind::States,
            "constellation" | "p" => SweepKind::Constellation,
            _ => return Err(Error::config("sweep", format!("unknown sweep kind {s:?}"))),
        })
    }
}

impl fmt::Display for SweepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepKind::Snr => "snr",
            SweepKind::Distance => "distance",
            SweepKind::Antennas => "antennas",
            SweepKind::States => "states",
            SweepKind::Constellation => "constellation",
        })
    }
}

/// Which metric groups a sweep evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Metrics {
    pub capacity: bool,
    pub mimo: bool,
    pub abep: bool,
    pub ber: bool,
    pub energy: bool,
}

impl Metrics {
    pub fn all() -> Self {
        Self {
            capacity: true,
            mimo: true,
            abep: true,
            ber: true,
            energy: true,
        }
    }

    fn needs_capacity(&self) -> bool {
        self.capacity || self.energy
    }

    fn needs_mimo(&self) -> bool {
        self.mimo || self.energy
    }

    /// Output columns after the grid columns.
    pub fn columns(&self) -> Vec<&'static str> {
        let mut c = Vec::new();
        if self.needs_capacity() {
            c.extend(["capacity", "capacity_se"]);
        }
        if self.needs_mimo() {
            c.extend(["mimo_capacity", "mimo_capacity_se"]);
        }
        if self.abep {
            c.extend(["abep", "abep_antenna", "abep_mod"]);
        }
        if self.ber {
            c.extend(["ber_sim", "ber_sim_se", "ser_sim", "ser_sim_se", "antenna_err_sim", "antenna_err_sim_se"]);
        }
        if self.energy {
            c.extend(["ee_oam_sm", "ee_mimo"]);
        }
        c
    }
}

impl FromStr for Metrics {
    type Err = Error;

    /// Comma-separated subset of `capacity, mimo, abep, ber, ee`, or `all`.
    fn from_str(s: &str) -> Result<Self> {
        let mut m = Metrics::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part.to_ascii_lowercase().as_str() {
                "all" => m = Metrics::all(),
                "capacity" => m.capacity = true,
                "mimo" => m.mimo = true,
                "abep" => m.abep = true,
                "ber" => m.ber = true,
                "ee" | "energy" => m.energy = true,
                _ => return Err(Error::config("metrics", format!("unknown metric {part:?}"))),
            }
        }
        if m == Metrics::default() {
            return Err(Error::config("metrics", "no metric selected"));
        }
        Ok(m)
    }
}

/// A second parameter held at each listed value while the grid is swept.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub kind: SweepKind,
    pub values: Vec<f64>,
}

/// Everything a sweep needs besides the base configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub kind: SweepKind,
    pub grid: Vec<f64>,
    pub series: Option<Series>,
    pub metrics: Metrics,
}

impl SweepSpec {
    pub fn new(kind: SweepKind, from: f64, to: f64, step: f64, metrics: Metrics) -> Result<Self> {
        Ok(Self {
            kind,
            grid: grid(kind, from, to, step)?,
            series: None,
            metrics,
        })
    }

    pub fn with_series(mut self, kind: SweepKind, values: &[f64]) -> Self {
        self.series = Some(Series {
            kind,
            values: values.to_vec(),
        });
        self
    }

    /// Header columns of the output table.
    pub fn columns(&self) -> Vec<&'static str> {
        let mut c = Vec::new();
        if let Some(s) = &self.series {
            c.push(s.kind.column());
        }
        c.push(self.kind.column());
        c.extend(self.metrics.columns());
        c
    }
}

/// Grid points from `from` to `to` inclusive.
pub fn grid(kind: SweepKind, from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if !from.is_finite() || !to.is_finite() || to < from {
        return Err(Error::config("sweep", format!("need from <= to, got {from}..{to}")));
    }
    if kind.is_discrete() {
        let pts: Vec<f64> = (0..31)
            .map(|k| (1u64 << k) as f64)
            .filter(|&v| v >= from && v <= to)
            .collect();
        if pts.is_empty() {
            return Err(Error::config("sweep", format!("no power of two in {from}..{to}")));
        }
        return Ok(pts);
    }
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::config("step", format!("must be positive, got {step}")));
    }
    let n = ((to - from) / step + 1e-9).floor() as usize;
    Ok((0..=n)
        .map(|i| {
            let v = from + i as f64 * step;
            (v * 1e9).round() / 1e9
        })
        .collect())
}

/// One output row: grid coordinates followed by metric values.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub values: Vec<f64>,
}

/// Table produced by [`run_sweep`].
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub columns: Vec<&'static str>,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// Values of one column, in row order.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r.values[i]).collect())
    }
}

fn evaluate(config: &SystemConfig, metrics: &Metrics) -> Result<Vec<f64>> {
    config.validate()?;
    let snr = config.snr_db;
    let rho = config.rho_from_snr_db(snr);
    let nv = config.noise_var();
    let h = ChannelTensor::build(config)?;
    let mut out = Vec::new();
    let mut cap = 0.0;
    let mut mimo = 0.0;
    if metrics.needs_capacity() {
        let c = dcmc_capacity(&h, rho, nv, config.samples, config.seed)?;
        cap = c.value;
        out.extend([c.value, c.std_error]);
    }
    if metrics.needs_mimo() {
        let c = mimo_capacity_baseline(config, rho, nv, config.mimo_mode, config.samples, config.seed)?;
        mimo = c.value;
        out.extend([c.value, c.std_error]);
    }
    if metrics.abep {
        let a = abep_with(&h, rho)?;
        out.extend([a.total, a.antenna.bit_error, a.modulation]);
    }
    if metrics.ber {
        let b = simulate_ber_with(&h, snr, config.trials, config.seed, config.detector)?;
        out.extend([
            b.bit_error_rate,
            b.bit_error_se,
            b.symbol_error_rate,
            b.symbol_error_se,
            b.antenna_error_rate,
            b.antenna_error_se,
        ]);
    }
    if metrics.energy {
        let pm = PowerModel::from_config(config)?;
        out.push(energy_efficiency(cap, config.bandwidth, rho, pm, System::OamSm)?);
        out.push(energy_efficiency(
            mimo,
            config.bandwidth,
            rho,
            pm,
            System::Mimo {
                antennas: config.antennas,
            },
        )?);
    }
    if let Some(v) = out.iter().find(|v| !v.is_finite()) {
        return Err(Error::Numeric {
            reason: format!("non-finite metric at snr {snr} dB, distance {} m", config.distance),
            estimate: *v,
            bound: f64::NAN,
        });
    }
    Ok(out)
}

/// Evaluates every grid point (and series member); rows come out in grid
/// order whatever order the points finish in.
pub fn run_sweep(config: &SystemConfig, spec: &SweepSpec) -> Result<SweepResult> {
    config.validate()?;
    let series: Vec<Option<f64>> = match &spec.series {
        Some(s) => s.values.iter().map(|&v| Some(v)).collect(),
        None => vec![None],
    };
    let points: Vec<(Option<f64>, f64)> = series
        .iter()
        .flat_map(|&s| spec.grid.iter().map(move |&g| (s, g)))
        .collect();
    let rows = points
        .par_iter()
        .map(|&(s, g)| {
            let mut cfg = config.clone();
            let mut values = Vec::new();
            if let (Some(sv), Some(series)) = (s, &spec.series) {
                series.kind.apply(&mut cfg, sv);
                values.push(sv);
            }
            spec.kind.apply(&mut cfg, g);
            values.push(g);
            values.extend(evaluate(&cfg, &spec.metrics)?);
            Ok(SweepRow { values })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        columns: spec.columns(),
        rows,
    })
}

fn describe(spec: &SweepSpec) -> String {
    let mut s = format!(
        "{} over [{}]",
        spec.kind,
        spec.grid.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
    );
    if let Some(series) = &spec.series {
        let _ = write!(
            s,
            " for {} in [{}]",
            series.kind,
            series.values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
        );
    }
    s
}

/// Shortest round-trip text, in exponent form outside `[1e-4, 1e15)`.
pub fn format_value(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

/// CSV text: `#` comment lines with the resolved configuration, then the
/// header row and one line per grid point.
pub fn render_csv(config: &SystemConfig, spec: &SweepSpec, result: &SweepResult) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# oamsm {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(s, "# sweep = {}", describe(spec));
    for (key, value, prov) in config.resolved() {
        let _ = writeln!(s, "# {key} = {value} ({prov})");
    }
    let _ = writeln!(s, "{}", result.columns.join(","));
    for row in &result.rows {
        let line: Vec<String> = row.values.iter().map(|&v| format_value(v)).collect();
        let _ = writeln!(s, "{}", line.join(","));
    }
    s
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Path of the metadata sidecar for `out`.
pub fn meta_path(out: &Path) -> PathBuf {
    let mut p = out.as_os_str().to_owned();
    p.push(".meta");
    PathBuf::from(p)
}

/// Writes the CSV and its `<out>.meta` sidecar.
pub fn write_outputs(
    out: &Path,
    config: &SystemConfig,
    spec: &SweepSpec,
    result: &SweepResult,
    label: &str,
) -> Result<()> {
    write_file(out, &render_csv(config, spec, result))?;
    let stamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let mut meta = String::new();
    let _ = writeln!(meta, "version = {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(meta, "timestamp = {stamp}");
    let _ = writeln!(meta, "run = {label}");
    let _ = writeln!(meta, "sweep = {}", describe(spec));
    let _ = writeln!(meta, "columns = {}", result.columns.join(","));
    let _ = writeln!(meta, "rows = {}", result.rows.len());
    for (key, value, prov) in config.resolved() {
        let _ = writeln!(meta, "{key} = {value}");
        let _ = writeln!(meta, "{key}.provenance = {prov}");
    }
    write_file(&meta_path(out), &meta)
}

/// Known figure presets.
pub const PRESETS: [&str; 14] = [
    "fig2", "fig3", "fig4a", "fig4b", "fig5", "fig6a", "fig6b", "fig7", "fig8", "fig9a", "fig9b",
    "fig10a", "fig10b", "fig11",
];

/// Default configuration and sweep for a figure id.
pub fn preset(name: &str) -> Result<(SystemConfig, SweepSpec)> {
    use SweepKind::*;
    let cfg = SystemConfig::default();
    let cap = Metrics {
        capacity: true,
        ..Metrics::default()
    };
    let cap_mimo = Metrics {
        capacity: true,
        mimo: true,
        ..Metrics::default()
    };
    let abep = Metrics {
        abep: true,
        ..Metrics::default()
    };
    let counts = [2.0, 4.0, 8.0];
    let spec = match name {
        "fig2" => SweepSpec::new(Snr, -20.0, 40.0, 2.0, cap_mimo)?,
        "fig3" => SweepSpec::new(Distance, 10.0, 150.0, 5.0, cap_mimo)?,
        "fig4a" => SweepSpec::new(Snr, -20.0, 40.0, 4.0, cap)?.with_series(Antennas, &counts),
        "fig4b" => SweepSpec::new(Snr, -20.0, 40.0, 4.0, cap)?.with_series(States, &counts),
        "fig5" => SweepSpec::new(Snr, -20.0, 40.0, 4.0, cap)?.with_series(Constellation, &counts),
        "fig6a" => SweepSpec::new(Distance, 10.0, 150.0, 10.0, cap)?.with_series(Antennas, &counts),
        "fig6b" => SweepSpec::new(Distance, 10.0, 150.0, 10.0, cap)?.with_series(States, &counts),
        "fig7" => {
            SweepSpec::new(Distance, 10.0, 150.0, 10.0, cap)?.with_series(Constellation, &counts)
        }
        "fig8" => SweepSpec::new(
            Snr,
            -10.0,
            40.0,
            2.0,
            Metrics {
                abep: true,
                ber: true,
                ..Metrics::default()
            },
        )?,
        "fig9a" => SweepSpec::new(Snr, -10.0, 40.0, 2.0, abep)?.with_series(Antennas, &counts),
        "fig9b" => SweepSpec::new(Snr, -10.0, 40.0, 2.0, abep)?.with_series(Constellation, &counts),
        "fig10" | "fig10a" => {
            SweepSpec::new(Snr, -10.0, 40.0, 2.0, abep)?.with_series(Distance, &[10.0, 50.0, 100.0, 150.0])
        }
        "fig10b" => SweepSpec::new(Snr, -10.0, 40.0, 2.0, abep)?.with_series(States, &counts),
        "fig11" => SweepSpec::new(
            Snr,
            FIG11_SNR_DB.0,
            FIG11_SNR_DB.1,
            FIG11_SNR_DB.2,
            Metrics {
                energy: true,
                ..Metrics::default()
            },
        )?,
        _ => {
            return Err(Error::Usage(format!(
                "unknown preset {name:?}; expected one of {}",
                PRESETS.join(", ")
            )))
        }
    };
    Ok((cfg, spec))
}

/// `(from, to, step)` of the energy-efficiency grid. Circuit power dominates
/// until the radiated power reaches watts, so the grid extends far enough
/// for the load term to bend the curve down.
pub const FIG11_SNR_DB: (f64, f64, f64) = (-20.0, 140.0, 5.0);
