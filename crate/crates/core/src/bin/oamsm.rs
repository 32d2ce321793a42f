use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use oamsm::config::{load_config, SystemConfig};
use oamsm::experiment::{preset, run_sweep, write_outputs, Metrics, SweepKind, SweepSpec};
use oamsm::{Error, Result};

#[derive(Parser)]
#[command(name = "oamsm", version, about = "OAM spatial-modulation link simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep one parameter of a configuration file.
    Run {
        #[arg(long)]
        config: Option<PathBuf>,
        /// snr, distance, antennas, states or constellation.
        #[arg(long)]
        sweep: String,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        #[arg(long, default_value_t = 1.0)]
        step: f64,
        /// Comma-separated subset of capacity, mimo, abep, ber, ee.
        #[arg(long, default_value = "all")]
        metrics: String,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run the sweep behind one figure.
    Preset {
        /// fig2 ... fig11.
        figure: String,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
}

#[derive(Args)]
struct Overrides {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    /// stepwise or ml.
    #[arg(long)]
    detector: Option<String>,
    /// printed or rederived.
    #[arg(long)]
    coeff_mode: Option<String>,
    /// printed or euclidean.
    #[arg(long)]
    distance_mode: Option<String>,
}

impl Overrides {
    fn apply(&self, cfg: &mut SystemConfig) -> Result<()> {
        let pairs = [
            ("seed", self.seed.map(|v| v.to_string())),
            ("trials", self.trials.map(|v| v.to_string())),
            ("samples", self.samples.map(|v| v.to_string())),
            ("detector", self.detector.clone()),
            ("coeff_mode", self.coeff_mode.clone()),
            ("distance_mode", self.distance_mode.clone()),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                cfg.set(key, &v)?;
            }
        }
        cfg.validate()
    }
}

fn execute(cli: Cli) -> Result<()> {
    let (cfg, spec, out, label) = match cli.command {
        Command::Run {
            config,
            sweep,
            from,
            to,
            step,
            metrics,
            out,
            overrides,
        } => {
            let mut cfg = match &config {
                Some(p) => load_config(p)?,
                None => SystemConfig::default(),
            };
            overrides.apply(&mut cfg)?;
            let kind: SweepKind = sweep.parse()?;
            let metrics: Metrics = metrics.parse()?;
            let spec = SweepSpec::new(kind, from, to, step, metrics)?;
            let label = match config {
                Some(p) => format!("run {} ({})", kind, p.display()),
                None => format!("run {kind}"),
            };
            (cfg, spec, out, label)
        }
        Command::Preset {
            figure,
            out,
            overrides,
        } => {
            let (mut cfg, spec) = preset(&figure)?;
            overrides.apply(&mut cfg)?;
            (cfg, spec, out, format!("preset {figure}"))
        }
    };
    let result = run_sweep(&cfg, &spec)?;
    write_outputs(&out, &cfg, &spec, &result, &label)?;
    eprintln!("wrote {} rows to {}", result.rows.len(), out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("oamsm: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    e.exit_code() as u8
}
