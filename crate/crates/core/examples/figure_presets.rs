//! Runs a figure preset with reduced sample counts and prints its CSV.
//!
//! Usage: `cargo run --release --example figure_presets [fig2 | ... | fig11]`

use oamsm::experiment::{preset, render_csv, run_sweep, PRESETS};

fn main() -> oamsm::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "fig9a".into());
    eprintln!("presets: {}", PRESETS.join(", "));
    let (mut cfg, spec) = preset(&name)?;
    cfg.samples = 2000;
    cfg.trials = 2000;
    let result = run_sweep(&cfg, &spec)?;
    print!("{}", render_csv(&cfg, &spec, &result));
    Ok(())
}
