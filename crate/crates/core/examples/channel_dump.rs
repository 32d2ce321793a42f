//! Writes the channel tensor of a configuration as CSV on stdout.
//!
//! Usage: `cargo run --example channel_dump [config.toml]`

use oamsm::channel::ChannelTensor;
use oamsm::config::{load_config, SystemConfig};

fn main() -> oamsm::Result<()> {
    let cfg = match std::env::args().nth(1) {
        Some(p) => load_config(p)?,
        None => SystemConfig::default(),
    };
    let h = ChannelTensor::build(&cfg)?;
    eprintln!(
        "{} antennas, states {:?}, beta = {:.4} rad",
        h.antennas(),
        h.states(),
        h.beta()
    );
    h.write_csv(std::io::stdout().lock()).map_err(|source| oamsm::Error::Io {
        path: "<stdout>".into(),
        source,
    })?;
    Ok(())
}
