//! Average bit error probability and its antenna and modulation parts.

use oamsm::channel::ChannelTensor;
use oamsm::config::SystemConfig;
use oamsm::metrics::abep_with;

fn main() -> oamsm::Result<()> {
    let cfg = SystemConfig::default();
    let h = ChannelTensor::build(&cfg)?;
    println!("snr_db,abep,antenna,modulation");
    for snr in (-10..=40).step_by(10) {
        let r = abep_with(&h, cfg.rho_from_snr_db(snr as f64))?;
        println!("{snr},{:.6e},{:.6e},{:.6e}", r.total, r.antenna.bit_error, r.modulation);
    }
    Ok(())
}
