//! Capacity of OAM-SM and of the MIMO baseline against SNR.

use oamsm::channel::ChannelTensor;
use oamsm::config::SystemConfig;
use oamsm::metrics::{dcmc_capacity, mimo_capacity_baseline};

fn main() -> oamsm::Result<()> {
    let mut cfg = SystemConfig::default();
    cfg.samples = 4000;
    let h = ChannelTensor::build(&cfg)?;
    let nv = cfg.noise_var();
    println!("snr_db,oam_sm_bits,mimo_bits");
    for snr in (-20..=40).step_by(10) {
        let rho = cfg.rho_from_snr_db(snr as f64);
        let c = dcmc_capacity(&h, rho, nv, cfg.samples, cfg.seed)?;
        let m = mimo_capacity_baseline(&cfg, rho, nv, cfg.mimo_mode, cfg.samples, cfg.seed)?;
        println!("{snr},{:.4},{:.4}", c.value, m.value);
    }
    Ok(())
}
