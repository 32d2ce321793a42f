//! Energy efficiency of OAM-SM and MIMO at one SNR.

use oamsm::channel::ChannelTensor;
use oamsm::config::SystemConfig;
use oamsm::metrics::{dcmc_capacity, energy_efficiency, mimo_capacity_baseline, PowerModel, System};

fn main() -> oamsm::Result<()> {
    let mut cfg = SystemConfig::default();
    cfg.samples = 4000;
    let h = ChannelTensor::build(&cfg)?;
    let nv = cfg.noise_var();
    let model = PowerModel::from_config(&cfg)?;
    println!("snr_db,ee_oam_sm,ee_mimo");
    for snr in [0.0, 40.0, 80.0] {
        let rho = cfg.rho_from_snr_db(snr);
        let c = dcmc_capacity(&h, rho, nv, cfg.samples, cfg.seed)?.value;
        let m = mimo_capacity_baseline(&cfg, rho, nv, cfg.mimo_mode, cfg.samples, cfg.seed)?.value;
        let e1 = energy_efficiency(c, cfg.bandwidth, rho, model, System::OamSm)?;
        let e2 = energy_efficiency(m, cfg.bandwidth, rho, model, System::Mimo { antennas: cfg.antennas })?;
        println!("{snr},{e1:.1},{e2:.1}");
    }
    Ok(())
}
