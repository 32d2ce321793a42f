//! Encodes bits, sends them through the noisy channel and compares both
//! detectors, then runs the Monte Carlo error counter at a few SNRs.

use oamsm::channel::ChannelTensor;
use oamsm::config::{Detector, SystemConfig};
use oamsm::modem::{demodulate_ml, demodulate_stepwise, simulate_ber_with, transmit, Codebook};
use rand::SeedableRng;

fn main() -> oamsm::Result<()> {
    let cfg = SystemConfig::default();
    let h = ChannelTensor::build(&cfg)?;
    let cb = Codebook::from_config(&cfg)?;
    let rho = cfg.rho_from_snr_db(30.0);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);

    let bits = [1, 0, 1, 1, 0, 0, 1];
    let sym = cb.encode(&bits)?;
    let frame = transmit(&sym, &h, rho, cfg.noise_var(), &mut rng)?;
    println!("sent {bits:?} as {sym:?}");
    println!("stepwise -> {:?}", cb.decode(&demodulate_stepwise(&frame, &h, rho))?);
    println!("ml       -> {:?}", cb.decode(&demodulate_ml(&frame, &h, rho))?);

    println!();
    println!("snr_db,detector,ber,ser,antenna_err");
    for snr in [0.0, 20.0, 40.0] {
        for det in [Detector::Stepwise, Detector::Ml] {
            let r = simulate_ber_with(&h, snr, 20_000, cfg.seed, det)?;
            println!(
                "{snr},{det:?},{:.4},{:.4},{:.4}",
                r.bit_error_rate, r.symbol_error_rate, r.antenna_error_rate
            );
        }
    }
    Ok(())
}
