//! Radial intensity of the Laguerre-Gaussian beams at the receive plane and
//! the waists that put every state on the same ring.

use oamsm::beam::CoeffMode;
use oamsm::config::SystemConfig;

fn main() -> oamsm::Result<()> {
    let cfg = SystemConfig::default();
    let z = cfg.distance;
    let reference = cfg.reference_beam()?;
    println!(
        "lambda = {:.4e} m, w_ref = {} m, ring radius of l = {} at {z} m: {:.4} m",
        cfg.wavelength(),
        cfg.waist,
        cfg.ref_state,
        reference.ring_radius(z)?
    );

    println!("l,waist_m,ring_radius_m,spot_m");
    for &l in &cfg.sorted_states() {
        let w = reference.waist_for_state(l, z, CoeffMode::Rederived)?;
        let b = oamsm::beam::BeamParams::new(w, l, cfg.wavelength())?;
        println!("{l},{w:.6e},{:.6},{:.6}", b.ring_radius(z)?, b.spot_size(z)?);
    }

    println!();
    println!("r_m,|u|^2");
    let rmax = reference.ring_radius(z)?;
    for i in 0..=40 {
        let r = rmax * i as f64 / 20.0;
        println!("{r:.5},{:.6e}", reference.field(r, 0.0, z)?.norm_sqr());
    }
    Ok(())
}
