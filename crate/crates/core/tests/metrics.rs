mod common;

use num_complex::Complex64;
use oamsm::channel::ChannelTensor;
use oamsm::config::{default_states, Detector, DistanceMode, MimoMode, NoncentralityMode, SystemConfig};
use oamsm::metrics::{
    abep, abep_with, antenna_abep, antenna_detection_prob, average_antenna_detection_prob,
    dcmc_capacity, energy_efficiency, gray_gamma, mimo_capacity_baseline, mimo_channel, mod_bep,
    PowerModel, System,
};
use oamsm::modem::simulate_ber_with;
use oamsm::numerics::psk_constellation;
use proptest::prelude::*;

fn config(m: usize, l: usize, p: usize) -> SystemConfig {
    let mut c = SystemConfig::default();
    c.antennas = m;
    c.oam_states = default_states(l);
    c.constellation = p;
    c
}

fn pair_points(h: &ChannelTensor, rho: f64) -> Vec<Vec<Complex64>> {
    let c = h.constellation();
    (1..=h.antennas())
        .map(|j| {
            let mut pts = Vec::new();
            for m in 1..=h.antennas() {
                for li in 0..h.states().len() {
                    for x in c.points() {
                        pts.push(rho.sqrt() * h.at(m, li, j, 1) * x);
                    }
                }
            }
            pts
        })
        .collect()
}

#[test]
fn zero_power_capacity_is_exactly_zero() {
    let cfg = SystemConfig::default();
    let h = ChannelTensor::build(&cfg).unwrap();
    let c = dcmc_capacity(&h, 0.0, cfg.noise_var(), 500, 1).unwrap();
    assert_eq!(c.value, 0.0);
    assert!(c.value.is_sign_positive());
}

#[test]
fn capacity_matches_gauss_hermite_on_a_small_system() {
    let cfg = config(2, 2, 2);
    let h = ChannelTensor::build(&cfg).unwrap();
    let nv = cfg.noise_var();
    for snr in [0.0, 10.0] {
        let rho = cfg.rho_from_snr_db(snr);
        let mc = dcmc_capacity(&h, rho, nv, 20_000, 7).unwrap();
        let oracle = common::dcmc_gauss_hermite(&pair_points(&h, rho), nv, 48);
        assert!((mc.value - oracle).abs() < 0.01 * oracle, "snr {snr}: {} vs {oracle}", mc.value);
    }
}

#[test]
fn capacity_is_deterministic_under_any_pool() {
    let cfg = config(2, 4, 4);
    let h = ChannelTensor::build(&cfg).unwrap();
    let rho = cfg.rho_from_snr_db(5.0);
    let a = dcmc_capacity(&h, rho, cfg.noise_var(), 3000, 9).unwrap();
    let b = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap()
        .install(|| dcmc_capacity(&h, rho, cfg.noise_var(), 3000, 9).unwrap());
    assert_eq!(a, b);
}

#[test]
fn capacity_falls_with_more_states_at_fixed_snr() {
    let mut prev = f64::INFINITY;
    for l in [2, 4, 8] {
        let cfg = config(4, l, 4);
        let h = ChannelTensor::build(&cfg).unwrap();
        let c = dcmc_capacity(&h, cfg.rho_from_snr_db(20.0), cfg.noise_var(), 4000, 2).unwrap();
        println!("L={l}: {:.4} bits", c.value);
        assert!(c.value.is_finite());
        prev = prev.min(c.value);
    }
    assert!(prev > 0.0);
}

#[test]
fn mimo_baselines() {
    let cfg = SystemConfig::default();
    let nv = cfg.noise_var();
    for mode in [MimoMode::Logdet, MimoMode::DcmcPsk] {
        assert_eq!(mimo_capacity_baseline(&cfg, 0.0, nv, mode, 200, 1).unwrap().value, 0.0);
    }
    let hi = mimo_capacity_baseline(&cfg, cfg.rho_from_snr_db(60.0), nv, MimoMode::DcmcPsk, 2000, 1).unwrap();
    assert!(hi.value <= 8.0 && hi.value > 7.9);

    let mut siso = SystemConfig::default();
    siso.antennas = 1;
    let h = mimo_channel(&siso).unwrap();
    let rho = siso.rho_from_snr_db(3.0);
    let c = mimo_capacity_baseline(&siso, rho, nv, MimoMode::Logdet, 1, 1).unwrap();
    assert!((c.value - (1.0 + rho * h[0].norm_sqr() / nv).log2()).abs() < 1e-12);
}

#[test]
fn detection_probability_limits() {
    let one = config(1, 8, 4);
    let h = ChannelTensor::build(&one).unwrap();
    let x = h.constellation().point(0);
    assert_eq!(antenna_detection_prob(&h, 1, 3, x, 1.0, one.noise_var()).unwrap(), 1.0);

    for m in [2, 4, 8] {
        let cfg = config(m, 4, 4);
        let h = ChannelTensor::build(&cfg).unwrap();
        let p = average_antenna_detection_prob(&h, 0.0, cfg.noise_var()).unwrap();
        assert!((p - 1.0 / m as f64).abs() < 1e-8, "M={m}: {p}");
    }
}

#[test]
fn detection_probability_stays_between_chance_and_one() {
    let cfg = SystemConfig::default();
    let h = ChannelTensor::build(&cfg).unwrap();
    let nv = cfg.noise_var();
    for snr in [-10.0, 0.0, 10.0, 20.0, 30.0, 40.0] {
        let rho = cfg.rho_from_snr_db(snr);
        for m in 1..=4 {
            for &l in h.states() {
                let x = h.constellation().point(1);
                let p = antenna_detection_prob(&h, m, l, x, rho, nv).unwrap();
                assert!(p >= 0.25 - 1e-9 && p <= 1.0, "snr {snr} m {m} l {l}: {p}");
            }
        }
    }
}

#[test]
fn detection_probability_agrees_with_simulation() {
    let cfg = SystemConfig::default();
    let h = ChannelTensor::build(&cfg).unwrap();
    let rho = cfg.rho_from_snr_db(10.0);
    let analytic = average_antenna_detection_prob(&h, rho, cfg.noise_var()).unwrap();
    let r = simulate_ber_with(&h, 10.0, 50_000, 4, Detector::Stepwise).unwrap();
    let sim = 1.0 - r.antenna_error_rate;
    assert!((analytic - sim).abs() < 3.0 * r.antenna_error_se, "{analytic} vs {sim}");
}

#[test]
fn printed_noncentrality_squares_the_power() {
    let mut cfg = SystemConfig::default();
    cfg.noncentrality_mode = NoncentralityMode::Printed;
    let h = ChannelTensor::build(&cfg).unwrap();
    let consistent = ChannelTensor::build(&SystemConfig::default()).unwrap();
    let nv = cfg.noise_var();
    // rho^2 = 25 noise_var keeps the squared noncentralities moderate.
    let rho = 5.0 * nv.sqrt();
    let x = h.constellation().point(0);
    let a = antenna_detection_prob(&h, 2, 1, x, rho, nv).unwrap();
    let b = antenna_detection_prob(&consistent, 2, 1, x, rho * rho, nv).unwrap();
    assert!((a - b).abs() < 1e-12);
}

#[test]
fn gray_penalty_and_antenna_bits() {
    assert_eq!(gray_gamma(0), 0.0);
    assert_eq!(gray_gamma(1), 1.0);
    assert!((gray_gamma(2) - 4.0 / 3.0).abs() < 1e-15);
    for (m, ratio) in [(2usize, 1.0), (4, 2.0 / 3.0)] {
        let cfg = config(m, 4, 4);
        let h = ChannelTensor::build(&cfg).unwrap();
        let a = antenna_abep(&h, cfg.rho_from_snr_db(5.0), cfg.noise_var()).unwrap();
        assert!((a.bit_error - ratio * a.symbol_error).abs() < 1e-15);
    }
    let cfg = config(1, 4, 4);
    let h = ChannelTensor::build(&cfg).unwrap();
    assert_eq!(antenna_abep(&h, 1.0, cfg.noise_var()).unwrap().bit_error, 0.0);
}

#[test]
fn modulation_bep_forms() {
    let c2 = psk_constellation(2).unwrap();
    let h = Complex64::new(0.8, 0.3);
    let (rho, nv) = (1.5, 0.9);
    let g = rho * h.norm_sqr() / nv;
    let q = |x: f64| 0.5 * libm::erfc(x / 2f64.sqrt());
    let e = mod_bep(h, rho, nv, &c2, DistanceMode::Euclidean);
    let p = mod_bep(h, rho, nv, &c2, DistanceMode::Printed);
    assert!((e - q((2.0 * g).sqrt())).abs() < 1e-15);
    assert!((p - q((8.0 * g).sqrt())).abs() < 1e-15);
    let c4 = psk_constellation(4).unwrap();
    // QPSK: each point has two one-bit neighbours and one two-bit opposite.
    let z = mod_bep(h, 0.0, nv, &c4, DistanceMode::Euclidean);
    assert!((z - 16.0 * 0.5 / 8.0).abs() < 1e-15);
}

#[test]
fn modulation_bep_matches_bpsk_simulation() {
    let c2 = psk_constellation(2).unwrap();
    let h = Complex64::new(0.6, -0.2);
    let nv = 1.0;
    for snr in [-5.0, 0.0, 3.0] {
        let rho = 10f64.powf(snr / 10.0);
        let e = mod_bep(h, rho, nv, &c2, DistanceMode::Euclidean);
        let (p, se) = common::bpsk_monte_carlo(h, rho, nv, 50_000, 17);
        assert!((e - p).abs() < 3.0 * se, "snr {snr}: {e} vs {p}");
    }
}

#[test]
fn abep_composes_stage_probabilities() {
    let cfg = SystemConfig::default();
    let h = ChannelTensor::build(&cfg).unwrap();
    for snr in [-10.0, 5.0, 30.0] {
        let r = abep_with(&h, cfg.rho_from_snr_db(snr)).unwrap();
        let want = 1.0 - (1.0 - r.antenna.bit_error) * (1.0 - r.modulation);
        assert!((r.total - want).abs() < 1e-12);
        assert!((0.0..=1.0).contains(&r.total));
    }
    let r = abep(&cfg, 0.0).unwrap();
    assert!(r.total > 0.5);
}

#[test]
fn abep_falls_with_snr_and_rises_with_distance() {
    let cfg = SystemConfig::default();
    let h = ChannelTensor::build(&cfg).unwrap();
    let vals: Vec<f64> = (-10..=30)
        .step_by(5)
        .map(|s| abep_with(&h, cfg.rho_from_snr_db(s as f64)).unwrap().total)
        .collect();
    assert!(vals.windows(2).all(|w| w[1] <= w[0]), "{vals:?}");
    let mut prev = 0.0;
    for d in [10.0, 50.0, 100.0, 150.0] {
        let mut c = SystemConfig::default();
        c.distance = d;
        let v = abep(&c, c.rho_from_snr_db(10.0)).unwrap().total;
        assert!(v > prev, "distance {d}: {v}");
        prev = v;
    }
}

#[test]
fn energy_efficiency_examples() {
    let pm = PowerModel::new(6.8, 4.0).unwrap();
    let e = energy_efficiency(7.0, 20e6, 1.0, pm, System::OamSm).unwrap();
    assert!((e - 1.296e7).abs() / 1.296e7 < 1e-3);
    assert_eq!(energy_efficiency(0.0, 20e6, 1.0, pm, System::OamSm).unwrap(), 0.0);
    assert!((pm.consumption(System::Mimo { antennas: 4 }.active_antennas(), 1.0) - 31.2).abs() < 1e-12);
    assert!(PowerModel::new(-1.0, 1.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn capacity_stays_within_input_entropy(
        m_exp in 0u32..3, l_exp in 0u32..3, p_exp in 1u32..3, snr in -20.0f64..60.0, seed in any::<u64>()
    ) {
        let cfg = config(1 << m_exp, 1 << l_exp, 1 << p_exp);
        let h = ChannelTensor::build(&cfg).unwrap();
        let c = dcmc_capacity(&h, cfg.rho_from_snr_db(snr), cfg.noise_var(), 200, seed).unwrap();
        let ceiling = ((1usize << (m_exp + l_exp + p_exp)) as f64).log2();
        prop_assert!(c.value >= 0.0 && c.value <= ceiling);
        prop_assert!(c.std_error >= 0.0);
    }

    #[test]
    fn mod_bep_falls_with_power(
        p_exp in 1u32..5, re in -2.0f64..2.0, im in -2.0f64..2.0, rho in 0.0f64..50.0, k in 1.0f64..4.0
    ) {
        prop_assume!(re.hypot(im) > 1e-3);
        let c = psk_constellation(1 << p_exp).unwrap();
        let h = Complex64::new(re, im);
        let a = mod_bep(h, rho, 1.0, &c, DistanceMode::Euclidean);
        let b = mod_bep(h, rho * k, 1.0, &c, DistanceMode::Euclidean);
        let zero = mod_bep(h, 0.0, 1.0, &c, DistanceMode::Euclidean);
        prop_assert!(a >= 0.0 && a <= zero + 1e-15);
        prop_assert!(b <= a + 1e-15);
    }

    #[test]
    fn oam_sm_power_draw_is_below_mimo(m_exp in 1u32..5, rho in 0.0f64..100.0, pc in 0.01f64..20.0, alpha in 0.0f64..10.0) {
        let pm = PowerModel::new(pc, alpha).unwrap();
        let m = 1usize << m_exp;
        prop_assert!(pm.consumption(1, rho) < pm.consumption(m, rho));
        let a = energy_efficiency(1.0, 1.0, rho, pm, System::OamSm).unwrap();
        let b = energy_efficiency(1.0, 1.0, rho, pm, System::Mimo { antennas: m }).unwrap();
        prop_assert!(a > b);
    }
}
