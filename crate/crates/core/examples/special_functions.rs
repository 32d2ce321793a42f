//! Tabulates the special functions used by the analytic error expressions.

use oamsm::numerics::{log_bessel_i0, marcum_q1, q_function, NoncentralChiSq2};

fn main() -> oamsm::Result<()> {
    println!("x,Q(x),ln I0(x)");
    for i in 0..=10 {
        let x = i as f64;
        println!("{x},{:e},{}", q_function(x)?, log_bessel_i0(x)?);
    }

    println!();
    println!("a,b,Q1(a;b)");
    for a in [0.0, 1.0, 3.0] {
        for b in [0.5, 2.0, 5.0] {
            println!("{a},{b},{:e}", marcum_q1(a, b)?);
        }
    }

    println!();
    println!("lambda,g,pdf,cdf");
    for lam in [0.0, 4.0, 25.0] {
        let d = NoncentralChiSq2::new(lam)?;
        for g in [1.0, 10.0, 40.0] {
            println!("{lam},{g},{:e},{:e}", d.pdf(g)?, d.cdf(g)?);
        }
    }
    Ok(())
}
