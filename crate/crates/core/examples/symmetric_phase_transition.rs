//! The symmetric law on {−1, 0, 1} with masses p, 1 − 2p, p is strictly
//! sub-Gaussian exactly when p ≥ 1/6. Below that the optimal proxy sits
//! strictly between the variance 2p and the bound (1 − 2p)²/(4(1 − 4p)).
//!
//! ```bash
//! cargo run -p subgauss --example symmetric_phase_transition
//! ```

use subgauss::closed_forms::{symmetric_sigma1_bound, symmetric_sigma2_bound};
use subgauss::{symmetric_lambda0, symmetric_three_mass_proxy};

fn main() -> subgauss::Result<()> {
    println!(
        "{:>6} {:>12} {:>12} {:>12} {:>12} {:>8}",
        "p", "variance", "sigma2_opt", "bound2", "bound1", "strict"
    );
    for i in 1..=20 {
        let p = 0.0125 * f64::from(i);
        let r = symmetric_three_mass_proxy(p, 1.0)?;
        let (b1, b2) = if p < 1.0 / 6.0 {
            (
                format!("{:.8}", symmetric_sigma1_bound(p)?),
                format!("{:.8}", symmetric_sigma2_bound(p)?),
            )
        } else {
            ("-".into(), "-".into())
        };
        println!(
            "{p:>6.4} {:>12.8} {:>12.8} {b2:>12} {b1:>12} {:>8}",
            r.variance, r.sigma2_opt, r.strict
        );
    }

    let p = 0.05;
    let r = symmetric_three_mass_proxy(p, 1.0)?;
    println!();
    println!("p = {p}: lambda0 = {:.10}", symmetric_lambda0(p)?);
    for c in &r.candidates {
        println!("  tangency at lambda = {:+.10}, s = {:.12}", c.lambda_c, c.s_c);
    }
    Ok(())
}
