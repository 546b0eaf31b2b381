//! Asymmetric law on {−1, 0, 1} with masses p1, p3, p2.
//!
//! When p3 ≤ 4√(p1 p2) the proxy is the log-ratio `2(p2 − p1)/ln(p2/p1)`;
//! beyond that boundary it comes from the tangency points of `g`. The closed
//! form is cross-checked against the general engine on a sweep.
//!
//! ```bash
//! cargo run -p subgauss --example asymmetric_regimes
//! ```

use subgauss::{
    asymmetric_three_mass_proxy, optimal_proxy_general, SolverConfig, ThreeMassParams,
};

fn main() -> subgauss::Result<()> {
    println!(
        "{:>6} {:>6} {:>6} {:>7} {:>14} {:>14} {:>10}",
        "p1", "p2", "p3", "regime", "closed form", "engine", "rel diff"
    );
    let mut worst: f64 = 0.0;
    for &(p1, p2) in &[
        (0.13, 0.25),
        (0.05, 0.01),
        (0.01, 0.05),
        (0.2, 0.3),
        (0.1, 0.25),
        (0.02, 0.4),
        (0.3, 0.07),
        (0.4, 0.45),
    ] {
        let params = ThreeMassParams::new(p1, p2, 1.0)?;
        let closed = asymmetric_three_mass_proxy(params)?;
        let engine = optimal_proxy_general(&params.distribution()?, &SolverConfig::default())?;
        let rel = (closed.sigma2_opt - engine.sigma2_opt).abs() / engine.sigma2_opt;
        worst = worst.max(rel);
        println!(
            "{p1:>6.3} {p2:>6.3} {:>6.3} {:>7} {:>14.10} {:>14.10} {rel:>10.2e}",
            params.p3(),
            if params.in_closed_form_regime() { "A" } else { "B" },
            closed.sigma2_opt,
            engine.sigma2_opt,
        );
    }
    println!("\nlargest relative disagreement: {worst:.2e}");

    let expected = 0.24 / (25.0f64 / 13.0).ln();
    println!("(0.13, 0.25) against 0.24/ln(25/13) = {expected:.15}");
    Ok(())
}
