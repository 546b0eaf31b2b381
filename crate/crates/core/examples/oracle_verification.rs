//! Brute-force verification: checks `g(λ; σ²) ≥ 0` on a dense grid, then
//! bisects on σ² and compares with the engine.
//!
//! ```bash
//! cargo run --release -p subgauss --example oracle_verification
//! ```

use subgauss::oracle::optimal_proxy_oracle;
use subgauss::{
    is_variance_proxy, optimal_proxy_general, DiscreteDistribution, GridConfig, SolverConfig,
};

fn main() -> subgauss::Result<()> {
    let d = DiscreteDistribution::new(&[-1.0, 0.0, 1.0], &[0.05, 0.94, 0.01])?;
    let grid = GridConfig::default();

    for (label, s) in [("variance", d.variance()), ("0.15", 0.15), ("0.1563", 0.1563)] {
        let report = is_variance_proxy(&d, s, &grid)?;
        println!(
            "sigma2 = {label:<8} pass = {:<5} min g = {:+.3e} at lambda = {:+.4}",
            report.pass, report.min_g, report.argmin_lambda
        );
    }

    let engine = optimal_proxy_general(&d, &SolverConfig::default())?;
    let oracle = optimal_proxy_oracle(&d, 1e-8)?;
    println!();
    println!("engine  {:.12}", engine.sigma2_opt);
    println!("oracle  {:.12}", oracle.sigma2_opt);
    println!(
        "relative difference {:.2e}",
        (engine.sigma2_opt - oracle.sigma2_opt).abs() / engine.sigma2_opt
    );
    Ok(())
}
