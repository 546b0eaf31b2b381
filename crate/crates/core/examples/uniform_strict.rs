//! The discrete uniform law on {1, …, N} is strictly sub-Gaussian: its
//! optimal proxy equals its variance (N² − 1)/12 for every N.
//!
//! ```bash
//! cargo run -p subgauss --example uniform_strict
//! ```

use subgauss::{discrete_uniform_proxy, optimal_proxy_general, DiscreteDistribution, SolverConfig};

fn main() -> subgauss::Result<()> {
    println!("{:>4} {:>14} {:>14} {:>10} {:>8}", "N", "(N²-1)/12", "engine", "rel diff", "strict");
    for n in [2u32, 3, 4, 5, 8, 10, 16, 25, 50] {
        let exact = discrete_uniform_proxy(n, 1.0, 0.0)?.sigma2_opt;
        let r = optimal_proxy_general(&DiscreteDistribution::uniform(n)?, &SolverConfig::default())?;
        println!(
            "{n:>4} {exact:>14.6} {:>14.6} {:>10.2e} {:>8}",
            r.sigma2_opt,
            (r.sigma2_opt - exact).abs() / exact,
            r.strict
        );
    }
    Ok(())
}
