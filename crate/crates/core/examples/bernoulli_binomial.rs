//! Bernoulli and binomial proxies: the closed form next to the engine run on
//! the explicit atoms, and the gap to the variance.
//!
//! ```bash
//! cargo run -p subgauss --example bernoulli_binomial
//! ```

use subgauss::{
    bernoulli_proxy, binomial_proxy, optimal_proxy_general, DiscreteDistribution, SolverConfig,
};

fn main() -> subgauss::Result<()> {
    let config = SolverConfig::default();
    println!("{:>6} {:>12} {:>14} {:>14}", "p", "p(1-p)", "closed form", "engine");
    for p in [0.001, 0.01, 0.1, 0.25, 0.4, 0.5, 0.75, 0.99] {
        let engine = optimal_proxy_general(&DiscreteDistribution::bernoulli(p)?, &config)?;
        println!(
            "{p:>6} {:>12.8} {:>14.10} {:>14.10}",
            p * (1.0 - p),
            bernoulli_proxy(p)?,
            engine.sigma2_opt
        );
    }

    println!();
    println!("{:>4} {:>6} {:>14} {:>14}", "n", "p", "n * bernoulli", "engine");
    for (n, p) in [(1u32, 0.3), (5, 0.3), (20, 0.1), (40, 0.02)] {
        let engine = optimal_proxy_general(&DiscreteDistribution::binomial(n, p)?, &config)?;
        println!(
            "{n:>4} {p:>6} {:>14.10} {:>14.10}",
            binomial_proxy(n, p)?,
            engine.sigma2_opt
        );
    }
    println!("\nthe binomial proxy is additive over i.i.d. summands, so it is n times the");
    println!("Bernoulli value, even though the engine works on the n + 1 atoms directly.");
    Ok(())
}
