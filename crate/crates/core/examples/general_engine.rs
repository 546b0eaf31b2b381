//! Optimal proxy of an arbitrary finite law via the critical-point engine.
//!
//! Prints every nonzero root of `λM'(λ) − 2M(λ)`, whether `g` has a local
//! minimum there, and the resulting σ²_opt.
//!
//! ```bash
//! cargo run -p subgauss --example general_engine
//! ```

use subgauss::{optimal_proxy_general, DiscreteDistribution, SolverConfig};

fn main() -> subgauss::Result<()> {
    // masses 0.05, 0.94, 0.01 on {-1, 0, 1}
    let d = DiscreteDistribution::new(&[-1.0, 0.0, 1.0], &[0.05, 0.94, 0.01])?;
    let r = optimal_proxy_general(&d, &SolverConfig::default())?;

    println!("mean      {:+.6}", d.mean());
    println!("variance  {:.10}", r.variance);
    println!("window    {:?}", r.diagnostics.window);
    println!();
    println!("{:>14} {:>14} {:>10}", "lambda_c", "s_c", "local min");
    for c in &r.candidates {
        println!("{:>14.8} {:>14.10} {:>10}", c.lambda_c, c.s_c, c.is_local_min);
    }
    println!();
    println!("sigma2_opt {:.12} (strict: {})", r.sigma2_opt, r.strict);
    Ok(())
}
