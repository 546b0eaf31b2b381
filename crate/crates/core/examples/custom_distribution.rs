//! Building distributions: normalization, merging of duplicate atoms,
//! affine maps, CGF derivatives and input validation.
//!
//! ```bash
//! cargo run -p subgauss --example custom_distribution
//! ```

use subgauss::{optimal_proxy_general, DiscreteDistribution, SolverConfig};

fn main() -> subgauss::Result<()> {
    // unnormalized weights are rescaled; repeated atoms are merged
    let d = DiscreteDistribution::new(&[2.0, 0.0, 1.0, 2.0], &[1.0, 2.0, 3.0, 2.0])?;
    println!("atoms   {:?}", d.atoms());
    println!("weights {:?}", d.weights());
    println!("mean {:.6}, variance {:.6}, skewness numerator {:.6}", d.mean(), d.variance(), d.central_moment(3));

    for lambda in [-2.0, -0.5, 0.0, 0.5, 2.0] {
        let c = d.cgf_at(lambda)?;
        println!(
            "lambda {lambda:+.1}: M = {:.8}  M' = {:+.8}  M'' = {:.8}  h = {:+.3e}",
            c.m0,
            c.m1,
            c.m2,
            d.h_eval(lambda)?
        );
    }

    let config = SolverConfig::default();
    let base = optimal_proxy_general(&d, &config)?.sigma2_opt;
    let scaled = optimal_proxy_general(&d.affine_transform(-3.0, 10.0)?, &config)?.sigma2_opt;
    println!("\nsigma2_opt {base:.10}; after x -> -3x + 10: {scaled:.10} (= 9 x {:.10})", scaled / 9.0);

    // strict probability vectors go through from_pmf
    match DiscreteDistribution::from_pmf(&[0.0, 1.0], &[0.5, 0.6]) {
        Ok(_) => println!("unexpected success"),
        Err(e) => println!("from_pmf rejected weights: {e}"),
    }
    match DiscreteDistribution::new(&[0.0, 1.0], &[0.5, -0.1]) {
        Ok(_) => println!("unexpected success"),
        Err(e) => println!("new rejected weights: {e}"),
    }
    Ok(())
}
