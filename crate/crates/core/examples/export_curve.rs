//! Samples `g`, `g'`, `g''` and `h` at σ²_opt and at the variance and writes
//! them as CSV, ready for plotting.
//!
//! ```bash
//! cargo run -p subgauss --example export_curve -- curve.csv
//! ```

use std::fs::File;
use std::io::BufWriter;

use subgauss::cli::write_curve_csv;
use subgauss::{asymmetric_three_mass_proxy, export_curve, ThreeMassParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "curve.csv".into());

    let params = ThreeMassParams::new(0.13, 0.25, 1.0)?;
    let d = params.distribution()?;
    let opt = asymmetric_three_mass_proxy(params)?.sigma2_opt;

    let at_opt = export_curve(&d, opt, -3.0, 1.0, 401)?;
    let at_var = export_curve(&d, d.variance(), -3.0, 1.0, 401)?;

    let lowest = |rows: &[subgauss::CurveRow]| {
        rows.iter()
            .min_by(|a, b| a.g.total_cmp(&b.g))
            .map(|r| (r.lambda, r.g))
            .unwrap()
    };
    println!("sigma2_opt = {opt:.10}: min g = {:?}", lowest(&at_opt));
    println!("variance   = {:.10}: min g = {:?}", d.variance(), lowest(&at_var));

    write_curve_csv(&at_opt, BufWriter::new(File::create(&path)?))?;
    println!("wrote {} rows to {path}", at_opt.len());
    Ok(())
}
