//! Hermite sheet on a 64 x 64 grid and its normalized quadratic variation.
//!
//! cargo run --release --example sheet_qv

use hermite_lab::io::write_field_csv;
use hermite_lab::process::{HermiteSheetGenerator, LatticeConfig};
use hermite_lab::special::{const_b_sheet, const_c1_sheet};
use hermite_lab::stats::{qv_limit_statistic, run_replications, FnExperiment};
use hermite_lab::{derive_stream, HermiteSpec};

fn main() -> hermite_lab::Result<()> {
    let spec = HermiteSpec::new(2, vec![0.8, 0.75])?;
    println!("c_1 = {:.5}, b = {:.5}", const_c1_sheet(&spec)?, const_b_sheet(&spec));
    let gen = HermiteSheetGenerator::new(spec.clone(), [1.0, 1.0], [64, 64], LatticeConfig::new(256)?)?;

    let field = gen.sample(&mut derive_stream(3, 0));
    let mut csv = Vec::new();
    write_field_csv(&field, &mut csv)?;
    println!("first CSV rows:\n{}", String::from_utf8_lossy(&csv[..80]));

    let exp = FnExperiment::new("qv", &["s^2"], |st| {
        let s = qv_limit_statistic(&gen.sample(st), &spec, &[64, 64])?;
        Ok(vec![s * s])
    });
    let r = run_replications(3, 100, &exp, 0)?;
    println!("E[s^2] = {:.3} +- {:.3}", r.reports[0].mean, r.reports[0].std_error.unwrap_or(f64::NAN));
    Ok(())
}
