//! Quadratic-variation Hurst estimates for q = 1, 2, 3.
//!
//! cargo run --release --example hurst

use hermite_lab::process::{HermitePathGenerator, LatticeConfig};
use hermite_lab::stats::estimate_hurst_qv;
use hermite_lab::{derive_stream, HermiteSpec};

fn main() -> hermite_lab::Result<()> {
    for q in 1..=3 {
        let gen = HermitePathGenerator::new(HermiteSpec::scalar(q, 0.75)?, 1.0, 4096, LatticeConfig::new(16384)?)?;
        let est = estimate_hurst_qv(&gen.sample(&mut derive_stream(5, q as u64)), q)?;
        println!("q={q}: H_hat = {:.4}, rate exponent {:.3}", est.hurst, est.rate_exponent);
    }
    Ok(())
}
