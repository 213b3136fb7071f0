//! Compares the lattice and double-integral Rosenblatt generators at t = 1
//! with a two-sample KS test.
//!
//! cargo run --release --example rosenblatt_generators

use hermite_lab::process::{HermitePathGenerator, LatticeConfig, RosenblattGridGenerator};
use hermite_lab::stats::{collect_streams, ks_two_sample};
use hermite_lab::HermiteSpec;

fn main() -> hermite_lab::Result<()> {
    let h = 0.7;
    let lattice = HermitePathGenerator::new(HermiteSpec::scalar(2, h)?, 1.0, 16, LatticeConfig::new(4096)?)?;
    let grid = RosenblattGridGenerator::new(h, 1.0, 16, 128)?;
    println!("double-integral variance at t=1: {:.4}", grid.exact_variances().last().copied().unwrap_or(f64::NAN));

    let a = collect_streams(1, 2000, 0, |st| Ok(lattice.sample(st).terminal()))?;
    let b = collect_streams(2, 2000, 0, |st| Ok(grid.sample(st).terminal()))?;
    let ks = ks_two_sample(&a, &b)?;
    println!("KS D = {:.4}, p = {:.3}", ks.statistic, ks.p_value);
    Ok(())
}
