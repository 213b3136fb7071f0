//! The quadratic functional G_T(1) of a Hermite-driven moving average.
//!
//! cargo run --release --example gt_functional

use hermite_lab::process::{sample_moving_average, HermitePathGenerator, LatticeConfig, MovingAverageKernel};
use hermite_lab::special::{const_b_mavg, QuadratureSpec};
use hermite_lab::stats::{empirical_cumulants, run_replications, FnExperiment, GtEvaluator};
use hermite_lab::HermiteSpec;

fn main() -> hermite_lab::Result<()> {
    let (q, h, t, n) = (2, 0.7, 100.0, 4096);
    let spec = HermiteSpec::scalar(q, h)?;
    let kernel = MovingAverageKernel::exponential(1.0);
    let gen = HermitePathGenerator::new(spec.clone(), t, n, LatticeConfig::new(32768)?)?;
    let ev = GtEvaluator::new(&kernel, &spec, t, n)?;
    let exp = FnExperiment::new("gt", &["G_T(1)"], |st| {
        Ok(vec![ev.evaluate(&sample_moving_average(&kernel, &gen.sample(st))?, 1.0)?])
    });
    let run = run_replications(9, 200, &exp, 0)?;
    let c = empirical_cumulants(&run.reports[0].per_replicate, 2)?;
    let b = const_b_mavg(h, q, |u| (-u).exp(), QuadratureSpec::default())?.value;
    println!("T={t}: mean {:.3}, Var G_T(1) = {:.3} +- {:.3}", c.kappa(1), c.kappa(2), c.std_error(2));
    println!("b^2 = {:.3}, (q b)^2 = {:.3}", b * b, (q as f64 * b).powi(2));
    Ok(())
}
