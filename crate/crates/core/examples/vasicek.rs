//! Hermite–Vasicek path and the drift estimators at growing horizons.
//!
//! cargo run --release --example vasicek

use hermite_lab::process::{sample_vasicek, HermitePathGenerator, LatticeConfig};
use hermite_lab::stats::{run_replications, vasicek_estimators, FnExperiment};
use hermite_lab::HermiteSpec;

fn main() -> hermite_lab::Result<()> {
    let (a, b, h) = (1.0, 2.0, 0.7);
    let spec = HermiteSpec::scalar(2, h)?;
    for t in [25.0, 100.0] {
        let n = (40.0 * t) as usize;
        let gen = HermitePathGenerator::new(spec.clone(), t, n, LatticeConfig::new(8192)?)?;
        let exp = FnExperiment::new("vasicek", &["a_hat", "b_hat"], |st| {
            let e = vasicek_estimators(&sample_vasicek(a, b, &gen.sample(st))?, h)?;
            Ok(vec![e.a_hat, e.b_hat])
        });
        let run = run_replications(11, 100, &exp, 0)?;
        let (ra, rb) = (&run.reports[0], &run.reports[1]);
        println!(
            "T={t:>5}: mean a_hat {:.3} (sd {:.3}), mean b_hat {:.3} (sd {:.3}), {} failed replicates",
            ra.mean,
            ra.variance.unwrap_or(f64::NAN).sqrt(),
            rb.mean,
            rb.variance.unwrap_or(f64::NAN).sqrt(),
            run.failures.len()
        );
    }
    Ok(())
}
