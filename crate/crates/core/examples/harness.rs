//! A custom experiment on the replicate harness; reports are identical for
//! any worker count.
//!
//! cargo run --release --example harness

use hermite_lab::io::write_report_csv;
use hermite_lab::process::sample_fbm;
use hermite_lab::stats::{run_replications, Experiment, McReport};
use hermite_lab::{Result, RngStream};

struct IncrementVariance {
    hurst: f64,
}

impl Experiment for IncrementVariance {
    fn name(&self) -> &str {
        "increment-variance"
    }

    fn quantities(&self) -> Vec<String> {
        vec!["(B_1 - B_0.5)^2".into()]
    }

    fn replicate(&self, stream: &mut RngStream) -> Result<Vec<f64>> {
        let p = sample_fbm(stream, self.hurst, 1.0, 2)?;
        Ok(vec![(p.values()[2] - p.values()[1]).powi(2)])
    }
}

fn main() -> Result<()> {
    let e = IncrementVariance { hurst: 0.7 };
    let one = run_replications(5, 20_000, &e, 1)?;
    let many = run_replications(5, 20_000, &e, 4)?;
    assert_eq!(serde_json::to_string(&one)?, serde_json::to_string(&many)?);
    let r: &McReport = &one.reports[0];
    println!("mean {:.4} vs 0.5^1.4 = {:.4}, ci95 {:?}", r.mean, 0.5f64.powf(1.4), r.ci95);
    let mut csv = Vec::new();
    write_report_csv(&McReport::from_values(&r.quantity, r.per_replicate[..3].to_vec(), 5)?, &mut csv)?;
    print!("{}", String::from_utf8_lossy(&csv));
    Ok(())
}
