//! Draws fBm, Rosenblatt and order-3 Hermite paths and checks Var(Z_1) = 1.
//!
//! cargo run --release --example paths

use hermite_lab::process::{sample_fbm, HermitePathGenerator, LatticeConfig};
use hermite_lab::stats::{run_replications, FnExperiment};
use hermite_lab::{derive_stream, HermiteSpec};

fn main() -> hermite_lab::Result<()> {
    let fbm = sample_fbm(&mut derive_stream(1, 0), 0.7, 1.0, 8)?;
    println!("fBm H=0.7 on 8 steps: {:?}", fbm.values());

    for (q, h) in [(2, 0.7), (3, 0.8)] {
        let spec = HermiteSpec::scalar(q, h)?;
        let gen = HermitePathGenerator::new(spec, 1.0, 256, LatticeConfig::new(4096)?)?;
        let exp = FnExperiment::new("terminal", &["Z_1^2"], |st| Ok(vec![gen.sample(st).terminal().powi(2)]));
        let run = run_replications(7, 4000, &exp, 0)?;
        let r = &run.reports[0];
        println!(
            "q={q} H={h}: lattice {} sigma_N^2 {:.4e}, E[Z_1^2] = {:.4} +- {:.4}",
            gen.lattice_size(),
            gen.sigma_n_sq(),
            r.mean,
            r.std_error.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
