//! Trace cumulants of the two Rosenblatt kernels against Monte Carlo.
//!
//! cargo run --release --example cumulants

use hermite_lab::chaos::{cumulant_trace, rosenblatt_kernel_pair, sample_second_chaos};
use hermite_lab::derive_stream;
use hermite_lab::stats::empirical_cumulants;

fn main() -> hermite_lab::Result<()> {
    let (kf, kg) = rosenblatt_kernel_pair(0.7, 0.5, 1.0, 1.0, 0.5, 128)?;
    println!("cells: f {}, g {}", kf.len(), kg.len());
    for (name, k) in [("f", &kf), ("g", &kg)] {
        let x = sample_second_chaos(&mut derive_stream(2, 0), k, 200_000);
        let emp = empirical_cumulants(&x, 4)?;
        for p in 2..=4 {
            println!(
                "{name} kappa_{p}: trace {:>9.5}  MC {:>9.5} +- {:.5}",
                cumulant_trace(k, p as u32)?,
                emp.kappa(p),
                emp.std_error(p)
            );
        }
    }
    Ok(())
}
