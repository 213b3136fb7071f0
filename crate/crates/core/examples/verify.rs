//! Runs one acceptance experiment by name and prints its checks.
//!
//! cargo run --release --example verify -- cumulants

use hermite_lab::verify::{run_experiment, VerifyOptions, EXPERIMENTS};

fn main() -> hermite_lab::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "info-identities".into());
    if !EXPERIMENTS.iter().any(|(_, n)| *n == name) {
        eprintln!("available: {:?}", EXPERIMENTS.map(|e| e.1));
        std::process::exit(2);
    }
    let r = run_experiment(&name, &VerifyOptions::new(42))?;
    println!("{}", r.summary_line());
    for c in &r.checks {
        println!("  {} {}: {:.6} in [{:.6}, {:.6}]", if c.passed { "ok  " } else { "FAIL" }, c.label, c.value, c.lower, c.upper);
    }
    Ok(())
}
