//! Empirical CDF of the Rosenblatt variable R_1 at the two conjectured points.
//!
//! cargo run --release --example conjecture

use hermite_lab::verify::{conjecture_probabilities, CONJECTURE_POINTS};

fn main() -> hermite_lab::Result<()> {
    for h in [0.55, 0.7, 0.9] {
        let p = conjecture_probabilities(1, h, 20_000, 0)?;
        for ((x, quoted), (prob, se)) in CONJECTURE_POINTS.iter().zip(p) {
            println!("H={h}: P(R <= {x}) = {prob:.4} +- {se:.4} (quoted {quoted})");
        }
    }
    Ok(())
}
