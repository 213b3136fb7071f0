//! Normalization and limit constants.
//!
//! cargo run --release --example constants

use hermite_lab::special::{
    const_b_mavg, const_b_rosenblatt, const_c_hermite, const_sigma_h, const_vasicek_b, ou_stationary_variance,
    QuadratureSpec,
};

fn main() -> hermite_lab::Result<()> {
    println!("{:>5} {:>3} {:>10} {:>10}", "H", "q", "c(H,q)", "b_vas(H,q)");
    for h in [0.6, 0.7, 0.8, 0.9] {
        for q in 1..=3 {
            // The Vasicek rate constant needs 4H0 - 3 > 0, so H > 3/4 when q = 1.
            let b = const_vasicek_b(h, q).map(|v| format!("{v:>10.6}")).unwrap_or_else(|_| format!("{:>10}", "-"));
            println!("{h:>5} {q:>3} {:>10.6} {b}", const_c_hermite(h, q)?);
        }
    }
    println!("b_H(0.75) = {:.6}", const_b_rosenblatt(0.75)?);
    let s = const_sigma_h(0.6, QuadratureSpec::default())?;
    println!("sigma_H(0.6) = {:.6} (+- {:.1e})", s.value, s.error);
    let b = const_b_mavg(0.7, 2, |u| (-u).exp(), QuadratureSpec::default())?;
    println!("b(0.7, 2) for x = e^-u: {:.6} (+- {:.1e})", b.value, b.error);
    println!("OU stationary variance H Gamma(2H) at 0.7: {:.6}", ou_stationary_variance(0.7));
    Ok(())
}
