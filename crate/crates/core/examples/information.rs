//! Entropy, Fisher information, the de Bruijn identity and the inequality
//! chain for the fixture densities and a kernel density estimate.
//!
//! cargo run --release --example information

use hermite_lab::derive_stream;
use hermite_lab::info::{
    de_bruijn_gap, entropy, inequality_suite, multivariate_trace_bound, relative_entropy, Bandwidth, DensityModel,
    ProductDensityModel,
};
use hermite_lab::special::QuadratureSpec;

fn main() -> hermite_lab::Result<()> {
    let quad = QuadratureSpec::default();
    let z = DensityModel::gaussian(0.0, 1.0)?;
    for f in [DensityModel::standardized_mixture()?, DensityModel::student_t(10.0)?] {
        let r = inequality_suite(&f, &quad)?;
        println!("{}: h = {:.6}", f.name(), entropy(&f, &quad)?);
        println!(
            "  d_TV {:.6}  D {:.6}  J {:.6}  J_st {:.6}",
            r.total_variation, r.relative_entropy, r.fisher, r.fisher_standardized
        );
        for c in r.asserted.iter().chain(&r.reported) {
            println!("  {:<28} {:.6} vs {:.6} {}", c.name, c.lhs, c.rhs, if c.satisfied { "holds" } else { "fails" });
        }
    }
    let db = de_bruijn_gap(&DensityModel::standardized_mixture()?, &quad, 64)?;
    println!("de Bruijn: D = {:.10}, integral = {:.10}", db.lhs, db.rhs);

    let x: Vec<f64> = derive_stream(4, 0).normals(20_000);
    let kde = DensityModel::kde(&x, Bandwidth::Silverman)?;
    println!("KDE of 20000 normals: D(kde | N) = {:.5}", relative_entropy(&kde, &z, &quad)?.value());

    let prod = ProductDensityModel::new(vec![DensityModel::standardized_mixture()?, DensityModel::gaussian(0.0, 2.0)?])?;
    let t = multivariate_trace_bound(&prod, &quad)?;
    println!("product: D {:.6}, tr(C^-1 J_st) {:.6}, |C| {:.1}, d_TV {:.6}", t.relative_entropy, t.trace_standardized_fisher, t.covariance_op_norm, t.total_variation);
    Ok(())
}
