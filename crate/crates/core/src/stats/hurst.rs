//! Dyadic quadratic-variation estimator of the Hurst index.
//!
//! With `S_N = Σ_{i<N} (Z_{(i+1)T/N} - Z_{iT/N})²`, self-similarity and
//! stationary increments give `E S_N = N (T/N)^{2H}` for every chaos order, so
//!
//! `Ĥ = ½ (1 - log₂(S_N / S_{N/2}))`.
//!
//! The chaos order only changes how fast `Ĥ` concentrates: the relative error
//! of `S_N` decays like `N^{-r}` with `r = min(½, 2 - 2H)` for `q = 1` and
//! `r = (2 - 2H)/q` for `q >= 2`. This exponent is reported alongside `Ĥ`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::process::path::SamplePath;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HurstEstimate {
    pub hurst: f64,
    /// `Ĥ` reached or passed the boundary of `(0, 1)` (for example a smooth path).
    pub boundary: bool,
    /// Concentration exponent `r` of the estimator, evaluated at `Ĥ`.
    pub rate_exponent: f64,
}

fn squared_increments(values: &[f64], step: usize) -> f64 {
    values
        .iter()
        .step_by(step)
        .collect::<Vec<_>>()
        .windows(2)
        .map(|w| (w[1] - w[0]).powi(2))
        .sum()
}

pub fn estimate_hurst_qv(path: &SamplePath, q: u32) -> Result<HurstEstimate> {
    if q == 0 {
        return Err(domain("q must be at least 1"));
    }
    let n = path.n();
    if n < 4 || n % 4 != 0 {
        return Err(domain(format!("n = {n} must be a positive multiple of 4")));
    }
    let fine = squared_increments(path.values(), 1);
    let coarse = squared_increments(path.values(), 2);
    if !(fine > 0.0 && coarse > 0.0) {
        return Err(Error::Estimation(
            "quadratic variation ratio is not positive".into(),
        ));
    }
    let hurst = 0.5 * (1.0 - (fine / coarse).log2());
    let boundary = hurst >= 1.0 - 1e-9 || hurst <= 1e-9;
    let h = hurst.clamp(0.5, 1.0);
    let rate_exponent = if q == 1 {
        (2.0 - 2.0 * h).min(0.5)
    } else {
        (2.0 - 2.0 * h) / q as f64
    };
    Ok(HurstEstimate {
        hurst,
        boundary,
        rate_exponent,
    })
}
