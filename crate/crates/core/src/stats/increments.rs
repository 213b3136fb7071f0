//! Generalized increments and the renormalized quadratic variation of fields.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::process::path::FieldSample;
use crate::spec::HermiteSpec;
use crate::special::constants::{const_c1_sheet, factorial};

/// The rectangle `[s, t]` of a `d`-parameter field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IncrementCell {
    pub s: Vec<f64>,
    pub t: Vec<f64>,
}

impl IncrementCell {
    pub fn new(s: Vec<f64>, t: Vec<f64>) -> Result<Self> {
        if s.len() != t.len() || s.is_empty() {
            return Err(domain("cell corners must have the same positive dimension"));
        }
        if s.iter().zip(&t).any(|(a, b)| !(a < b)) {
            return Err(domain("cell needs s < t componentwise"));
        }
        Ok(Self { s, t })
    }
}

/// `Σ_{r ∈ {0,1}^d} (-1)^{d - Σr} Z(s + r(t - s))`.
pub fn generalized_increment(field: &FieldSample, cell: &IncrementCell) -> Result<f64> {
    let lo = field.index_of(&cell.s)?;
    let hi = field.index_of(&cell.t)?;
    Ok(corner_sum(field, &lo, &hi))
}

fn corner_sum(field: &FieldSample, lo: &[usize], hi: &[usize]) -> f64 {
    let d = lo.len();
    let mut idx = vec![0usize; d];
    let mut total = 0.0;
    for mask in 0..(1usize << d) {
        let mut ones = 0;
        for j in 0..d {
            if mask >> j & 1 == 1 {
                idx[j] = hi[j];
                ones += 1;
            } else {
                idx[j] = lo[j];
            }
        }
        let sign = if (d - ones) % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * field.get(&idx);
    }
    total
}

fn check_refinement(field: &FieldSample, spec: &HermiteSpec, cells: &[usize]) -> Result<()> {
    if cells.len() != field.dim() || spec.dim() != field.dim() {
        return Err(Error::Grid(
            "field, spec and cell counts must share the dimension".into(),
        ));
    }
    for (j, (&n, &d)) in cells.iter().zip(field.dims()).enumerate() {
        if n == 0 || d % n != 0 {
            return Err(Error::Grid(format!(
                "axis {j}: field grid of {d} cells does not refine {n} cells"
            )));
        }
    }
    Ok(())
}

/// `V_N = (1/ΠN) Σ_i [Π (N_j/T_j)^{2H_j} (ΔZ_i)² - 1]` over the `ΠN` equal cells of the field domain.
pub fn quadratic_variation(field: &FieldSample, spec: &HermiteSpec, cells: &[usize]) -> Result<f64> {
    check_refinement(field, spec, cells)?;
    let d = field.dim();
    let scale: f64 = (0..d)
        .map(|j| (cells[j] as f64 / field.extents()[j]).powf(2.0 * spec.hurst()[j]))
        .product();
    let steps: Vec<usize> = (0..d).map(|j| field.dims()[j] / cells[j]).collect();
    let total: usize = cells.iter().product();
    let mut idx = vec![0usize; d];
    let mut lo = vec![0usize; d];
    let mut hi = vec![0usize; d];
    let mut sum = 0.0;
    for _ in 0..total {
        for j in 0..d {
            lo[j] = idx[j] * steps[j];
            hi[j] = lo[j] + steps[j];
        }
        let inc = corner_sum(field, &lo, &hi);
        sum += scale * inc * inc - 1.0;
        for j in (0..d).rev() {
            idx[j] += 1;
            if idx[j] < cells[j] {
                break;
            }
            idx[j] = 0;
        }
    }
    Ok(sum / total as f64)
}

/// `c_{1,H}^{-1/2} Π N_j^{2 - 2H′_j} (q! q)^{-1} V_N`, whose second moment tends to 1.
pub fn qv_limit_statistic(field: &FieldSample, spec: &HermiteSpec, cells: &[usize]) -> Result<f64> {
    if spec.q() < 2 {
        return Err(domain("the quadratic-variation limit needs q >= 2"));
    }
    let c1 = const_c1_sheet(spec)?;
    let v = quadratic_variation(field, spec, cells)?;
    Ok(qv_normalization(spec, cells, c1) * v)
}

pub(crate) fn qv_normalization(spec: &HermiteSpec, cells: &[usize], c1: f64) -> f64 {
    let q = spec.q();
    let rate: f64 = cells
        .iter()
        .enumerate()
        .map(|(j, &n)| (n as f64).powf(2.0 - 2.0 * spec.h0(j)))
        .product();
    rate / (c1.sqrt() * factorial(q) * q as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field2(vals: impl Fn(usize, usize) -> f64, n1: usize, n2: usize) -> FieldSample {
        let mut v = Vec::new();
        for i in 0..=n1 {
            for j in 0..=n2 {
                v.push(vals(i, j));
            }
        }
        FieldSample::new(vec![1.0, 1.0], vec![n1, n2], v, None).unwrap()
    }

    #[test]
    fn one_dimensional_increment() {
        let f = FieldSample::new(vec![1.0], vec![4], vec![0.0, 1.0, 4.0, 9.0, 16.0], None).unwrap();
        let c = IncrementCell::new(vec![0.25], vec![0.75]).unwrap();
        assert_eq!(generalized_increment(&f, &c).unwrap(), 8.0);
    }

    #[test]
    fn two_dimensional_increment() {
        let f = field2(|i, j| (i * i + 3 * i * j + j) as f64, 4, 4);
        let c = IncrementCell::new(vec![0.25, 0.5], vec![0.75, 1.0]).unwrap();
        let z = |i: usize, j: usize| (i * i + 3 * i * j + j) as f64;
        let expected = z(3, 4) - z(3, 2) - z(1, 4) + z(1, 2);
        assert_eq!(generalized_increment(&f, &c).unwrap(), expected);
        let constant = field2(|_, _| 3.0, 4, 4);
        assert_eq!(generalized_increment(&constant, &c).unwrap(), 0.0);
    }

    #[test]
    fn off_grid_corner_rejected() {
        let f = field2(|_, _| 0.0, 4, 4);
        let c = IncrementCell::new(vec![0.1, 0.5], vec![0.75, 1.0]).unwrap();
        assert!(generalized_increment(&f, &c).is_err());
    }

    #[test]
    fn zero_field() {
        let spec = HermiteSpec::scalar(2, 0.8).unwrap();
        let f = FieldSample::new(vec![1.0], vec![64], vec![0.0; 65], None).unwrap();
        assert_eq!(quadratic_variation(&f, &spec, &[16]).unwrap(), -1.0);
        let stat = qv_limit_statistic(&f, &spec, &[16]).unwrap();
        let c1 = const_c1_sheet(&spec).unwrap();
        let expected = -(16f64).powf(2.0 - 2.0 * 0.9) / (c1.sqrt() * 4.0);
        assert!((stat - expected).abs() < 1e-12);
        assert!(quadratic_variation(&f, &spec, &[10]).is_err());
    }

    #[test]
    fn field_of_exact_unit_increments() {
        // Increments of size N^{-H} in every cell give V_N = 0 exactly.
        let spec = HermiteSpec::new(2, vec![0.7, 0.9]).unwrap();
        let (n1, n2) = (8usize, 4usize);
        let a = (n1 as f64).powf(-0.7) * (n2 as f64).powf(-0.9);
        let f = field2(|i, j| a * (i * j) as f64, n1, n2);
        assert!(quadratic_variation(&f, &spec, &[n1, n2]).unwrap().abs() < 1e-12);
    }
}
