//! Discretized second-chaos kernels, trace cumulants and second-chaos sampling.
//!
//! A kernel `f` on a partition into cells `C_i` of widths `δ_i` is stored as
//! the symmetric matrix `a_ij ≈ f(s_i, s_j)`. The double integral `I₂(f)` is
//! approximated by `Σ_ij a_ij √δ_i √δ_j (ξ_i ξ_j - 1_{i=j})`, whose law depends
//! only on the operator `M = D^{1/2} a D^{1/2}` with `D = diag(δ)`.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::process::volterra::{power_cell_values_into, VolterraCells};
use crate::rng::RngStream;
use crate::special::constants::{const_b_rosenblatt, const_c_hermite};
use crate::special::quadrature::{gauss_legendre_unit, Interval};

#[derive(Clone, Debug, PartialEq)]
pub struct KernelMatrix {
    grid: Vec<f64>,
    widths: Vec<f64>,
    a: DMatrix<f64>,
}

impl KernelMatrix {
    /// Builds a kernel from midpoints, cell widths and samples; `a` is symmetrized.
    pub fn new(grid: Vec<f64>, widths: Vec<f64>, a: DMatrix<f64>) -> Result<Self> {
        let m = grid.len();
        if widths.len() != m || a.nrows() != m || a.ncols() != m {
            return Err(domain("grid, widths and matrix sizes disagree"));
        }
        if widths.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(domain("cell widths must be positive and finite"));
        }
        if a.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("kernel matrix entry".into()));
        }
        let sym = (&a + a.transpose()) * 0.5;
        Ok(Self {
            grid,
            widths,
            a: sym,
        })
    }

    /// Kernel on `m` equal cells of width `delta` starting at `lo`.
    pub fn uniform(lo: f64, delta: f64, a: DMatrix<f64>) -> Result<Self> {
        let m = a.nrows();
        let grid = (0..m).map(|i| lo + (i as f64 + 0.5) * delta).collect();
        Self::new(grid, vec![delta; m], a)
    }

    /// Kernel given directly by its operator `M = D^{1/2} a D^{1/2}`.
    pub fn from_operator(grid: Vec<f64>, widths: Vec<f64>, op: DMatrix<f64>) -> Result<Self> {
        let s: Vec<f64> = widths.iter().map(|w| 1.0 / w.sqrt()).collect();
        let a = DMatrix::from_fn(op.nrows(), op.ncols(), |i, j| op[(i, j)] * s[i] * s[j]);
        Self::new(grid, widths, a)
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    /// The common cell width, if the grid is uniform.
    pub fn delta(&self) -> Option<f64> {
        let d = *self.widths.first()?;
        self.widths
            .iter()
            .all(|w| (w - d).abs() <= 1e-12 * d)
            .then_some(d)
    }

    /// `M = D^{1/2} a D^{1/2}`.
    pub fn operator(&self) -> DMatrix<f64> {
        let s: Vec<f64> = self.widths.iter().map(|w| w.sqrt()).collect();
        DMatrix::from_fn(self.len(), self.len(), |i, j| self.a[(i, j)] * s[i] * s[j])
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            widths: self.widths.clone(),
            a: &self.a * c,
        }
    }

    /// Header data for serialization.
    pub fn header(&self) -> KernelHeader {
        KernelHeader {
            m: self.len(),
            grid: self.grid.clone(),
            widths: self.widths.clone(),
            delta: self.delta(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelHeader {
    pub m: usize,
    pub grid: Vec<f64>,
    pub widths: Vec<f64>,
    pub delta: Option<f64>,
}

/// Midpoint samples of `f` on `m` equal cells of a finite interval.
pub fn kernel_from_function<F: Fn(f64, f64) -> f64>(
    f: F,
    domain_: Interval,
    m: usize,
) -> Result<KernelMatrix> {
    if m == 0 {
        return Err(domain("m must be positive"));
    }
    if !domain_.hi.is_finite() {
        return Err(domain("kernel domain must be bounded"));
    }
    let delta = (domain_.hi - domain_.lo) / m as f64;
    let grid: Vec<f64> = (0..m).map(|i| domain_.lo + (i as f64 + 0.5) * delta).collect();
    let a = DMatrix::from_fn(m, m, |i, j| f(grid[i], grid[j]));
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("kernel value at a midpoint pair".into()));
    }
    KernelMatrix::new(grid, vec![delta; m], a)
}

fn cumulant_factor(p: u32) -> f64 {
    2f64.powi(p as i32 - 1) * (1..p).map(|k| k as f64).product::<f64>()
}

/// `κ_p(I₂(f)) ≈ 2^{p-1} (p-1)! tr(M^p)`, `2 <= p <= 8`.
pub fn cumulant_trace(k: &KernelMatrix, p: u32) -> Result<f64> {
    if !(2..=8).contains(&p) {
        return Err(domain(format!("cumulant order {p} must lie in 2..=8")));
    }
    let m = k.operator();
    let mut pow = m.clone();
    for _ in 1..p - 1 {
        pow = &pow * &m;
    }
    // tr(M^{p-1} M) without forming the last product.
    let tr = pow.component_mul(&m.transpose()).sum();
    Ok(cumulant_factor(p) * tr)
}

/// Cumulants `κ_2..=κ_pmax` from the spectrum of `M`.
pub fn cumulants_from_spectrum(eigenvalues: &[f64], pmax: u32) -> Vec<f64> {
    (2..=pmax)
        .map(|p| cumulant_factor(p) * eigenvalues.iter().map(|l| l.powi(p as i32)).sum::<f64>())
        .collect()
}

/// Sampler for `I₂(f)` using `I₂(f) = Σ_k λ_k (η_k² - 1)` in law, where `λ_k`
/// are the eigenvalues of `M` and `η_k` are i.i.d. standard normal.
#[derive(Clone, Debug)]
pub struct SecondChaosSampler {
    eigenvalues: Vec<f64>,
}

impl SecondChaosSampler {
    pub fn new(k: &KernelMatrix) -> Self {
        let eig = SymmetricEigen::new(k.operator());
        let max = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut eigenvalues: Vec<f64> = eig
            .eigenvalues
            .iter()
            .copied()
            .filter(|v| v.abs() > 1e-13 * max)
            .collect();
        eigenvalues.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
        Self { eigenvalues }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        self.eigenvalues
            .iter()
            .map(|l| {
                let z = rng.normal();
                l * (z * z - 1.0)
            })
            .sum()
    }
}

/// Symmetric `m × m` kernel on `[0, 1]` with standard normal entries drawn
/// from stream 0 of `seed`; a reproducible fixture for trace checks.
pub fn random_symmetric_kernel(seed: u64, m: usize) -> Result<KernelMatrix> {
    if m == 0 {
        return Err(domain("kernel size must be positive"));
    }
    let mut rng = crate::rng::derive_stream(seed, 0);
    let mut a = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            let v = rng.normal();
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    KernelMatrix::uniform(0.0, 1.0 / m as f64, a)
}

/// `n` independent draws of the discretized `I₂(f)`.
pub fn sample_second_chaos(stream: &mut RngStream, k: &KernelMatrix, n: usize) -> Vec<f64> {
    let s = SecondChaosSampler::new(k);
    (0..n).map(|_| s.sample(stream)).collect()
}

/// Direct evaluation of `Σ_ij a_ij √δ_i √δ_j (ξ_i ξ_j - 1_{i=j})` for given `ξ`.
pub fn quadratic_form_draw(k: &KernelMatrix, xi: &[f64]) -> f64 {
    let m = k.operator();
    let mut s = 0.0;
    for i in 0..k.len() {
        for j in 0..k.len() {
            let e = if i == j { xi[i] * xi[i] - 1.0 } else { xi[i] * xi[j] };
            s += m[(i, j)] * e;
        }
    }
    s
}

/// Integration nodes on `[breaks[0], breaks.last()]`, graded towards the left
/// end of every panel (`u = lo + δ s³`) where the cell integrals have power-law
/// behaviour.
pub(crate) fn graded_nodes(breaks: &[f64], order: usize) -> (Vec<f64>, Vec<f64>) {
    let (s, w) = gauss_legendre_unit(order);
    let mut nodes = Vec::with_capacity((breaks.len() - 1) * order);
    let mut weights = Vec::with_capacity(nodes.capacity());
    for pair in breaks.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let d = hi - lo;
        if d <= 0.0 {
            continue;
        }
        for (si, wi) in s.iter().zip(&w) {
            nodes.push(lo + d * si.powi(3));
            weights.push(d * 3.0 * si * si * wi);
        }
    }
    (nodes, weights)
}

pub(crate) const U_ORDER: usize = 8;

fn sorted_breaks(mut b: Vec<f64>) -> Vec<f64> {
    b.sort_by(|x, y| x.total_cmp(y));
    b.dedup_by(|x, y| (*x - *y).abs() <= 1e-14 * y.abs().max(1.0));
    b
}

/// Galerkin operator `M_ij = (1/√(δ_iδ_j)) Σ_l w_l φ_i(u_l) φ_j(u_l)` from
/// cell integrals `φ` sampled at weighted nodes.
fn operator_from_cells<F: Fn(f64, &mut [f64])>(
    widths: &[f64],
    nodes: &[f64],
    weights: &[f64],
    cell_values: F,
) -> DMatrix<f64> {
    let cells = widths.len();
    let mut buf = vec![0.0; cells];
    let mut pos = DMatrix::zeros(cells, nodes.len());
    let mut neg = DMatrix::zeros(cells, nodes.len());
    let mut any_neg = false;
    for (l, (&u, &w)) in nodes.iter().zip(weights).enumerate() {
        cell_values(u, &mut buf);
        let sw = w.abs().sqrt();
        for i in 0..cells {
            let v = buf[i] / widths[i].sqrt() * sw;
            if w >= 0.0 {
                pos[(i, l)] = v;
            } else {
                neg[(i, l)] = v;
                any_neg = true;
            }
        }
    }
    let mut op = &pos * pos.transpose();
    if any_neg {
        op -= &neg * neg.transpose();
    }
    op
}

/// Left edge of the half-line partition used for the `g` kernel: the far
/// tail beyond it carries a fraction below `tol` of `‖g‖²`.
fn half_line_cutoff(h: f64, t: f64, tol: f64) -> f64 {
    // For y → -∞ the kernel decays like |y|^{H/2-1}, so the omitted part of
    // ‖g‖² behaves like L^{H-1} / (1-H) relative to t^{H-1}.
    let l = (tol * (1.0 - h)).powf(1.0 / (h - 1.0)) * t;
    l.min(1e250)
}

/// Cell edges on `[0, t]`: `m` equal cells, with the first one split
/// geometrically towards 0 where `∂₁K^{h0}(u, y)` blows up like `y^{½-h0}`.
/// The unresolved piece `[0, ε]` carries a fraction of order
/// `(ε/t)^{2-2h0}` of the squared kernel norm, kept below `1e-5`.
pub(crate) fn volterra_edges(h0: f64, t: f64, m: usize) -> Vec<f64> {
    let delta = t / m as f64;
    let e = 2.0 - 2.0 * h0;
    let eps = t * (1e-5 * e).powf(1.0 / e);
    let mut small = Vec::new();
    let mut x = delta / 1.25;
    while x > eps && small.len() < 4000 {
        small.push(x);
        x /= 1.25;
    }
    small.push(0.0);
    small.reverse();
    small.extend((1..=m).map(|i| i as f64 * delta));
    small
}

/// The two second-chaos kernels of `α R_t + β R_s` (`0 < s <= t`): `f` from the
/// finite-interval Volterra representation and `g` from the half-line
/// representation. Both use Galerkin cell averages; `f` lives on `m` equal
/// cells of `[0, t]` (the first refined towards 0), `g` additionally on geometric cells of `(-∞, 0]`.
pub fn rosenblatt_kernel_pair(
    h: f64,
    s: f64,
    t: f64,
    alpha: f64,
    beta: f64,
    m: usize,
) -> Result<(KernelMatrix, KernelMatrix)> {
    crate::error::check_hurst_long_memory(h)?;
    if !(s > 0.0 && s <= t && t.is_finite()) {
        return Err(domain(format!("need 0 < s <= t, got s = {s}, t = {t}")));
    }
    if m < 2 {
        return Err(domain("m must be at least 2"));
    }
    let delta = t / m as f64;
    let h0 = 0.5 * (h + 1.0);
    let pos_edges: Vec<f64> = (0..=m).map(|i| i as f64 * delta).collect();
    let f_edges = volterra_edges(h0, t, m);
    let mut breaks = f_edges.clone();
    breaks.push(s);
    let breaks = sorted_breaks(breaks);
    let (nodes, base_w) = graded_nodes(&breaks, U_ORDER);
    let weights: Vec<f64> = nodes
        .iter()
        .zip(&base_w)
        .map(|(&u, &w)| w * (alpha + if u < s { beta } else { 0.0 }))
        .collect();

    // f: Volterra representation with H₀ = (H + 1)/2.
    let vc = VolterraCells::new(h0);
    let f_widths: Vec<f64> = f_edges.windows(2).map(|w| w[1] - w[0]).collect();
    let bh = const_b_rosenblatt(h)?;
    let op_f = operator_from_cells(&f_widths, &nodes, &weights, |u, out| {
        vc.values_into(&f_edges, u, out)
    }) * bh;
    let grid_f: Vec<f64> = f_edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let kf = KernelMatrix::from_operator(grid_f, f_widths, op_f)?;

    // g: half-line representation with exponent H/2 - 1.
    let r = 0.5 * h;
    let cutoff = half_line_cutoff(h, t, 1e-5);
    let ratio = 1.25;
    let mut neg = vec![0.0];
    let mut w = delta;
    while -neg.last().unwrap() < cutoff {
        let next = neg.last().unwrap() - w;
        neg.push(next);
        w *= ratio;
    }
    neg.reverse();
    let mut edges = neg;
    edges.extend_from_slice(&pos_edges[1..]);
    let widths: Vec<f64> = edges.windows(2).map(|w| w[1] - w[0]).collect();
    let grid: Vec<f64> = edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let c = const_c_hermite(h, 2)?;
    let op_g = operator_from_cells(&widths, &nodes, &weights, |u, out| {
        power_cell_values_into(r, &edges, u, out)
    }) * c;
    let kg = KernelMatrix::from_operator(grid, widths, op_g)?;
    Ok((kf, kg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::derive_stream;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn constant_kernel_on_unit_interval() {
        let k = kernel_from_function(|_, _| 1.0, Interval::new(0.0, 1.0).unwrap(), 4).unwrap();
        assert!(k.matrix().iter().all(|v| *v == 1.0));
        assert_eq!(k.delta(), Some(0.25));
    }

    #[test]
    fn product_kernel_is_rank_one() {
        let k = kernel_from_function(|u, v| u * v, Interval::new(0.0, 1.0).unwrap(), 6).unwrap();
        let eig = SymmetricEigen::new(k.matrix().clone());
        let mut ev: Vec<f64> = eig.eigenvalues.iter().map(|v| v.abs()).collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        assert!(ev[1] < 1e-12 * ev[0]);
    }

    #[test]
    fn trace_p2_is_l2_norm() {
        let k = kernel_from_function(|u, v| (u - v).cos() + u * v, Interval::new(0.0, 2.0).unwrap(), 10)
            .unwrap();
        let d = k.delta().unwrap();
        let l2: f64 = k.matrix().iter().map(|v| v * v).sum::<f64>() * d * d;
        assert_relative_eq!(cumulant_trace(&k, 2).unwrap(), 2.0 * l2, max_relative = 1e-12);
    }

    #[test]
    fn one_by_one_kernel() {
        let c: f64 = 0.5;
        let k = KernelMatrix::uniform(0.0, 1.0, DMatrix::from_element(1, 1, c)).unwrap();
        for p in 2..=6 {
            let expected = cumulant_factor(p) * c.powi(p as i32);
            assert_relative_eq!(cumulant_trace(&k, p).unwrap(), expected, max_relative = 1e-14);
        }
        assert!(cumulant_trace(&k, 9).is_err());
        assert!(cumulant_trace(&k, 1).is_err());
    }

    #[test]
    fn zero_kernel() {
        let k = KernelMatrix::uniform(0.0, 0.1, DMatrix::zeros(5, 5)).unwrap();
        for p in 2..=8 {
            assert_eq!(cumulant_trace(&k, p).unwrap(), 0.0);
        }
        let mut s = derive_stream(1, 0);
        assert!(sample_second_chaos(&mut s, &k, 10).iter().all(|v| *v == 0.0));
    }

    #[test]
    fn spectrum_cumulants_match_trace() {
        let k = kernel_from_function(|u, v| (-(u - v).abs()).exp(), Interval::new(0.0, 1.0).unwrap(), 12)
            .unwrap();
        let s = SecondChaosSampler::new(&k);
        let spec = cumulants_from_spectrum(s.eigenvalues(), 5);
        for p in 2..=5 {
            assert_relative_eq!(spec[p as usize - 2], cumulant_trace(&k, p).unwrap(), max_relative = 1e-10);
        }
    }

    #[test]
    fn rejects_non_finite() {
        let r = kernel_from_function(|u, v| 1.0 / (u - v), Interval::new(0.0, 1.0).unwrap(), 4);
        assert!(r.is_err());
    }

    #[test]
    fn rosenblatt_f_kernel_normalized() {
        let (kf, _) = rosenblatt_kernel_pair(0.7, 1.0, 1.0, 1.0, 0.0, 256).unwrap();
        let k2 = cumulant_trace(&kf, 2).unwrap();
        assert!((k2 - 1.0).abs() < 0.05, "kappa_2 = {k2}");
    }

    #[test]
    fn rosenblatt_pair_shares_cumulants() {
        let (kf, kg) = rosenblatt_kernel_pair(0.7, 0.5, 1.0, 1.0, 0.5, 256).unwrap();
        for p in 2..=4 {
            let a = cumulant_trace(&kf, p).unwrap();
            let b = cumulant_trace(&kg, p).unwrap();
            assert!((a - b).abs() < 0.05 * b.abs(), "p = {p}: {a} vs {b}");
        }
    }

    #[test]
    fn zero_weights_give_zero_kernels() {
        let (kf, kg) = rosenblatt_kernel_pair(0.7, 0.5, 1.0, 0.0, 0.0, 16).unwrap();
        assert_eq!(cumulant_trace(&kf, 2).unwrap(), 0.0);
        assert_eq!(cumulant_trace(&kg, 3).unwrap(), 0.0);
    }

    proptest! {
        #[test]
        fn permutation_and_scaling_invariance(
            vals in proptest::collection::vec(-1.0f64..1.0, 16),
            c in 0.1f64..3.0,
            p in 2u32..6,
        ) {
            let a = DMatrix::from_row_slice(4, 4, &vals);
            let k = KernelMatrix::uniform(0.0, 0.3, a.clone()).unwrap();
            let perm = [2usize, 0, 3, 1];
            let sym = k.matrix().clone();
            let b = DMatrix::from_fn(4, 4, |i, j| sym[(perm[i], perm[j])]);
            let kp = KernelMatrix::uniform(0.0, 0.3, b).unwrap();
            let x = cumulant_trace(&k, p).unwrap();
            prop_assert!((x - cumulant_trace(&kp, p).unwrap()).abs() < 1e-10 * (1.0 + x.abs()));
            let y = cumulant_trace(&k.scaled(c), p).unwrap();
            prop_assert!((y - c.powi(p as i32) * x).abs() < 1e-9 * (1.0 + y.abs()));
        }

        #[test]
        fn spectral_draw_matches_quadratic_form_law_on_mean(seed in 0u64..50) {
            let k = kernel_from_function(|u, v| u + v, Interval::new(0.0, 1.0).unwrap(), 3).unwrap();
            let mut s = derive_stream(seed, 0);
            let xi = s.normals(3);
            prop_assert!(quadratic_form_draw(&k, &xi).is_finite());
        }
    }
}
