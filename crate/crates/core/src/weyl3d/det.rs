//! Regularized determinants `det_p(I − K)`, `K = −α M`.
//!
//! The sign makes `I − K = I + α M`, whose zero-field factors are the
//! secular functions `1 + α μ_ℓ`.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::WeylMatrix;
use crate::error::{domain, Error, Result};

const SCHUR_EPS: f64 = 1e-15;
const SCHUR_MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeterminantValue {
    pub value: Complex64,
    pub p: usize,
    pub l_max: usize,
    pub eig_count_used: usize,
    /// Some factor `1 − λ_j` is exactly zero.
    pub on_zero: bool,
}

fn k_block(m: &DMatrix<Complex64>, alpha: f64) -> DMatrix<Complex64> {
    m * Complex64::new(-alpha, 0.0)
}

/// Eigenvalues of a complex square matrix.
pub fn eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    if n == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    let s = Schur::try_new(m.clone(), SCHUR_EPS, SCHUR_MAX_ITER).ok_or_else(|| Error::Eigen {
        detail: format!("Schur iteration did not converge for a {n}x{n} block"),
    })?;
    let ev = s.eigenvalues().ok_or_else(|| Error::Eigen {
        detail: "Schur form not triangular".into(),
    })?;
    Ok(ev.iter().copied().collect())
}

/// `Π_j (1 − λ_j) exp(Σ_{k<p} λ_j^k / k)` over the eigenvalues of `K`.
pub fn det_p(mat: &WeylMatrix, alpha: f64, p: usize) -> Result<DeterminantValue> {
    if p < 3 {
        return Err(domain("det_p", format!("p = {p} must be >= 3")));
    }
    let mut value = Complex64::new(1.0, 0.0);
    let mut count = 0;
    let mut on_zero = false;
    for blk in &mat.blocks {
        let mult = WeylMatrix::multiplicity(blk.m);
        for lambda in eigenvalues(&k_block(&blk.entries, alpha))? {
            let mut corr = Complex64::new(0.0, 0.0);
            let mut pw = Complex64::new(1.0, 0.0);
            for k in 1..p {
                pw *= lambda;
                corr += pw / k as f64;
            }
            let factor = (Complex64::new(1.0, 0.0) - lambda) * corr.exp();
            on_zero |= factor.norm() == 0.0;
            for _ in 0..mult {
                value *= factor;
            }
            count += mult;
        }
    }
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::Eigen {
            detail: "determinant is not finite".into(),
        });
    }
    Ok(DeterminantValue {
        value,
        p,
        l_max: mat.l_max,
        eig_count_used: count,
        on_zero,
    })
}

/// `det(I − K) exp(Σ_{k<p} tr(K^k)/k)` from an LU determinant and traces.
pub fn det_p_trace_form(mat: &WeylMatrix, alpha: f64, p: usize) -> Result<Complex64> {
    if p < 3 {
        return Err(domain("det_p_trace_form", format!("p = {p} must be >= 3")));
    }
    let mut value = Complex64::new(1.0, 0.0);
    for blk in &mat.blocks {
        let k = k_block(&blk.entries, alpha);
        let n = k.nrows();
        let id = DMatrix::<Complex64>::identity(n, n);
        let mut v = (&id - &k).determinant();
        let mut pw = id.clone();
        let mut corr = Complex64::new(0.0, 0.0);
        for j in 1..p {
            pw = &pw * &k;
            corr += pw.trace() / j as f64;
        }
        v *= corr.exp();
        for _ in 0..WeylMatrix::multiplicity(blk.m) {
            value *= v;
        }
    }
    Ok(value)
}

/// `σ_min(I − K) / σ_max(I − K)` over all blocks.
pub fn singular_ratio(mat: &WeylMatrix, alpha: f64) -> f64 {
    let mut smin = f64::INFINITY;
    let mut smax: f64 = 0.0;
    for blk in &mat.blocks {
        let n = blk.entries.nrows();
        let a = DMatrix::<Complex64>::identity(n, n) - k_block(&blk.entries, alpha);
        let sv = a.singular_values();
        smin = smin.min(sv.min());
        smax = smax.max(sv.max());
    }
    smin / smax
}
