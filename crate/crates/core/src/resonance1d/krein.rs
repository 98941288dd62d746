//! Rank-one Krein formula for the 1D surrogate on a uniform grid, and a
//! finite-difference reference solver.
//!
//! `R_α f = R₀ f − G(·, a) α (R₀ f)(a) / (1 + α G(a, a))`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::green::{airy_columns, green_1d};
use crate::error::{domain, Error, Result};
use crate::ShellParams;

/// `|1 + α G(a, a; z)|` below this is treated as a pole.
pub const NEAR_POLE: f64 = 1e-12;

/// Uniform grid with `n` intervals on `[x_min, x_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1d {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
}

impl Grid1d {
    /// Grid of spacing `h` on `[x_min, x_max]`.
    pub fn with_spacing(x_min: f64, x_max: f64, h: f64) -> Self {
        let n = ((x_max - x_min) / h).round() as usize;
        Self { x_min, x_max, n }
    }

    pub fn h(&self) -> f64 {
        (self.x_max - self.x_min) / self.n as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.h()
    }

    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.x(i)).collect()
    }

    /// Index of the node at `a`.
    pub fn index_of(&self, a: f64) -> Result<usize> {
        let s = (a - self.x_min) / self.h();
        let i = s.round();
        if (s - i).abs() > 1e-9 || i < 1.0 || i >= self.n as f64 {
            return Err(domain("Grid1d", format!("a = {a} is not an interior grid node")));
        }
        Ok(i as usize)
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 || !(self.x_max > self.x_min) {
            return Err(domain("Grid1d", "need x_max > x_min and at least two intervals"));
        }
        Ok(())
    }
}

fn check_samples(f: &[Complex64], grid: &Grid1d) -> Result<()> {
    grid.validate()?;
    if f.len() != grid.len() {
        return Err(domain(
            "krein_apply_1d",
            format!("{} samples for {} grid nodes", f.len(), grid.len()),
        ));
    }
    Ok(())
}

fn finite(v: Complex64, z: Complex64) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow {
            func: "free_resolvent_apply",
            z,
        })
    }
}

/// `(R₀ f)(x_i)` by the trapezoid rule, using the product form of the kernel
/// so that each node costs O(1).
pub fn free_resolvent_apply(f: &[Complex64], z: Complex64, field: f64, grid: &Grid1d) -> Result<Vec<Complex64>> {
    check_samples(f, grid)?;
    let n = grid.len();
    // G(x, y) = c · left(min) · right(max)
    let mut left = Vec::with_capacity(n);
    let mut right = Vec::with_capacity(n);
    let c;
    if field == 0.0 {
        let kappa = (-z).sqrt();
        if kappa.re <= 0.0 {
            return Err(domain("free_resolvent_apply", "z on the spectrum"));
        }
        // e^{κ(x − x₀)} and e^{−κ(x − x₀)}, x₀ the grid midpoint
        let x0 = 0.5 * (grid.x_min + grid.x_max);
        for x in grid.nodes() {
            left.push(finite((kappa * (x - x0)).exp(), z)?);
            right.push(finite((-kappa * (x - x0)).exp(), z)?);
        }
        c = 1.0 / (kappa * 2.0);
    } else {
        for x in grid.nodes() {
            let (ai, ci) = airy_columns(x, z, field)?;
            left.push(finite(ci.value.value(), z)?);
            right.push(finite(ai.value.value(), z)?);
        }
        c = Complex64::new(std::f64::consts::PI / field.cbrt(), 0.0);
    }
    let h = grid.h();
    let mut cum_left = vec![Complex64::new(0.0, 0.0); n];
    for i in 1..n {
        cum_left[i] = cum_left[i - 1] + (left[i - 1] * f[i - 1] + left[i] * f[i]) * (0.5 * h);
    }
    let mut cum_right = vec![Complex64::new(0.0, 0.0); n];
    for i in (0..n - 1).rev() {
        cum_right[i] = cum_right[i + 1] + (right[i + 1] * f[i + 1] + right[i] * f[i]) * (0.5 * h);
    }
    (0..n)
        .map(|i| finite(c * (right[i] * cum_left[i] + left[i] * cum_right[i]), z))
        .collect()
}

/// Krein-corrected resolvent applied to grid samples of `f`; requires
/// `Im z > 0` and `a` on an interior node.
pub fn krein_apply_1d(f: &[Complex64], z: Complex64, params: &ShellParams, grid: &Grid1d) -> Result<Vec<Complex64>> {
    params.validate()?;
    if !(z.im > 0.0) {
        return Err(domain("krein_apply_1d", "requires Im z > 0"));
    }
    check_samples(f, grid)?;
    let ia = grid.index_of(params.a)?;
    let mut u = free_resolvent_apply(f, z, params.field, grid)?;
    if params.alpha == 0.0 {
        return Ok(u);
    }
    let gaa = green_1d(params.a, params.a, z, params.field)?;
    let denom = 1.0 + params.alpha * gaa;
    if denom.norm() < NEAR_POLE {
        return Err(Error::NearPole { value: denom.norm() });
    }
    let coef = params.alpha * u[ia] / denom;
    for (i, ui) in u.iter_mut().enumerate() {
        *ui -= green_1d(grid.x(i), params.a, z, params.field)? * coef;
    }
    Ok(u)
}

/// Finite-difference solve of `(−D² + F x + α δ_h(x − a) − z) u = f` with
/// `δ_h = 1/h` at the node `a` and `u = 0` at both ends.
pub fn direct_solve_1d(f: &[Complex64], z: Complex64, params: &ShellParams, grid: &Grid1d) -> Result<Vec<Complex64>> {
    check_samples(f, grid)?;
    let ia = grid.index_of(params.a)?;
    let n = grid.len();
    let h = grid.h();
    let off = Complex64::new(-1.0 / (h * h), 0.0);
    // Thomas algorithm on the interior nodes 1..n−1
    let m = n - 2;
    let mut cp = vec![Complex64::new(0.0, 0.0); m];
    let mut dp = vec![Complex64::new(0.0, 0.0); m];
    for k in 0..m {
        let i = k + 1;
        let mut diag = 2.0 / (h * h) + params.field * grid.x(i) - z;
        if i == ia {
            diag += params.alpha / h;
        }
        let (denom, rhs) = if k == 0 {
            (diag, f[i])
        } else {
            (diag - off * cp[k - 1], f[i] - off * dp[k - 1])
        };
        if denom.norm() == 0.0 {
            return Err(domain("direct_solve_1d", "singular tridiagonal system"));
        }
        cp[k] = off / denom;
        dp[k] = rhs / denom;
    }
    let mut u = vec![Complex64::new(0.0, 0.0); n];
    for k in (0..m).rev() {
        u[k + 1] = if k + 1 == m { dp[k] } else { dp[k] - cp[k] * u[k + 2] };
    }
    Ok(u)
}

/// Discrete `(−D² + F x + α δ_h − z) u` at interior nodes (zero at the ends).
pub fn apply_operator_1d(u: &[Complex64], z: Complex64, params: &ShellParams, grid: &Grid1d) -> Result<Vec<Complex64>> {
    check_samples(u, grid)?;
    let ia = grid.index_of(params.a)?;
    let h = grid.h();
    let n = grid.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for i in 1..n - 1 {
        let mut v = (u[i] * 2.0 - u[i - 1] - u[i + 1]) / (h * h) + u[i] * (params.field * grid.x(i) - z);
        if i == ia {
            v += u[i] * (params.alpha / h);
        }
        out[i] = v;
    }
    Ok(out)
}

/// `‖u − v‖₂ / ‖v‖₂` over grid samples.
pub fn relative_l2(u: &[Complex64], v: &[Complex64]) -> f64 {
    let num: f64 = u.iter().zip(v).map(|(a, b)| (a - b).norm_sqr()).sum();
    let den: f64 = v.iter().map(|b| b.norm_sqr()).sum();
    (num / den).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bump(grid: &Grid1d) -> Vec<Complex64> {
        grid.nodes()
            .iter()
            .map(|&x| Complex64::new((-(x - 1.0) * (x - 1.0)).exp(), 0.3 * (-(x + 0.5) * (x + 0.5) * 2.0).exp()))
            .collect()
    }

    #[test]
    fn zero_coupling_is_free_resolvent() {
        let g = Grid1d::with_spacing(-20.0, 20.0, 0.05);
        let f = bump(&g);
        let z = Complex64::new(-1.0, 0.5);
        let p = ShellParams::new(0.0, 0.0, 0.1).unwrap();
        assert_eq!(krein_apply_1d(&f, z, &p, &g).unwrap(), free_resolvent_apply(&f, z, 0.1, &g).unwrap());
    }

    #[test]
    fn agrees_with_finite_differences_and_converges() {
        let z = Complex64::new(-1.0, 0.5);
        for &field in &[0.0, 0.1] {
            let p = ShellParams::new(0.0, -2.0, field).unwrap();
            let mut errs = vec![];
            for &h in &[0.02, 0.01] {
                let g = Grid1d::with_spacing(-40.0, 40.0, h);
                let f = bump(&g);
                let u = krein_apply_1d(&f, z, &p, &g).unwrap();
                let v = direct_solve_1d(&f, z, &p, &g).unwrap();
                errs.push(relative_l2(&u, &v));
            }
            assert!(errs[0] < 1e-3 && errs[1] < errs[0] / 3.0, "{errs:?}");
        }
    }

    #[test]
    fn resolvent_identity_residual() {
        let z = Complex64::new(-1.0, 0.5);
        let p = ShellParams::new(0.0, -2.0, 0.1).unwrap();
        let g = Grid1d::with_spacing(-40.0, 40.0, 0.01);
        let f = bump(&g);
        let u = krein_apply_1d(&f, z, &p, &g).unwrap();
        let hu = apply_operator_1d(&u, z, &p, &g).unwrap();
        let inner = 1..g.len() - 1;
        assert!(relative_l2(&hu[inner.clone()], &f[inner]) < 1e-3);
    }

    #[test]
    fn argument_checks() {
        let g = Grid1d::with_spacing(-5.0, 5.0, 0.1);
        let f = bump(&g);
        let p = ShellParams::new(0.05, -2.0, 0.1).unwrap();
        assert!(krein_apply_1d(&f, Complex64::new(-1.0, 0.5), &p, &g).is_err());
        let p = ShellParams::new(0.0, -2.0, 0.1).unwrap();
        assert!(krein_apply_1d(&f, Complex64::new(-1.0, -0.5), &p, &g).is_err());
        assert!(krein_apply_1d(&f[1..], Complex64::new(-1.0, 0.5), &p, &g).is_err());
    }
}
