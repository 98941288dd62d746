//! Oracle and identity checks run by the `validate` command.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::resonance1d::stark_green_1d;
use crate::specfun::airy::ai_bi_scaled;
use crate::specfun::{airy, sph_i, sph_i_prime, sph_k, sph_k_prime};
use crate::weyl3d::{resolvent_1d_from_time, weyl_matrix, zero_field_from_time, ContourQuadrature};
use crate::zerofield::{mu_ell, mu_ell_complex, mu_ell_surface};
use crate::ShellParams;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Worst observed error.
    pub metric: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    fn new(name: &str, metric: f64, tolerance: f64, detail: String) -> Self {
        Self {
            name: name.into(),
            passed: metric < tolerance,
            metric,
            tolerance,
            detail,
        }
    }

    fn failed(name: &str, tolerance: f64, err: crate::Error) -> Self {
        Self {
            name: name.into(),
            passed: false,
            metric: f64::INFINITY,
            tolerance,
            detail: format!("error: {err}"),
        }
    }
}

fn collect(name: &str, tolerance: f64, r: Result<(f64, String)>) -> Check {
    match r {
        Ok((m, d)) => Check::new(name, m, tolerance, d),
        Err(e) => Check::failed(name, tolerance, e),
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `max |t²(i′_ℓ k_ℓ − i_ℓ k′_ℓ) − 1|`, `ℓ ≤ 10`, 40 points in `[0.1, 30]`.
pub fn bessel_wronskian() -> Check {
    let r = (|| {
        let mut worst: f64 = 0.0;
        for ell in 0..=10 {
            for j in 0..40 {
                let t = 0.1 * 300f64.powf(j as f64 / 39.0);
                let tc = c(t, 0.0);
                let w = sph_i_prime(ell, tc)? * sph_k(ell, tc)? - sph_i(ell, tc)? * sph_k_prime(ell, tc)?;
                worst = worst.max((w * t * t - 1.0).norm());
            }
        }
        Ok((worst, "l<=10, 40 points in [0.1, 30]".into()))
    })();
    collect("bessel_wronskian", 1e-10, r)
}

/// `Ai Bi′ − Ai′ Bi` on the 41×41 grid `|Re z|, |Im z| ≤ 10`, returned as
/// `(max |πW − 1|, max |πW − 1| / (π(|Ai Bi′| + |Ai′ Bi|)))`.
pub fn airy_wronskian_errors() -> (f64, f64) {
    let mut abs_worst: f64 = 0.0;
    let mut rel_worst: f64 = 0.0;
    for i in 0..41 {
        for j in 0..41 {
            let z = c(-10.0 + 0.5 * i as f64, -10.0 + 0.5 * j as f64);
            let (ai, bi) = ai_bi_scaled(z);
            let p = ai.value.mul(bi.derivative);
            let q = ai.derivative.mul(bi.value);
            let w = p.add(q.times(c(-1.0, 0.0))).value();
            let scale = p.value().norm() + q.value().norm();
            let e = (w * std::f64::consts::PI - 1.0).norm();
            abs_worst = abs_worst.max(e);
            rel_worst = rel_worst.max(e / (std::f64::consts::PI * scale));
        }
    }
    (abs_worst, rel_worst)
}

/// Plain Wronskian `|πW − 1| < 1e−10` on the full grid.
pub fn airy_wronskian() -> Check {
    let (abs, _) = airy_wronskian_errors();
    Check::new("airy_wronskian", abs, 1e-10, "41x41 grid, |Re z|,|Im z| <= 10".into())
}

/// Wronskian error relative to the size of the cancelling products.
pub fn airy_wronskian_conditioned() -> Check {
    let (_, rel) = airy_wronskian_errors();
    Check::new(
        "airy_wronskian_conditioned",
        rel,
        1e-12,
        "|pi W - 1| / (pi (|Ai Bi'| + |Ai' Bi|)) on the same grid".into(),
    )
}

/// Analytic derivatives against central differences, `h = 1e−5`.
pub fn recurrences() -> Check {
    let r = (|| {
        let h = 1e-5;
        let mut worst: f64 = 0.0;
        for ell in 0..=10 {
            for &t in &[0.3, 1.0, 2.5, 7.0, 15.0] {
                let tc = c(t, 0.0);
                let fd_i = (sph_i(ell, c(t + h, 0.0))? - sph_i(ell, c(t - h, 0.0))?) / (2.0 * h);
                let fd_k = (sph_k(ell, c(t + h, 0.0))? - sph_k(ell, c(t - h, 0.0))?) / (2.0 * h);
                let di = sph_i_prime(ell, tc)?;
                let dk = sph_k_prime(ell, tc)?;
                worst = worst.max((fd_i - di).norm() / di.norm()).max((fd_k - dk).norm() / dk.norm());
            }
        }
        for &z in &[c(-4.0, 0.5), c(-1.0, 0.0), c(0.5, 1.5), c(3.0, -2.0), c(6.0, 0.0)] {
            let (ai, bi) = airy(z)?;
            let (ap, bp) = airy(z + h)?;
            let (am, bm) = airy(z - h)?;
            let fa = (ap.value - am.value) / (2.0 * h);
            let fb = (bp.value - bm.value) / (2.0 * h);
            worst = worst
                .max((fa - ai.derivative).norm() / ai.derivative.norm())
                .max((fb - bi.derivative).norm() / bi.derivative.norm());
            // Ai″ = z Ai
            let fa2 = (ap.derivative - am.derivative) / (2.0 * h);
            worst = worst.max((fa2 - z * ai.value).norm() / (z * ai.value).norm());
        }
        Ok((worst, "Bessel l<=10 and Airy derivatives vs central differences".into()))
    })();
    collect("recurrences", 1e-6, r)
}

/// Closed-form `μ_ℓ` against the surface-kernel projection, `ℓ ≤ 5`.
pub fn mu_oracle() -> Check {
    let r = (|| {
        let mut worst: f64 = 0.0;
        for ell in 0..=5 {
            for &e in &[-0.25, -1.0, -4.0] {
                for &a in &[0.5, 1.0, 2.0] {
                    let closed = mu_ell(ell, e, a)?;
                    let quad = mu_ell_surface(ell, e, a)?;
                    worst = worst.max((closed - quad).abs() / quad.abs());
                }
            }
        }
        Ok((worst, "l<=5, E in {-0.25,-1,-4}, a in {0.5,1,2}".into()))
    })();
    collect("mu_oracle", 1e-8, r)
}

/// Tridiagonal solve, `sub[i]` couples rows `i` and `i−1`.
fn thomas(sub: &[Complex64], diag: &[Complex64], sup: &[Complex64], rhs: &[Complex64]) -> Vec<Complex64> {
    let n = diag.len();
    let mut cp = vec![Complex64::new(0.0, 0.0); n];
    let mut dp = vec![Complex64::new(0.0, 0.0); n];
    cp[0] = sup[0] / diag[0];
    dp[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - sub[i] * cp[i - 1];
        cp[i] = if i + 1 < n { sup[i] / m } else { Complex64::new(0.0, 0.0) };
        dp[i] = (rhs[i] - sub[i] * dp[i - 1]) / m;
    }
    for i in (0..n - 1).rev() {
        dp[i] = dp[i] - cp[i] * dp[i + 1];
    }
    dp
}

/// `G(x, 0; i)` at `F = 1` against a finite-difference boundary-value
/// solve on `[−40, 40]`: Dirichlet at `+40`, outgoing log-derivative
/// `−ik + 1/(4k²)`, `k = √(z − x)`, at `−40`.
pub fn green_pin() -> Check {
    let r = (|| {
        let z = c(0.0, 1.0);
        let h = 0.0025;
        let (lo, hi): (f64, f64) = (-40.0, 40.0);
        let n = ((hi - lo) / h).round() as usize + 1;
        let x = |i: usize| lo + h * i as f64;
        let h2 = h * h;
        let mut sub = vec![c(-1.0 / h2, 0.0); n];
        let mut sup = vec![c(-1.0 / h2, 0.0); n];
        let mut diag: Vec<Complex64> = (0..n).map(|i| c(2.0 / h2 + x(i), 0.0) - z).collect();
        let k = (z - lo).sqrt();
        let beta = -Complex64::i() * k + 1.0 / (k * k * 4.0);
        // ghost node u₋₁ = u₁ − 2hβu₀
        diag[0] = (beta * h + 1.0) * (2.0 / h2) + x(0) - z;
        sup[0] = c(-2.0 / h2, 0.0);
        sub[0] = c(0.0, 0.0);
        let last = n - 1;
        diag[last] = c(1.0, 0.0);
        sub[last] = c(0.0, 0.0);
        let mut rhs = vec![c(0.0, 0.0); n];
        let i0 = ((0.0 - lo) / h).round() as usize;
        rhs[i0] = c(1.0 / h, 0.0);
        let u = thomas(&sub, &diag, &sup, &rhs);
        let mut worst: f64 = 0.0;
        for &xp in &[-2.0, -1.0, 1.0, 2.0] {
            let i = ((xp - lo) / h).round() as usize;
            let g = stark_green_1d(xp, 0.0, z, 1.0)?;
            worst = worst.max((u[i] - g).norm() / g.norm());
        }
        Ok((worst, format!("z = i, F = 1, y = 0, h = {h}, x in {{-2,-1,1,2}}")))
    })();
    collect("green_pin", 1e-4, r)
}

/// The rotated-contour 1D propagator integral reproduces the Airy Green's
/// function, pinning the cubic Stark phase.
pub fn propagator_phase() -> Check {
    let r = (|| {
        let z = c(-1.0, 0.5);
        let q = ContourQuadrature::default();
        let mut worst: f64 = 0.0;
        for &theta in &[0.3, 0.6] {
            for &(x, y) in &[(0.3, -0.2), (1.5, 0.0), (-2.0, 1.0)] {
                let g = resolvent_1d_from_time(x, y, z, 1.0, theta, &q)?;
                let a = stark_green_1d(x, y, z, 1.0)?;
                worst = worst.max((g - a).norm() / a.norm());
            }
        }
        Ok((worst, "z = -1+0.5i, F = 1, theta in {0.3, 0.6}".into()))
    })();
    collect("propagator_phase", 1e-6, r)
}

/// Time-integral `μ_ℓ` and the zero-field Weyl matrix against the closed
/// form, `ℓ ≤ 8`, `z ∈ {−1, −0.25, −1 + 0.5i}`.
pub fn zero_field_reduction() -> Check {
    let r = (|| {
        let q = ContourQuadrature::default();
        let mut worst: f64 = 0.0;
        for &z in &[c(-1.0, 0.0), c(-0.25, 0.0), c(-1.0, 0.5)] {
            let p = ShellParams::zero_field(1.0, -2.0)?;
            let w = weyl_matrix(z, 0.5, &p, 8, &q)?.dense();
            for ell in 0..=8usize {
                let mu = mu_ell_complex(ell, z, 1.0)?;
                let t = zero_field_from_time(ell, z, 1.0, 0.5, &q)?;
                worst = worst.max((t - mu).norm());
                for m in -(ell as i64)..=(ell as i64) {
                    let i = crate::weyl3d::WeylMatrix::index(ell, m);
                    worst = worst.max((w[(i, i)] - mu).norm());
                }
            }
            for i in 0..w.nrows() {
                for j in 0..w.ncols() {
                    if i != j {
                        worst = worst.max(w[(i, j)].norm());
                    }
                }
            }
        }
        Ok((worst, "max-norm, L_max = 8, a = 1, theta = 0.5".into()))
    })();
    collect("zero_field_reduction", 1e-6, r)
}

/// Every check, in a fixed order.
pub fn run_all() -> Vec<Check> {
    vec![
        bessel_wronskian(),
        airy_wronskian(),
        airy_wronskian_conditioned(),
        recurrences(),
        mu_oracle(),
        green_pin(),
        propagator_phase(),
        zero_field_reduction(),
    ]
}
