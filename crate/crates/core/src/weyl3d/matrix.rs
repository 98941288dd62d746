//! Boundary Weyl matrix on the sphere in the `Y_ℓm` basis.
//!
//! Entries are `⟨Y_ℓm, M Y_ℓ'm'⟩` on the unit sphere with the operator
//! acting through `a² dω'`, so at zero field `M = diag(μ_ℓ)`. The field
//! correction is
//!
//! ```text
//! ΔM = i ∫ e^{izt} a² (4πit)^{−3/2} [e^{−iF²t³/12} E_b K E_b − K] dt,
//! ```
//!
//! with `K = diag(4π e^{−c} i_L(c))`, `c = −ia²/(2t)` (the harmonic
//! eigenvalues of `e^{ia²|ω−ω'|²/(4t)}`), and `E_b` the matrix of
//! multiplication by `e^{b cos θ}`, `b = −iFta/2`, which is diagonal in `m`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::contour::{time_nodes, ContourQuadrature};
use crate::error::{domain, Result};
use crate::quadrature::GaussLegendre;
use crate::specfun::bessel::sph_i_scaled_seq;
use crate::specfun::normalized_legendre;
use crate::zerofield::mu_ell_complex;
use crate::ShellParams;

pub const MAX_L: usize = 30;

const I: Complex64 = Complex64::new(0.0, 1.0);
const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

/// One azimuthal block, rows and columns `ℓ = m..=L_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct MBlock {
    pub m: usize,
    pub entries: DMatrix<Complex64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeylMatrix {
    /// Blocks for `m = 0..=L_max`; the block of `−m` equals that of `m`.
    pub blocks: Vec<MBlock>,
    pub z: Complex64,
    pub theta: f64,
    pub field: f64,
    pub a: f64,
    pub l_max: usize,
    pub quad: ContourQuadrature,
    pub time_nodes: usize,
    /// `|ΔM_{L,L}| / |μ_L|` at `L = L_max` in the `m = 0` block.
    pub tail_correction: f64,
}

impl WeylMatrix {
    /// Row/column of `(ℓ, m)` in the dense ordering `ℓ² + ℓ + m`.
    pub fn index(ell: usize, m: i64) -> usize {
        ((ell * ell + ell) as i64 + m) as usize
    }

    /// Dense `(L_max+1)² × (L_max+1)²` matrix.
    pub fn dense(&self) -> DMatrix<Complex64> {
        let n = (self.l_max + 1).pow(2);
        let mut out = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
        for blk in &self.blocks {
            let m = blk.m as i64;
            for (i, l) in (blk.m..=self.l_max).enumerate() {
                for (j, lp) in (blk.m..=self.l_max).enumerate() {
                    for s in if m == 0 { vec![0] } else { vec![m, -m] } {
                        out[(Self::index(l, s), Self::index(lp, s))] = blk.entries[(i, j)];
                    }
                }
            }
        }
        out
    }

    /// Number of copies of each block (`1` for `m = 0`, `2` otherwise).
    pub fn multiplicity(m: usize) -> usize {
        if m == 0 {
            1
        } else {
            2
        }
    }
}

struct Angular {
    /// `(x_q, w_q)` in `cos θ`.
    nodes: Vec<(f64, f64)>,
    /// `legendre[m][q][ℓ]`, `ℓ ≤ l_in`.
    legendre: Vec<Vec<Vec<f64>>>,
}

impl Angular {
    fn new(l_max: usize, l_in: usize, n: usize) -> Self {
        let rule = GaussLegendre::new(n);
        let nodes: Vec<(f64, f64)> = rule.on_interval(-1.0, 1.0).collect();
        let legendre = (0..=l_max)
            .map(|m| nodes.iter().map(|&(x, _)| normalized_legendre(l_in, m, x)).collect())
            .collect();
        Self { nodes, legendre }
    }
}

fn check(z: Complex64, params: &ShellParams, l_max: usize) -> Result<()> {
    params.require_shell()?;
    if l_max > MAX_L {
        return Err(domain("weyl_matrix", format!("L_max = {l_max} exceeds {MAX_L}")));
    }
    if !(z.re.is_finite() && z.im.is_finite()) || z.norm() == 0.0 {
        return Err(domain("weyl_matrix", "z must be finite and nonzero"));
    }
    Ok(())
}

/// `diag(μ_ℓ(z))` blocks, `κ = √(−z)`.
fn zero_field_blocks(z: Complex64, a: f64, l_max: usize) -> Result<Vec<MBlock>> {
    let mu: Vec<Complex64> = (0..=l_max).map(|l| mu_ell_complex(l, z, a)).collect::<Result<_>>()?;
    Ok((0..=l_max)
        .map(|m| MBlock {
            m,
            entries: DMatrix::from_fn(l_max - m + 1, l_max - m + 1, |i, j| {
                if i == j {
                    mu[m + i]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }),
        })
        .collect())
}

/// Integrand blocks `a²(4πit)^{−3/2}[e^{−iF²t³/12} E_b K E_b − K]` at one `t`.
fn field_integrand(t: Complex64, field: f64, a: f64, l_max: usize, l_in: usize, ang: &Angular) -> Result<Vec<DMatrix<Complex64>>> {
    let c = -I * (a * a) / (t * 2.0);
    let k: Vec<Complex64> = sph_i_scaled_seq(l_in, c)?.into_iter().map(|v| v * FOUR_PI).collect();
    let b = -I * t * (field * a / 2.0);
    let cubic = (-I * t * t * t * (field * field / 12.0)).exp();
    let pre = (I * t * FOUR_PI).powf(-1.5) * (a * a);
    let ew: Vec<Complex64> = ang.nodes.iter().map(|&(x, w)| (b * x).exp() * w).collect();
    let mut out = Vec::with_capacity(l_max + 1);
    for m in 0..=l_max {
        let n_out = l_max - m + 1;
        let n_in = l_in - m + 1;
        let leg = &ang.legendre[m];
        // E[ℓ, L] = Σ_q w_q e^{b x_q} P̄_ℓ^m(x_q) P̄_L^m(x_q)
        let e = DMatrix::from_fn(n_out, n_in, |i, j| {
            let (l, ll) = (m + i, m + j);
            leg.iter().zip(&ew).map(|(p, w)| *w * (p[l] * p[ll])).sum::<Complex64>()
        });
        let ek = DMatrix::from_fn(n_out, n_in, |i, j| e[(i, j)] * k[m + j]);
        let mut blk = ek * e.transpose() * cubic;
        for i in 0..n_out {
            blk[(i, i)] -= k[m + i];
        }
        out.push(blk * pre);
    }
    Ok(out)
}

/// Weyl matrix at `z` with the time contour rotated by `theta`.
pub fn weyl_matrix(z: Complex64, theta: f64, params: &ShellParams, l_max: usize, quad: &ContourQuadrature) -> Result<WeylMatrix> {
    check(z, params, l_max)?;
    let a = params.a;
    let mut blocks = zero_field_blocks(z, a, l_max)?;
    let mut n_nodes = 0;
    let mut tail_correction = 0.0;
    if params.field > 0.0 {
        let nodes = time_nodes(z, theta, quad)?;
        n_nodes = nodes.len();
        let l_in = l_max + quad.l_pad;
        let ang = Angular::new(l_max, l_in, quad.angular_nodes);
        let terms = nodes
            .par_iter()
            .map(|&(t, w)| {
                let f = field_integrand(t, params.field, a, l_max, l_in, &ang)?;
                let s = I * w * (I * z * t).exp();
                Ok(f.into_iter().map(|m| m * s).collect::<Vec<_>>())
            })
            .collect::<Result<Vec<_>>>()?;
        for term in terms {
            for (blk, d) in blocks.iter_mut().zip(term) {
                blk.entries += d;
            }
        }
        let mu_l = mu_ell_complex(l_max, z, a)?;
        let last = blocks[0].entries.nrows() - 1;
        tail_correction = (blocks[0].entries[(last, last)] - mu_l).norm() / mu_l.norm();
    }
    Ok(WeylMatrix {
        blocks,
        z,
        theta,
        field: params.field,
        a,
        l_max,
        quad: *quad,
        time_nodes: n_nodes,
        tail_correction,
    })
}

/// Zero-field `μ_ℓ(z)` from the same time integral without subtraction,
/// `i ∫ e^{izt} a² (4πit)^{−3/2} 4π e^{−c} i_ℓ(c) dt`.
pub fn zero_field_from_time(ell: usize, z: Complex64, a: f64, theta: f64, quad: &ContourQuadrature) -> Result<Complex64> {
    let mut sum = Complex64::new(0.0, 0.0);
    for (t, w) in time_nodes(z, theta, quad)? {
        let c = -I * (a * a) / (t * 2.0);
        let k = sph_i_scaled_seq(ell, c)?[ell] * FOUR_PI;
        sum += w * (I * z * t).exp() * (I * t * FOUR_PI).powf(-1.5) * k * (a * a);
    }
    Ok(I * sum)
}
