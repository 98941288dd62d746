//! Zeros of `z ↦ det₃(I + α M(z))` and determinant scans.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::contour::ContourQuadrature;
use super::det::det_p;
use super::matrix::weyl_matrix;
use crate::error::{Error, Result};
use crate::resonance1d::ResonancePoint;
use crate::ShellParams;

pub const DET_TOLERANCE: f64 = 1e-9;
pub const STEP_TOLERANCE: f64 = 1e-9;
/// Largest allowed root shift between `L_max` and `L_max + 2`.
pub const TRUNCATION_TOLERANCE: f64 = 1e-4;
const MAX_SECANT_ITERATIONS: usize = 60;

/// `det_p` as a function of `z`.
pub fn determinant_at(z: Complex64, theta: f64, params: &ShellParams, l_max: usize, quad: &ContourQuadrature, p: usize) -> Result<Complex64> {
    let w = weyl_matrix(z, theta, params, l_max, quad)?;
    Ok(det_p(&w, params.alpha, p)?.value)
}

/// Secant iteration without the truncation cross-check.
pub fn secant_root(
    seed: Complex64,
    theta: f64,
    params: &ShellParams,
    l_max: usize,
    quad: &ContourQuadrature,
    p: usize,
) -> Result<ResonancePoint> {
    let f = |z: Complex64| determinant_at(z, theta, params, l_max, quad, p);
    let mut z0 = seed;
    let mut z1 = seed + 1e-4 * (1.0 + seed.norm());
    let mut f0 = f(z0)?;
    let mut f1 = f(z1)?;
    let mut history = vec![f0.norm(), f1.norm()];
    for it in 1..=MAX_SECANT_ITERATIONS {
        let denom = f1 - f0;
        if denom.norm() == 0.0 {
            break;
        }
        let step = f1 * (z1 - z0) / denom;
        if !(step.re.is_finite() && step.im.is_finite()) {
            break;
        }
        z0 = z1;
        f0 = f1;
        z1 -= step;
        f1 = f(z1)?;
        history.push(f1.norm());
        if f1.norm() < DET_TOLERANCE && step.norm() < STEP_TOLERANCE {
            return Ok(ResonancePoint {
                z: z1,
                width: -2.0 * z1.im,
                field: params.field,
                newton_residual: f1.norm(),
                iterations: it,
                method: format!("secant-det{p}(L_max={l_max},theta={theta})"),
                residual_history: history,
            });
        }
    }
    Err(Error::ResonanceNoConvergence {
        last: z1,
        residual: f1.norm(),
        iterations: history.len(),
    })
}

/// Root of the regularized determinant near `seed`, confirmed at
/// `L_max + 2`.
pub fn find_resonance_3d(seed: Complex64, theta: f64, params: &ShellParams, l_max: usize) -> Result<ResonancePoint> {
    find_resonance_3d_with(seed, theta, params, l_max, &ContourQuadrature::default(), 3)
}

pub fn find_resonance_3d_with(
    seed: Complex64,
    theta: f64,
    params: &ShellParams,
    l_max: usize,
    quad: &ContourQuadrature,
    p: usize,
) -> Result<ResonancePoint> {
    let coarse = secant_root(seed, theta, params, l_max, quad, p)?;
    let fine = secant_root(coarse.z, theta, params, l_max + 2, quad, p)?;
    if (fine.z - coarse.z).norm() > TRUNCATION_TOLERANCE {
        return Err(Error::Truncation {
            coarse: coarse.z,
            fine: fine.z,
            l_coarse: l_max,
            l_fine: l_max + 2,
        });
    }
    Ok(coarse)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetSample {
    pub z: Complex64,
    pub det: Complex64,
}

/// `det_p` on the grid `re.0..=re.1` × `im.0..=im.1` with `re.2 × im.2`
/// points, row-major in `Im z`.
pub fn det_scan(
    params: &ShellParams,
    theta: f64,
    l_max: usize,
    quad: &ContourQuadrature,
    p: usize,
    re: (f64, f64, usize),
    im: (f64, f64, usize),
) -> Result<Vec<DetSample>> {
    let axis = |(lo, hi, n): (f64, f64, usize)| -> Vec<f64> {
        if n <= 1 {
            vec![lo]
        } else {
            (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
        }
    };
    let points: Vec<Complex64> = axis(im)
        .into_iter()
        .flat_map(|y| axis(re).into_iter().map(move |x| Complex64::new(x, y)))
        .collect();
    points
        .par_iter()
        .map(|&z| {
            Ok(DetSample {
                z,
                det: determinant_at(z, theta, params, l_max, quad, p)?,
            })
        })
        .collect()
}
