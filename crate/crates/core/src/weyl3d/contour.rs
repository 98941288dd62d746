//! Rotated time contour `t = e^{−iθ} u²`, `u ∈ (0, u_max)`.
//!
//! For `H = −Δ + F x₁` and `Im z > 0`,
//! `(H − z)^{−1} = i ∫₀^∞ e^{izt} e^{−itH} dt`. Along the ray the Stark phase
//! `e^{−iF²t³/12}` decays when `sin 3θ > 0` and `e^{izt}` decays when
//! `Im(z e^{−iθ}) > 0`; the rotated integral then continues the resolvent
//! to that part of the lower half-plane. The admissible region is
//! `0 < θ < π/3`, `Im(z e^{−iθ}) > 0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{composite, GaussLegendre};

const GRADING_LEVELS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourQuadrature {
    /// Gauss–Legendre nodes per panel in `u`.
    pub nodes_per_panel: usize,
    /// Panel length in `u`.
    pub panel_width: f64,
    /// The contour is cut where `|e^{izt}|` falls below `e^{−decay}`.
    pub decay: f64,
    /// Extra angular momenta carried inside the field factor.
    pub l_pad: usize,
    /// Gauss–Legendre nodes in `cos θ` for the field factor.
    pub angular_nodes: usize,
}

impl Default for ContourQuadrature {
    fn default() -> Self {
        Self {
            nodes_per_panel: 16,
            panel_width: 0.2,
            decay: 40.0,
            l_pad: 12,
            angular_nodes: 64,
        }
    }
}

impl ContourQuadrature {
    /// Both node densities doubled.
    pub fn refined(&self) -> Self {
        Self {
            panel_width: self.panel_width / 2.0,
            angular_nodes: self.angular_nodes * 2,
            l_pad: self.l_pad + 4,
            ..*self
        }
    }
}

/// Checks the admissible region and returns `Im(z e^{−iθ})`.
pub fn admissible(z: Complex64, theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < std::f64::consts::FRAC_PI_3) {
        return Err(Error::Contour {
            detail: format!("angle {theta} outside (0, pi/3)"),
        });
    }
    let g = (z * Complex64::from_polar(1.0, -theta)).im;
    if !(g > 0.0) {
        return Err(Error::Contour {
            detail: format!("Im(z e^(-i theta)) = {g:e} <= 0 at z = {z}, theta = {theta}: integrand does not decay"),
        });
    }
    Ok(g)
}

/// Points `(t, w)` with `∫₀^∞ f(t) dt ≈ Σ w f(t)` along the ray.
pub fn time_nodes(z: Complex64, theta: f64, q: &ContourQuadrature) -> Result<Vec<(Complex64, Complex64)>> {
    let g = admissible(z, theta)?;
    let u_max = (q.decay / g).sqrt();
    let h = q.panel_width.min(u_max);
    let panels = ((u_max - h) / q.panel_width).ceil().max(1.0) as usize;
    let rule = GaussLegendre::new(q.nodes_per_panel);
    let rot = Complex64::from_polar(1.0, -theta);
    // geometric grading of [0, h] resolves the e^{−d²/t} layer at small |t|
    let mut uw = Vec::new();
    let mut hi = h;
    for _ in 0..GRADING_LEVELS {
        uw.extend(rule.on_interval(hi / 2.0, hi));
        hi /= 2.0;
    }
    uw.extend(rule.on_interval(0.0, hi));
    if u_max > h {
        uw.extend(composite(&rule, h, u_max, panels));
    }
    Ok(uw.into_iter().map(|(u, w)| (rot * (u * u), rot * (2.0 * u * w))).collect())
}
