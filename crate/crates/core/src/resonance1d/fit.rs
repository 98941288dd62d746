//! Least-squares fit of `log Γ = log C + b log F − c/F`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::resonance::Trajectory;
use crate::error::{Error, Result};

/// Widths below this are refused rather than fitted.
pub const WIDTH_FLOOR: f64 = 1e-280;
pub const MIN_POINTS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WidthFit {
    pub c: f64,
    pub b: f64,
    #[serde(rename = "logC")]
    pub log_c: f64,
    pub rms_residual: f64,
    #[serde(rename = "F_window")]
    pub f_window: (f64, f64),
    pub n_points: usize,
    /// `(4/3)|E₀|^{3/2}`.
    pub c_expected: f64,
}

/// Fit over all points of a trajectory.
pub fn width_fit(traj: &Trajectory, e0: f64) -> Result<WidthFit> {
    let pts: Vec<(f64, f64)> = traj.points.iter().map(|p| (p.field, p.width)).collect();
    width_fit_points(&pts, None, e0)
}

/// Fit of `(F, Γ)` pairs; `weights` multiply the squared residuals of
/// `log Γ` (uniform when `None`).
pub fn width_fit_points(points: &[(f64, f64)], weights: Option<&[f64]>, e0: f64) -> Result<WidthFit> {
    if points.len() < MIN_POINTS {
        return Err(Error::Fit {
            detail: format!("{} points given, at least {MIN_POINTS} required", points.len()),
        });
    }
    if let Some(w) = weights {
        if w.len() != points.len() || w.iter().any(|&x| !(x > 0.0)) {
            return Err(Error::Fit {
                detail: "weights must be positive, one per point".into(),
            });
        }
    }
    if let Some(&(f, g)) = points.iter().find(|p| !(p.1 > WIDTH_FLOOR) || !(p.0 > 0.0)) {
        return Err(Error::Fit {
            detail: format!("width {g:e} at F = {f} is below {WIDTH_FLOOR:e}; use a larger-F window"),
        });
    }
    let n = points.len();
    let sw: Vec<f64> = (0..n).map(|i| weights.map_or(1.0, |w| w[i].sqrt())).collect();
    let design = DMatrix::from_fn(n, 3, |i, j| {
        let f = points[i].0;
        sw[i] * [1.0, f.ln(), -1.0 / f][j]
    });
    let rhs = DVector::from_fn(n, |i, _| sw[i] * points[i].1.ln());
    let svd = design.clone().svd(true, true);
    let sol = svd.solve(&rhs, 1e-14).map_err(|e| Error::Fit { detail: e.into() })?;
    let resid = &design * &sol - &rhs;
    let rms = (resid.norm_squared() / n as f64).sqrt();
    let (lo, hi) = points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), p| (l.min(p.0), h.max(p.0)));
    Ok(WidthFit {
        c: sol[2],
        b: sol[1],
        log_c: sol[0],
        rms_residual: rms,
        f_window: (lo, hi),
        n_points: n,
        c_expected: 4.0 / 3.0 * (-e0).abs().powf(1.5),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn recovers_synthetic_model() {
        let pts: Vec<(f64, f64)> = (0..10)
            .map(|k| {
                let f = 0.05 + 0.02 * k as f64;
                (f, 2.0 * f.sqrt() * (-5.0 / f).exp())
            })
            .collect();
        let fit = width_fit_points(&pts, None, -1.0).unwrap();
        assert_relative_eq!(fit.c, 5.0, max_relative = 1e-8);
        assert_relative_eq!(fit.b, 0.5, max_relative = 1e-8);
        assert_relative_eq!(fit.log_c, 2f64.ln(), max_relative = 1e-8);
        assert!(fit.rms_residual < 1e-10);
        let w: Vec<f64> = (0..10).map(|k| 1.0 + k as f64).collect();
        let fw = width_fit_points(&pts, Some(&w), -1.0).unwrap();
        assert_relative_eq!(fw.c, 5.0, max_relative = 1e-8);
    }

    #[test]
    fn refuses_short_or_underflowing_data() {
        let pts: Vec<(f64, f64)> = (1..6).map(|k| (k as f64, 1.0)).collect();
        assert!(width_fit_points(&pts, None, -1.0).is_err());
        let mut pts: Vec<(f64, f64)> = (1..8).map(|k| (k as f64, 1.0)).collect();
        pts[2].1 = 1e-300;
        let err = width_fit_points(&pts, None, -1.0).unwrap_err();
        assert!(err.to_string().contains("larger-F"));
    }
}
