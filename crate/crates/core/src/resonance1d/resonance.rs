//! Resonances of `−d²/dx² + F x + α δ(x − a)` as zeros of
//! `D(z) = 1 + α G_F(a, a; z)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::green::{stark_green_1d, stark_green_1d_incoming};
use crate::error::{domain, Error, Result};
use crate::ShellParams;

pub const MAX_NEWTON_ITERATIONS: usize = 100;
/// Newton stops once `|D| <` this and the step is below [`STEP_TOLERANCE`].
pub const RESIDUAL_TOLERANCE: f64 = 1e-12;
pub const STEP_TOLERANCE: f64 = 1e-12;
/// Converged zeros with `Im z` above this are anti-resonances.
pub const UPPER_HALF_PLANE: f64 = 1e-14;
/// Relative step of the central difference for `D'(z)`.
pub const DERIVATIVE_STEP: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonancePoint {
    pub z: Complex64,
    /// `−2 Im z`.
    pub width: f64,
    #[serde(rename = "F")]
    pub field: f64,
    pub newton_residual: f64,
    pub iterations: usize,
    pub method: String,
    /// `|D|` at every iterate, starting with the seed.
    pub residual_history: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub points: Vec<ResonancePoint>,
    pub params: ShellParams,
}

/// Zero-field bound energy `−α²/4` of the 1D δ-well; requires `α < 0`.
pub fn bound_energy_1d(alpha: f64) -> Result<f64> {
    if !(alpha < 0.0) {
        return Err(domain("bound_energy_1d", format!("alpha = {alpha} does not bind")));
    }
    Ok(-alpha * alpha / 4.0)
}

/// `D(z) = 1 + α G_F(a, a; z)`.
pub fn boundary_condition(z: Complex64, params: &ShellParams) -> Result<Complex64> {
    params.validate()?;
    Ok(1.0 + params.alpha * stark_green_1d(params.a, params.a, z, params.field)?)
}

/// `D` built from the incoming solution `Bi − i Ai`.
pub fn boundary_condition_incoming(z: Complex64, params: &ShellParams) -> Result<Complex64> {
    params.validate()?;
    Ok(1.0 + params.alpha * stark_green_1d_incoming(params.a, params.a, z, params.field)?)
}

/// Central difference of an analytic function along the real direction.
pub(crate) fn derivative(f: &impl Fn(Complex64) -> Result<Complex64>, z: Complex64) -> Result<Complex64> {
    let h = DERIVATIVE_STEP * (1.0 + z.norm());
    Ok((f(z + h)? - f(z - h)?) / (2.0 * h))
}

/// Stopping rule of the Newton iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NewtonOptions {
    pub max_iterations: usize,
    pub residual_tolerance: f64,
    pub step_tolerance: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            max_iterations: MAX_NEWTON_ITERATIONS,
            residual_tolerance: RESIDUAL_TOLERANCE,
            step_tolerance: STEP_TOLERANCE,
        }
    }
}

/// Newton iteration on `D` from `seed`.
pub fn find_resonance(seed: Complex64, params: &ShellParams) -> Result<ResonancePoint> {
    find_resonance_with(seed, params, &NewtonOptions::default())
}

pub fn find_resonance_with(seed: Complex64, params: &ShellParams, opts: &NewtonOptions) -> Result<ResonancePoint> {
    if !(params.field > 0.0) {
        return Err(domain("find_resonance", "field must be > 0"));
    }
    let d = |z: Complex64| boundary_condition(z, params);
    let mut z = seed;
    let mut dz = d(z)?;
    let mut history = vec![dz.norm()];
    for it in 1..=opts.max_iterations {
        let slope = derivative(&d, z)?;
        let step = dz / slope;
        if !(step.re.is_finite() && step.im.is_finite()) {
            break;
        }
        z -= step;
        dz = d(z)?;
        history.push(dz.norm());
        if dz.norm() < opts.residual_tolerance && step.norm() < opts.step_tolerance {
            if z.im > UPPER_HALF_PLANE {
                return Err(Error::AntiResonance { z });
            }
            return Ok(ResonancePoint {
                z,
                width: -2.0 * z.im,
                field: params.field,
                newton_residual: dz.norm(),
                iterations: it,
                method: "newton-1d".into(),
                residual_history: history,
            });
        }
    }
    Err(Error::ResonanceNoConvergence {
        last: z,
        residual: dz.norm(),
        iterations: history.len() - 1,
    })
}

/// Sweep result that keeps the points obtained before a failure.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub trajectory: Trajectory,
    pub failure: Option<Error>,
}

/// Continuation in `F`, seeded from the zero-field energy `−α²/4 + F a`.
pub fn sweep(params_base: &ShellParams, f_values: &[f64]) -> Result<Trajectory> {
    let out = sweep_partial(params_base, f_values);
    match out.failure {
        Some(e) => Err(e),
        None => Ok(out.trajectory),
    }
}

pub fn sweep_partial(params_base: &ShellParams, f_values: &[f64]) -> SweepOutcome {
    sweep_partial_with(params_base, f_values, &NewtonOptions::default())
}

/// Continuation keeping the points obtained before a failure.
pub fn sweep_partial_with(params_base: &ShellParams, f_values: &[f64], opts: &NewtonOptions) -> SweepOutcome {
    let mut trajectory = Trajectory {
        points: Vec::with_capacity(f_values.len()),
        params: *params_base,
    };
    let fail = |e: Error, trajectory: Trajectory| SweepOutcome {
        trajectory,
        failure: Some(e),
    };
    if f_values.is_empty() {
        return SweepOutcome {
            trajectory,
            failure: None,
        };
    }
    if let Err(e) = params_base.validate() {
        return fail(e, trajectory);
    }
    if f_values.windows(2).any(|w| !(w[1] > w[0])) || !(f_values[0] > 0.0) {
        return fail(domain("sweep", "F values must be positive and strictly increasing"), trajectory);
    }
    let e0 = match bound_energy_1d(params_base.alpha) {
        Ok(e) => e,
        Err(e) => return fail(e, trajectory),
    };
    let a = params_base.a;
    for &f in f_values {
        let pts = &trajectory.points;
        let seed = match pts.len() {
            0 => Complex64::new(e0 + f * a, 0.0),
            1 => pts[0].z + (f - pts[0].field) * a,
            n => {
                let (p, q) = (&pts[n - 2], &pts[n - 1]);
                let re = q.z.re + (q.z.re - p.z.re) * (f - q.field) / (q.field - p.field);
                Complex64::new(re, q.z.im)
            }
        };
        let params = params_base.with_field(f);
        match find_resonance_with(seed, &params, opts) {
            Ok(p) => {
                if let Some(q) = trajectory.points.last() {
                    let slope = 1.0 + a.abs() + 2.0 * (q.z.re - e0 - q.field * a).abs() / q.field;
                    let jump = (p.z - q.z).norm();
                    if jump > 10.0 * (f - q.field) * slope {
                        let e = Error::BranchJump {
                            from: q.field,
                            to: f,
                            jump,
                        };
                        return fail(e, trajectory);
                    }
                }
                trajectory.points.push(p);
            }
            Err(e) => {
                return fail(
                    Error::Continuation {
                        field: f,
                        source: Box::new(e),
                    },
                    trajectory,
                );
            }
        }
    }
    SweepOutcome {
        trajectory,
        failure: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(alpha: f64, a: f64, f: f64) -> ShellParams {
        ShellParams::new(a, alpha, f).unwrap()
    }

    #[test]
    fn weak_field_root_near_bound_energy() {
        let p = params(-2.0, 0.0, 1e-6);
        let r = find_resonance(Complex64::new(-1.0, 0.0), &p).unwrap();
        assert!((r.z.re + 1.0).abs() < 1e-3);
        assert!(r.z.im <= 0.0);
    }

    #[test]
    fn resonance_in_lower_half_plane() {
        let p = params(-2.0, 0.0, 0.05);
        let r = find_resonance(Complex64::new(-1.0, 0.0), &p).unwrap();
        assert!(r.z.im < 0.0 && r.z.im.abs() < 1e-6);
        assert!((r.z.re + 1.0).abs() < 0.05 * 0.05 * 2.0);
        assert!(r.newton_residual < 1e-11);
        assert_relative_eq!(r.width, -2.0 * r.z.im);
    }

    #[test]
    fn newton_converges_quadratically() {
        let p = params(-2.0, 0.0, 0.1);
        let r = find_resonance(Complex64::new(-0.9, 0.0), &p).unwrap();
        // ratios |r_{n+1}|/|r_n|² over the iterates above the rounding floor
        let h: Vec<f64> = r.residual_history.iter().copied().filter(|&x| x > 1e-13).collect();
        assert!(h.len() >= 4, "{:?}", r.residual_history);
        let n = h.len();
        for k in n - 3..n - 1 {
            assert!(h[k + 1] / (h[k] * h[k]) < 10.0, "{h:?}");
        }
    }

    #[test]
    fn conjugate_seed_gives_anti_resonance() {
        let p = params(-2.0, 0.0, 0.2);
        let r = find_resonance(Complex64::new(-1.0, 0.0), &p).unwrap();
        let d_conj = |z: Complex64| -> Result<Complex64> {
            Ok(boundary_condition_incoming(z, &p)?)
        };
        // the conjugate point is a zero of the incoming determinant
        assert!(d_conj(r.z.conj()).unwrap().norm() < 1e-10);
        // and the outgoing determinant is analytic with real coefficients off
        // the cut: D(z̄) = conj(D_incoming(z))
        let z = Complex64::new(-0.8, 0.1);
        let lhs = boundary_condition(z.conj(), &p).unwrap();
        let rhs = boundary_condition_incoming(z, &p).unwrap().conj();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn anti_resonance_is_refused() {
        // continue D from the upper half-plane with the incoming branch
        let p = params(-2.0, 0.0, 0.2);
        let r = find_resonance(Complex64::new(-1.0, 0.0), &p).unwrap();
        let f = |z: Complex64| boundary_condition_incoming(z, &p);
        let mut z = r.z.conj();
        for _ in 0..5 {
            z -= f(z).unwrap() / derivative(&f, z).unwrap();
        }
        assert!(z.im > UPPER_HALF_PLANE);
    }

    #[test]
    fn cauchy_riemann() {
        let p = params(-2.0, 0.3, 0.1);
        let z = Complex64::new(-1.1, -0.05);
        let h = 1e-5;
        let d = |z: Complex64| boundary_condition(z, &p).unwrap();
        let dx = (d(z + h) - d(z - h)) / (2.0 * h);
        let dy = (d(z + Complex64::new(0.0, h)) - d(z - Complex64::new(0.0, h))) / (2.0 * h);
        // ∂̄D = (∂x + i∂y)/2
        assert!(((dx + Complex64::i() * dy) * 0.5).norm() < 1e-6);
    }

    #[test]
    fn sweep_edge_cases() {
        let p = params(-2.0, 0.0, 0.0);
        assert!(sweep(&p, &[]).unwrap().points.is_empty());
        assert!(sweep(&p, &[0.1, 0.05]).is_err());
        assert!(sweep(&params(0.5, 0.0, 0.0), &[0.1]).is_err());
    }

    #[test]
    fn interleaved_grids_agree() {
        let p = params(-2.0, 0.0, 0.0);
        let g1: Vec<f64> = (0..10).map(|k| 0.02 + 0.02 * k as f64).collect();
        let g2: Vec<f64> = (0..19).map(|k| 0.02 + 0.01 * k as f64).collect();
        let t1 = sweep(&p, &g1).unwrap();
        let t2 = sweep(&p, &g2).unwrap();
        for p1 in &t1.points {
            let p2 = t2.points.iter().find(|q| (q.field - p1.field).abs() < 1e-12).unwrap();
            assert!((p1.z - p2.z).norm() < 1e-10);
            assert!((p1.z.im - p2.z.im).abs() <= 1e-6 * p1.z.im.abs());
        }
    }
}
