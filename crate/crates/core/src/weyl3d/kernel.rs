//! Stark propagators `e^{−itH}` for `H = −Δ + F x₁` (3D) and
//! `H = −d²/dx² + F x` (1D).

use num_complex::Complex64;

use super::contour::{time_nodes, ContourQuadrature};
use crate::error::{domain, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn check(t: Complex64, field: f64) -> Result<()> {
    if !(field >= 0.0 && field.is_finite()) {
        return Err(domain("stark_propagator_kernel", "field must be finite and >= 0"));
    }
    if t.norm() == 0.0 || !(t.re.is_finite() && t.im.is_finite()) {
        return Err(domain("stark_propagator_kernel", "t must be finite and nonzero"));
    }
    // (4πit)^{−3/2} is cut along it < 0
    if t.re == 0.0 && t.im > 0.0 {
        return Err(domain("stark_propagator_kernel", "t on the branch cut"));
    }
    Ok(())
}

/// Exponent `i|x−y|²/(4t) − iFt(x₁+y₁)/2 − iF²t³/12` shared by both
/// dimensions.
fn phase(d2: f64, s1: f64, t: Complex64, field: f64) -> Complex64 {
    I * d2 / (t * 4.0) - I * t * (field * s1 / 2.0) - I * t * t * t * (field * field / 12.0)
}

/// `(4πit)^{−3/2} exp(i|x−y|²/(4t) − iFt(x₁+y₁)/2 − iF²t³/12)`.
pub fn stark_propagator_kernel(x: [f64; 3], y: [f64; 3], t: Complex64, field: f64) -> Result<Complex64> {
    check(t, field)?;
    let d2: f64 = (0..3).map(|k| (x[k] - y[k]).powi(2)).sum();
    let pre = (I * t * (4.0 * std::f64::consts::PI)).powf(-1.5);
    Ok(pre * phase(d2, x[0] + y[0], t, field).exp())
}

/// `(4πit)^{−1/2} exp(i(x−y)²/(4t) − iFt(x+y)/2 − iF²t³/12)`.
pub fn stark_propagator_1d(x: f64, y: f64, t: Complex64, field: f64) -> Result<Complex64> {
    check(t, field)?;
    let pre = (I * t * (4.0 * std::f64::consts::PI)).powf(-0.5);
    Ok(pre * phase((x - y).powi(2), x + y, t, field).exp())
}

/// `i ∫ e^{izt} P_t(x, y) dt` for the 1D propagator along the rotated ray.
pub fn resolvent_1d_from_time(x: f64, y: f64, z: Complex64, field: f64, theta: f64, q: &ContourQuadrature) -> Result<Complex64> {
    let mut sum = Complex64::new(0.0, 0.0);
    for (t, w) in time_nodes(z, theta, q)? {
        sum += w * (I * z * t).exp() * stark_propagator_1d(x, y, t, field)?;
    }
    Ok(I * sum)
}
