//! Green's function of `−d²/dx² + F x` on the line.
//!
//! With `ξ(x) = F^{1/3}(x − z/F)` the homogeneous equation becomes Airy's
//! equation. `Ai` is the solution decaying as `x → +∞` and
//! `Ci = Bi + i Ai` the outgoing one as `x → −∞`; their Wronskian is `−1/π`,
//! so `G = (π / F^{1/3}) Ci(ξ<) Ai(ξ>)` has `∂ₓG(y⁺) − ∂ₓG(y⁻) = −1`.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::specfun::airy::{ai_scaled, ci_scaled, ScaledPair, MAX_ARGUMENT};

/// Largest `|ξ|` accepted by the exponent-carrying evaluation.
const MAX_XI: f64 = 1e3 * MAX_ARGUMENT;

fn check_field(func: &'static str, field: f64) -> Result<()> {
    if !(field > 0.0 && field.is_finite()) {
        return Err(domain(func, format!("field F = {field} must be > 0")));
    }
    Ok(())
}

pub(crate) fn xi(x: f64, z: Complex64, field: f64) -> Complex64 {
    (Complex64::new(x, 0.0) - z / field) * field.cbrt()
}

fn check_xi(func: &'static str, v: Complex64) -> Result<()> {
    if !(v.re.is_finite() && v.im.is_finite()) || v.norm() > MAX_XI {
        return Err(domain(func, format!("Airy argument {v} out of range")));
    }
    Ok(())
}

fn finite(func: &'static str, v: Complex64, z: Complex64) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow { func, z })
    }
}

/// `G_F(x, y; z)` with outgoing behaviour at `x → −∞`.
pub fn stark_green_1d(x: f64, y: f64, z: Complex64, field: f64) -> Result<Complex64> {
    check_field("stark_green_1d", field)?;
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    let (xl, xh) = (xi(lo, z, field), xi(hi, z, field));
    check_xi("stark_green_1d", xl)?;
    check_xi("stark_green_1d", xh)?;
    let prod = ci_scaled(xl).value.mul(ai_scaled(xh).value);
    finite("stark_green_1d", prod.value() * (std::f64::consts::PI / field.cbrt()), z)
}

/// Same construction with the incoming solution `Bi − i Ai`.
pub fn stark_green_1d_incoming(x: f64, y: f64, z: Complex64, field: f64) -> Result<Complex64> {
    check_field("stark_green_1d_incoming", field)?;
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    let (xl, xh) = (xi(lo, z, field), xi(hi, z, field));
    check_xi("stark_green_1d_incoming", xl)?;
    check_xi("stark_green_1d_incoming", xh)?;
    // Bi − i Ai = conj(Ci(conj ξ))
    let prod = ci_scaled(xl.conj()).value.conj().mul(ai_scaled(xh).value);
    finite("stark_green_1d_incoming", prod.value() * (std::f64::consts::PI / field.cbrt()), z)
}

/// Free kernel `e^{−κ|x−y|}/(2κ)`, `κ = √(−z)` with `Re κ > 0`.
pub fn free_green_1d(x: f64, y: f64, z: Complex64) -> Result<Complex64> {
    let kappa = (-z).sqrt();
    if kappa.re <= 0.0 {
        return Err(domain("free_green_1d", format!("z = {z} lies on the spectrum")));
    }
    Ok((-kappa * (x - y).abs()).exp() / (kappa * 2.0))
}

/// Stark kernel for `F > 0`, free kernel for `F = 0`.
pub fn green_1d(x: f64, y: f64, z: Complex64, field: f64) -> Result<Complex64> {
    if field == 0.0 {
        free_green_1d(x, y, z)
    } else {
        stark_green_1d(x, y, z, field)
    }
}

/// Exponent-carrying `Ai` and `Ci` at `ξ(x)`, shared by grid routines.
pub(crate) fn airy_columns(x: f64, z: Complex64, field: f64) -> Result<(ScaledPair, ScaledPair)> {
    let v = xi(x, z, field);
    check_xi("airy_columns", v)?;
    Ok((ai_scaled(v), ci_scaled(v)))
}
