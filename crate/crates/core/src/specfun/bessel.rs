//! Modified spherical Bessel functions of integer order.
//!
//! Normalization: `i₀(t) = sinh t / t`, `k₀(t) = e^{-t} / t` (no π/2 factor
//! in `k`). With this choice `i_ℓ' k_ℓ − i_ℓ k_ℓ' = +1/t²` and
//! `μ₀ = a²κ i₀(κa) k₀(κa) = (1 − e^{−2κa}) / (2κ)`.
//!
//! Evaluation regimes for `i_ℓ` (all computed in the scaled form
//! `e^{−t} i_ℓ(t)`, `Re t ≥ 0`):
//!
//! * `|t| < SERIES_RADIUS`: ascending power series,
//! * `|t| > ℓ(ℓ+1)`: the terminating exponential sum (cancellation free),
//! * otherwise: Miller downward recurrence normalized on `i₀` or `i₁`.
//!
//! `k_ℓ` is always computed by upward recurrence, which is stable.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

/// Largest order accepted by the scalar entry points.
pub const MAX_ORDER: usize = 64;

/// Below this modulus `i_ℓ` is summed from its power series.
pub const SERIES_RADIUS: f64 = 1.0;

/// Largest order accepted by the sequence routines used internally.
const MAX_SEQ_ORDER: usize = 400;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn check_args(func: &'static str, ell: usize, t: Complex64) -> Result<()> {
    if ell > MAX_ORDER {
        return Err(Error::UnstableOrder {
            func,
            ell,
            max: MAX_ORDER,
        });
    }
    if !(t.re.is_finite() && t.im.is_finite()) {
        return Err(domain(func, "argument is not finite"));
    }
    if t == ZERO {
        return Err(domain(func, "t = 0"));
    }
    Ok(())
}

/// `i_ℓ(t)`.
pub fn sph_i(ell: usize, t: Complex64) -> Result<Complex64> {
    check_args("sph_i", ell, t)?;
    // i_ℓ(−t) = (−1)^ℓ i_ℓ(t)
    let (s, sign) = if t.re < 0.0 { (-t, parity(ell)) } else { (t, 1.0) };
    let scaled = sph_i_scaled_seq(ell, s)?[ell];
    let v = scaled * s.exp() * sign;
    finite("sph_i", v, t)
}

/// `k_ℓ(t)`; defined for `Re t > 0` or non-real `t`.
pub fn sph_k(ell: usize, t: Complex64) -> Result<Complex64> {
    check_args("sph_k", ell, t)?;
    if t.im == 0.0 && t.re < 0.0 {
        return Err(domain("sph_k", "branch cut: t on the negative real axis"));
    }
    let v = sph_k_seq(ell, t)[ell];
    finite("sph_k", v, t)
}

/// `i_ℓ'(t)` from `i_ℓ' = i_{ℓ+1} + ℓ/t · i_ℓ`.
pub fn sph_i_prime(ell: usize, t: Complex64) -> Result<Complex64> {
    check_args("sph_i_prime", ell, t)?;
    let (s, sign) = if t.re < 0.0 { (-t, parity(ell + 1)) } else { (t, 1.0) };
    let seq = sph_i_scaled_seq(ell + 1, s)?;
    let d = (seq[ell + 1] + seq[ell] * (ell as f64) / s) * s.exp() * sign;
    finite("sph_i_prime", d, t)
}

/// `k_ℓ'(t)` from `k_ℓ' = −k_{ℓ+1} + ℓ/t · k_ℓ`.
pub fn sph_k_prime(ell: usize, t: Complex64) -> Result<Complex64> {
    check_args("sph_k_prime", ell, t)?;
    if t.im == 0.0 && t.re < 0.0 {
        return Err(domain("sph_k_prime", "branch cut: t on the negative real axis"));
    }
    let seq = sph_k_seq(ell + 1, t);
    finite("sph_k_prime", -seq[ell + 1] + seq[ell] * (ell as f64) / t, t)
}

/// `i_ℓ(t) k_ℓ(t)` without intermediate overflow for small `|t|` and large
/// `ℓ`. Requires `Re t ≥ 0`.
pub fn sph_ik_product(ell: usize, t: Complex64) -> Result<Complex64> {
    check_args("sph_ik_product", ell, t)?;
    if t.re < 0.0 {
        return Err(domain("sph_ik_product", "requires Re t >= 0"));
    }
    if t.norm() < SERIES_RADIUS {
        // i_ℓ = t^ℓ ĩ_ℓ and k_ℓ = t^{−ℓ−1} k̃_ℓ
        let i_red = series_reduced(ell, t);
        let t2 = t * t;
        let mut k_prev = (-t).exp();
        let mut k_cur = (-t).exp() * (t + 1.0);
        if ell == 0 {
            k_cur = k_prev;
        } else {
            for l in 1..ell {
                let next = t2 * k_prev + k_cur * (2 * l + 1) as f64;
                k_prev = k_cur;
                k_cur = next;
            }
        }
        return finite("sph_ik_product", i_red * k_cur / t, t);
    }
    let i_s = sph_i_scaled_seq(ell, t)?[ell];
    let k_s = sph_k_seq(ell, t)[ell] * t.exp();
    finite("sph_ik_product", i_s * k_s, t)
}

fn parity(ell: usize) -> f64 {
    if ell % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn finite(func: &'static str, v: Complex64, z: Complex64) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow { func, z })
    }
}

/// `ĩ_ℓ(t) = t^{−ℓ} i_ℓ(t)` from the ascending series.
fn series_reduced(ell: usize, t: Complex64) -> Complex64 {
    // 1/(2ℓ+1)!!
    let mut lead = 1.0;
    for j in 0..=ell {
        lead /= (2 * j + 1) as f64;
    }
    let x = t * t * 0.5;
    let mut term = ONE;
    let mut sum = ONE;
    for k in 1..200 {
        term = term * x / (k as f64 * (2 * (ell + k) + 1) as f64);
        sum += term;
        if term.norm() <= 1e-18 * sum.norm() {
            break;
        }
    }
    sum * lead
}

/// `e^{−t} i_ℓ(t)` for `ℓ = 0..=lmax`, `Re t ≥ 0`, `t ≠ 0`.
pub fn sph_i_scaled_seq(lmax: usize, t: Complex64) -> Result<Vec<Complex64>> {
    if lmax > MAX_SEQ_ORDER {
        return Err(Error::UnstableOrder {
            func: "sph_i_scaled_seq",
            ell: lmax,
            max: MAX_SEQ_ORDER,
        });
    }
    if t.re < 0.0 || t == ZERO {
        return Err(domain("sph_i_scaled_seq", "requires Re t >= 0 and t != 0"));
    }
    let r = t.norm();
    let lf = lmax as f64;
    if r < SERIES_RADIUS {
        let e = (-t).exp();
        let mut out = Vec::with_capacity(lmax + 1);
        let mut tp = ONE;
        for l in 0..=lmax {
            out.push(series_reduced(l, t) * tp * e);
            tp *= t;
        }
        return Ok(out);
    }
    if r > lf * (lf + 1.0) {
        return Ok((0..=lmax).map(|l| terminating_scaled(l, t)).collect());
    }
    Ok(miller_scaled(lmax, t))
}

/// Exact finite form
/// `e^{−t} i_ℓ(t) = [Σ_k (−1)^k a_k / t^k + (−1)^{ℓ+1} e^{−2t} Σ_k a_k / t^k] / (2t)`,
/// `a_k = (ℓ+k)! / (2^k k! (ℓ−k)!)`.
fn terminating_scaled(ell: usize, t: Complex64) -> Complex64 {
    let inv = ONE / t;
    let mut a = 1.0;
    let mut p = ONE;
    let mut alt = ONE;
    let mut plain = ONE;
    for k in 1..=ell {
        a *= ((ell + k) * (ell - k + 1)) as f64 / (2 * k) as f64;
        p *= inv;
        let term = p * a;
        plain += term;
        alt += if k % 2 == 0 { term } else { -term };
    }
    let tail = (-2.0 * t).exp() * plain * parity(ell + 1);
    (alt + tail) / (2.0 * t)
}

fn miller_scaled(lmax: usize, t: Complex64) -> Vec<Complex64> {
    let start = lmax + t.norm().ceil() as usize + 60;
    let mut vals = vec![ZERO; start + 2];
    vals[start] = ONE;
    for l in (1..=start).rev() {
        let v = vals[l + 1] + vals[l] * ((2 * l + 1) as f64) / t;
        vals[l - 1] = v;
        // complex division squares the modulus, so keep values well
        // inside the double range
        if v.norm() > 1e100 {
            for x in vals[l - 1..].iter_mut() {
                *x *= 1e-100;
            }
        }
    }
    let e2 = (-2.0 * t).exp();
    let i0 = (1.0 - e2) / (2.0 * t);
    let i1 = ((1.0 + e2) * t * 0.5 - (1.0 - e2) * 0.5) / (t * t);
    let scale = if i0.norm() >= i1.norm() {
        i0 / vals[0]
    } else {
        i1 / vals[1]
    };
    vals.truncate(lmax + 1);
    vals.iter().map(|v| v * scale).collect()
}

/// `k_ℓ(t)` for `ℓ = 0..=lmax` by upward recurrence
/// `k_{ℓ+1} = k_{ℓ−1} + (2ℓ+1)/t · k_ℓ`.
pub fn sph_k_seq(lmax: usize, t: Complex64) -> Vec<Complex64> {
    let e = (-t).exp() / t;
    let mut out = Vec::with_capacity(lmax + 2);
    out.push(e);
    out.push(e * (t + 1.0) / t);
    for l in 1..lmax {
        let next = out[l - 1] + out[l] * ((2 * l + 1) as f64) / t;
        out.push(next);
    }
    out.truncate(lmax + 1);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn i0_matches_sinh_over_t() {
        let v = sph_i(0, c(1.0)).unwrap();
        assert!(rel(v, c(1.0f64.sinh())) < 1e-15);
        assert!((v.re - 1.1752011936438014).abs() < 1e-15);
    }

    #[test]
    fn i1_small_argument_leading_term() {
        for t in [1e-3, 1e-6, 1e-9] {
            let v = sph_i(1, c(t)).unwrap();
            assert!((v.re / (t / 3.0) - 1.0).abs() < 1e-5, "t={t}");
        }
    }

    #[test]
    fn k_closed_forms() {
        let e = (-1.0f64).exp();
        assert!((sph_k(0, c(1.0)).unwrap().re - 0.36787944117144233).abs() < 1e-15);
        assert!((sph_k(1, c(1.0)).unwrap().re - 0.7357588823428847).abs() < 1e-15);
        assert!((sph_k(1, c(1.0)).unwrap().re - 2.0 * e).abs() < 1e-15);
    }

    #[test]
    fn wronskian_at_two_is_one_quarter() {
        let t = c(2.0);
        let w = sph_i_prime(0, t).unwrap() * sph_k(0, t).unwrap()
            - sph_i(0, t).unwrap() * sph_k_prime(0, t).unwrap();
        assert!((w.re - 0.25).abs() < 1e-15 && w.im.abs() < 1e-16);
    }

    #[test]
    fn regimes_agree_in_overlap() {
        // series vs Miller just across SERIES_RADIUS, Miller vs terminating
        // sum just across |t| = ℓ(ℓ+1)
        for l in 0..=10usize {
            let below = sph_i_scaled_seq(l, c(0.999_999)).unwrap()[l];
            let above = miller_scaled(l, c(0.999_999))[l];
            assert!(rel(below, above) < 1e-12, "l={l}");
            let tt = c((l * (l + 1)) as f64 + 0.5);
            let m = miller_scaled(l, tt)[l];
            let f = terminating_scaled(l, tt);
            assert!(rel(m, f) < 1e-12, "l={l}: {m} vs {f}");
        }
        let z = Complex64::new(0.7, 0.69);
        let below = series_reduced(4, z) * z.powu(4) * (-z).exp();
        assert!(rel(below, miller_scaled(4, z)[4]) < 1e-12);
    }

    #[test]
    fn errors() {
        assert!(matches!(sph_i(0, ZERO), Err(Error::Domain { .. })));
        assert!(matches!(sph_k(0, ZERO), Err(Error::Domain { .. })));
        assert!(matches!(sph_i(65, c(1.0)), Err(Error::UnstableOrder { .. })));
        assert!(matches!(sph_k(0, c(-1.0)), Err(Error::Domain { .. })));
    }

    #[test]
    fn reflection_for_negative_real_part() {
        let z = Complex64::new(-1.3, 0.4);
        for l in 0..5 {
            let a = sph_i(l, z).unwrap();
            let b = sph_i(l, -z).unwrap() * parity(l);
            assert!(rel(a, b) < 1e-15);
        }
    }

    #[test]
    fn ik_product_small_t_large_order() {
        // i_ℓ k_ℓ → 1/((2ℓ+1) t) as t → 0
        let t = c(1e-10);
        let p = sph_ik_product(64, t).unwrap();
        assert!((p.re * 129.0 * 1e-10 - 1.0).abs() < 1e-8);
        let t = c(0.8);
        let p = sph_ik_product(3, t).unwrap();
        let q = sph_i(3, t).unwrap() * sph_k(3, t).unwrap();
        assert!(rel(p, q) < 1e-13);
    }

    #[test]
    fn conjugate_symmetry() {
        let z = Complex64::new(2.5, 1.7);
        for l in 0..8 {
            assert!(rel(sph_i(l, z.conj()).unwrap(), sph_i(l, z).unwrap().conj()) < 1e-15);
            assert!(rel(sph_k(l, z.conj()).unwrap(), sph_k(l, z).unwrap().conj()) < 1e-15);
        }
    }
}
