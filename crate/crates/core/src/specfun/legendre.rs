/// Orthonormal associated Legendre functions `P̄_ℓ^m(x)`, `ℓ = 0..=lmax`
/// (entries with `ℓ < m` are zero), normalized so that
/// `∫_{−1}^{1} P̄_ℓ^m P̄_{ℓ'}^m dx = δ_{ℓℓ'}`. Hence
/// `Y_{ℓm}(θ, φ) = P̄_ℓ^m(cos θ) e^{imφ} / √(2π)`. No Condon–Shortley phase.
pub fn normalized_legendre(lmax: usize, m: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; lmax + 1];
    if m > lmax {
        return out;
    }
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut pmm = std::f64::consts::FRAC_1_SQRT_2;
    for k in 1..=m {
        let kf = k as f64;
        pmm *= ((2.0 * kf + 1.0) / (2.0 * kf)).sqrt() * s;
    }
    out[m] = pmm;
    if m == lmax {
        return out;
    }
    let mf = m as f64;
    out[m + 1] = (2.0 * mf + 3.0).sqrt() * x * pmm;
    for l in (m + 2)..=lmax {
        let lf = l as f64;
        let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
        let lm1 = lf - 1.0;
        let b = ((lm1 * lm1 - mf * mf) / (4.0 * lm1 * lm1 - 1.0)).sqrt();
        out[l] = a * (x * out[l - 1] - b * out[l - 2]);
    }
    out
}
