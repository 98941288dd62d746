use std::f64::consts::PI;

/// `∫_{S²} Y_{ℓ0} Y_{10} Y_{ℓ'0} dΩ`; vanishes unless `|ℓ − ℓ'| = 1`.
pub fn gaunt_10(ell: usize, ellp: usize) -> f64 {
    (3.0 / (4.0 * PI)).sqrt() * cos_theta_coupling(ell, ellp, 0)
}

/// `⟨Y_{ℓm}, cos θ Y_{ℓ'm}⟩` over the unit sphere, for `|m| ≤ min(ℓ, ℓ')`.
pub fn cos_theta_coupling(ell: usize, ellp: usize, m: i64) -> f64 {
    let lo = ell.min(ellp);
    if ell.abs_diff(ellp) != 1 || (m.unsigned_abs() as usize) > lo {
        return 0.0;
    }
    let l = lo as f64;
    let m = m as f64;
    (((l + 1.0) * (l + 1.0) - m * m) / ((2.0 * l + 1.0) * (2.0 * l + 3.0))).sqrt()
}
