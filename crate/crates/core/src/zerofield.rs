//! Zero-field partial-wave analysis of the δ-shell operator.
//!
//! The free Weyl function is diagonal in spherical harmonics with
//! eigenvalues `μ_ℓ(E) = a² κ i_ℓ(κa) k_ℓ(κa)`, `κ = √(−E)`. Bound states in
//! channel `ℓ` are the negative roots of `1 + α μ_ℓ(E) = 0`; each has
//! multiplicity `2ℓ + 1`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quadrature::GaussLegendre;
use crate::specfun::bessel::MAX_ORDER;
use crate::specfun::sph_ik_product;
use crate::ShellParams;

/// Bound states with `|E|` below this are reported with `shallow = true`.
pub const SHALLOW_ENERGY: f64 = 1e-10;

/// Relative step of the Richardson-extrapolated derivative of `μ_ℓ`, `ℓ ≥ 1`.
pub const MU_PRIME_REL_STEP: f64 = 1e-5;

const MAX_ITERATIONS: usize = 200;
const NEWTON_BRACKET: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartialWaveBoundState {
    pub ell: usize,
    pub energy: f64,
    pub kappa: f64,
    pub multiplicity: usize,
    /// `|1 + α μ_ℓ(E)|` at the returned energy.
    pub residual: f64,
    pub shallow: bool,
}

fn check_energy(func: &'static str, e: f64, a: f64) -> Result<()> {
    if !(e.is_finite() && a.is_finite()) {
        return Err(domain(func, "arguments must be finite"));
    }
    if e >= 0.0 {
        return Err(domain(func, format!("energy E = {e} must be < 0")));
    }
    if a <= 0.0 {
        return Err(domain(func, format!("radius a = {a} must be > 0")));
    }
    Ok(())
}

/// `μ_ℓ(E)` for real `E < 0`.
pub fn mu_ell(ell: usize, e: f64, a: f64) -> Result<f64> {
    check_energy("mu_ell", e, a)?;
    let kappa = (-e).sqrt();
    if ell == 0 {
        return Ok(mu0_kappa(kappa, a));
    }
    let p = sph_ik_product(ell, Complex64::new(kappa * a, 0.0))?;
    Ok(a * a * kappa * p.re)
}

fn mu0_kappa(kappa: f64, a: f64) -> f64 {
    let t = kappa * a;
    // (1 − e^{−2t}) / (2κ), written to stay accurate as t → 0
    -(-2.0 * t).exp_m1() / (2.0 * kappa)
}

/// `μ_ℓ(z)` continued to complex `z` with `κ = √(−z)` on the principal
/// branch (`Re κ > 0` away from the positive real axis).
pub fn mu_ell_complex(ell: usize, z: Complex64, a: f64) -> Result<Complex64> {
    if a <= 0.0 {
        return Err(domain("mu_ell_complex", "radius must be > 0"));
    }
    let kappa = (-z).sqrt();
    if kappa.norm() == 0.0 {
        return Err(domain("mu_ell_complex", "z = 0"));
    }
    let p = sph_ik_product(ell, kappa * a)?;
    Ok(kappa * p * (a * a))
}

/// `dμ_ℓ/dE` at real `E < 0`.
///
/// `ℓ = 0` uses `[1 − (1 + 2κa) e^{−2κa}] / (4κ³)`; higher orders use a
/// central difference with one Richardson step.
pub fn mu_prime(ell: usize, e: f64, a: f64) -> Result<f64> {
    check_energy("mu_prime", e, a)?;
    if ell == 0 {
        let kappa = (-e).sqrt();
        let t = kappa * a;
        let bracket = 1.0 - (1.0 + 2.0 * t) * (-2.0 * t).exp();
        return Ok(bracket / (4.0 * kappa.powi(3)));
    }
    let h = MU_PRIME_REL_STEP * e.abs();
    // keep E ± h negative
    let central = |h: f64| -> Result<f64> {
        Ok((mu_ell(ell, e + h, a)? - mu_ell(ell, e - h, a)?) / (2.0 * h))
    };
    let d1 = central(h)?;
    let d2 = central(0.5 * h)?;
    Ok((4.0 * d2 - d1) / 3.0)
}

/// `α_c(ℓ) = −1 / lim_{E→0⁻} μ_ℓ(E) = −(2ℓ + 1)/a`; channel `ℓ` binds iff
/// `α < α_c(ℓ)`.
pub fn critical_strength(ell: usize, a: f64) -> f64 {
    -((2 * ell + 1) as f64) / a
}

/// `1 + α μ_ℓ(E)`.
pub fn secular(ell: usize, e: f64, params: &ShellParams) -> Result<f64> {
    Ok(1.0 + params.alpha * mu_ell(ell, e, params.a)?)
}

/// All negative bound states with `ℓ ≤ ell_max`, sorted by energy. The field
/// in `params` is ignored.
pub fn find_bound_states(params: &ShellParams, ell_max: usize) -> Result<Vec<PartialWaveBoundState>> {
    params.require_shell()?;
    if ell_max > MAX_ORDER {
        return Err(Error::UnstableOrder {
            func: "find_bound_states",
            ell: ell_max,
            max: MAX_ORDER,
        });
    }
    let channels: Vec<usize> = (0..=ell_max)
        .filter(|&l| params.alpha < critical_strength(l, params.a))
        .collect();
    let mut states = channels
        .par_iter()
        .map(|&l| channel_root(l, params))
        .collect::<Result<Vec<_>>>()?;
    states.sort_by(|x, y| x.energy.total_cmp(&y.energy).then(x.ell.cmp(&y.ell)));
    Ok(states)
}

fn channel_root(ell: usize, params: &ShellParams) -> Result<PartialWaveBoundState> {
    let (a, alpha) = (params.a, params.alpha);
    // f(κ) = 1 + α μ_ℓ(−κ²) increases from 1 + αa/(2ℓ+1) < 0 at κ = 0 to
    // at least 1/2 at κ = |α|.
    let f = |kappa: f64| -> Result<f64> {
        if kappa == 0.0 {
            Ok(1.0 + alpha * a / (2 * ell + 1) as f64)
        } else {
            secular(ell, -kappa * kappa, params)
        }
    };
    let (mut lo, mut hi) = (0.0_f64, alpha.abs());
    let f_hi = f(hi)?;
    if f(lo)? >= 0.0 || f_hi <= 0.0 {
        return Err(Error::NoConvergence {
            iterations: 0,
            detail: format!("channel {ell}: no sign change on kappa in [0, {hi}]"),
        });
    }
    let mut kappa = 0.5 * (lo + hi);
    for it in 0..MAX_ITERATIONS {
        let fk = f(kappa)?;
        if fk < 0.0 {
            lo = kappa;
        } else {
            hi = kappa;
        }
        let width = hi - lo;
        if fk.abs() < 1e-14 || width <= 4.0 * f64::EPSILON * hi {
            let residual = fk.abs();
            if residual > 1e-10 {
                return Err(Error::NoConvergence {
                    iterations: it + 1,
                    detail: format!(
                        "channel {ell}: kappa in [{lo:e}, {hi:e}], residual {residual:e}"
                    ),
                });
            }
            let energy = -kappa * kappa;
            return Ok(PartialWaveBoundState {
                ell,
                energy,
                kappa,
                multiplicity: 2 * ell + 1,
                residual,
                shallow: energy.abs() < SHALLOW_ENERGY,
            });
        }
        let mut next = 0.5 * (lo + hi);
        if width < NEWTON_BRACKET * hi.max(1.0) && kappa > 0.0 {
            // dμ/dκ = −2κ dμ/dE
            let df = alpha * (-2.0 * kappa) * mu_prime(ell, -kappa * kappa, a)?;
            let newton = kappa - fk / df;
            if df != 0.0 && newton > lo && newton < hi {
                next = newton;
            }
        }
        if next == kappa {
            next = 0.5 * (lo + hi);
        }
        kappa = next;
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITERATIONS,
        detail: format!("channel {ell}: kappa bracket [{lo:e}, {hi:e}]"),
    })
}

/// Wall strength whose s-wave bound state sits at `E = −κ²`:
/// `α = −κ(1 + coth κa)`.
pub fn s_wave_strength(kappa: f64, a: f64) -> f64 {
    -kappa * (1.0 + 1.0 / (kappa * a).tanh())
}

/// `μ_ℓ` by Funk–Hecke projection of the free kernel `e^{−κ|x−y|}/(4π|x−y|)`
/// restricted to the sphere, independent of the Bessel closed form.
/// `s = √(1 − cos γ)` removes the coincidence singularity.
pub fn mu_ell_surface(ell: usize, e: f64, a: f64) -> Result<f64> {
    check_energy("mu_ell_surface", e, a)?;
    let kappa = (-e).sqrt();
    let rule = GaussLegendre::new(80);
    let c = a * std::f64::consts::SQRT_2;
    let lim = std::f64::consts::SQRT_2;
    let n = 8;
    let sum: f64 = (0..n)
        .map(|p| {
            let (lo, hi) = (lim * p as f64 / n as f64, lim * (p + 1) as f64 / n as f64);
            rule.integrate(lo, hi, |s| (-kappa * c * s).exp() * legendre_p(ell, 1.0 - s * s))
        })
        .sum();
    Ok(sum * a / std::f64::consts::SQRT_2)
}

fn legendre_p(ell: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if ell == 0 {
        return 1.0;
    }
    for l in 1..ell {
        let p2 = ((2 * l + 1) as f64 * x * p1 - l as f64 * p0) / (l + 1) as f64;
        p0 = p1;
        p1 = p2;
    }
    p1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{sph_i, sph_i_prime, sph_k, sph_k_prime};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn mu_prime_analytic(ell: usize, e: f64, a: f64) -> f64 {
        let kappa = (-e).sqrt();
        let t = Complex64::new(kappa * a, 0.0);
        let (i, k) = (sph_i(ell, t).unwrap().re, sph_k(ell, t).unwrap().re);
        let (ip, kp) = (sph_i_prime(ell, t).unwrap().re, sph_k_prime(ell, t).unwrap().re);
        let dmu_dkappa = a * a * i * k + a.powi(3) * kappa * (ip * k + i * kp);
        -dmu_dkappa / (2.0 * kappa)
    }

    #[test]
    fn mu0_closed_form() {
        assert_relative_eq!(mu_ell(0, -1.0, 1.0).unwrap(), 0.4323323583816936, max_relative = 1e-14);
        for &(e, a) in &[(-0.25, 0.5), (-4.0, 2.0), (-1e-6, 1.0)] {
            let k: f64 = (-e as f64).sqrt();
            let closed = (1.0 - (-2.0 * k * a).exp()) / (2.0 * k);
            assert_relative_eq!(mu_ell(0, e, a).unwrap(), closed, max_relative = 1e-12);
        }
    }

    #[test]
    fn mu_matches_surface_quadrature() {
        for ell in 0..=5 {
            for &e in &[-0.25, -1.0, -4.0] {
                for &a in &[0.5, 1.0, 2.0] {
                    let closed = mu_ell(ell, e, a).unwrap();
                    let quad = mu_ell_surface(ell, e, a).unwrap();
                    assert_relative_eq!(closed, quad, max_relative = 1e-8);
                }
            }
        }
        // a²κ i₁(1) k₁(1) = e^{−1} · 2e^{−1}
        assert_relative_eq!(mu_ell(1, -1.0, 1.0).unwrap(), 2.0 * (-2.0f64).exp(), max_relative = 1e-13);
    }

    #[test]
    fn mu_decays_deep_in_the_gap() {
        for ell in 0..4 {
            assert!(mu_ell(ell, -1e4, 1.0).unwrap() < 0.006);
        }
    }

    #[test]
    fn complex_mu_agrees_on_negative_axis() {
        for ell in 0..6 {
            let r = mu_ell(ell, -2.0, 1.3).unwrap();
            let c = mu_ell_complex(ell, Complex64::new(-2.0, 0.0), 1.3).unwrap();
            assert_relative_eq!(c.re, r, max_relative = 1e-14);
            assert!(c.im.abs() < 1e-15);
        }
    }

    #[test]
    fn mu_prime_values() {
        let v = mu_prime(0, -1.0, 1.0).unwrap();
        assert_relative_eq!(v, (1.0 - 3.0 * (-2.0f64).exp()) / 4.0, max_relative = 1e-14);
        assert_relative_eq!(v, 0.1484985375725405, max_relative = 1e-12);
        let h = 1e-6;
        let fd = (mu_ell(0, -1.0 + h, 1.0).unwrap() - mu_ell(0, -1.0 - h, 1.0).unwrap()) / (2.0 * h);
        assert!((fd - v).abs() < 1e-8);
        for ell in 1..5 {
            let d = mu_prime(ell, -1.0, 1.0).unwrap();
            assert_relative_eq!(d, mu_prime_analytic(ell, -1.0, 1.0), max_relative = 1e-8);
        }
        // two step sizes agree
        let e = -1.0;
        let rich = |h: f64| {
            let c = |h: f64| (mu_ell(1, e + h, 1.0).unwrap() - mu_ell(1, e - h, 1.0).unwrap()) / (2.0 * h);
            (4.0 * c(0.5 * h) - c(h)) / 3.0
        };
        assert!((rich(1e-5) - rich(2e-5)).abs() < 1e-7);
    }

    #[test]
    fn critical_strength_values() {
        assert_eq!(critical_strength(0, 1.0), -1.0);
        assert_eq!(critical_strength(0, 2.0), -0.5);
        assert!(critical_strength(1, 1.0) < critical_strength(0, 1.0));
        for ell in 0..6 {
            let lim = mu_ell(ell, -1e-12, 1.7).unwrap();
            assert_relative_eq!(-1.0 / lim, critical_strength(ell, 1.7), max_relative = 1e-5);
        }
    }

    #[test]
    fn s_wave_at_unit_kappa() {
        let alpha = s_wave_strength(1.0, 1.0);
        assert_relative_eq!(alpha, -2.3130352854993315, max_relative = 1e-12);
        let p = ShellParams::zero_field(1.0, alpha).unwrap();
        let states = find_bound_states(&p, 10).unwrap();
        assert_eq!(states.len(), 1);
        assert_eq!(states[0].ell, 0);
        assert_eq!(states[0].multiplicity, 1);
        assert_relative_eq!(states[0].energy, -1.0, max_relative = 1e-12);
    }

    #[test]
    fn weak_wall_binds_nothing() {
        let p = ShellParams::zero_field(1.0, -0.5).unwrap();
        assert!(find_bound_states(&p, 10).unwrap().is_empty());
        let p = ShellParams::zero_field(1.0, 3.0).unwrap();
        assert!(find_bound_states(&p, 10).unwrap().is_empty());
    }

    #[test]
    fn shallow_state_is_flagged() {
        let p = ShellParams::zero_field(1.0, -1.0 - 1e-7).unwrap();
        let s = find_bound_states(&p, 0).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s[0].shallow);
        assert!(s[0].energy < 0.0);
    }

    /// Outward solution regular at the origin and inward decaying solution
    /// of `−u'' + ℓ(ℓ+1)/r² u = E u`, integrated by RK4; returns the jump of
    /// the logarithmic derivative at `a` minus `α`.
    fn shooting_mismatch(ell: usize, e: f64, a: f64, alpha: f64) -> f64 {
        let l2 = (ell * (ell + 1)) as f64;
        let rhs = |r: f64, y: [f64; 2]| [y[1], (l2 / (r * r) - e) * y[0]];
        let rk4 = |mut r: f64, mut y: [f64; 2], r_end: f64, n: usize| {
            let h = (r_end - r) / n as f64;
            for _ in 0..n {
                let k1 = rhs(r, y);
                let k2 = rhs(r + h / 2.0, [y[0] + h / 2.0 * k1[0], y[1] + h / 2.0 * k1[1]]);
                let k3 = rhs(r + h / 2.0, [y[0] + h / 2.0 * k2[0], y[1] + h / 2.0 * k2[1]]);
                let k4 = rhs(r + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
                y[0] += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
                y[1] += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
                let s = y[0].abs().max(y[1].abs());
                y = [y[0] / s, y[1] / s];
                r += h;
            }
            y
        };
        let kappa = (-e).sqrt();
        let r0 = 1e-3 * a;
        let c = -e / (2.0 * (2 * ell + 3) as f64);
        // u = r^{ℓ+1}(1 + κ² r²/(2(2ℓ+3)))
        let u0 = [r0 * (1.0 - c * r0 * r0), (ell + 1) as f64 - (ell + 3) as f64 * c * r0 * r0];
        let inner = rk4(r0, u0, a, 20_000);
        let r_far = a + 30.0 / kappa;
        let y_far = [1.0, -kappa - (ell as f64) / r_far];
        let outer = rk4(r_far, y_far, a, 40_000);
        outer[1] / outer[0] - inner[1] / inner[0] - alpha
    }

    #[test]
    fn bound_states_match_radial_shooting() {
        let p = ShellParams::zero_field(1.0, -10.0).unwrap();
        let states = find_bound_states(&p, 20).unwrap();
        let expected: usize = (0..=20).filter(|&l| -10.0 < critical_strength(l, 1.0)).count();
        assert_eq!(states.len(), expected);
        assert_eq!(expected, 5);
        for s in &states {
            let (mut lo, mut hi) = (s.energy * 1.001, s.energy * 0.999);
            if s.shallow {
                continue;
            }
            let g = |e: f64| shooting_mismatch(s.ell, e, 1.0, -10.0);
            let glo = g(lo);
            assert!(glo * g(hi) < 0.0, "no bracket for l = {}", s.ell);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if g(mid) * glo > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let e_shoot = 0.5 * (lo + hi);
            assert!((e_shoot - s.energy).abs() < 1e-8 * s.energy.abs().max(1.0), "l={}: {} vs {}", s.ell, e_shoot, s.energy);
        }
    }

    #[test]
    fn rejects_invalid_input() {
        assert!(mu_ell(0, 0.0, 1.0).is_err());
        assert!(mu_ell(0, 1.0, 1.0).is_err());
        assert!(mu_prime(2, 0.5, 1.0).is_err());
        let p = ShellParams { a: 0.0, alpha: -2.0, field: 0.0 };
        assert!(find_bound_states(&p, 3).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn residual_and_ordering(a in 0.3f64..3.0, alpha in -30.0f64..-0.1) {
            let p = ShellParams::zero_field(a, alpha).unwrap();
            let states = find_bound_states(&p, 40).unwrap();
            let count = (0..=40).filter(|&l| alpha < critical_strength(l, a)).count();
            prop_assert_eq!(states.len(), count);
            for w in states.windows(2) {
                prop_assert!(w[0].energy <= w[1].energy);
            }
            for s in &states {
                prop_assert!(s.residual < 1e-10);
                prop_assert!((s.energy + s.kappa * s.kappa).abs() <= 1e-15 * s.energy.abs());
            }
        }

        #[test]
        fn scaling_covariance(a in 0.5f64..2.0, alpha in -12.0f64..-1.5, li in 0usize..3) {
            let lambda = [0.5, 2.0, 3.0][li];
            let p = ShellParams::zero_field(a, alpha).unwrap();
            let q = ShellParams::zero_field(lambda * a, alpha / lambda).unwrap();
            let s = find_bound_states(&p, 20).unwrap();
            let t = find_bound_states(&q, 20).unwrap();
            prop_assert_eq!(s.len(), t.len());
            for (x, y) in s.iter().zip(&t) {
                if x.shallow { continue; }
                prop_assert!((y.energy * lambda * lambda / x.energy - 1.0).abs() < 1e-9);
            }
        }

        #[test]
        fn mu0_prime_positive(t in 1e-3f64..30.0) {
            prop_assert!(mu_prime(0, -1.0, t).unwrap() > 0.0);
        }
    }
}
