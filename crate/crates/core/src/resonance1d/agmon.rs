//! Tunnelling action of the 1D surrogate.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::quadrature::GaussLegendre;

const NODES: usize = 20;

fn check(e0: f64, a: f64, field: f64) -> Result<()> {
    if !(e0 < 0.0 && field > 0.0 && e0.is_finite() && field.is_finite() && a.is_finite()) {
        return Err(domain("agmon_action", "requires E0 < 0 and F > 0"));
    }
    if -e0 / field <= a {
        return Err(domain(
            "agmon_action",
            format!("no barrier: turning point -E0/F = {} <= a = {a}", -e0 / field),
        ));
    }
    Ok(())
}

/// `∫_a^{−E₀/F} √(F s − E₀) ds` by Gauss–Legendre after `u = √(F s − E₀)`,
/// which turns the integrand into `2u²/F` (integrated exactly).
pub fn agmon_action(e0: f64, a: f64, field: f64) -> Result<f64> {
    check(e0, a, field)?;
    let lo = (field * a - e0).sqrt();
    let hi = (-2.0 * e0).sqrt();
    Ok(GaussLegendre::new(NODES).integrate(lo, hi, |u| 2.0 * u * u / field))
}

/// The integral alongside candidate closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgmonReport {
    #[serde(rename = "E0")]
    pub e0: f64,
    pub a: f64,
    #[serde(rename = "F")]
    pub field: f64,
    /// Quadrature of the integral as written.
    pub action: f64,
    /// `(2/(3F)) [(−2E₀)^{3/2} − (F a − E₀)^{3/2}]`.
    pub antiderivative: f64,
    /// `(2/(3F)) (F a − E₀)^{3/2}`.
    pub display_shifted: f64,
    /// `(2/(3F)) |E₀|^{3/2}`.
    pub display_asymptote: f64,
    /// Barrier between the shell and the outer turning point on the downhill
    /// side, `∫_{E₀/F}^{−a} √(F s − E₀) ds = (2/(3F)) (|E₀| − F a)^{3/2}`;
    /// `None` when `F a ≥ |E₀|`.
    pub barrier: Option<f64>,
    pub matches_shifted: bool,
    pub matches_asymptote: bool,
}

pub fn agmon_report(e0: f64, a: f64, field: f64) -> Result<AgmonReport> {
    let action = agmon_action(e0, a, field)?;
    let k = 2.0 / (3.0 * field);
    let antiderivative = k * ((-2.0 * e0).powf(1.5) - (field * a - e0).powf(1.5));
    let display_shifted = k * (field * a - e0).powf(1.5);
    let display_asymptote = k * (-e0).powf(1.5);
    let gap = -e0 - field * a;
    let barrier = (gap > 0.0).then(|| k * gap.powf(1.5));
    let close = |x: f64| ((action - x) / action).abs() < 1e-10;
    Ok(AgmonReport {
        e0,
        a,
        field,
        action,
        antiderivative,
        display_shifted,
        display_asymptote,
        barrier,
        matches_shifted: close(display_shifted),
        matches_asymptote: close(display_asymptote),
    })
}

/// `(F, F·S(F))` for each `F`.
pub fn agmon_limit_table(e0: f64, a: f64, fields: &[f64]) -> Result<Vec<(f64, f64)>> {
    fields
        .iter()
        .map(|&f| Ok((f, f * agmon_action(e0, a, f)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn reference_value() {
        let s = agmon_action(-1.0, 0.0, 0.1).unwrap();
        assert_relative_eq!(s, 2.0 / 0.3 * (2f64.powf(1.5) - 1.0), max_relative = 1e-14);
        assert_relative_eq!(s, 12.189514164974601, max_relative = 1e-12);
        // plain trapezoid on the original variable
        let n = 200_000;
        let h = 10.0 / n as f64;
        let trap: f64 = (0..=n)
            .map(|i| {
                let w = if i == 0 || i == n { 0.5 } else { 1.0 };
                w * h * (0.1 * i as f64 * h + 1.0).sqrt()
            })
            .sum();
        assert_relative_eq!(s, trap, max_relative = 1e-9);
    }

    #[test]
    fn decreasing_in_field() {
        let mut last = f64::INFINITY;
        for k in 1..50 {
            let s = agmon_action(-1.3, 0.4, 0.01 * k as f64).unwrap();
            assert!(s < last);
            last = s;
        }
    }

    #[test]
    fn limit_table_and_displays() {
        let t = agmon_limit_table(-1.0, 0.0, &[1e-2, 1e-3, 1e-4]).unwrap();
        let lim = 2.0 / 3.0 * (2f64.powf(1.5) - 1.0);
        for (_, fs) in &t {
            assert_relative_eq!(*fs, lim, max_relative = 1e-12);
        }
        let r = agmon_report(-1.0, 0.5, 0.1).unwrap();
        assert!(!r.matches_shifted && !r.matches_asymptote);
        assert_relative_eq!(r.action, r.antiderivative, max_relative = 1e-13);
        assert!(r.barrier.unwrap() < r.display_asymptote);
        let r0 = agmon_report(-1.0, 0.0, 0.1).unwrap();
        assert_relative_eq!(r0.barrier.unwrap(), r0.display_asymptote);
    }

    #[test]
    fn no_barrier_is_an_error() {
        assert!(agmon_action(-1.0, 20.0, 0.1).is_err());
        assert!(agmon_action(1.0, 0.0, 0.1).is_err());
        assert!(agmon_action(-1.0, 0.0, 0.0).is_err());
    }
}
