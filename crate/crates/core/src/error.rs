use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    #[error("{func}: order {ell} exceeds the supported range (max {max})")]
    UnstableOrder {
        func: &'static str,
        ell: usize,
        max: usize,
    },

    #[error("{func}: result overflows double precision at z = {z}")]
    Overflow { func: &'static str, z: Complex64 },

    #[error("root search did not converge after {iterations} iterations (last bracket/iterate: {detail})")]
    NoConvergence { iterations: usize, detail: String },

    #[error("Newton iteration for the resonance did not converge: last iterate z = {last}, |D| = {residual:e}, {iterations} iterations")]
    ResonanceNoConvergence {
        last: Complex64,
        residual: f64,
        iterations: usize,
    },

    #[error("converged to z = {z} in the upper half-plane (anti-resonance, not a resonance)")]
    AntiResonance { z: Complex64 },

    #[error("quadrature did not converge: {detail}")]
    Quadrature { detail: String },

    #[error("accidental degeneracy: |1 + alpha*mu_1(E0)| = {value:e} is below {threshold:e}")]
    AccidentalDegeneracy { value: f64, threshold: f64 },

    #[error("near pole of the Krein correction: |1 + alpha*G(a,a;z)| = {value:e}")]
    NearPole { value: f64 },

    #[error("continuation at F = {field} failed: {source}")]
    Continuation {
        field: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("continuation jumped branches between F = {from} and F = {to} (|dz| = {jump:e})")]
    BranchJump { from: f64, to: f64, jump: f64 },

    #[error("width fit: {detail}")]
    Fit { detail: String },

    #[error("contour configuration: {detail}")]
    Contour { detail: String },

    #[error("eigensolver failed: {detail}")]
    Eigen { detail: String },

    #[error("truncation instability: root moved from {coarse} (L_max = {l_coarse}) to {fine} (L_max = {l_fine})")]
    Truncation {
        coarse: Complex64,
        fine: Complex64,
        l_coarse: usize,
        l_fine: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        func,
        detail: detail.into(),
    }
}
