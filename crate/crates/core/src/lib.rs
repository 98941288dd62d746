//! Bound states, quadratic Stark shifts and Stark resonances of the
//! Schrödinger operator `-Δ + F x₁ + α δ(|x| - a)` in three dimensions,
//! together with an exactly solvable one-dimensional surrogate.
//!
//! Modules, bottom-up:
//!
//! * [`specfun`]: modified spherical Bessel functions, complex Airy
//!   functions, Gaunt coefficients and normalized Legendre functions.
//! * [`zerofield`]: partial-wave Weyl function `μ_ℓ`, its derivative and the
//!   zero-field bound-state enumerator.
//! * [`starkshift`]: second-order Stark coefficient of the s-wave state from
//!   radial-quadrature matrix elements.
//! * [`resonance1d`]: Airy Green's function of the 1D Stark-δ model, Krein
//!   resolvent, resonance continuation in `F` and the width-law fit.
//! * [`validate`]: oracle and identity checks behind the `validate` command.
//! * [`weyl3d`]: boundary Weyl matrix on the sphere from a rotated-contour
//!   time integral of the Stark propagator, regularized determinants and the
//!   3D resonance search.

pub mod error;
pub mod params;
pub mod quadrature;
pub mod resonance1d;
pub mod specfun;
pub mod starkshift;
pub mod validate;
pub mod weyl3d;
pub mod zerofield;

pub use error::{Error, Result};
pub use params::ShellParams;

pub use num_complex::Complex64;
