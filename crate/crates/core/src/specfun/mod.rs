//! Special functions of complex argument and angular coupling coefficients.

pub mod airy;
pub mod bessel;
pub mod gaunt;
pub mod legendre;

pub use airy::{airy, airy_incoming, airy_outgoing, AiryPair};
pub use bessel::{sph_i, sph_i_prime, sph_ik_product, sph_k, sph_k_prime};
pub use gaunt::{cos_theta_coupling, gaunt_10};
pub use legendre::normalized_legendre;
