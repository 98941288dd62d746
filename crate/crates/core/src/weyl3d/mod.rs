//! Boundary Weyl operator of the δ-shell in a field, truncated to
//! spherical harmonics `ℓ ≤ L_max`, its regularized determinant and the
//! resulting resonance search.

mod contour;
mod det;
mod kernel;
mod matrix;
mod search;

pub use contour::{admissible, time_nodes, ContourQuadrature};
pub use det::{det_p, det_p_trace_form, eigenvalues, singular_ratio, DeterminantValue};
pub use kernel::{resolvent_1d_from_time, stark_propagator_1d, stark_propagator_kernel};
pub use matrix::{weyl_matrix, zero_field_from_time, MBlock, WeylMatrix, MAX_L};
pub use search::{
    det_scan, determinant_at, find_resonance_3d, find_resonance_3d_with, secant_root, DetSample, DET_TOLERANCE,
    STEP_TOLERANCE, TRUNCATION_TOLERANCE,
};
