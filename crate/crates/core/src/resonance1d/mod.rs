//! One-dimensional Stark-δ model `−d²/dx² + F x + α δ(x − a)`.

mod agmon;
mod fit;
mod green;
mod krein;
mod resonance;

pub use agmon::{agmon_action, agmon_limit_table, agmon_report, AgmonReport};
pub use fit::{width_fit, width_fit_points, WidthFit, MIN_POINTS, WIDTH_FLOOR};
pub use green::{free_green_1d, green_1d, stark_green_1d, stark_green_1d_incoming};
pub use krein::{
    apply_operator_1d, direct_solve_1d, free_resolvent_apply, krein_apply_1d, relative_l2, Grid1d, NEAR_POLE,
};
pub use resonance::{
    bound_energy_1d, boundary_condition, boundary_condition_incoming, find_resonance, find_resonance_with, sweep, sweep_partial, sweep_partial_with,
    NewtonOptions, ResonancePoint, SweepOutcome, Trajectory, MAX_NEWTON_ITERATIONS, RESIDUAL_TOLERANCE, STEP_TOLERANCE,
    UPPER_HALF_PLANE,
};
