//! Deterministic Navier-Stokes flow on the rotating sphere in
//! streamfunction-vorticity form, with time-periodic forcing.

pub mod forcing;
pub mod solver;
pub mod trilinear;

pub use forcing::{ForcingSpec, ForcingTerm, TemporalProfile};
pub use solver::{FlowState, SolverParams, Stepper, TrajectoryRecord};
pub use trilinear::{coriolis_inner, stokes_power, trilinear, trilinear_plan, zonal_trilinear_checks};

/// Deterministic absorbing radius D(f) = ||f||_sup / (nu sqrt(lambda_1)),
/// the t -> infinity limit of the energy contraction bound (lambda_1 = 2).
pub fn absorbing_radius(forcing_sup_norm: f64, nu: f64) -> f64 {
    forcing_sup_norm / (nu * 2f64.sqrt())
}
