//! Energy functional and property checks built on trajectories.
//!
//! Every check returns a [`BoundFit`]: the constants of the estimate (`β`, `Q`,
//! `K̂`, `C`) are fitted outputs, and `pass` says whether the fitted bound
//! holds at all samples and meets the stability requirement of the check.

mod bound;
mod dissipation;
pub mod energy;
mod equality;
mod regularity;
mod sign;
mod uniqueness;

pub use bound::{relative_spread, trapezoid, BoundFit, REPORT_SCHEMA_VERSION};
pub use dissipation::{
    dissipative_bound_check, e1_dissipativity, smoothing_check, smoothing_refinement, velocity_state_norm_sq,
    window_integral,
};
pub use energy::{dissipation_rates, energy, EnergyLedger, LedgerRow};
pub use equality::{
    default_energy_tolerance, energy_equality_residual, equilibrium_residual, lyapunov_monotonicity, mean_mode_energy,
};
pub use regularity::{
    extra_regularity_check, interpolation_check, interpolation_norm, regularity_rhs_base, VelocityHistory,
};
pub use sign::mollified_sign_check;
pub use uniqueness::difference_growth;

/// `∫_t^{t+1}‖u‖²_{H^{3/2}_Δ}` of a stored trajectory.
pub fn extra_regularity_norm(rec: &crate::dynamics::TrajectoryRecord, t: f64) -> crate::Result<f64> {
    window_integral(rec, t, t + 1.0, 1.5)
}
