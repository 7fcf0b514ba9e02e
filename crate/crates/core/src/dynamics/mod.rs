//! Time integration of the damped wave system and the discrete semigroup `S(t)`.

pub mod io;
mod params;
pub mod propagator;
mod stepper;
mod trajectory;

pub use params::ModelParams;
pub use propagator::linear_propagator;
pub use stepper::{second_time_derivative, step, Stepper};
pub use trajectory::{evolve, integrate, integrate_ensemble, Diverged, Integrator, IntegratorMeta, TrajectoryRecord, DIVERGENCE_NORM};

use crate::error::{Error, Result};
use crate::state::StatePair;

/// Galerkin truncation: keep modes with `max_i |k_i| ≤ m`.
pub fn galerkin_project(xi: &StatePair, m: i64) -> Result<StatePair> {
    let g = xi.grid();
    let limit = if g.is_torus() { g.n() as i64 / 2 } else { g.n() as i64 };
    if m < 0 || m > limit {
        return Err(Error::Domain(format!("mode cutoff {m} outside [0, {limit}]")));
    }
    Ok(xi.galerkin_project(m))
}
