//! Long-time behaviour: steady states, absorbing balls, sampled attractors,
//! their box-counting dimension and the smoothing-map Lipschitz ratio.
//!
//! Everything here works with finite samples; reported sets are
//! approximations, not verified invariant sets.

mod dimension;
mod equilibrium;
mod lipschitz;
mod sets;

pub use dimension::{
    box_counting_dimension, box_counting_points, project_low_modes, MAX_PROJECTION_MODES, MIN_POINTS,
};
pub use equilibrium::{
    equilibrium_solve, equilibrium_solve_with, stationary_residual, Equilibrium, EquilibriumSet, NewtonOptions,
    NewtonReport, Stability,
};
pub use lipschitz::{lipschitz_refinement, smoothing_map_lipschitz};
pub use sets::{absorbing_radius, attraction_profile, hausdorff_semidist, hausdorff_semidist_in, AbsorbingReport, AttractorSample};
