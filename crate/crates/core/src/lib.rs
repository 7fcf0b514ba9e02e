//! Pseudo-spectral simulation of damped wave equations with fractional
//! damping, `∂t²u + γ(−Δ)^θ ∂t u + α ∂t u − Δu + f(u) = g`, on the torus and
//! the Dirichlet box, together with numerical checks of their energy,
//! dissipativity, regularity and attractor properties.

pub mod attractor;
pub mod cli;
pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod extension;
pub mod field;
pub mod grid;
pub mod nonlinearity;
pub mod quadrature;
pub mod random;
pub mod singular;
pub mod state;
pub(crate) mod transform;

pub use error::{Error, Result};
pub use field::SpectralField;
pub use grid::{Domain, GridSpec};
pub use nonlinearity::NonlinearitySpec;
pub use state::{EnergyLevel, StatePair};
