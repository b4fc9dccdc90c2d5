//! Resilience structure of the bistable two-species Lotka–Volterra competition model.
//!
//! The nondimensional system
//!
//! ```text
//! dx/dt = x (1 - x - alpha y)
//! dy/dt = delta y (1 - y - beta x)
//! ```
//!
//! is bistable for `alpha, beta > 1`: the boundary between the basins of the
//! native-wins state `(1, 0)` and the invader-wins state `(0, 1)` is the stable
//! manifold of the coexistence saddle `(A, B)`, the graph of an increasing
//! function `y = s(x)`. This crate constructs that curve, derives the two
//! resilience measures (precariousness and latitude) from it, computes the
//! sensitivity of the curve to each model parameter, and checks the
//! singular-perturbation limits. Every analytic quantity has an independent
//! numerical counterpart so results can be cross-validated.

pub mod error;
pub mod integrator;
pub mod interp;
pub mod io;
pub mod limits;
pub mod model;
pub mod quadrature;
pub mod resilience;
pub mod sensitivity;
pub mod separatrix;

pub(crate) mod dopri;

pub use error::{Error, Result};
pub use integrator::{BasinLabel, Direction, IntegrationConfig, StopReason, Trajectory};
pub use model::{DimensionalParams, EquilibriumKind, NondimParams, Param, SaddleSpectrum, State};
pub use separatrix::{SeparatrixBuildConfig, SeparatrixCurve};
