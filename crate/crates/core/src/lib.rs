//! Killing two-tensors in the Euclidean plane.
//!
//! * [`tensor`] and [`potential`]: the six-parameter tensors and potential
//!   families with exact second derivatives.
//! * [`orbits`]: the SE(2) action, joint invariants, foci and classification.
//! * [`solver`]: the Bertrand–Darboux compatibility condition sampled into a
//!   linear system, with numeric and exact-rational null spaces.
//! * [`analysis`]: workflows built on the above.

pub mod analysis;
pub mod autodiff;
pub mod error;
pub mod geometry;
pub mod orbits;
pub mod potential;
pub mod solver;
pub mod tensor;

pub use error::{KtError, Result};
pub use geometry::{normalize_angle, PhasePoint, Point2, PolarPoint2, SE2Element};
pub use potential::{eval_potential, CustomPotential, Jet2, PotentialJet2, PotentialSpec};
pub use tensor::{
    cartesian_rotated_kt, eh_canonical_kt, kt_components_at, kt_to_polar_components, lincomb,
    metric_kt, polar_kt_at, KtParams, SymMatrix2,
};
