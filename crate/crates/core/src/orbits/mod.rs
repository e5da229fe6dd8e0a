//! The SE(2) action on tensors, joint invariants and orbit classification.

mod action;
mod classify;
mod invariants;

use serde::{Deserialize, Serialize};

pub use action::{act_on_kt, apply_point};
pub use classify::{canonicalize, classify_kt, classify_pair, PairClass, PairClassification};
pub use invariants::{
    center, derived_invariants, foci, foci_radical, invariants_single, joint_invariants,
    principal_angle, DerivedInvariants, FociPair, InvariantVector,
};

/// Default tolerance for the "= 0" tests of the classification rules.
pub const DEFAULT_CLASS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrbitClass {
    EllipticHyperbolic,
    Polar,
    Parabolic,
    Cartesian,
    MetricMultiple,
}
