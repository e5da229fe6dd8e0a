use serde::{Deserialize, Serialize};

use crate::error::{KtError, Result};
use crate::orbits::{classify_pair, joint_invariants, InvariantVector, PairClass, PairClassification};
use crate::orbits::DEFAULT_CLASS_TOL;
use crate::potential::PotentialSpec;
use crate::solver::{
    compatible_kts, compatible_potential_params, Backend, FamilyNullspaceResult, NullspaceResult,
    SamplingConfig,
};
use crate::tensor::{eh_canonical_kt, polar_kt_at, KtParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SwStatus {
    Generic,
    /// More than three independent compatible tensors.
    DegenerateFamily,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwReport {
    pub omega: f64,
    pub alpha: f64,
    pub beta: f64,
    pub nullspace: NullspaceResult,
    /// Exact-rational rank check on the same potential.
    pub exact: Option<NullspaceResult>,
    pub status: SwStatus,
    /// Rotational direction, then rotational plus a cartesian direction.
    pub pair: Option<[KtParams; 2]>,
    pub pair_invariants: Option<InvariantVector>,
    pub pair_class: Option<PairClassification>,
    pub theorem_holds: bool,
}

fn project(basis: &[KtParams], v: &KtParams) -> KtParams {
    basis
        .iter()
        .fold(KtParams::zero(), |acc, u| acc + u.dot(v) * *u)
}

/// Polar/elliptic-hyperbolic pair inside the span of `basis`: the
/// projection of the rotational generator scaled to `b6 = 1`, and that
/// tensor plus a unit cartesian-type direction with `b6 = 0`.
fn extract_pair(basis: &[KtParams]) -> Option<[KtParams; 2]> {
    let rot = project(basis, &KtParams::unit(5));
    if rot.b6().abs() < 1e-6 {
        return None;
    }
    let rot = rot.scale(1.0 / rot.b6());
    let e1 = project(basis, &KtParams::unit(0));
    let cart = e1 - e1.b6() * rot;
    // drop the metric part so the direction is not a trivial shift
    let metric = KtParams::unit(0) + KtParams::unit(1);
    let cart = cart - (cart.dot(&metric) / 2.0) * metric;
    let n = cart.norm();
    if n < 1e-6 {
        return None;
    }
    Some([rot, rot + cart.scale(1.0 / n)])
}

pub fn characterize_sw(omega: f64, alpha: f64, beta: f64, cfg: &SamplingConfig, tol: f64) -> Result<SwReport> {
    let spec = PotentialSpec::sw(omega, alpha, beta);
    let nullspace = compatible_kts(&spec, cfg, tol, Backend::Numeric)?;
    let exact = match compatible_kts(&spec, cfg, tol, Backend::ExactRational) {
        Ok(r) => Some(r),
        Err(KtError::BackendUnavailable(_)) => None,
        Err(e) => return Err(e),
    };
    let status = if nullspace.dim > 3 {
        SwStatus::DegenerateFamily
    } else {
        SwStatus::Generic
    };
    let pair = extract_pair(&nullspace.basis);
    let (pair_invariants, pair_class) = match &pair {
        Some([a, b]) => (
            Some(joint_invariants(a, b)?),
            Some(classify_pair(a, b, DEFAULT_CLASS_TOL)?),
        ),
        None => (None, None),
    };
    let theorem_holds = nullspace.dim >= 3
        && pair_class
            .as_ref()
            .is_some_and(|c| c.class == PairClass::SWCanonical);
    Ok(SwReport {
        omega,
        alpha,
        beta,
        nullspace,
        exact,
        status,
        pair,
        pair_invariants,
        pair_class,
        theorem_holds,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegeneracyRow {
    pub a: f64,
    pub b: f64,
    pub ell: f64,
    pub pair_invariants: InvariantVector,
    pub pair_class: PairClassification,
    pub surviving_family: FamilyNullspaceResult,
    /// Case number from the zero pattern of the offsets `(a, b)`.
    pub paper_case: u8,
    pub discrepancy_note: Option<String>,
}

/// `(≠0,≠0) → 1`, `(0,≠0) → 2`, `(≠0,0) → 3`, `(0,0) → 4`.
pub fn offset_case(a: f64, b: f64) -> u8 {
    match (a == 0.0, b == 0.0) {
        (false, false) => 1,
        (true, false) => 2,
        (false, true) => 3,
        (true, true) => 4,
    }
}

fn offset_note(case: u8) -> Option<String> {
    match case {
        2 => Some(
            "offsets a = 0, b != 0 are listed as yielding V = beta/y^2, but the compatibility \
             equation omega^2 (b x - a y) + a (b - y) alpha/x^4 + b (x - a) beta/y^4 = 0 forces \
             omega = beta = 0 and leaves V = alpha/x^2; the pair is isosceles, the invariant \
             description given for case 3"
                .into(),
        ),
        3 => Some(
            "offsets a != 0, b = 0 are listed as yielding V = alpha/x^2, but the compatibility \
             equation forces omega = alpha = 0 and leaves V = beta/y^2; the foci are collinear, \
             the invariant description given for case 2"
                .into(),
        ),
        _ => None,
    }
}

/// Polar tensor centred at `(a, b)` against the canonical
/// elliptic-hyperbolic tensor with parameter `ell`, and the part of the
/// `(ω, α, β)` family compatible with both.
pub fn degeneracy_study(a: f64, b: f64, ell: f64, cfg: &SamplingConfig, tol: f64) -> Result<DegeneracyRow> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(KtError::Domain("offsets must be finite".into()));
    }
    let k_a = polar_kt_at(a, b);
    let k_b = eh_canonical_kt(ell)?;
    let pair_class = classify_pair(&k_a, &k_b, DEFAULT_CLASS_TOL)?;
    let pair_invariants = joint_invariants(&k_a, &k_b)?;
    let surviving_family = compatible_potential_params(&[k_a, k_b], cfg, tol)?;
    let paper_case = offset_case(a, b);
    Ok(DegeneracyRow {
        a,
        b,
        ell,
        pair_invariants,
        pair_class,
        surviving_family,
        paper_case,
        discrepancy_note: offset_note(paper_case),
    })
}
