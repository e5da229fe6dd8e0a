//! Compatibility of Killing tensors with a potential.
//!
//! The Bertrand–Darboux condition `d(K̂ dV) = 0` is linear in the six tensor
//! parameters, so sampling it at many points gives a tall linear system
//! whose null space is the space of compatible tensors. Two independent
//! routes compute it: a singular value decomposition in floating point and
//! fraction-free elimination over the rationals.

pub mod exact;
mod family;
pub mod numeric;
mod quadrature;
mod residual;
mod sampling;

use nalgebra::DMatrix;
use num::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{KtError, Result};
use crate::potential::{eval_potential_exact, PotentialSpec};
use crate::tensor::KtParams;

pub use exact::RankCertificate;
pub use family::{compatible_potential_params, FamilyNullspaceResult, SW_FAMILY_LABELS};
pub use quadrature::{
    bracket, gauss_legendre, integral_scalar_part, poisson_bracket, poisson_bracket_pair,
    PhaseFunction, QuadraticIntegral, ScalarPart, GL_NODES,
};
pub use residual::{
    assemble_system, bd_coefficients, bd_residual, bd_row, residual_from_jet, LinearSystem,
    COLUMN_LABELS,
};
pub use sampling::{
    radical_inverse, rational_points, sample_points, SampleSet, SamplingConfig,
    VALIDATION_SEED_OFFSET,
};

pub const DEFAULT_RANK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Numeric,
    ExactRational,
}

impl Backend {
    pub fn as_str(&self) -> &'static str {
        match self {
            Backend::Numeric => "numeric",
            Backend::ExactRational => "exact_rational",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullspaceResult {
    pub dim: usize,
    /// Orthonormal; reduced-echelon order, first nonzero coordinate positive.
    pub basis: Vec<KtParams>,
    /// Numeric backend only, descending.
    pub singular_values: Vec<f64>,
    /// `σ_rank / σ_{rank+1}`; absent when either side is missing or zero.
    pub gap: Option<f64>,
    pub tol_used: f64,
    pub backend: Backend,
    /// Exact backend only.
    pub certificate: Option<RankCertificate>,
    /// Largest `‖Â v‖ / ‖Â‖_F` over the basis on an independent sample set.
    pub validation_residual: Option<f64>,
    pub sample_count: usize,
}

/// Numeric null space of an assembled system (no re-validation).
pub fn nullspace(sys: &LinearSystem, tol: f64) -> Result<NullspaceResult> {
    check_tol(tol)?;
    let svd = numeric::svd_nullspace(&sys.rows, tol);
    Ok(NullspaceResult {
        dim: svd.basis.len(),
        basis: svd.basis.iter().map(|v| to_params(v)).collect(),
        singular_values: svd.singular_values,
        gap: svd.gap,
        tol_used: tol,
        backend: Backend::Numeric,
        certificate: None,
        validation_residual: None,
        sample_count: sys.rows.nrows(),
    })
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(KtError::Domain(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

fn to_params(v: &[f64]) -> KtParams {
    let mut b = [0.0; 6];
    b.copy_from_slice(&v[..6]);
    KtParams::raw(b)
}

/// Checks every basis vector on a fresh sample set: `‖Â v‖₂ / ‖Â‖_F ≤ tol`.
pub fn validate_basis(
    spec: &PotentialSpec,
    basis: &[KtParams],
    cfg: &SamplingConfig,
    tol: f64,
) -> Result<f64> {
    let fresh = sample_points(spec, &cfg.validation())?;
    let sys = assemble_system(spec, &fresh)?;
    let mut worst: f64 = 0.0;
    for (i, v) in basis.iter().enumerate() {
        let r = numeric::relative_residual(&sys.rows, v.as_array());
        if !(r <= tol) {
            return Err(KtError::ValidationFailed {
                index: i,
                residual: r,
                threshold: tol,
            });
        }
        worst = worst.max(r);
    }
    Ok(worst)
}

/// Exact rational rows of the compatibility operator, cleared of denominators.
pub fn exact_rows(spec: &PotentialSpec, cfg: &SamplingConfig) -> Result<Vec<Vec<num::BigInt>>> {
    if !spec.has_rational_jets() {
        return Err(KtError::BackendUnavailable(format!(
            "{} has no rational jets",
            spec.descriptor()
        )));
    }
    let pts = rational_points(spec, cfg)?;
    pts.par_iter()
        .map(|(x, y)| {
            let jet = eval_potential_exact(spec, x, y)?;
            let row: [BigRational; 6] = bd_coefficients(&jet, x, y);
            Ok(exact::clear_denominators(&row))
        })
        .collect()
}

fn exact_nullspace(spec: &PotentialSpec, cfg: &SamplingConfig, tol: f64) -> Result<NullspaceResult> {
    let rows = exact_rows(spec, cfg)?;
    let n = rows.len();
    let ech = exact::bareiss(rows, 6);
    let null: Vec<Vec<f64>> = exact::nullspace_from_echelon(&ech, 6)
        .iter()
        .map(|v| exact::to_f64_vec(v))
        .collect();
    let basis = numeric::canonical_basis(&null);
    Ok(NullspaceResult {
        dim: 6 - ech.certificate.rank,
        basis: basis.iter().map(|v| to_params(v)).collect(),
        singular_values: Vec::new(),
        gap: None,
        tol_used: tol,
        backend: Backend::ExactRational,
        certificate: Some(ech.certificate),
        validation_residual: None,
        sample_count: n,
    })
}

/// Space of tensors compatible with `spec`, validated on an independent
/// sample set.
pub fn compatible_kts(
    spec: &PotentialSpec,
    cfg: &SamplingConfig,
    tol: f64,
    backend: Backend,
) -> Result<NullspaceResult> {
    check_tol(tol)?;
    let mut res = match backend {
        Backend::Numeric => {
            let samples = sample_points(spec, cfg)?;
            let sys = assemble_system(spec, &samples)?;
            nullspace(&sys, tol)?
        }
        Backend::ExactRational => exact_nullspace(spec, cfg, tol)?,
    };
    res.validation_residual = Some(validate_basis(spec, &res.basis, cfg, tol)?);
    Ok(res)
}

/// Null space restricted to a subspace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestrictedNullspace {
    /// Null directions in the coordinates of the given spanning vectors.
    pub coords: Vec<Vec<f64>>,
    /// The same directions as tensors (orthonormalized in parameter space).
    pub result: NullspaceResult,
}

/// Compatible tensors inside `span(subspace)`.
pub fn restricted_compatible(
    spec: &PotentialSpec,
    subspace: &[KtParams],
    cfg: &SamplingConfig,
    tol: f64,
) -> Result<RestrictedNullspace> {
    check_tol(tol)?;
    let m = subspace.len();
    if m == 0 {
        return Err(KtError::Domain("empty subspace".into()));
    }
    let s = DMatrix::from_fn(6, m, |i, j| subspace[j][i]);
    if numeric::svd_nullspace(&s, 1e-10).rank != m {
        return Err(KtError::Domain("subspace vectors are linearly dependent".into()));
    }
    let samples = sample_points(spec, cfg)?;
    let sys = assemble_system(spec, &samples)?;
    let mut a = &sys.rows * &s;
    for mut row in a.row_iter_mut() {
        let mx = row.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
        if mx > 0.0 {
            row /= mx;
        }
    }
    let svd = numeric::svd_nullspace(&a, tol);
    let tensors: Vec<Vec<f64>> = svd
        .basis
        .iter()
        .map(|c| (&s * nalgebra::DVector::from_column_slice(c)).iter().copied().collect())
        .collect();
    let basis: Vec<KtParams> = numeric::canonical_basis(&tensors)
        .iter()
        .map(|v| to_params(v))
        .collect();
    let validation = validate_basis(spec, &basis, cfg, tol)?;
    Ok(RestrictedNullspace {
        coords: svd.basis,
        result: NullspaceResult {
            dim: basis.len(),
            basis,
            singular_values: svd.singular_values,
            gap: svd.gap,
            tol_used: tol,
            backend: Backend::Numeric,
            certificate: None,
            validation_residual: Some(validation),
            sample_count: samples.points.len(),
        },
    })
}

/// The five-dimensional span of the slots `b1..b5` (no rotational term).
pub fn reduced_subspace() -> Vec<KtParams> {
    (0..5).map(KtParams::unit).collect()
}
