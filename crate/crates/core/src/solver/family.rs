use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{KtError, Result};
use crate::geometry::Point2;
use crate::potential::{sw_family_jets, PotentialSpec};
use crate::tensor::KtParams;

use super::numeric::svd_nullspace_with_floor;
use super::residual::{residual_from_jet, residual_scale};
use super::sampling::{sample_points, SamplingConfig};

pub const SW_FAMILY_LABELS: [&str; 3] = ["omega", "alpha", "beta"];

/// Potentials of the family `ω (x² + y²) + α/x² + β/y²` compatible with every
/// given tensor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyNullspaceResult {
    pub dim: usize,
    /// `(ω, α, β)` directions, orthonormal.
    pub basis: Vec<[f64; 3]>,
    pub singular_values: Vec<f64>,
    pub gap: Option<f64>,
    pub tol_used: f64,
    pub validation_residual: f64,
    pub sample_count: usize,
}

fn family_matrix(tensors: &[KtParams], pts: &[Point2]) -> Result<DMatrix<f64>> {
    let mut rows = Vec::with_capacity(pts.len() * tensors.len());
    for p in pts {
        let jets = sw_family_jets(*p)?;
        for k in tensors {
            // scale by the size of the terms, not of the sum, which may be
            // pure rounding
            let scale = jets
                .iter()
                .map(|j| residual_scale(k, j, *p))
                .fold(0.0_f64, f64::max);
            let row: Vec<f64> = jets
                .iter()
                .map(|j| residual_from_jet(k, j, *p) / scale.max(f64::MIN_POSITIVE))
                .collect();
            rows.push(row);
        }
    }
    Ok(DMatrix::from_fn(rows.len(), 3, |i, j| rows[i][j]))
}

pub fn compatible_potential_params(
    tensors: &[KtParams],
    cfg: &SamplingConfig,
    tol: f64,
) -> Result<FamilyNullspaceResult> {
    if tensors.is_empty() {
        return Err(KtError::Domain("at least one tensor is required".into()));
    }
    for k in tensors {
        k.require_nonzero()?;
    }
    // the sampling region only depends on the family's singular set
    let shape = PotentialSpec::sw(1.0, 1.0, 1.0);
    let samples = sample_points(&shape, cfg)?;
    let a = family_matrix(tensors, &samples.points)?;
    // rows are scaled by the size of their terms, so √rows bounds the norm
    // of a matrix with nonvanishing rows
    let svd = svd_nullspace_with_floor(&a, tol, (a.nrows() as f64).sqrt());
    let fresh = sample_points(&shape, &cfg.validation())?;
    let v = family_matrix(tensors, &fresh.points)?;
    let mut worst: f64 = 0.0;
    for (i, b) in svd.basis.iter().enumerate() {
        let r = (&v * nalgebra::DVector::from_column_slice(b)).norm()
            / v.norm().max((v.nrows() as f64).sqrt());
        if !(r <= tol) {
            return Err(KtError::ValidationFailed {
                index: i,
                residual: r,
                threshold: tol,
            });
        }
        worst = worst.max(r);
    }
    Ok(FamilyNullspaceResult {
        dim: svd.basis.len(),
        basis: svd.basis.iter().map(|b| [b[0], b[1], b[2]]).collect(),
        singular_values: svd.singular_values,
        gap: svd.gap,
        tol_used: tol,
        validation_residual: worst,
        sample_count: a.nrows(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{eh_canonical_kt, polar_kt_at};

    #[test]
    fn family_examples() {
        let cfg = SamplingConfig::default();
        let eh = eh_canonical_kt(4.0).unwrap();
        let r = compatible_potential_params(&[polar_kt_at(0.0, 0.0)], &cfg, 1e-8).unwrap();
        assert_eq!(r.dim, 3);
        let r = compatible_potential_params(&[polar_kt_at(0.0, 2.0), eh], &cfg, 1e-8).unwrap();
        assert_eq!(r.dim, 1);
        assert!((r.basis[0][1] - 1.0).abs() < 1e-10, "{:?}", r.basis);
        let r = compatible_potential_params(&[polar_kt_at(1.0, 1.0), eh], &cfg, 1e-8).unwrap();
        assert_eq!(r.dim, 0);
    }
}
