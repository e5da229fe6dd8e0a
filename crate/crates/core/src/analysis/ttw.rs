use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::potential::PotentialSpec;
use crate::solver::numeric::relative_residual;
use crate::solver::{assemble_system, compatible_kts, sample_points, Backend, SamplingConfig};
use crate::tensor::cartesian_rotated_kt;

/// Positive `k = p/q` at which the trigonometric expansion of the
/// compatibility equation for the TTW potential is linearly dependent; the
/// negatives are special as well.
pub const SPECIAL_K: [(i64, i64); 22] = [
    (2, 1),
    (3, 2),
    (1, 1),
    (1, 2),
    (1, 4),
    (1, 6),
    (1, 8),
    (1, 10),
    (1, 12),
    (1, 14),
    (1, 16),
    (3, 4),
    (2, 3),
    (3, 8),
    (1, 3),
    (3, 10),
    (2, 7),
    (3, 14),
    (1, 5),
    (3, 16),
    (2, 5),
    (1, 7),
];

/// The subset relevant to a rotated cartesian tensor.
pub const REDUCED_K: [(i64, i64); 5] = [(1, 1), (2, 1), (2, 3), (1, 2), (2, 5)];

pub fn is_special_k(k: f64) -> bool {
    SPECIAL_K
        .iter()
        .any(|&(p, q)| (k.abs() - p as f64 / q as f64).abs() <= 1e-12 * k.abs().max(1.0))
}

/// `±1, ±2, ±3/2, ±1/2, ±2/3, ±2/5, ±3, ±1/3, √2, π/3` followed by the
/// remaining special values with both signs.
pub fn default_scan_set() -> Vec<f64> {
    let mut ks = vec![
        1.0,
        -1.0,
        2.0,
        -2.0,
        1.5,
        -1.5,
        0.5,
        -0.5,
        2.0 / 3.0,
        -2.0 / 3.0,
        0.4,
        -0.4,
        3.0,
        -3.0,
        1.0 / 3.0,
        -1.0 / 3.0,
        std::f64::consts::SQRT_2,
        std::f64::consts::FRAC_PI_3,
    ];
    for &(p, q) in &SPECIAL_K {
        let k = p as f64 / q as f64;
        if !ks.iter().any(|&v| (v - k).abs() < 1e-15) {
            ks.push(k);
            ks.push(-k);
        }
    }
    ks
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// At least three independent quadratic integrals.
    MultiSeparable,
    /// Metric and rotational directions only.
    PolarOnly,
    Degenerate,
}

impl Verdict {
    pub fn from_dim(dim: usize) -> Self {
        match dim {
            d if d >= 3 => Verdict::MultiSeparable,
            2 => Verdict::PolarOnly,
            _ => Verdict::Degenerate,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::MultiSeparable => "MultiSeparable",
            Verdict::PolarOnly => "PolarOnly",
            Verdict::Degenerate => "Degenerate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TtwScanRow {
    pub k: f64,
    pub dim: Option<usize>,
    pub special_value: bool,
    pub verdict: Option<Verdict>,
    pub gap: Option<f64>,
    pub validation_residual: Option<f64>,
    pub error: Option<String>,
}

fn scan_row(k: f64, omega: f64, alpha: f64, beta: f64, cfg: &SamplingConfig, tol: f64) -> TtwScanRow {
    let res = PotentialSpec::ttw(omega, alpha, beta, k)
        .and_then(|spec| compatible_kts(&spec, cfg, tol, Backend::Numeric));
    let mut row = TtwScanRow {
        k,
        dim: None,
        special_value: is_special_k(k),
        verdict: None,
        gap: None,
        validation_residual: None,
        error: None,
    };
    match res {
        Ok(r) => {
            row.dim = Some(r.dim);
            row.verdict = Some(Verdict::from_dim(r.dim));
            row.gap = r.gap;
            row.validation_residual = r.validation_residual;
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Dimension of the compatible-tensor space of the TTW potential for each
/// `k`. Rows are computed in parallel and returned in input order; a
/// failing row carries its error and does not stop the scan.
pub fn ttw_scan(
    k_values: &[f64],
    omega: f64,
    alpha: f64,
    beta: f64,
    cfg: &SamplingConfig,
    tol: f64,
) -> Vec<TtwScanRow> {
    k_values
        .par_iter()
        .map(|&k| scan_row(k, omega, alpha, beta, cfg, tol))
        .collect()
}

/// Whether cartesian coordinates rotated by `phi` are compatible with
/// TTW(ω, α, β, k): the relative residual of the rotated cartesian tensor
/// on the sample set is at most `tol`.
pub fn cartesian_angle_check(
    k: f64,
    phi: f64,
    omega: f64,
    alpha: f64,
    beta: f64,
    cfg: &SamplingConfig,
    tol: f64,
) -> Result<bool> {
    let spec = PotentialSpec::ttw(omega, alpha, beta, k)?;
    let samples = sample_points(&spec, cfg)?;
    let sys = assemble_system(&spec, &samples)?;
    let v = cartesian_rotated_kt(phi);
    Ok(relative_residual(&sys.rows, v.as_array()) <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn special_membership() {
        assert!(is_special_k(1.5) && is_special_k(-3.0 / 16.0) && is_special_k(-1.0));
        assert!(!is_special_k(3.0) && !is_special_k(std::f64::consts::SQRT_2));
        assert!(REDUCED_K.iter().all(|&(p, q)| is_special_k(p as f64 / q as f64)));
        let ks = default_scan_set();
        assert_eq!(ks.len(), 18 + 2 * 15);
    }

    #[test]
    fn scan_examples() {
        let cfg = SamplingConfig::default();
        let ks = [1.0, 2.0, 0.5, 2.0 / 3.0, 0.4, std::f64::consts::SQRT_2, 0.0];
        let rows = ttw_scan(&ks, 1.0, 1.0, 1.0, &cfg, 1e-8);
        assert_eq!(rows[0].verdict, Some(Verdict::MultiSeparable));
        assert_eq!(rows[0].dim, Some(3));
        assert_eq!(rows[1].dim, Some(2));
        assert_eq!(rows[5].dim, Some(2));
        assert!(rows[6].error.is_some());
        for (r, k) in rows.iter().zip(ks) {
            assert_eq!(r.k, k);
        }
    }

    #[test]
    fn cartesian_angle_examples() {
        let cfg = SamplingConfig::default();
        assert!(cartesian_angle_check(1.0, 0.0, 1.0, 2.0, 3.0, &cfg, 1e-8).unwrap());
        assert!(!cartesian_angle_check(2.0, 0.0, 1.0, 2.0, 3.0, &cfg, 1e-8).unwrap());
        let q = std::f64::consts::FRAC_PI_4;
        assert!(!cartesian_angle_check(1.0, q, 1.0, 2.0, 3.0, &cfg, 1e-8).unwrap());
    }
}
