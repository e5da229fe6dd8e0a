use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::autodiff::Field;
use crate::error::{KtError, Result};
use crate::geometry::Point2;
use crate::potential::{eval_potential, Jet2, PotentialSpec};
use crate::tensor::{components_unchecked, KtParams};

use super::sampling::SampleSet;

pub const COLUMN_LABELS: [&str; 6] = ["b1", "b2", "b3", "b4", "b5", "b6"];

/// Residual from the tensor components and the jet:
/// `K¹²(Vxx − Vyy) + (K²² − K¹¹)Vxy − 3(b4 + b6 y)Vx + 3(b5 + b6 x)Vy`,
/// i.e. `∂x(K²¹Vx + K²²Vy) − ∂y(K¹¹Vx + K¹²Vy)`.
pub fn residual_from_jet(params: &KtParams, jet: &Jet2<f64>, pt: Point2) -> f64 {
    let k = components_unchecked(params, pt);
    let [_, _, _, b4, b5, b6] = params.to_array();
    k.k12 * (jet.vxx - jet.vyy) + (k.k22 - k.k11) * jet.vxy - 3.0 * (b4 + b6 * pt.y) * jet.vx
        + 3.0 * (b5 + b6 * pt.x) * jet.vy
}

/// Sum of the magnitudes of the terms of [`residual_from_jet`], expanded
/// far enough that no cancellation takes place.
pub(crate) fn residual_scale(params: &KtParams, jet: &Jet2<f64>, pt: Point2) -> f64 {
    let k = components_unchecked(params, pt);
    let [_, _, _, b4, b5, b6] = params.to_array();
    k.k12.abs() * (jet.vxx.abs() + jet.vyy.abs())
        + (k.k11.abs() + k.k22.abs()) * jet.vxy.abs()
        + 3.0 * (b4.abs() + (b6 * pt.y).abs()) * jet.vx.abs()
        + 3.0 * (b5.abs() + (b6 * pt.x).abs()) * jet.vy.abs()
}

pub fn bd_residual(params: &KtParams, spec: &PotentialSpec, pt: Point2) -> Result<f64> {
    params.require_nonzero()?;
    let jet = eval_potential(spec, pt)?;
    Ok(residual_from_jet(params, &jet, pt))
}

/// Coefficients of the residual on the six basis tensors, in any field.
pub fn bd_coefficients<S: Field>(jet: &Jet2<S>, x: &S, y: &S) -> [S; 6] {
    let two = S::from_i64(2);
    let three = S::from_i64(3);
    let d = jet.vxx.clone() - jet.vyy.clone();
    let b4 = -(x.clone() * d.clone())
        - two.clone() * y.clone() * jet.vxy.clone()
        - three.clone() * jet.vx.clone();
    let b5 = -(y.clone() * d.clone()) + two * x.clone() * jet.vxy.clone()
        + three.clone() * jet.vy.clone();
    let b6 = -(x.clone() * y.clone() * d.clone())
        + (x.clone() * x.clone() - y.clone() * y.clone()) * jet.vxy.clone()
        - three.clone() * y.clone() * jet.vx.clone()
        + three * x.clone() * jet.vy.clone();
    [-jet.vxy.clone(), jet.vxy.clone(), d, b4, b5, b6]
}

/// The row `c` with `bd_residual(K, spec, pt) = c · b` for every `K`.
pub fn bd_row(spec: &PotentialSpec, pt: Point2) -> Result<[f64; 6]> {
    let jet = eval_potential(spec, pt)?;
    Ok(bd_coefficients(&jet, &pt.x, &pt.y))
}

/// Sampled compatibility operator, one row per sample point, each row
/// divided by its largest absolute entry.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub rows: DMatrix<f64>,
    pub column_labels: Vec<String>,
    pub row_scales: Vec<f64>,
    pub potential_id: String,
}

pub(crate) fn normalize_row(row: &mut [f64]) -> f64 {
    let m = row.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if m > 0.0 {
        row.iter_mut().for_each(|v| *v /= m);
        m
    } else {
        1.0
    }
}

pub fn assemble_system(spec: &PotentialSpec, samples: &SampleSet) -> Result<LinearSystem> {
    let rows: Vec<(Vec<f64>, f64)> = samples
        .points
        .par_iter()
        .map(|p| {
            let mut row = bd_row(spec, *p)?.to_vec();
            if row.iter().any(|v| !v.is_finite()) {
                return Err(KtError::SingularPoint {
                    x: p.x,
                    y: p.y,
                    constraint: "non-finite compatibility row".into(),
                });
            }
            let s = normalize_row(&mut row);
            Ok((row, s))
        })
        .collect::<Result<_>>()?;
    let n = rows.len();
    let mut m = DMatrix::zeros(n, 6);
    let mut scales = Vec::with_capacity(n);
    for (i, (row, s)) in rows.into_iter().enumerate() {
        for (j, v) in row.into_iter().enumerate() {
            m[(i, j)] = v;
        }
        scales.push(s);
    }
    Ok(LinearSystem {
        rows: m,
        column_labels: COLUMN_LABELS.iter().map(|s| s.to_string()).collect(),
        row_scales: scales,
        potential_id: spec.descriptor(),
    })
}
