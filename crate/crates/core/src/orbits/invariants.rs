use serde::{Deserialize, Serialize};

use crate::error::{KtError, Result};
use crate::geometry::Point2;
use crate::tensor::KtParams;

use super::DEFAULT_CLASS_TOL;

/// `(Δ'₁, Δ'₂, Δ'₃)` of a single tensor:
/// `b6`, `b6(b1+b2) − b4² − b5²` and
/// `(b6(b1−b2) − b4² + b5²)² + 4(b6 b3 + b4 b5)²`.
pub fn invariants_single(params: &KtParams) -> Result<(f64, f64, f64)> {
    params.require_nonzero()?;
    let (m11, m12, m22) = reduced_matrix(params);
    let d = m11 - m22;
    Ok((params.b6(), m11 + m22, d * d + 4.0 * m12 * m12))
}

/// `M = b6 A − B Bᵀ`, which transforms as `R M Rᵀ` under the action.
fn reduced_matrix(p: &KtParams) -> (f64, f64, f64) {
    let [b1, b2, b3, b4, b5, b6] = p.to_array();
    (b6 * b1 - b4 * b4, b6 * b3 + b4 * b5, b6 * b2 - b5 * b5)
}

fn has_foci(p: &KtParams) -> bool {
    p.b6().abs() > f64::EPSILON * p.norm()
}

/// The common center `(−b5/b6, −b4/b6)` of the focal pair.
pub fn center(params: &KtParams) -> Result<Point2> {
    params.require_nonzero()?;
    if !has_foci(params) {
        return Err(KtError::NoFoci);
    }
    Ok(Point2::new(-params.b5() / params.b6(), -params.b4() / params.b6()))
}

/// Direction `ψ` of the focal axis, `½ atan2(2 M₁₂, M₁₁ − M₂₂)`, in (−π/2, π/2].
pub fn principal_angle(params: &KtParams) -> f64 {
    let (m11, m12, m22) = reduced_matrix(params);
    0.5 * (2.0 * m12).atan2(m11 - m22)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FociPair {
    pub s_plus: Point2,
    pub s_minus: Point2,
    pub coincident: bool,
}

fn coincident_threshold(p: &KtParams, tol: f64) -> f64 {
    tol * p.norm().max(1.0).powi(4)
}

/// Foci of a tensor with `b6 ≠ 0`: `center ± k (cos ψ, sin ψ)` with
/// `k² = √Δ'₃ / b6²`.
pub fn foci(params: &KtParams) -> Result<FociPair> {
    foci_with_tol(params, DEFAULT_CLASS_TOL)
}

pub(crate) fn foci_with_tol(params: &KtParams, tol: f64) -> Result<FociPair> {
    let c = center(params)?;
    let (_, _, d3) = invariants_single(params)?;
    if d3 <= coincident_threshold(params, tol) {
        return Ok(FociPair {
            s_plus: c,
            s_minus: c,
            coincident: true,
        });
    }
    let k = d3.sqrt().sqrt() / params.b6().abs();
    let (s, co) = principal_angle(params).sin_cos();
    let (dx, dy) = (k * co, k * s);
    debug_assert!({
        let (rx, ry) = foci_radical(params)?;
        (rx - dx.abs()).abs() <= 1e-6 * k.max(1.0) && (ry - dy.abs()).abs() <= 1e-6 * k.max(1.0)
    });
    Ok(FociPair {
        s_plus: Point2::new(c.x + dx, c.y + dy),
        s_minus: Point2::new(c.x - dx, c.y - dy),
        coincident: false,
    })
}

/// Magnitudes `(|Δx|, |Δy|)` of the focus offsets from the center by the
/// radical formulas `√((√Δ'₃ ∓ σ)/2) / |b6|`, with
/// `σ = b4² − b5² + b6(b2 − b1)`.
pub fn foci_radical(params: &KtParams) -> Result<(f64, f64)> {
    center(params)?;
    let (_, _, d3) = invariants_single(params)?;
    let sigma = sigma(params);
    let r = d3.sqrt();
    let b6 = params.b6().abs();
    Ok((
        ((r - sigma).max(0.0) / 2.0).sqrt() / b6,
        ((r + sigma).max(0.0) / 2.0).sqrt() / b6,
    ))
}

fn sigma(p: &KtParams) -> f64 {
    p.b4() * p.b4() - p.b5() * p.b5() + p.b6() * (p.b2() - p.b1())
}

/// `Δ'₁..Δ'₉` of a pair. The first tensor supplies `Δ'₁..Δ'₃` and the foci
/// `S₃, S₄`; the second supplies `Δ'₄..Δ'₆` and `S₁, S₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvariantVector {
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
    pub d5: f64,
    pub d6: f64,
    pub d7: f64,
    pub d8: f64,
    pub d9: f64,
}

impl InvariantVector {
    pub fn to_array(&self) -> [f64; 9] {
        [
            self.d1, self.d2, self.d3, self.d4, self.d5, self.d6, self.d7, self.d8, self.d9,
        ]
    }
}

/// Foci of both tensors labelled so that `S₁, S₃` is the closest cross
/// pair: the lexicographic minimum of `(Δ'₈, Δ'₇, Δ'₉)` over the four
/// relabellings. This choice only depends on distances, so it commutes with
/// the group action.
pub(crate) struct LabelledFoci {
    pub s1: Point2,
    pub s2: Point2,
    pub s3: Point2,
    pub s4: Point2,
}

pub(crate) fn labelled_foci(k_a: &KtParams, k_b: &KtParams, tol: f64) -> Result<LabelledFoci> {
    let fa = foci_with_tol(k_a, tol)?;
    let fb = foci_with_tol(k_b, tol)?;
    let mut best: Option<((f64, f64, f64), LabelledFoci)> = None;
    for (s1, s2) in [(fb.s_plus, fb.s_minus), (fb.s_minus, fb.s_plus)] {
        for (s3, s4) in [(fa.s_plus, fa.s_minus), (fa.s_minus, fa.s_plus)] {
            let key = (s1.dist_sq(&s3), s2.dist_sq(&s3), s2.dist_sq(&s4));
            let better = match &best {
                None => true,
                Some((k, _)) => key.partial_cmp(k) == Some(std::cmp::Ordering::Less),
            };
            if better {
                best = Some((key, LabelledFoci { s1, s2, s3, s4 }));
            }
        }
    }
    Ok(best.expect("four candidates").1)
}

pub fn joint_invariants(k_a: &KtParams, k_b: &KtParams) -> Result<InvariantVector> {
    let (d1, d2, d3) = invariants_single(k_a)?;
    let (d4, d5, d6) = invariants_single(k_b)?;
    let f = labelled_foci(k_a, k_b, DEFAULT_CLASS_TOL)?;
    Ok(InvariantVector {
        d1,
        d2,
        d3,
        d4,
        d5,
        d6,
        d7: f.s2.dist_sq(&f.s3),
        d8: f.s1.dist_sq(&f.s3),
        d9: f.s2.dist_sq(&f.s4),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedInvariants {
    /// `b4² − b5² + b6(b2 − b1)` of the second tensor.
    pub sigma1: f64,
    /// The same expression for the first tensor.
    pub sigma2: f64,
    /// Squared half focal distance of the first tensor.
    pub k1_sq: f64,
    /// Squared half focal distance of the second tensor.
    pub k2_sq: f64,
    /// Offset of `S₃` along the focal axis of the second tensor, measured
    /// from its center toward `S₁`. Undefined when `k₂ = 0`.
    pub a_rec: Option<f64>,
    /// Distance of `S₃` from that axis (nonnegative root).
    pub b_rec: Option<f64>,
    /// Area of the triangle `S₁S₂S₃`.
    pub tri_area: f64,
}

pub fn derived_invariants(k_a: &KtParams, k_b: &KtParams) -> Result<DerivedInvariants> {
    let inv = joint_invariants(k_a, k_b)?;
    let f = labelled_foci(k_a, k_b, DEFAULT_CLASS_TOL)?;
    let k1_sq = inv.d3.sqrt() / (inv.d1 * inv.d1);
    let k2_sq = inv.d6.sqrt() / (inv.d4 * inv.d4);
    let k2 = k2_sq.sqrt();
    let (a_rec, b_rec) = if inv.d6 > coincident_threshold(k_b, DEFAULT_CLASS_TOL) {
        let a = (inv.d7 - inv.d8) / (4.0 * k2);
        let rad = inv.d8 - (a - k2) * (a - k2);
        if rad < -DEFAULT_CLASS_TOL * inv.d8.max(inv.d7).max(1.0) {
            return Err(KtError::Domain(format!("negative radicand {rad} in offset recovery")));
        }
        (Some(a), Some(rad.max(0.0).sqrt()))
    } else {
        (None, None)
    };
    let (s1, s2, s3) = (f.s1, f.s2, f.s3);
    let cross = (s2.x - s1.x) * (s3.y - s1.y) - (s3.x - s1.x) * (s2.y - s1.y);
    Ok(DerivedInvariants {
        sigma1: sigma(k_b),
        sigma2: sigma(k_a),
        k1_sq,
        k2_sq,
        a_rec,
        b_rec,
        tri_area: 0.5 * cross.abs(),
    })
}
