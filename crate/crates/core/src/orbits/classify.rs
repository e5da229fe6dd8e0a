use serde::{Deserialize, Serialize};

use crate::error::{KtError, Result};
use crate::geometry::SE2Element;
use crate::tensor::KtParams;

use super::action::act_on_kt;
use super::invariants::{center, invariants_single, labelled_foci, principal_angle};
use super::{OrbitClass, DEFAULT_CLASS_TOL};

/// Orbit type of a single tensor.
///
/// With `s = max(1, ‖b‖)`: `|b6| > tol·s` separates the focal types, which
/// split on `Δ'₃ > tol·s⁴` into elliptic-hyperbolic and polar. Otherwise
/// `b4² + b5² > tol·s²` is parabolic and `(b1−b2)² + 4b3² > tol·s²` is
/// cartesian; what remains is a multiple of the metric.
pub fn classify_kt(params: &KtParams, tol: f64) -> Result<OrbitClass> {
    params.require_nonzero()?;
    let [b1, b2, b3, b4, b5, b6] = params.to_array();
    let s = params.norm().max(1.0);
    if b6.abs() > tol * s {
        let (_, _, d3) = invariants_single(params)?;
        return Ok(if d3 > tol * s.powi(4) {
            OrbitClass::EllipticHyperbolic
        } else {
            OrbitClass::Polar
        });
    }
    if b4 * b4 + b5 * b5 > tol * s * s {
        return Ok(OrbitClass::Parabolic);
    }
    let d = b1 - b2;
    if d * d + 4.0 * b3 * b3 > tol * s * s {
        return Ok(OrbitClass::Cartesian);
    }
    Ok(OrbitClass::MetricMultiple)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PairClass {
    SWCanonical,
    GeneralQuadrilateral,
    #[serde(rename = "PolarEH_General")]
    PolarEhGeneral,
    #[serde(rename = "PolarEH_Collinear")]
    PolarEhCollinear,
    #[serde(rename = "PolarEH_Isosceles")]
    PolarEhIsosceles,
    #[serde(rename = "PolarEH_Concentric")]
    PolarEhConcentric,
    Other,
}

impl PairClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            PairClass::SWCanonical => "SWCanonical",
            PairClass::GeneralQuadrilateral => "GeneralQuadrilateral",
            PairClass::PolarEhGeneral => "PolarEH_General",
            PairClass::PolarEhCollinear => "PolarEH_Collinear",
            PairClass::PolarEhIsosceles => "PolarEH_Isosceles",
            PairClass::PolarEhConcentric => "PolarEH_Concentric",
            PairClass::Other => "Other",
        }
    }

    /// Case number 1–4 of the polar/elliptic-hyperbolic degeneracy list,
    /// assigned by the invariant condition that defines each class.
    pub fn case_label(&self) -> Option<u8> {
        match self {
            PairClass::PolarEhGeneral => Some(1),
            PairClass::PolarEhCollinear => Some(2),
            PairClass::PolarEhIsosceles => Some(3),
            PairClass::SWCanonical | PairClass::PolarEhConcentric => Some(4),
            _ => None,
        }
    }

    /// Set when the invariant description of the case disagrees with the
    /// offset pattern and the potential attached to it.
    pub fn case_note(&self) -> Option<&'static str> {
        match self {
            PairClass::PolarEhCollinear => Some(
                "case 2 by the zero-area condition, but a collinear configuration has b = 0 \
                 (the a != 0, b = 0 pattern listed as case 3); the compatibility equation \
                 leaves V = beta/y^2",
            ),
            PairClass::PolarEhIsosceles => Some(
                "case 3 by the isosceles condition, but an isosceles configuration has a = 0 \
                 (the a = 0, b != 0 pattern listed as case 2); the compatibility equation \
                 leaves V = alpha/x^2",
            ),
            _ => None,
        }
    }
}

impl std::fmt::Display for PairClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairClassification {
    pub class: PairClass,
    pub paper_case_label: Option<u8>,
    pub discrepancy_note: Option<String>,
}

impl From<PairClass> for PairClassification {
    fn from(class: PairClass) -> Self {
        Self {
            class,
            paper_case_label: class.case_label(),
            discrepancy_note: class.case_note().map(str::to_owned),
        }
    }
}

/// Pair classification. The first tensor plays the polar role, the second
/// the elliptic-hyperbolic one.
///
/// `SWCanonical` requires `Δ'₁, Δ'₄, Δ'₆ ≠ 0`, `Δ'₃ = 0`, `Δ'₇ = Δ'₈ = Δ'₉`
/// and in addition that the polar center is the midpoint of the two foci:
/// the five conditions alone also hold for every point on the perpendicular
/// bisector. Collinearity and the isosceles condition are checked next.
pub fn classify_pair(k_a: &KtParams, k_b: &KtParams, tol: f64) -> Result<PairClassification> {
    let ca = classify_kt(k_a, tol)?;
    let cb = classify_kt(k_b, tol)?;
    use OrbitClass::{EllipticHyperbolic as Eh, Polar};
    let class = match (ca, cb) {
        (Polar, Eh) => polar_eh(k_a, k_b, tol)?,
        (Eh, Eh) => {
            let f = labelled_foci(k_a, k_b, tol)?;
            let pts = [f.s1, f.s2, f.s3, f.s4];
            let scale = max_sq_dist(&pts).max(1.0);
            let distinct = (0..4).all(|i| (i + 1..4).all(|j| pts[i].dist_sq(&pts[j]) > tol * scale));
            if distinct {
                PairClass::GeneralQuadrilateral
            } else {
                PairClass::Other
            }
        }
        _ => PairClass::Other,
    };
    Ok(class.into())
}

fn max_sq_dist(pts: &[crate::geometry::Point2]) -> f64 {
    let mut m: f64 = 0.0;
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            m = m.max(p.dist_sq(q));
        }
    }
    m
}

fn polar_eh(k_a: &KtParams, k_b: &KtParams, tol: f64) -> Result<PairClass> {
    let f = labelled_foci(k_a, k_b, tol)?;
    let mid = center(k_b)?;
    let scale = max_sq_dist(&[f.s1, f.s2, f.s3, mid]).max(1.0);
    let eq = |a: f64, b: f64| (a - b).abs() <= tol * scale;
    let (d7, d8, d9) = (f.s2.dist_sq(&f.s3), f.s1.dist_sq(&f.s3), f.s2.dist_sq(&f.s4));
    if f.s3.dist_sq(&mid) <= tol * scale {
        // the five listed conditions hold here as well
        return Ok(if eq(d7, d8) && eq(d8, d9) {
            PairClass::SWCanonical
        } else {
            PairClass::PolarEhConcentric
        });
    }
    let (s1, s2, s3) = (f.s1, f.s2, f.s3);
    let cross = (s2.x - s1.x) * (s3.y - s1.y) - (s3.x - s1.x) * (s2.y - s1.y);
    let area_tol = tol * scale;
    if cross.abs() <= area_tol {
        // includes S₃ on a focus, e.g. the polar center at (±k, 0)
        return Ok(PairClass::PolarEhCollinear);
    }
    if eq(d7, d8) {
        return Ok(PairClass::PolarEhIsosceles);
    }
    Ok(PairClass::PolarEhGeneral)
}

/// Moving frame for focal tensors: `g = rot(−ψ) ∘ trans(−center)`, so that
/// `act_on_kt(g, K)` has `b3 = b4 = b5 = 0`, foci on the x-axis at `(±k, 0)`
/// and `(b1 − b2)/b6 = k² ≥ 0`.
pub fn canonicalize(params: &KtParams) -> Result<(SE2Element, KtParams)> {
    let class = classify_kt(params, DEFAULT_CLASS_TOL)?;
    if !matches!(class, OrbitClass::EllipticHyperbolic | OrbitClass::Polar) {
        return Err(KtError::NotCanonizable(class));
    }
    let c = center(params)?;
    let psi = if class == OrbitClass::Polar {
        0.0
    } else {
        principal_angle(params)
    };
    let g = SE2Element::rotation(-psi).compose(&SE2Element::translation(-c.x, -c.y));
    Ok((g, act_on_kt(&g, params)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{cartesian_rotated_kt, eh_canonical_kt, metric_kt, polar_kt_at};

    fn eh4() -> KtParams {
        eh_canonical_kt(4.0).unwrap()
    }

    #[test]
    fn single_labels() {
        let t = DEFAULT_CLASS_TOL;
        assert_eq!(classify_kt(&eh4(), t).unwrap(), OrbitClass::EllipticHyperbolic);
        assert_eq!(classify_kt(&polar_kt_at(-1.3, 0.4), t).unwrap(), OrbitClass::Polar);
        assert_eq!(classify_kt(&KtParams::unit(3), t).unwrap(), OrbitClass::Parabolic);
        assert_eq!(classify_kt(&cartesian_rotated_kt(0.2), t).unwrap(), OrbitClass::Cartesian);
        assert_eq!(classify_kt(&metric_kt(), t).unwrap(), OrbitClass::MetricMultiple);
        assert!(classify_kt(&KtParams::zero(), t).is_err());
    }

    #[test]
    fn pair_labels() {
        let t = DEFAULT_CLASS_TOL;
        let c = |a: f64, b: f64| classify_pair(&polar_kt_at(a, b), &eh4(), t).unwrap();
        assert_eq!(c(0.0, 0.0).class, PairClass::SWCanonical);
        assert_eq!(c(0.0, 0.0).paper_case_label, Some(4));
        assert_eq!(c(1.0, 0.0).class, PairClass::PolarEhCollinear);
        assert!(c(1.0, 0.0).discrepancy_note.is_some());
        assert_eq!(c(0.0, 2.0).class, PairClass::PolarEhIsosceles);
        assert_eq!(c(1.0, 1.0).class, PairClass::PolarEhGeneral);
        assert_eq!(c(1.0, 1.0).paper_case_label, Some(1));
        let shifted = act_on_kt(&SE2Element::translation(0.5, 3.0), &eh4());
        assert_eq!(
            classify_pair(&eh4(), &shifted, t).unwrap().class,
            PairClass::GeneralQuadrilateral
        );
        assert_eq!(classify_pair(&metric_kt(), &eh4(), t).unwrap().class, PairClass::Other);
    }

    #[test]
    fn canonical_forms() {
        let (g, k) = canonicalize(&eh4()).unwrap();
        assert_eq!(g, SE2Element::identity());
        assert_eq!(k, eh4());
        let (g, k) = canonicalize(&polar_kt_at(3.0, -1.0)).unwrap();
        assert!((g.p1() + 3.0).abs() < 1e-15 && (g.p2() - 1.0).abs() < 1e-15);
        assert!(k.max_abs_diff(&polar_kt_at(0.0, 0.0)) < 1e-14);
        assert_eq!(
            canonicalize(&KtParams::unit(4)),
            Err(KtError::NotCanonizable(OrbitClass::Parabolic))
        );
    }

    #[test]
    fn canonicalize_round_trip() {
        let h = SE2Element::new(-1.7, 0.9, 2.8);
        let (_, k) = canonicalize(&act_on_kt(&h, &eh4())).unwrap();
        let k = k.scale(1.0 / k.b6());
        assert!(k.max_abs_diff(&eh4()) < 1e-10, "{k:?}");
    }
}
