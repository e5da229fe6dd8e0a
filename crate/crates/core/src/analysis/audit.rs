use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{Point2, SE2Element};
use crate::orbits::{act_on_kt, apply_point, classify_pair, foci, joint_invariants, DEFAULT_CLASS_TOL};
use crate::tensor::{eh_canonical_kt, polar_kt_at, KtParams};

/// Largest allowed deviations: joint invariants (relative), foci, group law.
pub const AUDIT_THRESHOLDS: (f64, f64, f64) = (1e-9, 1e-10, 1e-12);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub trials: usize,
    pub seed: u64,
    /// `max |Δ'ᵢ(g·A, g·B) − Δ'ᵢ(A, B)| / max(1, |Δ'ᵢ(A, B)|)`.
    pub max_invariant_drift: f64,
    /// Distance between `foci(g·K)` and `g·foci(K)`.
    pub max_foci_deviation: f64,
    /// Largest deviation of `(g∘h)·x` from `g·(h·x)` over points and tensors,
    /// relative to `max(1, |·|)`.
    pub max_group_law_deviation: f64,
    pub label_checks: usize,
    pub label_mismatches: usize,
    /// One entry per trial that exceeded a threshold or failed to evaluate.
    pub failures: Vec<String>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.label_mismatches == 0
    }
}

fn random_element(rng: &mut ChaCha8Rng) -> SE2Element {
    SE2Element::new(
        rng.gen_range(-3.0..3.0),
        rng.gen_range(-3.0..3.0),
        rng.gen_range(-PI..PI),
    )
}

/// Polar/EH pair with each offset set to zero a quarter of the time, so
/// that every pair class is exercised.
fn random_pair(rng: &mut ChaCha8Rng) -> (KtParams, KtParams) {
    let offset = |rng: &mut ChaCha8Rng| {
        if rng.gen_bool(0.25) {
            0.0
        } else {
            rng.gen_range(-2.0..2.0)
        }
    };
    let a = offset(rng);
    let b = offset(rng);
    let ell: f64 = rng.gen_range(1.0..9.0);
    let eh = eh_canonical_kt(ell).expect("ell is positive");
    (polar_kt_at(a, b), eh)
}

fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn foci_deviation(g: &SE2Element, k: &KtParams) -> crate::error::Result<f64> {
    let f = foci(k)?;
    let fg = foci(&act_on_kt(g, k))?;
    let (p, m) = (apply_point(g, f.s_plus), apply_point(g, f.s_minus));
    let d = |u: Point2, v: Point2| u.dist_sq(&v).sqrt();
    let straight = d(fg.s_plus, p).max(d(fg.s_minus, m));
    let swapped = d(fg.s_plus, m).max(d(fg.s_minus, p));
    Ok(straight.min(swapped))
}

/// Randomized check of the invariance, equivariance and group-law
/// properties. Deterministic in `seed`.
pub fn invariance_audit(trials: usize, seed: u64) -> AuditReport {
    let (inv_tol, foci_tol, law_tol) = AUDIT_THRESHOLDS;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = AuditReport {
        trials,
        seed,
        max_invariant_drift: 0.0,
        max_foci_deviation: 0.0,
        max_group_law_deviation: 0.0,
        label_checks: 0,
        label_mismatches: 0,
        failures: Vec::new(),
    };
    for t in 0..trials {
        let g = random_element(&mut rng);
        let h = random_element(&mut rng);
        let (ka, kb) = random_pair(&mut rng);
        let (ga, gb) = (act_on_kt(&g, &ka), act_on_kt(&g, &kb));

        match (joint_invariants(&ka, &kb), joint_invariants(&ga, &gb)) {
            (Ok(i0), Ok(i1)) => {
                let drift = i1
                    .to_array()
                    .iter()
                    .zip(i0.to_array())
                    .map(|(x, y)| rel_diff(*x, y))
                    .fold(0.0, f64::max);
                rep.max_invariant_drift = rep.max_invariant_drift.max(drift);
                if !(drift < inv_tol) {
                    rep.failures.push(format!("trial {t}: invariant drift {drift:e}"));
                }
            }
            (Err(e), _) | (_, Err(e)) => rep.failures.push(format!("trial {t}: invariants: {e}")),
        }

        for k in [&ka, &kb] {
            match foci_deviation(&g, k) {
                Ok(d) => {
                    rep.max_foci_deviation = rep.max_foci_deviation.max(d);
                    if !(d < foci_tol) {
                        rep.failures.push(format!("trial {t}: foci deviation {d:e}"));
                    }
                }
                Err(e) => rep.failures.push(format!("trial {t}: foci: {e}")),
            }
        }

        let gh = g.compose(&h);
        let x = Point2::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let (lhs, rhs) = (apply_point(&gh, x), apply_point(&g, apply_point(&h, x)));
        let mut law = (lhs.x - rhs.x).abs().max((lhs.y - rhs.y).abs()) / rhs.norm().max(1.0);
        for k in [&ka, &kb] {
            let l = act_on_kt(&gh, k);
            let r = act_on_kt(&g, &act_on_kt(&h, k));
            law = law.max(l.max_abs_diff(&r) / r.norm().max(1.0));
        }
        let id = g.compose(&g.inverse());
        law = law.max(id.p1().abs().max(id.p2().abs()).max(id.p3().abs()));
        rep.max_group_law_deviation = rep.max_group_law_deviation.max(law);
        if !(law < law_tol) {
            rep.failures.push(format!("trial {t}: group law deviation {law:e}"));
        }

        match (
            classify_pair(&ka, &kb, DEFAULT_CLASS_TOL),
            classify_pair(&ga, &gb, DEFAULT_CLASS_TOL),
        ) {
            (Ok(c0), Ok(c1)) => {
                rep.label_checks += 1;
                if c0.class != c1.class {
                    rep.label_mismatches += 1;
                    rep.failures
                        .push(format!("trial {t}: label {} became {}", c0.class, c1.class));
                }
            }
            (Err(e), _) | (_, Err(e)) => rep.failures.push(format!("trial {t}: classify: {e}")),
        }
    }
    rep
}
