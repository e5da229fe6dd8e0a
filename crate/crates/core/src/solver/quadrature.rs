//! Scalar parts of quadratic first integrals and Poisson brackets.
//!
//! With `H = ½|p|² + V` and `F = Kⁱʲpᵢpⱼ + U`, `{H, F} = 0` reduces to the
//! Killing equation for `K` and `∇U = 2 K̂ ∇V`. The one-form `K̂ dV` is
//! closed exactly when the compatibility residual vanishes, and `U` is twice
//! its line integral.

use crate::error::{KtError, Result};
use crate::geometry::{PhasePoint, Point2};
use crate::potential::{eval_potential, PotentialSpec};
use crate::tensor::{components_unchecked, KtParams};

use super::residual::{bd_coefficients, residual_from_jet};

pub const GL_NODES: usize = 16;
const PANELS: usize = 8;
const RESIDUAL_TOL: f64 = 1e-8;
const PATH_TOL: f64 = 1e-8;

/// Gauss–Legendre nodes and weights on [−1, 1] (Newton iteration on `Pₙ`).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // p1 = P_n(z), p0 = P_{n-1}(z)
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// The one-form `K̂ ∇V = (K¹¹Vx + K¹²Vy, K¹²Vx + K²²Vy)`.
fn one_form(params: &KtParams, spec: &PotentialSpec, p: Point2) -> Result<(f64, f64)> {
    let j = eval_potential(spec, p)?;
    let k = components_unchecked(params, p);
    Ok((k.k11 * j.vx + k.k12 * j.vy, k.k12 * j.vx + k.k22 * j.vy))
}

/// Composite Gauss–Legendre along the segment `a → b` of `f(point)`
/// (a scalar density per unit parameter).
fn integrate_segment<F>(a: Point2, b: Point2, mut f: F) -> Result<f64>
where
    F: FnMut(Point2) -> Result<f64>,
{
    let (x, w) = gauss_legendre(GL_NODES);
    let mut total = 0.0;
    for panel in 0..PANELS {
        let t0 = panel as f64 / PANELS as f64;
        let h = 1.0 / PANELS as f64;
        for (xi, wi) in x.iter().zip(&w) {
            let t = t0 + h * 0.5 * (xi + 1.0);
            let p = Point2::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
            total += 0.5 * h * wi * f(p)?;
        }
    }
    Ok(total)
}

fn line_integral(params: &KtParams, spec: &PotentialSpec, path: &[Point2]) -> Result<f64> {
    let mut total = 0.0;
    for seg in path.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let (dx, dy) = (b.x - a.x, b.y - a.y);
        total += integrate_segment(a, b, |p| {
            let (wx, wy) = one_form(params, spec, p)?;
            Ok(wx * dx + wy * dy)
        })?;
    }
    Ok(total)
}

/// Whether a straight segment stays inside one regular region of the potential.
fn segment_clear(spec: &PotentialSpec, a: Point2, b: Point2) -> bool {
    let strict_same_sign = |u: f64, v: f64| (u > 0.0 && v > 0.0) || (u < 0.0 && v < 0.0);
    let ok = match spec {
        PotentialSpec::SmorodinskyWinternitz { alpha, beta, .. } => {
            (*alpha == 0.0 || strict_same_sign(a.x, b.x)) && (*beta == 0.0 || strict_same_sign(a.y, b.y))
        }
        PotentialSpec::Kepler { .. } | PotentialSpec::Ttw { .. } => {
            // distance from the origin to the segment
            let (dx, dy) = (b.x - a.x, b.y - a.y);
            let l2 = dx * dx + dy * dy;
            let t = if l2 > 0.0 {
                (-(a.x * dx + a.y * dy) / l2).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let near = Point2::new(a.x + t * dx, a.y + t * dy).norm() > 0.0;
            // TTW is written with atan2, which jumps across the negative x-axis
            let cut = matches!(spec, PotentialSpec::Ttw { .. })
                && !strict_same_sign(a.y, b.y)
                && (a.y != b.y)
                && {
                    let s = a.y / (a.y - b.y);
                    a.x + s * (b.x - a.x) < 0.0
                };
            near && !cut
        }
        _ => true,
    };
    if !ok {
        return false;
    }
    (0..=256).all(|i| {
        let t = i as f64 / 256.0;
        let p = Point2::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
        spec.singular_distance(p) > 1e-9 && eval_potential(spec, p).is_ok()
    })
}

fn path_clear(spec: &PotentialSpec, path: &[Point2]) -> bool {
    path.windows(2).all(|s| segment_clear(spec, s[0], s[1]))
}

fn candidate_paths(base: Point2, target: Point2) -> [Vec<Point2>; 3] {
    [
        vec![base, Point2::new(target.x, base.y), target],
        vec![base, Point2::new(base.x, target.y), target],
        vec![base, target],
    ]
}

/// Scale-free compatibility residual `|c·b| / (‖c‖ ‖b‖)` at a point.
fn relative_residual_at(params: &KtParams, spec: &PotentialSpec, p: Point2) -> Result<f64> {
    let jet = eval_potential(spec, p)?;
    let row = bd_coefficients(&jet, &p.x, &p.y);
    let rn = row.iter().map(|c| c * c).sum::<f64>().sqrt();
    if rn == 0.0 {
        return Ok(0.0);
    }
    Ok(residual_from_jet(params, &jet, p).abs() / (rn * params.norm()))
}

fn check_residual_on(params: &KtParams, spec: &PotentialSpec, path: &[Point2]) -> Result<()> {
    let mut worst: f64 = 0.0;
    for seg in path.windows(2) {
        for i in 0..=32 {
            let t = i as f64 / 32.0;
            let p = Point2::new(
                seg[0].x + t * (seg[1].x - seg[0].x),
                seg[0].y + t * (seg[1].y - seg[0].y),
            );
            worst = worst.max(relative_residual_at(params, spec, p)?);
        }
    }
    if worst > RESIDUAL_TOL {
        return Err(KtError::NotCompatible { residual: worst });
    }
    Ok(())
}

/// `∫ K̂ dV` from `base` to `target` along a path with at most one bend.
///
/// The residual is checked along the path first; when a second admissible
/// path exists the two values must agree to `1e−8` (relative to
/// `max(1, |value|)`).
pub fn integral_scalar_part(
    params: &KtParams,
    spec: &PotentialSpec,
    base: Point2,
    target: Point2,
) -> Result<f64> {
    params.require_nonzero()?;
    let paths: Vec<Vec<Point2>> = candidate_paths(base, target)
        .into_iter()
        .filter(|p| path_clear(spec, p))
        .collect();
    let Some(first) = paths.first() else {
        return Err(KtError::PathThroughSingularity);
    };
    check_residual_on(params, spec, first)?;
    let value = line_integral(params, spec, first)?;
    if let Some(second) = paths.get(1) {
        check_residual_on(params, spec, second)?;
        let other = line_integral(params, spec, second)?;
        let d = (value - other).abs();
        if d > PATH_TOL * value.abs().max(1.0) {
            return Err(KtError::NotCompatible { residual: d });
        }
    }
    Ok(value)
}

/// The scalar part `U` of a first integral, `U(q) = 2 ∫ K̂ dV` from a
/// fixed base point along a corner path.
#[derive(Debug, Clone)]
pub struct ScalarPart {
    pub params: KtParams,
    pub spec: PotentialSpec,
    pub base: Point2,
}

impl ScalarPart {
    pub fn new(params: KtParams, spec: PotentialSpec, base: Point2) -> Result<Self> {
        params.require_nonzero()?;
        eval_potential(&spec, base)?;
        Ok(Self { params, spec, base })
    }

    pub fn value(&self, q: Point2) -> Result<f64> {
        Ok(2.0 * integral_scalar_part(&self.params, &self.spec, self.base, q)?)
    }

    /// Exact gradient of the corner-path integral (not the integrand of an
    /// assumed closed form). For the horizontal-then-vertical corner,
    ///
    /// ```text
    /// ∂U/∂x = 2 (K̂∇V)ₓ(q) + 2 ∫ R(qx, s) ds,   ∂U/∂y = 2 (K̂∇V)ᵧ(q)
    /// ```
    ///
    /// where `R` is the compatibility residual along the vertical leg, so an
    /// incompatible tensor shows up in the bracket with `H`.
    pub fn gradient(&self, q: Point2) -> Result<(f64, f64)> {
        let (b, s) = (self.base, &self.spec);
        let (wx, wy) = one_form(&self.params, s, q)?;
        let residual = |p: Point2| -> Result<f64> {
            let jet = eval_potential(s, p)?;
            Ok(residual_from_jet(&self.params, &jet, p))
        };
        let corner_h = [b, Point2::new(q.x, b.y), q];
        if path_clear(s, &corner_h) {
            let leg = integrate_segment(corner_h[1], q, residual)? * (q.y - b.y);
            return Ok((2.0 * (wx + leg), 2.0 * wy));
        }
        let corner_v = [b, Point2::new(b.x, q.y), q];
        if path_clear(s, &corner_v) {
            let leg = integrate_segment(corner_v[1], q, residual)? * (q.x - b.x);
            return Ok((2.0 * wx, 2.0 * (wy - leg)));
        }
        Err(KtError::PathThroughSingularity)
    }
}

/// `F = Kⁱʲpᵢpⱼ + U`.
#[derive(Debug, Clone)]
pub struct QuadraticIntegral {
    pub params: KtParams,
    pub scalar: ScalarPart,
}

impl QuadraticIntegral {
    pub fn new(params: KtParams, spec: PotentialSpec, base: Point2) -> Result<Self> {
        Ok(Self {
            params,
            scalar: ScalarPart::new(params, spec, base)?,
        })
    }

    pub fn value(&self, z: &PhasePoint) -> Result<f64> {
        let k = components_unchecked(&self.params, z.position());
        Ok(k.quadratic_form(z.px, z.py) + self.scalar.value(z.position())?)
    }

    /// `(∂F/∂q, ∂F/∂p)`.
    fn gradient(&self, z: &PhasePoint) -> Result<([f64; 2], [f64; 2])> {
        quadratic_gradient(&self.params, &self.scalar, z)
    }
}

fn quadratic_gradient(
    params: &KtParams,
    scalar: &ScalarPart,
    z: &PhasePoint,
) -> Result<([f64; 2], [f64; 2])> {
    let [_, _, _, b4, b5, b6] = params.to_array();
    let (x, y, px, py) = (z.x, z.y, z.px, z.py);
    let k = components_unchecked(params, z.position());
    let dp = [
        2.0 * (k.k11 * px + k.k12 * py),
        2.0 * (k.k12 * px + k.k22 * py),
    ];
    // pᵀ (∂ₓK) p and pᵀ (∂ᵧK) p
    let kx = 2.0 * (-b4 - b6 * y) * px * py + (2.0 * b5 + 2.0 * b6 * x) * py * py;
    let ky = (2.0 * b4 + 2.0 * b6 * y) * px * px + 2.0 * (-b5 - b6 * x) * px * py;
    let (ux, uy) = scalar.gradient(z.position())?;
    Ok(([kx + ux, ky + uy], dp))
}

/// Phase-space functions that can enter a bracket.
#[derive(Debug, Clone)]
pub enum PhaseFunction {
    /// `H = ½|p|² + V`
    Hamiltonian(PotentialSpec),
    Integral(QuadraticIntegral),
}

impl PhaseFunction {
    fn gradient(&self, z: &PhasePoint) -> Result<([f64; 2], [f64; 2])> {
        match self {
            PhaseFunction::Hamiltonian(spec) => {
                let j = eval_potential(spec, z.position())?;
                Ok(([j.vx, j.vy], [z.px, z.py]))
            }
            PhaseFunction::Integral(f) => f.gradient(z),
        }
    }
}

/// `{f, g} = ∂f/∂q · ∂g/∂p − ∂f/∂p · ∂g/∂q`.
pub fn bracket(f: &PhaseFunction, g: &PhaseFunction, z: &PhasePoint) -> Result<f64> {
    let (fq, fp) = f.gradient(z)?;
    let (gq, gp) = g.gradient(z)?;
    Ok((fq[0] * gp[0] + fq[1] * gp[1]) - (fp[0] * gq[0] + fp[1] * gq[1]))
}

/// `{H, F}` for `F = Kⁱʲpᵢpⱼ + U` with `U` given by the handle.
pub fn poisson_bracket(
    f_params: &KtParams,
    f_scalar: &ScalarPart,
    spec: &PotentialSpec,
    z: &PhasePoint,
) -> Result<f64> {
    let j = eval_potential(spec, z.position())?;
    let (fq, fp) = quadratic_gradient(f_params, f_scalar, z)?;
    Ok((j.vx * fp[0] + j.vy * fp[1]) - (z.px * fq[0] + z.py * fq[1]))
}

pub fn poisson_bracket_pair(
    f1: &QuadraticIntegral,
    f2: &QuadraticIntegral,
    z: &PhasePoint,
) -> Result<f64> {
    let (aq, ap) = f1.gradient(z)?;
    let (bq, bp) = f2.gradient(z)?;
    Ok((aq[0] * bp[0] + aq[1] * bp[1]) - (ap[0] * bq[0] + ap[1] * bq[1]))
}
