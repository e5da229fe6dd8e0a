//! Potential families with exact value, gradient and Hessian.

use std::fmt;
use std::sync::Arc;

use num::{BigRational, Signed, ToPrimitive, Zero};

use crate::autodiff::{Field, HyperDual};
use crate::error::{KtError, Result};
use crate::geometry::Point2;

/// Value, gradient and Hessian of a potential at a point. The mixed
/// partial is stored once.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet2<S> {
    pub v: S,
    pub vx: S,
    pub vy: S,
    pub vxx: S,
    pub vxy: S,
    pub vyy: S,
}

pub type PotentialJet2 = Jet2<f64>;

impl<S: Field> Jet2<S> {
    pub fn zero() -> Self {
        Jet2 {
            v: S::zero(),
            vx: S::zero(),
            vy: S::zero(),
            vxx: S::zero(),
            vxy: S::zero(),
            vyy: S::zero(),
        }
    }

    fn add(self, o: Jet2<S>) -> Jet2<S> {
        Jet2 {
            v: self.v + o.v,
            vx: self.vx + o.vx,
            vy: self.vy + o.vy,
            vxx: self.vxx + o.vxx,
            vxy: self.vxy + o.vxy,
            vyy: self.vyy + o.vyy,
        }
    }
}

impl Jet2<f64> {
    pub fn is_finite(&self) -> bool {
        [self.v, self.vx, self.vy, self.vxx, self.vxy, self.vyy]
            .iter()
            .all(|c| c.is_finite())
    }

    pub fn max_abs_diff(&self, o: &Jet2<f64>) -> f64 {
        [
            self.v - o.v,
            self.vx - o.vx,
            self.vy - o.vy,
            self.vxx - o.vxx,
            self.vxy - o.vxy,
            self.vyy - o.vyy,
        ]
        .iter()
        .fold(0.0, |m, d| m.max(d.abs()))
    }
}

pub type HdFn = dyn Fn(&HyperDual<f64>, &HyperDual<f64>) -> HyperDual<f64> + Send + Sync;
pub type HdExactFn =
    dyn Fn(&HyperDual<BigRational>, &HyperDual<BigRational>) -> HyperDual<BigRational> + Send + Sync;
/// Distance-like measure to the singular set; the point is rejected by
/// samplers when it falls below the sampling margin.
pub type SingularFn = dyn Fn(Point2) -> f64 + Send + Sync;

/// A user potential written once against hyper-dual arithmetic.
#[derive(Clone)]
pub struct CustomPotential {
    pub name: String,
    pub f: Arc<HdFn>,
    pub exact: Option<Arc<HdExactFn>>,
    pub singular_distance: Option<Arc<SingularFn>>,
}

impl CustomPotential {
    pub fn new<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&HyperDual<f64>, &HyperDual<f64>) -> HyperDual<f64> + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            f: Arc::new(f),
            exact: None,
            singular_distance: None,
        }
    }

    /// Supplies a rational-arithmetic version, enabling the exact backend.
    pub fn with_exact<F>(mut self, f: F) -> Self
    where
        F: Fn(&HyperDual<BigRational>, &HyperDual<BigRational>) -> HyperDual<BigRational>
            + Send
            + Sync
            + 'static,
    {
        self.exact = Some(Arc::new(f));
        self
    }

    pub fn with_singular_distance<F>(mut self, f: F) -> Self
    where
        F: Fn(Point2) -> f64 + Send + Sync + 'static,
    {
        self.singular_distance = Some(Arc::new(f));
        self
    }
}

impl fmt::Debug for CustomPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomPotential")
            .field("name", &self.name)
            .field("exact", &self.exact.is_some())
            .finish()
    }
}

#[derive(Debug, Clone)]
pub enum PotentialSpec {
    Free,
    /// `ω (x² + y²)`
    Oscillator { omega: f64 },
    /// `ω (x² + y²) + α/x² + β/y²`
    SmorodinskyWinternitz { omega: f64, alpha: f64, beta: f64 },
    /// `ω r² + α/(r² cos² kθ) + β/(r² sin² kθ) + γ/r`
    Ttw {
        omega: f64,
        alpha: f64,
        beta: f64,
        k: f64,
        gamma: f64,
    },
    /// `−μ / r`
    Kepler { mu: f64 },
    Custom(CustomPotential),
}

impl PotentialSpec {
    pub fn sw(omega: f64, alpha: f64, beta: f64) -> Self {
        PotentialSpec::SmorodinskyWinternitz { omega, alpha, beta }
    }

    /// TTW with `γ = 0`. Rejects `k = 0`.
    pub fn ttw(omega: f64, alpha: f64, beta: f64, k: f64) -> Result<Self> {
        if k == 0.0 || !k.is_finite() {
            return Err(KtError::Domain(format!("TTW requires finite nonzero k, got {k}")));
        }
        Ok(PotentialSpec::Ttw {
            omega,
            alpha,
            beta,
            k,
            gamma: 0.0,
        })
    }

    /// Short stable identifier used in reports.
    pub fn descriptor(&self) -> String {
        match self {
            PotentialSpec::Free => "free".into(),
            PotentialSpec::Oscillator { omega } => format!("oscillator(omega={omega})"),
            PotentialSpec::SmorodinskyWinternitz { omega, alpha, beta } => {
                format!("sw(omega={omega},alpha={alpha},beta={beta})")
            }
            PotentialSpec::Ttw {
                omega,
                alpha,
                beta,
                k,
                gamma,
            } => format!("ttw(omega={omega},alpha={alpha},beta={beta},k={k},gamma={gamma})"),
            PotentialSpec::Kepler { mu } => format!("kepler(mu={mu})"),
            PotentialSpec::Custom(c) => format!("custom({})", c.name),
        }
    }

    /// Whether exact rational jets are available.
    pub fn has_rational_jets(&self) -> bool {
        match self {
            PotentialSpec::Free
            | PotentialSpec::Oscillator { .. }
            | PotentialSpec::SmorodinskyWinternitz { .. }
            | PotentialSpec::Kepler { .. } => true,
            PotentialSpec::Ttw { .. } => false,
            PotentialSpec::Custom(c) => c.exact.is_some(),
        }
    }

    /// Smallest distance-like quantity to the declared singular set, used to
    /// reject sample points. `f64::INFINITY` when there is none.
    pub fn singular_distance(&self, pt: Point2) -> f64 {
        match self {
            PotentialSpec::Free | PotentialSpec::Oscillator { .. } => f64::INFINITY,
            PotentialSpec::SmorodinskyWinternitz { .. } => pt.x.abs().min(pt.y.abs()),
            PotentialSpec::Kepler { .. } => pt.norm(),
            PotentialSpec::Ttw { k, .. } => {
                let (s, c) = (k * pt.theta()).sin_cos();
                // angular factors are compared against half the margin
                (2.0 * s.abs()).min(2.0 * c.abs()).min(pt.norm())
            }
            PotentialSpec::Custom(c) => c
                .singular_distance
                .as_ref()
                .map(|f| f(pt))
                .unwrap_or(f64::INFINITY),
        }
    }

    /// Sampling admissibility: `|x|,|y| ≥ margin` for SW, `r ≥ margin` for
    /// Kepler and TTW, and `|cos kθ|, |sin kθ| ≥ margin/2` for TTW.
    pub fn admits_sample(&self, pt: Point2, margin: f64) -> bool {
        pt.is_finite() && self.singular_distance(pt) >= margin
    }
}

const SINGULAR_EPS: f64 = 1e-300;

fn singular(pt: Point2, constraint: &str) -> KtError {
    KtError::SingularPoint {
        x: pt.x,
        y: pt.y,
        constraint: constraint.into(),
    }
}

fn oscillator_jet<S: Field>(omega: &S, x: &S, y: &S) -> Jet2<S> {
    let two = S::from_i64(2);
    Jet2 {
        v: omega.clone() * (x.clone() * x.clone() + y.clone() * y.clone()),
        vx: two.clone() * omega.clone() * x.clone(),
        vy: two.clone() * omega.clone() * y.clone(),
        vxx: two.clone() * omega.clone(),
        vxy: S::zero(),
        vyy: two * omega.clone(),
    }
}

/// `c / u²` as a function of a single coordinate `u`: value, first and second derivative.
fn inverse_square<S: Field>(c: &S, u: &S) -> (S, S, S) {
    let u2 = u.clone() * u.clone();
    let u3 = u2.clone() * u.clone();
    let u4 = u2.clone() * u2.clone();
    (
        c.clone() / u2,
        -(S::from_i64(2) * c.clone()) / u3,
        S::from_i64(6) * c.clone() / u4,
    )
}

fn sw_jet<S: Field>(omega: &S, alpha: &S, beta: &S, x: &S, y: &S) -> Jet2<S> {
    let mut j = oscillator_jet(omega, x, y);
    if !alpha.is_zero() {
        let (a0, a1, a2) = inverse_square(alpha, x);
        j.v = j.v + a0;
        j.vx = j.vx + a1;
        j.vxx = j.vxx + a2;
    }
    if !beta.is_zero() {
        let (b0, b1, b2) = inverse_square(beta, y);
        j.v = j.v + b0;
        j.vy = j.vy + b1;
        j.vyy = j.vyy + b2;
    }
    j
}

/// Kepler jet with the radius supplied (so it can be exact when `r` is rational).
fn kepler_jet<S: Field>(mu: &S, x: &S, y: &S, r: &S) -> Jet2<S> {
    let r2 = r.clone() * r.clone();
    let r3 = r2.clone() * r.clone();
    let r5 = r3.clone() * r2.clone();
    let three = S::from_i64(3);
    Jet2 {
        v: -(mu.clone() / r.clone()),
        vx: mu.clone() * x.clone() / r3.clone(),
        vy: mu.clone() * y.clone() / r3,
        vxx: mu.clone() * (r2.clone() - three.clone() * x.clone() * x.clone()) / r5.clone(),
        vxy: -(three.clone() * mu.clone() * x.clone() * y.clone()) / r5.clone(),
        vyy: mu.clone() * (r2 - three * y.clone() * y.clone()) / r5,
    }
}

/// Polar-form jet `(f, f_r, f_θ, f_rr, f_rθ, f_θθ)` mapped to Cartesian
/// derivatives by the chain rule.
fn polar_to_cartesian(r: f64, theta: f64, f: [f64; 6]) -> Jet2<f64> {
    let [f0, fr, ft, frr, frt, ftt] = f;
    let (s, c) = theta.sin_cos();
    let (rx, ry) = (c, s);
    let (tx, ty) = (-s / r, c / r);
    let (rxx, rxy, ryy) = (s * s / r, -s * c / r, c * c / r);
    let r2 = r * r;
    let (txx, txy, tyy) = (2.0 * s * c / r2, (s * s - c * c) / r2, -2.0 * s * c / r2);
    let second = |ra: f64, rb: f64, ta: f64, tb: f64, rab: f64, tab: f64| {
        frr * ra * rb + frt * (ra * tb + rb * ta) + ftt * ta * tb + fr * rab + ft * tab
    };
    Jet2 {
        v: f0,
        vx: fr * rx + ft * tx,
        vy: fr * ry + ft * ty,
        vxx: second(rx, rx, tx, tx, rxx, txx),
        vxy: second(rx, ry, tx, ty, rxy, txy),
        vyy: second(ry, ry, ty, ty, ryy, tyy),
    }
}

fn ttw_jet(omega: f64, alpha: f64, beta: f64, k: f64, gamma: f64, pt: Point2) -> Result<Jet2<f64>> {
    let r = pt.norm();
    if r < SINGULAR_EPS {
        return Err(singular(pt, "r = 0"));
    }
    let theta = pt.theta();
    let (s, c) = (k * theta).sin_cos();
    if alpha != 0.0 && c.abs() < 1e-14 {
        return Err(singular(pt, "cos(k theta) = 0"));
    }
    if beta != 0.0 && s.abs() < 1e-14 {
        return Err(singular(pt, "sin(k theta) = 0"));
    }
    let mut f = [
        omega * r * r,
        2.0 * omega * r,
        0.0,
        2.0 * omega,
        0.0,
        0.0,
    ];
    // radial factor r⁻² and its derivatives
    let (g0, g1, g2) = (1.0 / (r * r), -2.0 / (r * r * r), 6.0 / (r * r * r * r));
    let mut add_angular = |coef: f64, h0: f64, h1: f64, h2: f64| {
        f[0] += coef * g0 * h0;
        f[1] += coef * g1 * h0;
        f[2] += coef * g0 * h1;
        f[3] += coef * g2 * h0;
        f[4] += coef * g1 * h1;
        f[5] += coef * g0 * h2;
    };
    if alpha != 0.0 {
        // h = cos⁻²(kθ)
        let ic2 = 1.0 / (c * c);
        add_angular(
            alpha,
            ic2,
            2.0 * k * s * ic2 / c,
            2.0 * k * k * (ic2 + 3.0 * s * s * ic2 * ic2),
        );
    }
    if beta != 0.0 {
        // h = sin⁻²(kθ)
        let is2 = 1.0 / (s * s);
        add_angular(
            beta,
            is2,
            -2.0 * k * c * is2 / s,
            2.0 * k * k * (is2 + 3.0 * c * c * is2 * is2),
        );
    }
    if gamma != 0.0 {
        f[0] += gamma / r;
        f[1] -= gamma / (r * r);
        f[3] += 2.0 * gamma / (r * r * r);
    }
    Ok(polar_to_cartesian(r, theta, f))
}

/// Four hyper-dual passes: `(x,x)`, `(y,y)`, `(x,y)` and `(y,x)` seeds.
fn custom_jet(c: &CustomPotential, pt: Point2) -> Result<Jet2<f64>> {
    let seed = |a: (bool, bool), b: (bool, bool)| {
        (c.f)(
            &HyperDual::variable(pt.x, a.0, a.1),
            &HyperDual::variable(pt.y, b.0, b.1),
        )
    };
    let xx = seed((true, true), (false, false));
    let yy = seed((false, false), (true, true));
    let xy = seed((true, false), (false, true));
    let yx = seed((false, true), (true, false));
    let scale = 1.0_f64.max(xy.e12.abs()).max(yx.e12.abs());
    if (xy.e12 - yx.e12).abs() > 1e-12 * scale || !(xy.e12 - yx.e12).abs().is_finite() {
        return Err(KtError::AsymmetricHessian {
            vxy: xy.e12,
            vyx: yx.e12,
        });
    }
    let jet = Jet2 {
        v: xx.re,
        vx: xx.e1,
        vy: yy.e1,
        vxx: xx.e12,
        vxy: xy.e12,
        vyy: yy.e12,
    };
    if !jet.is_finite() {
        return Err(singular(pt, "custom potential is not finite"));
    }
    Ok(jet)
}

/// Value, gradient and Hessian of the potential at `pt`.
pub fn eval_potential(spec: &PotentialSpec, pt: Point2) -> Result<PotentialJet2> {
    if !pt.is_finite() {
        return Err(KtError::Domain("point must be finite".into()));
    }
    match spec {
        PotentialSpec::Free => Ok(Jet2::zero()),
        PotentialSpec::Oscillator { omega } => Ok(oscillator_jet(omega, &pt.x, &pt.y)),
        PotentialSpec::SmorodinskyWinternitz { omega, alpha, beta } => {
            if *alpha != 0.0 && pt.x == 0.0 {
                return Err(singular(pt, "x = 0"));
            }
            if *beta != 0.0 && pt.y == 0.0 {
                return Err(singular(pt, "y = 0"));
            }
            Ok(sw_jet(omega, alpha, beta, &pt.x, &pt.y))
        }
        PotentialSpec::Ttw {
            omega,
            alpha,
            beta,
            k,
            gamma,
        } => {
            if *k == 0.0 {
                return Err(KtError::Domain("TTW requires k != 0".into()));
            }
            ttw_jet(*omega, *alpha, *beta, *k, *gamma, pt)
        }
        PotentialSpec::Kepler { mu } => {
            let r = pt.norm();
            if r == 0.0 {
                return Err(singular(pt, "r = 0"));
            }
            Ok(kepler_jet(mu, &pt.x, &pt.y, &r))
        }
        PotentialSpec::Custom(c) => custom_jet(c, pt),
    }
}

/// Exact conversion of a finite float (every float is a dyadic rational).
pub fn rational_from_f64(v: f64) -> Result<BigRational> {
    BigRational::from_float(v).ok_or_else(|| KtError::Domain(format!("non-finite value {v}")))
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer();
    let d = q.denom();
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

/// Exact jet at a rational point, for families with rational jets.
pub fn eval_potential_exact(
    spec: &PotentialSpec,
    x: &BigRational,
    y: &BigRational,
) -> Result<Jet2<BigRational>> {
    let approx = || Point2::new(x.to_f64().unwrap_or(f64::NAN), y.to_f64().unwrap_or(f64::NAN));
    match spec {
        PotentialSpec::Free => Ok(Jet2::zero()),
        PotentialSpec::Oscillator { omega } => Ok(oscillator_jet(&rational_from_f64(*omega)?, x, y)),
        PotentialSpec::SmorodinskyWinternitz { omega, alpha, beta } => {
            if *alpha != 0.0 && x.is_zero() {
                return Err(singular(approx(), "x = 0"));
            }
            if *beta != 0.0 && y.is_zero() {
                return Err(singular(approx(), "y = 0"));
            }
            Ok(sw_jet(
                &rational_from_f64(*omega)?,
                &rational_from_f64(*alpha)?,
                &rational_from_f64(*beta)?,
                x,
                y,
            ))
        }
        PotentialSpec::Kepler { mu } => {
            let r2 = x * x + y * y;
            if r2.is_zero() {
                return Err(singular(approx(), "r = 0"));
            }
            let r = rational_sqrt(&r2).ok_or_else(|| {
                KtError::Domain("exact Kepler jets need points with rational radius".into())
            })?;
            Ok(kepler_jet(&rational_from_f64(*mu)?, x, y, &r))
        }
        PotentialSpec::Ttw { .. } => Err(KtError::BackendUnavailable(
            "TTW jets involve trigonometric functions of the polar angle".into(),
        )),
        PotentialSpec::Custom(c) => {
            let f = c.exact.as_ref().ok_or_else(|| {
                KtError::BackendUnavailable(format!("custom potential '{}' has no rational form", c.name))
            })?;
            let seed = |a: (bool, bool), b: (bool, bool)| {
                f(
                    &HyperDual::variable(x.clone(), a.0, a.1),
                    &HyperDual::variable(y.clone(), b.0, b.1),
                )
            };
            let xx = seed((true, true), (false, false));
            let yy = seed((false, false), (true, true));
            let xy = seed((true, false), (false, true));
            let yx = seed((false, true), (true, false));
            if xy.e12 != yx.e12 {
                return Err(KtError::AsymmetricHessian {
                    vxy: xy.e12.to_f64().unwrap_or(f64::NAN),
                    vyx: yx.e12.to_f64().unwrap_or(f64::NAN),
                });
            }
            Ok(Jet2 {
                v: xx.re,
                vx: xx.e1,
                vy: yy.e1,
                vxx: xx.e12,
                vxy: xy.e12,
                vyy: yy.e12,
            })
        }
    }
}

/// The SW family as a linear combination of three fixed potentials:
/// `ω·(x²+y²) + α·x⁻² + β·y⁻²`. Returns the three component jets.
pub fn sw_family_jets(pt: Point2) -> Result<[Jet2<f64>; 3]> {
    if pt.x == 0.0 || pt.y == 0.0 {
        return Err(singular(pt, "x = 0 or y = 0"));
    }
    Ok([
        sw_jet(&1.0, &0.0, &0.0, &pt.x, &pt.y),
        sw_jet(&0.0, &1.0, &0.0, &pt.x, &pt.y),
        sw_jet(&0.0, &0.0, &1.0, &pt.x, &pt.y),
    ])
}

/// Sum of jets, for potentials assembled from pieces.
pub fn jet_sum<S: Field>(jets: impl IntoIterator<Item = Jet2<S>>) -> Jet2<S> {
    jets.into_iter().fold(Jet2::zero(), Jet2::add)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn free_is_zero() {
        let j = eval_potential(&PotentialSpec::Free, Point2::new(3.0, -2.0)).unwrap();
        assert_eq!(j, Jet2::zero());
    }

    #[test]
    fn sw_jet_at_one_two() {
        let j = eval_potential(&PotentialSpec::sw(1.0, 1.0, 1.0), Point2::new(1.0, 2.0)).unwrap();
        assert_eq!(j.v, 6.25);
        assert_eq!(j.vx, 0.0);
        assert_eq!(j.vy, 4.0 - 0.25);
        assert_eq!(j.vxx, 8.0);
        assert_eq!(j.vxy, 0.0);
        assert_eq!(j.vyy, 2.375);
    }

    #[test]
    fn sw_singular_lines() {
        let sw = PotentialSpec::sw(1.0, 1.0, 1.0);
        match eval_potential(&sw, Point2::new(0.0, 1.0)) {
            Err(KtError::SingularPoint { constraint, .. }) => assert_eq!(constraint, "x = 0"),
            other => panic!("{other:?}"),
        }
        assert!(eval_potential(&PotentialSpec::sw(1.0, 1.0, 0.0), Point2::new(1.0, 0.0)).is_ok());
    }

    #[test]
    fn ttw_k1_equals_sw() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (w, a, b) = (1.3, 0.7, -2.1);
        let ttw = PotentialSpec::ttw(w, a, b, 1.0).unwrap();
        let sw = PotentialSpec::sw(w, a, b);
        let mut n = 0;
        while n < 100 {
            let p = Point2::new(rng.gen_range(-2.5..2.5), rng.gen_range(-2.5..2.5));
            if !sw.admits_sample(p, 0.1) {
                continue;
            }
            let d = eval_potential(&ttw, p).unwrap().max_abs_diff(&eval_potential(&sw, p).unwrap());
            let j = eval_potential(&sw, p).unwrap();
            let scale = [j.v, j.vx, j.vy, j.vxx, j.vxy, j.vyy]
                .iter()
                .fold(1.0_f64, |m, v| m.max(v.abs()));
            assert!(d < 1e-12 * scale, "{p:?}: {d}");
            n += 1;
        }
    }

    fn ttw_hyperdual(w: f64, a: f64, b: f64, k: f64, g: f64) -> CustomPotential {
        CustomPotential::new("ttw-hd", move |x, y| {
            let r2 = x.clone() * x.clone() + y.clone() * y.clone();
            let th = y.atan2(x).scale(k);
            let c2 = th.cos().powi(2);
            let s2 = th.sin().powi(2);
            r2.scale(w) + (r2.clone() * c2).recip().scale(a) + (r2.clone() * s2).recip().scale(b)
                + r2.sqrt().recip().scale(g)
        })
    }

    #[test]
    fn ttw_closed_form_matches_forward_mode() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &(k, g) in &[(2.0_f64.sqrt(), 0.0), (0.5, 0.3), (3.0, -1.0), (-2.0 / 3.0, 0.0)] {
            let spec = PotentialSpec::Ttw {
                omega: 0.8,
                alpha: 1.1,
                beta: 0.6,
                k,
                gamma: g,
            };
            let oracle = PotentialSpec::Custom(ttw_hyperdual(0.8, 1.1, 0.6, k, g));
            let mut n = 0;
            while n < 50 {
                let p = Point2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                if !spec.admits_sample(p, 0.1) {
                    continue;
                }
                let a = eval_potential(&spec, p).unwrap();
                let b = eval_potential(&oracle, p).unwrap();
                let scale = b.vxx.abs().max(b.vyy.abs()).max(1.0);
                assert!(a.max_abs_diff(&b) < 1e-10 * scale, "k={k} {p:?}: {a:?} vs {b:?}");
                n += 1;
            }
        }
    }

    #[test]
    fn custom_matches_finite_differences() {
        let c = CustomPotential::new("mix", |x, y| {
            (x.clone() * y.clone()).sin() + x.exp().scale(0.5) + (y.clone() * y.clone() + 1.0).ln()
        });
        let spec = PotentialSpec::Custom(c);
        let h = 1e-4;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let p = Point2::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
            let j = eval_potential(&spec, p).unwrap();
            let gx = |q: Point2| eval_potential(&spec, q).unwrap().vx;
            let gy = |q: Point2| eval_potential(&spec, q).unwrap().vy;
            let fd_xx = (gx(Point2::new(p.x + h, p.y)) - gx(Point2::new(p.x - h, p.y))) / (2.0 * h);
            let fd_xy = (gx(Point2::new(p.x, p.y + h)) - gx(Point2::new(p.x, p.y - h))) / (2.0 * h);
            let fd_yy = (gy(Point2::new(p.x, p.y + h)) - gy(Point2::new(p.x, p.y - h))) / (2.0 * h);
            for (ad, fd) in [(j.vxx, fd_xx), (j.vxy, fd_xy), (j.vyy, fd_yy)] {
                assert!((ad - fd).abs() <= 1e-6 * ad.abs().max(1.0), "{ad} vs {fd}");
            }
        }
    }

    #[test]
    fn asymmetric_custom_is_rejected() {
        // inspects the seed directions, so the two mixed passes disagree
        let c = CustomPotential::new("bad", |x, y| {
            let mut out = x.clone() * y.clone();
            out.e12 = out.e12 + x.e1;
            out
        });
        assert!(matches!(
            eval_potential(&PotentialSpec::Custom(c), Point2::new(0.3, 0.4)),
            Err(KtError::AsymmetricHessian { .. })
        ));
    }

    #[test]
    fn exact_jets_match_float() {
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let sw = PotentialSpec::sw(1.0, 2.0, 3.0);
        let e = eval_potential_exact(&sw, &q(3, 4), &q(5, 7)).unwrap();
        let f = eval_potential(&sw, Point2::new(0.75, 5.0 / 7.0)).unwrap();
        assert!((e.vyy.to_f64().unwrap() - f.vyy).abs() < 1e-12 * f.vyy.abs());
        let kep = PotentialSpec::Kepler { mu: 1.0 };
        let e = eval_potential_exact(&kep, &q(3, 5), &q(4, 5)).unwrap();
        let f = eval_potential(&kep, Point2::new(0.6, 0.8)).unwrap();
        assert!((e.vxy.to_f64().unwrap() - f.vxy).abs() < 1e-14);
        assert!(eval_potential_exact(&kep, &q(1, 2), &q(1, 3)).is_err());
        assert!(matches!(
            eval_potential_exact(&PotentialSpec::ttw(1.0, 1.0, 1.0, 2.0).unwrap(), &q(1, 2), &q(1, 2)),
            Err(KtError::BackendUnavailable(_))
        ));
    }

    #[test]
    fn ttw_rejects_zero_k() {
        assert!(PotentialSpec::ttw(1.0, 1.0, 1.0, 0.0).is_err());
    }
}
