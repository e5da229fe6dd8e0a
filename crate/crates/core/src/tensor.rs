//! Killing two-tensors of the Euclidean plane.
//!
//! Every Killing two-tensor of E² is determined by six constants `b1..b6`:
//!
//! ```text
//! K¹¹ = b1 + 2 b4 y + b6 y²
//! K¹² = b3 − b4 x − b5 y − b6 x y
//! K²² = b2 + 2 b5 x + b6 x²
//! ```
//!
//! with the quadratic form `F = K¹¹ p₁² + 2 K¹² p₁ p₂ + K²² p₂²`.

use std::ops::{Add, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{KtError, Result};
use crate::geometry::{Point2, PolarPoint2};

/// The six constants of a Killing two-tensor. The zero vector is a valid
/// vector (e.g. the result of a linear combination) but is rejected by every
/// operation that needs an actual tensor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct KtParams([f64; 6]);

impl KtParams {
    /// Builds a tensor; rejects non-finite entries and the zero vector.
    pub fn new(b: [f64; 6]) -> Result<Self> {
        let p = Self::vector(b)?;
        p.require_nonzero()?;
        Ok(p)
    }

    /// Builds a parameter vector, allowing zero.
    pub fn vector(b: [f64; 6]) -> Result<Self> {
        if b.iter().any(|v| !v.is_finite()) {
            return Err(KtError::Domain("tensor parameters must be finite".into()));
        }
        Ok(Self(b))
    }

    pub(crate) fn raw(b: [f64; 6]) -> Self {
        Self(b)
    }

    pub fn zero() -> Self {
        Self([0.0; 6])
    }

    /// Unit vector along slot `i` (0-based).
    pub fn unit(i: usize) -> Self {
        let mut b = [0.0; 6];
        b[i] = 1.0;
        Self(b)
    }

    pub fn as_array(&self) -> &[f64; 6] {
        &self.0
    }

    pub fn to_array(self) -> [f64; 6] {
        self.0
    }

    pub fn b1(&self) -> f64 {
        self.0[0]
    }
    pub fn b2(&self) -> f64 {
        self.0[1]
    }
    pub fn b3(&self) -> f64 {
        self.0[2]
    }
    pub fn b4(&self) -> f64 {
        self.0[3]
    }
    pub fn b5(&self) -> f64 {
        self.0[4]
    }
    pub fn b6(&self) -> f64 {
        self.0[5]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0.0)
    }

    pub fn require_nonzero(&self) -> Result<()> {
        if self.is_zero() {
            Err(KtError::ZeroTensor)
        } else {
            Ok(())
        }
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &KtParams) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, s: f64) -> KtParams {
        KtParams(self.0.map(|v| v * s))
    }

    pub fn max_abs_diff(&self, other: &KtParams) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Unit norm with the first nonzero coordinate positive.
    pub fn normalized(&self) -> Result<KtParams> {
        self.require_nonzero()?;
        let n = self.norm();
        let mut v = self.scale(1.0 / n);
        if let Some(first) = v.0.iter().find(|c| c.abs() > 1e-12) {
            if *first < 0.0 {
                v = -v;
            }
        }
        Ok(v)
    }
}

impl Index<usize> for KtParams {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for KtParams {
    type Output = KtParams;
    fn add(self, o: KtParams) -> KtParams {
        KtParams(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for KtParams {
    type Output = KtParams;
    fn sub(self, o: KtParams) -> KtParams {
        KtParams(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Neg for KtParams {
    type Output = KtParams;
    fn neg(self) -> KtParams {
        KtParams(self.0.map(|v| -v))
    }
}

impl Mul<KtParams> for f64 {
    type Output = KtParams;
    fn mul(self, p: KtParams) -> KtParams {
        p.scale(self)
    }
}

/// Contravariant symmetric 2×2 tensor components at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymMatrix2 {
    pub k11: f64,
    pub k12: f64,
    pub k22: f64,
}

impl SymMatrix2 {
    pub fn new(k11: f64, k12: f64, k22: f64) -> Self {
        Self { k11, k12, k22 }
    }

    pub fn identity() -> Self {
        Self::new(1.0, 0.0, 1.0)
    }

    /// `J K Jᵀ` for a 2×2 matrix `J` given row-major.
    pub fn congruence(&self, j: [[f64; 2]; 2]) -> SymMatrix2 {
        let k = [[self.k11, self.k12], [self.k12, self.k22]];
        let mut out = [[0.0; 2]; 2];
        for (a, row) in out.iter_mut().enumerate() {
            for (b, cell) in row.iter_mut().enumerate() {
                let mut s = 0.0;
                for i in 0..2 {
                    for l in 0..2 {
                        s += j[a][i] * k[i][l] * j[b][l];
                    }
                }
                *cell = s;
            }
        }
        SymMatrix2::new(out[0][0], 0.5 * (out[0][1] + out[1][0]), out[1][1])
    }

    /// `K(p, p)` with the doubled off-diagonal term.
    pub fn quadratic_form(&self, p1: f64, p2: f64) -> f64 {
        self.k11 * p1 * p1 + 2.0 * self.k12 * p1 * p2 + self.k22 * p2 * p2
    }

    pub fn max_abs_diff(&self, o: &SymMatrix2) -> f64 {
        (self.k11 - o.k11)
            .abs()
            .max((self.k12 - o.k12).abs())
            .max((self.k22 - o.k22).abs())
    }
}

/// Cartesian components of the tensor at `pt`.
pub fn kt_components_at(params: &KtParams, pt: Point2) -> Result<SymMatrix2> {
    params.require_nonzero()?;
    Ok(components_unchecked(params, pt))
}

pub(crate) fn components_unchecked(params: &KtParams, pt: Point2) -> SymMatrix2 {
    let [b1, b2, b3, b4, b5, b6] = params.0;
    let (x, y) = (pt.x, pt.y);
    SymMatrix2::new(
        b1 + 2.0 * b4 * y + b6 * y * y,
        b3 - b4 * x - b5 * y - b6 * x * y,
        b2 + 2.0 * b5 * x + b6 * x * x,
    )
}

/// Components in the polar frame `(∂r, ∂θ)`, obtained from the Cartesian
/// ones by the contravariant transformation law with
/// `J = ∂(r, θ)/∂(x, y)`.
pub fn kt_to_polar_components(params: &KtParams, pt: PolarPoint2) -> Result<SymMatrix2> {
    params.require_nonzero()?;
    let r = pt.r();
    let (s, c) = pt.theta().sin_cos();
    let cart = components_unchecked(params, pt.to_cartesian());
    Ok(cart.congruence([[c, s], [-s / r, c / r]]))
}

/// Componentwise linear combination. The result may be the zero vector.
pub fn lincomb(coeffs: &[f64], tensors: &[KtParams]) -> Result<KtParams> {
    if coeffs.len() != tensors.len() || tensors.is_empty() {
        return Err(KtError::LengthMismatch {
            coeffs: coeffs.len(),
            tensors: tensors.len(),
        });
    }
    let mut out = [0.0; 6];
    for (c, t) in coeffs.iter().zip(tensors) {
        for (o, v) in out.iter_mut().zip(t.0.iter()) {
            *o += c * v;
        }
    }
    KtParams::vector(out)
}

/// The metric `g = ∂x⊙∂x + ∂y⊙∂y`.
pub fn metric_kt() -> KtParams {
    KtParams([1.0, 1.0, 0.0, 0.0, 0.0, 0.0])
}

/// Rotational tensor centred at `(a, b)`:
/// `K¹¹ = (y−b)²`, `K¹² = −(x−a)(y−b)`, `K²² = (x−a)²`.
pub fn polar_kt_at(a: f64, b: f64) -> KtParams {
    // written as differences so that a = b = 0 gives +0.0 entries
    KtParams([b * b, a * a, 0.0 - a * b, 0.0 - b, 0.0 - a, 1.0])
}

/// Elliptic-hyperbolic tensor in canonical position with foci `(±√ℓ, 0)`.
pub fn eh_canonical_kt(ell: f64) -> Result<KtParams> {
    if !(ell > 0.0) || !ell.is_finite() {
        return Err(KtError::Domain(format!("ell must be positive, got {ell}")));
    }
    Ok(KtParams([ell, 0.0, 0.0, 0.0, 0.0, 1.0]))
}

/// `u ⊗ u` for the unit vector `u = (cos φ, sin φ)`: Cartesian coordinates
/// rotated by `φ`.
pub fn cartesian_rotated_kt(phi: f64) -> KtParams {
    let (s, c) = phi.sin_cos();
    KtParams([c * c, s * s, s * c, 0.0, 0.0, 0.0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: SymMatrix2, b: SymMatrix2, tol: f64) {
        assert!(a.max_abs_diff(&b) <= tol, "{a:?} vs {b:?}");
    }

    #[test]
    fn metric_is_identity_everywhere() {
        for pt in [Point2::new(0.0, 0.0), Point2::new(-3.0, 7.5)] {
            close(kt_components_at(&metric_kt(), pt).unwrap(), SymMatrix2::identity(), 0.0);
        }
    }

    #[test]
    fn eh_components_at_point() {
        let k = eh_canonical_kt(4.0).unwrap();
        close(
            kt_components_at(&k, Point2::new(1.0, 2.0)).unwrap(),
            SymMatrix2::new(8.0, -2.0, 1.0),
            0.0,
        );
    }

    #[test]
    fn rotational_components() {
        let k = KtParams::new([0.0, 0.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        close(
            kt_components_at(&k, Point2::new(1.0, 1.0)).unwrap(),
            SymMatrix2::new(1.0, -1.0, 1.0),
            0.0,
        );
    }

    #[test]
    fn zero_tensor_rejected() {
        assert_eq!(KtParams::new([0.0; 6]), Err(KtError::ZeroTensor));
        assert_eq!(
            kt_components_at(&KtParams::zero(), Point2::ORIGIN),
            Err(KtError::ZeroTensor)
        );
        assert!(KtParams::new([f64::NAN, 0.0, 0.0, 0.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn polar_components_examples() {
        let pt = PolarPoint2::new(2.0, 0.7).unwrap();
        close(
            kt_to_polar_components(&metric_kt(), pt).unwrap(),
            SymMatrix2::new(1.0, 0.0, 0.25),
            1e-15,
        );
        let rot = polar_kt_at(0.0, 0.0);
        close(
            kt_to_polar_components(&rot, pt).unwrap(),
            SymMatrix2::new(0.0, 0.0, 1.0),
            1e-15,
        );
        let (r, th) = (1.7, -2.2);
        let got = kt_to_polar_components(&cartesian_rotated_kt(0.0), PolarPoint2::new(r, th).unwrap())
            .unwrap();
        let (s, c) = f64::sin_cos(th);
        close(got, SymMatrix2::new(c * c, -s * c / r, s * s / (r * r)), 1e-15);
    }

    #[test]
    fn constructors() {
        assert_eq!(polar_kt_at(0.0, 0.0).to_array(), [0.0, 0.0, -0.0, -0.0, -0.0, 1.0]);
        assert_eq!(polar_kt_at(1.0, 0.0).to_array(), [0.0, 1.0, -0.0, -0.0, -1.0, 1.0]);
        assert_eq!(cartesian_rotated_kt(0.0).to_array(), [1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(eh_canonical_kt(0.0).is_err());
        assert!(eh_canonical_kt(-1.0).is_err());
        // polar_kt_at(a, b) really is (y−b)², −(x−a)(y−b), (x−a)².
        let (a, b) = (1.3, -0.6);
        let pt = Point2::new(0.4, 2.1);
        close(
            kt_components_at(&polar_kt_at(a, b), pt).unwrap(),
            SymMatrix2::new(
                (pt.y - b).powi(2),
                -(pt.x - a) * (pt.y - b),
                (pt.x - a).powi(2),
            ),
            1e-14,
        );
    }

    #[test]
    fn lincomb_examples() {
        let k = eh_canonical_kt(2.0).unwrap();
        let kp = cartesian_rotated_kt(0.3);
        assert_eq!(lincomb(&[1.0, 0.0], &[k, kp]).unwrap(), k);
        let e1 = KtParams::unit(0);
        let e6 = KtParams::unit(5);
        assert_eq!(
            lincomb(&[1.0, 1.0], &[e1, e6]).unwrap().to_array(),
            [1.0, 0.0, 0.0, 0.0, 0.0, 1.0]
        );
        let z = lincomb(&[-1.0, 1.0], &[k, k]).unwrap();
        assert!(z.is_zero());
        assert_eq!(kt_components_at(&z, Point2::ORIGIN), Err(KtError::ZeroTensor));
        assert!(matches!(
            lincomb(&[1.0], &[k, kp]),
            Err(KtError::LengthMismatch { .. })
        ));
        assert!(lincomb(&[], &[]).is_err());
    }

    /// Killing equation ∂_(i K_jk) = 0, checked by central differences.
    #[test]
    fn components_satisfy_killing_equation() {
        let p = KtParams::new([0.3, -1.2, 0.7, 0.4, -0.9, 1.1]).unwrap();
        let h = 1e-5;
        let at = |x: f64, y: f64| components_unchecked(&p, Point2::new(x, y));
        let (x, y) = (0.8, -0.3);
        let dx = |f: fn(&SymMatrix2) -> f64| (f(&at(x + h, y)) - f(&at(x - h, y))) / (2.0 * h);
        let dy = |f: fn(&SymMatrix2) -> f64| (f(&at(x, y + h)) - f(&at(x, y - h))) / (2.0 * h);
        assert!(dx(|k| k.k11).abs() < 1e-8);
        assert!(dy(|k| k.k22).abs() < 1e-8);
        assert!((2.0 * dx(|k| k.k12) + dy(|k| k.k11)).abs() < 1e-8);
        assert!((2.0 * dy(|k| k.k12) + dx(|k| k.k22)).abs() < 1e-8);
    }

    fn params() -> impl Strategy<Value = [f64; 6]> {
        prop::array::uniform6(-3.0f64..3.0)
    }

    proptest! {
        #[test]
        fn components_are_linear(a in params(), b in params(), ca in -2.0f64..2.0, cb in -2.0f64..2.0,
                                 x in -3.0f64..3.0, y in -3.0f64..3.0) {
            let (ka, kb) = (KtParams::raw(a), KtParams::raw(b));
            let pt = Point2::new(x, y);
            let comb = components_unchecked(&lincomb(&[ca, cb], &[ka, kb]).unwrap(), pt);
            let (ma, mb) = (components_unchecked(&ka, pt), components_unchecked(&kb, pt));
            let expect = SymMatrix2::new(ca * ma.k11 + cb * mb.k11, ca * ma.k12 + cb * mb.k12, ca * ma.k22 + cb * mb.k22);
            prop_assert!(comb.max_abs_diff(&expect) < 1e-12);
        }

        /// The quadratic form is a scalar: F(p) computed in Cartesian momenta
        /// equals F computed in polar momenta p_r = c p_x + s p_y,
        /// p_θ = −r s p_x + r c p_y.
        #[test]
        fn polar_components_preserve_quadratic_form(b in params(), r in 0.5f64..3.0, th in -3.1f64..3.1,
                                                    px in -2.0f64..2.0, py in -2.0f64..2.0) {
            prop_assume!(b.iter().any(|v| v.abs() > 1e-3));
            let k = KtParams::new(b).unwrap();
            let pp = PolarPoint2::new(r, th).unwrap();
            let cart = kt_components_at(&k, pp.to_cartesian()).unwrap();
            let pol = kt_to_polar_components(&k, pp).unwrap();
            let (s, c) = th.sin_cos();
            let f_cart = cart.quadratic_form(px, py);
            let f_pol = pol.quadratic_form(c * px + s * py, -r * s * px + r * c * py);
            prop_assert!((f_cart - f_pol).abs() < 1e-12 * (1.0 + f_cart.abs()));
        }
    }
}
