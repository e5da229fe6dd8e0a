//! Second-order forward-mode differentiation with hyper-dual numbers.
//!
//! A hyper-dual number `a + b ε₁ + c ε₂ + d ε₁ε₂` with `ε₁² = ε₂² = 0`
//! carries one value, two directional first derivatives and the mixed
//! second derivative along the two seed directions, all exactly (no
//! truncation error). The arithmetic is generic over [`Field`] so the same
//! code runs in `f64` and in exact rationals.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{BigRational, Num};

/// Scalar types usable in hyper-dual arithmetic.
pub trait Field: Num + Clone + Neg<Output = Self> + std::fmt::Debug {
    fn from_i64(v: i64) -> Self;
}

impl Field for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
}

impl Field for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(v.into())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HyperDual<S> {
    pub re: S,
    pub e1: S,
    pub e2: S,
    pub e12: S,
}

impl<S: Field> HyperDual<S> {
    pub fn new(re: S, e1: S, e2: S, e12: S) -> Self {
        Self { re, e1, e2, e12 }
    }

    pub fn constant(re: S) -> Self {
        Self::new(re, S::zero(), S::zero(), S::zero())
    }

    /// A variable seeded along both infinitesimal directions as requested.
    pub fn variable(re: S, d1: bool, d2: bool) -> Self {
        let pick = |on: bool| if on { S::one() } else { S::zero() };
        Self::new(re, pick(d1), pick(d2), S::zero())
    }

    /// Lifts a scalar function with value `f0`, first derivative `f1` and
    /// second derivative `f2` at `self.re` (chain rule).
    pub fn lift(&self, f0: S, f1: S, f2: S) -> Self {
        Self::new(
            f0,
            f1.clone() * self.e1.clone(),
            f1.clone() * self.e2.clone(),
            f1 * self.e12.clone() + f2 * self.e1.clone() * self.e2.clone(),
        )
    }

    pub fn recip(&self) -> Self {
        let inv = S::one() / self.re.clone();
        let inv2 = inv.clone() * inv.clone();
        let inv3 = inv2.clone() * inv.clone();
        self.lift(inv, -inv2, S::from_i64(2) * inv3)
    }

    pub fn powi(&self, n: i32) -> Self {
        if n == 0 {
            return Self::constant(S::one());
        }
        if n < 0 {
            return self.recip().powi(-n);
        }
        let mut out = self.clone();
        for _ in 1..n {
            out = out * self.clone();
        }
        out
    }

    pub fn scale(&self, s: S) -> Self {
        Self::new(
            self.re.clone() * s.clone(),
            self.e1.clone() * s.clone(),
            self.e2.clone() * s.clone(),
            self.e12.clone() * s,
        )
    }
}

impl HyperDual<f64> {
    pub fn sqrt(&self) -> Self {
        let s = self.re.sqrt();
        self.lift(s, 0.5 / s, -0.25 / (s * s * s))
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.re.sin_cos();
        self.lift(s, c, -s)
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.re.sin_cos();
        self.lift(c, -s, -c)
    }

    pub fn exp(&self) -> Self {
        let e = self.re.exp();
        self.lift(e, e, e)
    }

    pub fn ln(&self) -> Self {
        self.lift(self.re.ln(), 1.0 / self.re, -1.0 / (self.re * self.re))
    }

    /// `atan2(self, x)`, the polar angle of `(x, self)`.
    pub fn atan2(&self, x: &HyperDual<f64>) -> Self {
        let y = self;
        let (x0, y0) = (x.re, y.re);
        let r2 = x0 * x0 + y0 * y0;
        let r4 = r2 * r2;
        let (tx, ty) = (-y0 / r2, x0 / r2);
        let (txx, txy, tyy) = (2.0 * x0 * y0 / r4, (y0 * y0 - x0 * x0) / r4, -2.0 * x0 * y0 / r4);
        HyperDual::new(
            y0.atan2(x0),
            tx * x.e1 + ty * y.e1,
            tx * x.e2 + ty * y.e2,
            tx * x.e12
                + ty * y.e12
                + txx * x.e1 * x.e2
                + txy * (x.e1 * y.e2 + x.e2 * y.e1)
                + tyy * y.e1 * y.e2,
        )
    }
}

impl<S: Field> Add for HyperDual<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.e1 + o.e1, self.e2 + o.e2, self.e12 + o.e12)
    }
}

impl<S: Field> Sub for HyperDual<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.e1 - o.e1, self.e2 - o.e2, self.e12 - o.e12)
    }
}

impl<S: Field> Mul for HyperDual<S> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.re.clone() * o.re.clone(),
            self.re.clone() * o.e1.clone() + self.e1.clone() * o.re.clone(),
            self.re.clone() * o.e2.clone() + self.e2.clone() * o.re.clone(),
            self.re * o.e12 + self.e1 * o.e2 + self.e2 * o.e1 + self.e12 * o.re,
        )
    }
}

impl<S: Field> Div for HyperDual<S> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

impl<S: Field> Neg for HyperDual<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.e1, -self.e2, -self.e12)
    }
}

impl<S: Field> Add<S> for HyperDual<S> {
    type Output = Self;
    fn add(mut self, o: S) -> Self {
        self.re = self.re + o;
        self
    }
}

impl<S: Field> Mul<S> for HyperDual<S> {
    type Output = Self;
    fn mul(self, o: S) -> Self {
        self.scale(o)
    }
}
