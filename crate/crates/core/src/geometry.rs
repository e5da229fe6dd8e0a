//! Points, phase points and elements of SE(2).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{KtError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dist_sq(&self, other: &Point2) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn theta(&self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn to_polar(&self) -> Result<PolarPoint2> {
        PolarPoint2::new(self.norm(), self.theta())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarPoint2 {
    r: f64,
    theta: f64,
}

impl PolarPoint2 {
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() || !theta.is_finite() {
            return Err(KtError::Domain(format!("polar radius must be positive, got {r}")));
        }
        Ok(Self { r, theta })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn to_cartesian(&self) -> Point2 {
        Point2::new(self.r * self.theta.cos(), self.r * self.theta.sin())
    }
}

/// Configuration and momenta of a point in T*E².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x: f64,
    pub y: f64,
    pub px: f64,
    pub py: f64,
}

impl PhasePoint {
    pub fn new(x: f64, y: f64, px: f64, py: f64) -> Self {
        Self { x, y, px, py }
    }

    pub fn position(&self) -> Point2 {
        Point2::new(self.x, self.y)
    }
}

/// Maps an angle into (-π, π].
pub fn normalize_angle(a: f64) -> f64 {
    let mut t = a % (2.0 * PI);
    if t <= -PI {
        t += 2.0 * PI;
    } else if t > PI {
        t -= 2.0 * PI;
    }
    t
}

/// A rigid motion `q ↦ R(p3) q + (p1, p2)` of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SE2Element {
    p1: f64,
    p2: f64,
    p3: f64,
}

impl SE2Element {
    pub fn new(p1: f64, p2: f64, p3: f64) -> Self {
        Self {
            p1,
            p2,
            p3: normalize_angle(p3),
        }
    }

    pub fn identity() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    pub fn translation(p1: f64, p2: f64) -> Self {
        Self::new(p1, p2, 0.0)
    }

    pub fn rotation(angle: f64) -> Self {
        Self::new(0.0, 0.0, angle)
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn p3(&self) -> f64 {
        self.p3
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &SE2Element) -> SE2Element {
        let (s, c) = self.p3.sin_cos();
        SE2Element::new(
            c * other.p1 - s * other.p2 + self.p1,
            s * other.p1 + c * other.p2 + self.p2,
            self.p3 + other.p3,
        )
    }

    pub fn inverse(&self) -> SE2Element {
        let (s, c) = self.p3.sin_cos();
        SE2Element::new(
            -(c * self.p1 + s * self.p2),
            -(-s * self.p1 + c * self.p2),
            -self.p3,
        )
    }

    pub fn apply(&self, pt: Point2) -> Point2 {
        let (s, c) = self.p3.sin_cos();
        Point2::new(
            pt.x * c - pt.y * s + self.p1,
            pt.x * s + pt.y * c + self.p2,
        )
    }
}

impl Default for SE2Element {
    fn default() -> Self {
        Self::identity()
    }
}
