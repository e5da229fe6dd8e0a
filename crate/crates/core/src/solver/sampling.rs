use std::f64::consts::PI;

use num::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{KtError, Result};
use crate::geometry::Point2;
use crate::potential::{eval_potential, PotentialSpec};

/// Offset added to the seed for the independent validation set.
pub const VALIDATION_SEED_OFFSET: u64 = 1_000_003;

/// Where and how many points to sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingConfig {
    pub count: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub margin: f64,
    pub seed: u64,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self {
            count: 240,
            r_min: 0.5,
            r_max: 2.5,
            margin: 0.1,
            seed: 42,
        }
    }
}

impl SamplingConfig {
    pub fn with_count(mut self, count: usize) -> Self {
        self.count = count;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validation(&self) -> Self {
        self.with_seed(self.seed.wrapping_add(VALIDATION_SEED_OFFSET))
    }

    pub fn check(&self) -> Result<()> {
        if self.count < 12 {
            return Err(KtError::Domain(format!("need at least 12 samples, got {}", self.count)));
        }
        if !(self.r_min > 0.0 && self.r_max > self.r_min && self.r_max.is_finite()) {
            return Err(KtError::Domain(format!(
                "invalid annulus [{}, {}]",
                self.r_min, self.r_max
            )));
        }
        if !(self.margin >= 0.0) {
            return Err(KtError::Domain("margin must be nonnegative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    pub points: Vec<Point2>,
    pub r_min: f64,
    pub r_max: f64,
    pub margin: f64,
    pub seed: u64,
    pub count: usize,
}

pub fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base) as f64 * f;
        i /= base;
        f *= inv;
    }
    out
}

/// Shifted Halton points (bases 2, 3) mapped area-uniformly onto the annulus,
/// skipping points closer than `margin` to the potential's singular set or
/// where it cannot be evaluated.
pub fn sample_points(spec: &PotentialSpec, cfg: &SamplingConfig) -> Result<SampleSet> {
    cfg.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let shift: (f64, f64) = (rng.gen(), rng.gen());
    let (a2, b2) = (cfg.r_min * cfg.r_min, cfg.r_max * cfg.r_max);
    let max_tries = 200 * cfg.count as u64;
    let mut points = Vec::with_capacity(cfg.count);
    let mut i = 1u64;
    while points.len() < cfg.count {
        if i > max_tries {
            return Err(KtError::SamplingExhausted {
                wanted: cfg.count,
                found: points.len(),
            });
        }
        let u = (radical_inverse(i, 2) + shift.0).fract();
        let v = (radical_inverse(i, 3) + shift.1).fract();
        i += 1;
        let r = (a2 + u * (b2 - a2)).sqrt();
        let t = 2.0 * PI * v - PI;
        let p = Point2::new(r * t.cos(), r * t.sin());
        if !spec.admits_sample(p, cfg.margin) {
            continue;
        }
        match eval_potential(spec, p) {
            Ok(j) if j.is_finite() => points.push(p),
            _ => continue,
        }
    }
    Ok(SampleSet {
        points,
        r_min: cfg.r_min,
        r_max: cfg.r_max,
        margin: cfg.margin,
        seed: cfg.seed,
        count: cfg.count,
    })
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn to_point(x: &BigRational, y: &BigRational) -> Point2 {
    use num::ToPrimitive;
    Point2::new(x.to_f64().unwrap_or(f64::NAN), y.to_f64().unwrap_or(f64::NAN))
}

/// Rational sample points for the exact backend.
///
/// Generic families use the lattice `x = 1/2 + i/7`, `y = 1/2 + j/11`
/// inside the annulus. Kepler jets need a rational radius, so its points
/// are `r ((1 − t²)/(1 + t²), 2t/(1 + t²))` with `r = 1/2 + i/7` and
/// `t = j/11` (Pythagorean parametrisation of rational circle points).
/// The candidates are shuffled with the configured seed.
pub fn rational_points(spec: &PotentialSpec, cfg: &SamplingConfig) -> Result<Vec<(BigRational, BigRational)>> {
    cfg.check()?;
    let mut cands = Vec::new();
    let (a2, b2) = (cfg.r_min * cfg.r_min, cfg.r_max * cfg.r_max);
    if matches!(spec, PotentialSpec::Kepler { .. }) {
        for i in 0..15 {
            let r = q(1, 2) + q(i, 7);
            for j in -11..=11 {
                let t = q(j, 11);
                let d = q(1, 1) + &t * &t;
                let x = &r * (q(1, 1) - &t * &t) / &d;
                let y = &r * (q(2, 1) * &t) / &d;
                cands.push((-&x, y.clone()));
                cands.push((x, y));
            }
        }
    } else {
        for i in -21..21 {
            for j in -33..33 {
                cands.push((q(1, 2) + q(i, 7), q(1, 2) + q(j, 11)));
            }
        }
    }
    let mut pts: Vec<_> = cands
        .into_iter()
        .filter(|(x, y)| {
            let p = to_point(x, y);
            let rr = p.x * p.x + p.y * p.y;
            rr >= a2 && rr <= b2 && spec.admits_sample(p, cfg.margin)
        })
        .collect();
    pts.sort();
    pts.dedup();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    pts.shuffle(&mut rng);
    if pts.len() < cfg.count.min(12) {
        return Err(KtError::SamplingExhausted {
            wanted: cfg.count,
            found: pts.len(),
        });
    }
    pts.truncate(cfg.count);
    Ok(pts)
}
