//! Randomized search for two points of a sector with the same image under a
//! polynomial.
//!
//! Independent random pairs almost never collide, so each trial draws one
//! point `z1` and solves `P(z) = P(z1)` exactly for its partners. A partner
//! inside the sector and away from `z1` is a collision.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::safe::wrap_angle;
use crate::singular::DEDUP_RADIUS;

/// Relative tolerance on `|P(z1) - P(z2)|` for a collision.
pub const COLLIDE_TOL: f64 = 1e-9;
/// Minimum number of trials.
pub const MIN_TRIALS: usize = 1000;

/// `{z : |Arg(z - vertex) - axis| < half_angle}`; points are sampled with
/// `|z - vertex| ≤ radius`. A half-angle of `π` or more is the whole plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sector {
    pub vertex: Complex64,
    pub axis: f64,
    pub half_angle: f64,
    pub radius: f64,
}

impl Sector {
    pub fn new(vertex: Complex64, axis: f64, half_angle: f64, radius: f64) -> Result<Self> {
        if !(half_angle > 0.0 && radius > 0.0 && radius.is_finite() && axis.is_finite()) {
            return Err(Error::Precondition(format!(
                "sector needs positive half-angle and radius, got {half_angle} and {radius}"
            )));
        }
        Ok(Sector {
            vertex,
            axis,
            half_angle,
            radius,
        })
    }

    pub fn whole_plane(radius: f64) -> Result<Self> {
        Sector::new(Complex64::new(0.0, 0.0), 0.0, PI, radius)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        let w = z - self.vertex;
        if w.norm() == 0.0 {
            return false;
        }
        self.half_angle >= PI || wrap_angle(w.arg() - self.axis).abs() < self.half_angle
    }

    /// Area-uniform sample.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Complex64 {
        let r = self.radius * rng.gen::<f64>().sqrt();
        let h = self.half_angle.min(PI);
        let theta = self.axis + h * (2.0 * rng.gen::<f64>() - 1.0);
        self.vertex + Complex64::from_polar(r, theta)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InjectivityResult {
    pub collision: Option<(Complex64, Complex64)>,
    pub trials_run: usize,
}

pub fn injectivity_falsifier<R: Rng>(
    p: &Poly,
    sector: &Sector,
    trials: usize,
    rng: &mut R,
) -> Result<InjectivityResult> {
    if trials < MIN_TRIALS {
        return Err(Error::Precondition(format!(
            "need at least {MIN_TRIALS} trials, got {trials}"
        )));
    }
    if p.is_constant() {
        return Err(Error::Precondition("constant polynomial".into()));
    }
    let mut coeffs = p.coeffs().to_vec();
    let c0 = coeffs[0];
    for t in 0..trials {
        let z1 = sector.sample(rng);
        if !sector.contains(z1) {
            continue;
        }
        let w = p.eval(z1);
        coeffs[0] = c0 - w;
        let partners = Poly::new(coeffs.clone()).deflate(z1);
        for z2 in partners.roots() {
            if (z2 - z1).norm() > DEDUP_RADIUS
                && sector.contains(z2)
                && (p.eval(z2) - w).norm() < COLLIDE_TOL * (1.0 + w.norm())
            {
                return Ok(InjectivityResult {
                    collision: Some((z1, z2)),
                    trials_run: t + 1,
                });
            }
        }
    }
    Ok(InjectivityResult {
        collision: None,
        trials_run: trials,
    })
}
