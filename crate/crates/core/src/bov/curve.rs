//! Growth of `|f|` along unbounded curves.
//!
//! The parameter `t` is log-spaced over the curve's range and the minimum of
//! `|f|` is taken over each successive decade (`[t_s·10^m, t_s·10^{m+1}]`,
//! the last one possibly partial). Minima that are eventually strictly
//! increasing count as evidence that the image of the curve is unbounded.

use std::cmp::Ordering;
use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::map::EntireMap;
use crate::safe::SafeValue;

/// Oscillations of the zigzag angle per decade of `t`.
pub const ZIGZAG_PER_DECADE: f64 = 2.0;
/// Minimum number of samples along a curve.
pub const MIN_SAMPLES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CurveKind {
    /// `z(t) = -t`.
    LeftRay,
    /// `z(t) = t·e^{iθ}`, `|θ| < π/2`.
    SectorRay(f64),
    /// `z(t) = t·e^{iβ(t)}` with `β(t)` oscillating between `β` and `π/2`.
    VerticalZigzag(f64),
    /// `z(t) = t·e^{i(a + b·ln t)}`.
    LogSpiral(f64, f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveSpec {
    pub kind: CurveKind,
    pub t0: f64,
    pub t1: f64,
}

impl CurveSpec {
    pub fn new(kind: CurveKind, t0: f64, t1: f64) -> Result<Self> {
        let c = CurveSpec { kind, t0, t1 };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t0 >= 0.0 && self.t1 > self.t0 && self.t1.is_finite()) {
            return Err(Error::Precondition(format!(
                "curve range needs t1 > t0 >= 0, got [{}, {}]",
                self.t0, self.t1
            )));
        }
        match self.kind {
            CurveKind::SectorRay(theta) if !(theta.abs() < FRAC_PI_2) => Err(Error::Precondition(
                format!("sector ray angle must lie in (-π/2, π/2), got {theta}"),
            )),
            CurveKind::VerticalZigzag(beta) if !(beta > 0.0 && beta < FRAC_PI_2) => Err(
                Error::Precondition(format!("zigzag angle must lie in (0, π/2), got {beta}")),
            ),
            CurveKind::LogSpiral(a, b) if !(a.is_finite() && b.is_finite()) => Err(
                Error::Precondition("spiral parameters must be finite".into()),
            ),
            _ => Ok(()),
        }
    }

    /// Extra constraint for maps with a polynomial part of degree `d`:
    /// the zigzag must stay within `π/(2d)` of the imaginary axis.
    pub fn validate_for_degree(&self, d: usize) -> Result<()> {
        if let CurveKind::VerticalZigzag(beta) = self.kind {
            let lo = FRAC_PI_2 - PI / (2.0 * d as f64);
            if !(beta > lo) {
                return Err(Error::Precondition(format!(
                    "zigzag angle {beta} must exceed π/2 - π/(2d) = {lo} for degree {d}"
                )));
            }
        }
        Ok(())
    }

    /// First sampled parameter; a zero start is replaced by `t1·10^{-6}`.
    pub fn t_start(&self) -> f64 {
        if self.t0 > 0.0 {
            self.t0
        } else {
            self.t1 * 1e-6
        }
    }

    pub fn point(&self, t: f64) -> Complex64 {
        match self.kind {
            CurveKind::LeftRay => Complex64::new(-t, 0.0),
            CurveKind::SectorRay(theta) => Complex64::from_polar(t, theta),
            CurveKind::VerticalZigzag(beta) => {
                let phase = 2.0 * PI * ZIGZAG_PER_DECADE * t.log10();
                let angle = beta + (FRAC_PI_2 - beta) * 0.5 * (1.0 - phase.cos());
                Complex64::from_polar(t, angle)
            }
            CurveKind::LogSpiral(a, b) => Complex64::from_polar(t, a + b * t.ln()),
        }
    }

    /// `samples` log-spaced parameters from [`t_start`](Self::t_start) to `t1`.
    pub fn parameters(&self, samples: usize) -> Vec<f64> {
        let (a, b) = (self.t_start().ln(), self.t1.ln());
        (0..samples)
            .map(|i| {
                if i + 1 == samples {
                    self.t1
                } else {
                    (a + (b - a) * i as f64 / (samples - 1) as f64).exp()
                }
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveSample {
    pub t: f64,
    pub z: Complex64,
    pub value: SafeValue,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecadeMin {
    pub t_lo: f64,
    pub t_hi: f64,
    pub min: SafeValue,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveGrowth {
    pub curve: CurveSpec,
    pub decades: Vec<DecadeMin>,
    pub trace: Vec<CurveSample>,
}

impl CurveGrowth {
    /// Number of strict increases between consecutive decade minima,
    /// counted backwards from the last decade.
    pub fn increasing_tail(&self) -> usize {
        self.decades
            .windows(2)
            .rev()
            .take_while(|p| p[0].min.cmp_modulus(&p[1].min) == Ordering::Less)
            .count()
    }

    /// At least `steps` strict increases at the tail of the decade minima.
    pub fn eventually_increasing(&self, steps: usize) -> bool {
        steps > 0 && self.increasing_tail() >= steps
    }

    /// Every decade minimum is at most the previous one.
    pub fn non_increasing(&self) -> bool {
        self.decades
            .windows(2)
            .all(|p| p[1].min.cmp_modulus(&p[0].min) != Ordering::Greater)
    }

    pub fn minima(&self) -> Vec<f64> {
        self.decades.iter().map(|d| d.min.modulus()).collect()
    }
}

/// Evaluates `|f|` at `samples` log-spaced points of `curve` and records the
/// minimum over each parameter decade.
pub fn curve_growth<M: EntireMap + ?Sized>(
    m: &M,
    curve: &CurveSpec,
    samples: usize,
) -> Result<CurveGrowth> {
    curve.validate()?;
    if samples < MIN_SAMPLES {
        return Err(Error::Precondition(format!(
            "curve growth needs at least {MIN_SAMPLES} samples, got {samples}"
        )));
    }
    if let Some(d) = m.poly_degree() {
        curve.validate_for_degree(d)?;
    }
    let ts = curve.parameters(samples);
    let trace: Vec<CurveSample> = ts
        .par_iter()
        .map(|&t| {
            let z = curve.point(t);
            CurveSample {
                t,
                z,
                value: m.eval(z),
            }
        })
        .collect();

    let ts0 = curve.t_start();
    let n_dec = ((curve.t1 / ts0).log10().ceil() as usize).max(1);
    let mut decades: Vec<DecadeMin> = (0..n_dec)
        .map(|q| DecadeMin {
            t_lo: ts0 * 10f64.powi(q as i32),
            t_hi: (ts0 * 10f64.powi(q as i32 + 1)).min(curve.t1),
            min: SafeValue::Saturated,
            samples: 0,
        })
        .collect();
    for s in &trace {
        let q = ((s.t / ts0).log10().floor().max(0.0) as usize).min(n_dec - 1);
        let d = &mut decades[q];
        if d.samples == 0 || s.value.cmp_modulus(&d.min) == Ordering::Less {
            d.min = s.value;
        }
        d.samples += 1;
    }
    decades.retain(|d| d.samples > 0);
    Ok(CurveGrowth {
        curve: *curve,
        decades,
        trace,
    })
}
