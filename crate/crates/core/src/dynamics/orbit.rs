//! Orbits with convergence, escape and fixed-point snapping.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::map::{EntireMap, FixedPointFamily, MapSpec};
use crate::safe::SafeValue;

pub const CONV_TOL: f64 = 1e-9;
pub const ESCAPE_RADIUS: f64 = 1e8;
pub const DEFAULT_MAX_ITER: usize = 512;
/// A converged orbit must end within this distance of an admissible fixed point.
pub const SNAP_RADIUS: f64 = 0.5;

/// Below `e^{TINY_LOG}` the orbit of `h_λ` is tracked through `log w`.
const TINY_LOG: f64 = -230.0;
/// `exp` underflows to exactly zero below this real part.
const UNDERFLOW_LOG: f64 = -745.2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Verdict {
    Converged {
        fixed_point: Complex64,
        k_index: i64,
    },
    Escaped {
        at_step: usize,
    },
    Undecided,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitResult {
    /// `z_0, z_1, …`; steps skipped while an `h_λ` orbit sits below the
    /// underflow threshold are not listed.
    pub points: Vec<SafeValue>,
    pub verdict: Verdict,
    pub steps_used: usize,
}

/// Nearest admissible fixed point of the family, with its index.
fn snap(m: &MapSpec, z: Complex64) -> Option<(Complex64, i64)> {
    match m.fixed_point_family() {
        FixedPointFamily::OddMultiplesOfPiI => {
            let k = ((z.im / PI - 1.0) / 2.0).round();
            let fp = Complex64::new(0.0, (2.0 * k + 1.0) * PI);
            ((z - fp).norm() < SNAP_RADIUS).then_some((fp, k as i64))
        }
        FixedPointFamily::MinusOneAndZero => {
            let (fp, k) = if (z + 1.0).norm() <= z.norm() {
                (Complex64::new(-1.0, 0.0), 0)
            } else {
                (Complex64::new(0.0, 0.0), 1)
            };
            ((z - fp).norm() < SNAP_RADIUS).then_some((fp, k))
        }
        FixedPointFamily::Unknown => Some((z, 0)),
    }
}

fn attracting_or_exact(m: &MapSpec, fp: Complex64, z: Complex64) -> bool {
    z == fp
        || m.derivative(fp)
            .as_complex()
            .is_some_and(|d| d.norm() < 1.0)
}

/// Steps `ζ ↦ ζ + λ(e^ζ + 1)` (the logarithmic lift of `h_λ`) while
/// `Re ζ < TINY_LOG`, within `budget` steps. Where `e^ζ` underflows the step
/// is a pure translation by `λ` and runs of such steps are taken at once.
fn lift_tiny(lambda: f64, mut zeta: Complex64, budget: usize) -> (Complex64, usize) {
    let mut used = 0usize;
    while zeta.re < TINY_LOG && used < budget {
        if zeta.re < UNDERFLOW_LOG {
            let jump = ((UNDERFLOW_LOG - zeta.re) / lambda).ceil();
            let jump = (jump.min((budget - used) as f64) as usize).max(1);
            zeta.re += jump as f64 * lambda;
            used += jump;
        } else {
            zeta += lambda * (zeta.exp() + 1.0);
            used += 1;
        }
    }
    (zeta, used)
}

pub(crate) fn run(m: &MapSpec, z0: Complex64, max_iter: usize, record: bool) -> OrbitResult {
    let mut points = Vec::new();
    if record {
        points.push(SafeValue::from_complex(z0));
    }
    if !(z0.re.is_finite() && z0.im.is_finite()) || z0.norm() > ESCAPE_RADIUS {
        return OrbitResult {
            points,
            verdict: Verdict::Escaped { at_step: 0 },
            steps_used: 0,
        };
    }
    let mut z = z0;
    let mut n = 0usize;
    let mut small = 0usize;
    while n < max_iter {
        if let MapSpec::HLambda { lambda } = *m {
            if z != Complex64::new(0.0, 0.0) {
                let zeta = z.ln() + lambda * (z + 1.0);
                if zeta.re < TINY_LOG {
                    let (zeta, used) = lift_tiny(lambda, zeta, max_iter - n - 1);
                    n += 1 + used;
                    small = 0;
                    z = zeta.exp();
                    if record {
                        points.push(SafeValue::from_complex(z));
                    }
                    continue;
                }
            }
        }
        let v = m.eval(z);
        n += 1;
        if record {
            points.push(v);
        }
        let next = match v.as_complex() {
            Some(w) if w.norm() <= ESCAPE_RADIUS => w,
            _ => {
                return OrbitResult {
                    points,
                    verdict: Verdict::Escaped { at_step: n },
                    steps_used: n,
                }
            }
        };
        if (next - z).norm() < CONV_TOL {
            small += 1;
        } else {
            small = 0;
        }
        z = next;
        if small >= 2 {
            match snap(m, z) {
                None => {
                    return OrbitResult {
                        points,
                        verdict: Verdict::Undecided,
                        steps_used: n,
                    }
                }
                Some((fp, k)) if (z - fp).norm() < CONV_TOL && attracting_or_exact(m, fp, z) => {
                    return OrbitResult {
                        points,
                        verdict: Verdict::Converged {
                            fixed_point: fp,
                            k_index: k,
                        },
                        steps_used: n,
                    }
                }
                Some(_) => {}
            }
        }
    }
    OrbitResult {
        points,
        verdict: Verdict::Undecided,
        steps_used: n,
    }
}

/// Iterates `m` from `z0` for at most `max_iter` steps.
///
/// Converged: two consecutive steps shorter than [`CONV_TOL`] and the orbit
/// within [`CONV_TOL`] of an attracting admissible fixed point (or exactly on
/// a repelling one). Escaped: modulus above [`ESCAPE_RADIUS`] or overflow.
pub fn iterate(m: &MapSpec, z0: Complex64, max_iter: usize) -> Result<OrbitResult> {
    if max_iter == 0 {
        return Err(Error::Precondition("max_iter must be at least 1".into()));
    }
    Ok(run(m, z0, max_iter, true))
}

/// `f'(z)` at a numerical fixed point `z`.
pub fn fixed_point_multiplier(m: &MapSpec, z: Complex64) -> Result<Complex64> {
    let fz = m
        .eval(z)
        .as_complex()
        .ok_or_else(|| Error::Precondition("map overflows at the candidate fixed point".into()))?;
    if (fz - z).norm() >= CONV_TOL {
        return Err(Error::Precondition(format!(
            "not a fixed point: |f(z) - z| = {:e}",
            (fz - z).norm()
        )));
    }
    m.derivative(z)
        .as_complex()
        .ok_or_else(|| Error::Precondition("derivative overflows".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn fixed_point_start() {
        let m = MapSpec::f_lambda(1.0).unwrap();
        let o = iterate(&m, c(0.0, PI), 512).unwrap();
        assert_eq!(
            o.verdict,
            Verdict::Converged {
                fixed_point: c(0.0, PI),
                k_index: 0
            }
        );
        assert!(o.steps_used <= 2);
    }

    #[test]
    fn origin_escapes() {
        let m = MapSpec::f_lambda(1.0).unwrap();
        let o = iterate(&m, c(0.0, 0.0), 512).unwrap();
        match o.verdict {
            Verdict::Escaped { at_step } => assert!(at_step <= 6),
            v => panic!("{v:?}"),
        }
        let x: Vec<f64> = o
            .points
            .iter()
            .take(3)
            .map(|p| p.as_complex().unwrap().re)
            .collect();
        assert_eq!(x[1], 2.0);
        assert!((x[2] - (2f64.exp() + 3.0)).abs() < 1e-12);
    }

    #[test]
    fn left_half_line_on_pi() {
        let m = MapSpec::f_lambda(1.0).unwrap();
        let o = iterate(&m, c(-5.0, PI), 512).unwrap();
        assert!(matches!(o.verdict, Verdict::Converged { k_index: 0, .. }));
        let o = iterate(&m, c(-5.0, -3.0 * PI), 512).unwrap();
        assert!(matches!(o.verdict, Verdict::Converged { k_index: -2, .. }));
    }

    #[test]
    fn converged_orbit_is_close() {
        for lambda in [0.3, 0.5, 1.5, 1.9] {
            let m = MapSpec::f_lambda(lambda).unwrap();
            let o = iterate(&m, c(-2.0, 2.5), 512).unwrap();
            let Verdict::Converged { fixed_point, .. } = o.verdict else {
                panic!("{lambda}: {:?}", o.verdict)
            };
            let last = o.points.last().unwrap().as_complex().unwrap();
            assert!((last - fixed_point).norm() < CONV_TOL);
        }
    }

    #[test]
    fn h_lambda_real_line() {
        let h = MapSpec::h_lambda(1.5).unwrap();
        for x in [-1e6, -1000.0, -3.0, -0.5, -1e-3] {
            let o = iterate(&h, c(x, 0.0), 2_000_000).unwrap();
            assert!(
                matches!(o.verdict, Verdict::Converged { k_index: 0, .. }),
                "{x}: {:?}",
                o.verdict
            );
        }
        assert!(matches!(
            iterate(&h, c(0.5, 0.0), 512).unwrap().verdict,
            Verdict::Escaped { .. }
        ));
        assert!(matches!(
            iterate(&h, c(0.0, 0.0), 512).unwrap().verdict,
            Verdict::Converged { k_index: 1, .. }
        ));
        // close to the repelling fixed point is not convergence
        assert!(!matches!(
            iterate(&h, c(1e-12, 0.0), 512).unwrap().verdict,
            Verdict::Converged { k_index: 1, .. }
        ));
    }

    #[test]
    fn multipliers() {
        let m = MapSpec::f_lambda(0.5).unwrap();
        assert!((fixed_point_multiplier(&m, c(0.0, PI)).unwrap() - c(0.5, 0.0)).norm() < 1e-15);
        let m = MapSpec::f_lambda(1.5).unwrap();
        assert!(
            (fixed_point_multiplier(&m, c(0.0, 3.0 * PI)).unwrap() - c(-0.5, 0.0)).norm() < 1e-14
        );
        let h = MapSpec::h_lambda(1.5).unwrap();
        assert!(
            (fixed_point_multiplier(&h, c(0.0, 0.0)).unwrap() - c(1.5f64.exp(), 0.0)).norm()
                < 1e-14
        );
        assert!(fixed_point_multiplier(&m, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn max_iter_precondition() {
        assert!(iterate(&MapSpec::f_lambda(1.0).unwrap(), c(0.0, 0.0), 0).is_err());
    }
}
