//! Branches `W_k` of the Lambert W function, the inverse of `w ↦ w·e^w`.
//!
//! The critical points of `e^z + z²` are `-W_k(1/2)`, `k ∈ ℤ`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_ITER: usize = 64;
const TOL: f64 = 1e-15;

fn initial_guess(k: i64, x: Complex64) -> Complex64 {
    if k == 0 && x.norm() < 1.0 {
        // tangent to W_0 near the origin
        return (Complex64::new(1.0, 0.0) + x).ln();
    }
    let l1 = x.ln() + Complex64::new(0.0, 2.0 * PI * k as f64);
    if k == 0 && l1.norm() < 1.0 {
        return l1;
    }
    let l2 = l1.ln();
    l1 - l2 + l2 / l1
}

/// `W_k(x)` by Halley iteration from the asymptotic expansion
/// `W_k(x) ≈ L₁ - ln L₁ + ln L₁ / L₁`, `L₁ = ln x + 2πik`.
pub fn lambert_w(k: i64, x: Complex64) -> Result<Complex64> {
    if x.norm() == 0.0 || !(x.re.is_finite() && x.im.is_finite()) {
        return Err(Error::Precondition(format!(
            "Lambert W needs a finite nonzero argument, got {x}"
        )));
    }
    let mut w = initial_guess(k, x);
    for _ in 0..MAX_ITER {
        let ew = w.exp();
        let g = w * ew - x;
        let w1 = w + 1.0;
        let denom = ew * w1 - (w + 2.0) * g / (2.0 * w1);
        let step = g / denom;
        if !(step.re.is_finite() && step.im.is_finite()) {
            break;
        }
        w -= step;
        if step.norm() <= TOL * w.norm().max(1.0) {
            return Ok(w);
        }
    }
    Err(Error::NoConvergence(format!("W_{k}({x}) did not converge")))
}

/// Critical points `-W_k(1/2)` of `e^z + z²` whose imaginary part lies in
/// `[im_min, im_max]`, sorted by imaginary part.
pub fn exp_plus_square_critical_points(im_min: f64, im_max: f64) -> Result<Vec<Complex64>> {
    let half = Complex64::new(0.5, 0.0);
    // Im W_k(x) lies within π of 2πk
    let k_lo = ((-im_max) / (2.0 * PI)).floor() as i64 - 1;
    let k_hi = ((-im_min) / (2.0 * PI)).ceil() as i64 + 1;
    let mut out = Vec::new();
    for k in k_lo..=k_hi {
        let z = -lambert_w(k, half)?;
        if z.im >= im_min && z.im <= im_max {
            out.push(z);
        }
    }
    out.sort_by(|a, b| a.im.total_cmp(&b.im));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn principal_branch_at_half() {
        let w = lambert_w(0, Complex64::new(0.5, 0.0)).unwrap();
        assert!((w.re - 0.351_733_711_249_195_8).abs() < 1e-15);
        assert!(w.im.abs() < 1e-15);
    }

    #[test]
    fn defining_equation_on_many_branches() {
        for k in -30..=30 {
            for x in [
                Complex64::new(0.5, 0.0),
                Complex64::new(-0.2, 1.3),
                Complex64::new(40.0, -3.0),
            ] {
                let w = lambert_w(k, x).unwrap();
                assert!(
                    (w * w.exp() - x).norm() < 1e-13 * x.norm().max(1.0),
                    "k={k} x={x}"
                );
                // branch: w + ln w = ln x + 2πik away from the branch cuts
                if k.abs() >= 2 {
                    let j = ((w + w.ln() - x.ln()).im / (2.0 * PI)).round() as i64;
                    assert_eq!(j, k);
                }
            }
        }
    }

    #[test]
    fn critical_points_solve_exp_equation() {
        let zs = exp_plus_square_critical_points(-40.0, 40.0).unwrap();
        // roughly one per 2π of height
        assert!((12..=14).contains(&zs.len()), "{}", zs.len());
        for z in &zs {
            assert!((z.exp() + 2.0 * z).norm() < 1e-12 * z.norm().max(1.0));
        }
        assert!(lambert_w(0, Complex64::new(0.0, 0.0)).is_err());
    }
}
