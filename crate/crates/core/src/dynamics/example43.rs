//! Orbits of `F_λ(z) = f_λ(z) + 2πi`, which satisfy
//! `F_λ^n(z) = f_λ^n(z) + 2nπi`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::map::{EntireMap, MapSpec};
use crate::safe::SafeValue;

use super::orbit::ESCAPE_RADIUS;

/// Upper limit on the steps taken while waiting for `|F^n| > ESCAPE_RADIUS`.
pub const ESCAPE_STEP_CAP: usize = 1 << 25;
/// Steps of strictly increasing imaginary part required at escape.
pub const RISING_STEPS: usize = 5;

#[derive(Clone, Debug, PartialEq)]
pub struct WanderingTrace {
    /// `F^n(z_0)` for `n = 0..=n_steps` (shorter if the orbit saturates).
    pub orbit: Vec<SafeValue>,
    /// Relative residual `|F^n - (f^n + 2nπi)| / max(1, |f^n + 2nπi|)` for
    /// `n = 1..=depth`.
    pub translation_residuals: Vec<f64>,
    /// Steps with both orbits finite.
    pub depth: usize,
    pub escape_confirmed: bool,
    /// Step at which `|F^n|` first exceeded the escape radius.
    pub escape_step: Option<usize>,
}

/// Iterates `F_λ` and `f_λ` independently from `z0`. After `n_steps` the
/// `F_λ` orbit alone is continued until it leaves `|w| ≤ ESCAPE_RADIUS`;
/// the escape is confirmed when the imaginary part rose strictly over the
/// last [`RISING_STEPS`] steps before that.
pub fn wandering_tracker(lambda: f64, z0: Complex64, n_steps: usize) -> Result<WanderingTrace> {
    if !(lambda > 0.0 && lambda < 2.0) {
        return Err(Error::Precondition(format!(
            "lambda must lie in (0, 2), got {lambda}"
        )));
    }
    let big = MapSpec::big_f_lambda(lambda)?;
    let small = MapSpec::f_lambda(lambda)?;
    let mut orbit = vec![SafeValue::from_complex(z0)];
    let mut residuals = Vec::new();
    let (mut a, mut b) = (Some(z0), Some(z0));
    for n in 1..=n_steps {
        let na = a.map(|z| big.eval(z));
        let nb = b.map(|z| small.eval(z));
        if let Some(v) = na {
            orbit.push(v);
        }
        a = na.and_then(|v| v.as_complex());
        b = nb.and_then(|v| v.as_complex());
        match (a, b) {
            (Some(x), Some(y)) if residuals.len() + 1 == n => {
                let want = y + Complex64::new(0.0, 2.0 * PI * n as f64);
                residuals.push((x - want).norm() / want.norm().max(1.0));
            }
            _ => {}
        }
        if a.is_none() {
            break;
        }
    }

    // continue F alone until the escape radius is passed
    let mut tail: Vec<f64> = orbit
        .iter()
        .filter_map(|v| v.as_complex().map(|z| z.im))
        .collect();
    let mut escape_step = None;
    let mut escape_confirmed = false;
    let mut z = orbit.last().and_then(|v| v.as_complex());
    let mut n = orbit.len() - 1;
    let rising = |t: &[f64]| {
        t.len() > RISING_STEPS
            && t[t.len() - RISING_STEPS - 1..]
                .windows(2)
                .all(|p| p[1] > p[0])
    };
    if orbit
        .iter()
        .any(|v| !v.is_finite() || v.modulus() > ESCAPE_RADIUS)
    {
        let first = orbit
            .iter()
            .position(|v| !v.is_finite() || v.modulus() > ESCAPE_RADIUS)
            .unwrap();
        escape_step = Some(first);
        let ims: Vec<f64> = orbit[..=first]
            .iter()
            .filter_map(|v| v.as_complex().map(|z| z.im))
            .collect();
        escape_confirmed = orbit[first].is_finite() && rising(&ims);
    } else {
        // plain complex arithmetic: the orbit stays below ESCAPE_RADIUS here
        let shift = Complex64::new(lambda, 2.0 * PI);
        while let Some(w) = z {
            if n >= ESCAPE_STEP_CAP {
                break;
            }
            let next = lambda * w.exp() + w + shift;
            n += 1;
            if !(next.re.is_finite() && next.im.is_finite()) {
                escape_step = Some(n);
                break;
            }
            if tail.len() > RISING_STEPS + 1 {
                tail.remove(0);
            }
            tail.push(next.im);
            if next.norm() > ESCAPE_RADIUS {
                escape_step = Some(n);
                escape_confirmed = rising(&tail);
                break;
            }
            z = Some(next);
        }
    }
    Ok(WanderingTrace {
        orbit,
        depth: residuals.len(),
        translation_residuals: residuals,
        escape_confirmed,
        escape_step,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_of_pi_i() {
        let t = wandering_tracker(1.0, Complex64::new(0.0, PI), 20).unwrap();
        for (n, v) in t.orbit.iter().enumerate() {
            let want = Complex64::new(0.0, (2 * n + 1) as f64 * PI);
            assert!((v.as_complex().unwrap() - want).norm() < 1e-10, "n={n}");
        }
        assert_eq!(t.depth, 20);
        assert!(t.translation_residuals.iter().all(|&r| r < 1e-9));
        assert!(t.escape_confirmed);
        let t3 = wandering_tracker(1.0, Complex64::new(0.0, PI), 3).unwrap();
        assert!((t3.orbit[3].as_complex().unwrap() - Complex64::new(0.0, 7.0 * PI)).norm() < 1e-12);
    }

    #[test]
    fn basin_point() {
        let t = wandering_tracker(1.5, Complex64::new(-2.0, PI), 10).unwrap();
        assert_eq!(t.depth, 10);
        assert!(
            t.translation_residuals.iter().all(|&r| r < 1e-8),
            "{:?}",
            t.translation_residuals
        );
        assert!(t.escape_confirmed);
    }

    #[test]
    fn real_axis_is_not_a_wandering_escape() {
        let t = wandering_tracker(1.0, Complex64::new(0.0, 0.0), 10).unwrap();
        assert!(t.depth < 10);
        assert!(!t.escape_confirmed);
    }
}
