//! Checks for `f_λ(z) = λe^z + z + λ` and its exponential image
//! `h_λ(w) = w·e^{λ(w+1)}`, which satisfy `h_λ ∘ exp = exp ∘ f_λ`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::map::{EntireMap, MapSpec};
use crate::report::{Check, Status};
use crate::safe::{exp_tower, SafeValue};

use super::orbit::ESCAPE_RADIUS;

const MAX_LISTED: usize = 5;

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda < 2.0 {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "lambda must lie in (0, 2), got {lambda}"
        )))
    }
}

/// `|h_λ(e^z) - e^{f_λ(z)}| / max(1, |e^{f_λ(z)}|)`, evaluated in log-polar
/// form when the values are large. `None` when either side saturates.
pub fn semiconjugacy_residual(lambda: f64, z: Complex64) -> Result<Option<f64>> {
    check_lambda(lambda)?;
    let f = MapSpec::f_lambda(lambda)?;
    let ez = exp_tower(1, z);
    let lhs = h_of(lambda, &ez);
    let rhs = f.eval(z).exp();
    Ok(lhs.relative_distance(&rhs))
}

/// `φ_λ(x) = 2 + x + x·e^{λ(x+1)}`, so that `h_λ²(x) = x·e^{λφ_λ(x)}`.
pub fn phi(lambda: f64, x: f64) -> f64 {
    2.0 + x + x * (lambda * (x + 1.0)).exp()
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1).max(1) as f64)
}

fn listed(xs: &[f64]) -> String {
    xs.iter()
        .take(MAX_LISTED)
        .map(|x| format!("{x:.6}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Real-line structure of `h_λ` at `samples` points of `[-0.999, -0.001]`
/// and `[0.001, 10]`.
pub fn h_real_line_checks(lambda: f64, samples: usize) -> Result<Vec<Check>> {
    check_lambda(lambda)?;
    if samples < 1000 {
        return Err(Error::Precondition(format!(
            "need at least 1000 samples, got {samples}"
        )));
    }
    let h = |x: f64| x * (lambda * (x + 1.0)).exp();
    let dh = |x: f64| (1.0 + lambda * x) * (lambda * (x + 1.0)).exp();
    let neg: Vec<f64> = linspace(-0.999, -0.001, samples).collect();
    let pos: Vec<f64> = linspace(0.001, 10.0, samples).collect();

    let bad_h2: Vec<f64> = neg.iter().copied().filter(|&x| !(h(h(x)) < x)).collect();
    let bad_phi: Vec<f64> = neg
        .iter()
        .copied()
        .filter(|&x| !(phi(lambda, x) > 0.0))
        .collect();
    let bad_pos: Vec<f64> = pos
        .iter()
        .copied()
        .filter(|&x| !(h(x) > x && dh(x) > 0.0))
        .collect();
    let phi_m1 = phi(lambda, -1.0).abs();

    let mk = |id: &str, anchor: &str, bad: &[f64], n: usize| {
        Check::new(id, anchor, Status::from_bool(bad.is_empty())).with_details(format!(
            "λ={lambda}: {} of {n} samples violate{}",
            bad.len(),
            if bad.is_empty() {
                String::new()
            } else {
                format!(" (first: {})", listed(bad))
            }
        ))
    };
    Ok(vec![
        mk(
            "h.second_iterate_below",
            "h_λ²(x) < x on (-1, 0)",
            &bad_h2,
            neg.len(),
        ),
        mk(
            "h.phi_positive",
            "φ_λ(x) = 2 + x + x·e^{λ(x+1)} > 0 on (-1, 0)",
            &bad_phi,
            neg.len(),
        ),
        mk(
            "h.increasing_right",
            "h_λ(x) > x and h_λ'(x) > 0 on (0, ∞)",
            &bad_pos,
            pos.len(),
        ),
        Check::new(
            "h.phi_at_minus_one",
            "φ_λ(-1) = 0",
            Status::from_bool(phi_m1 <= 1e-12),
        )
        .with_residual(phi_m1)
        .with_details(format!("λ={lambda}: |φ_λ(-1)| = {phi_m1:e}")),
    ])
}

/// Relative residuals `|f^n(z + 2πi) - (f^n(z) + 2πi)| / max(1, |f^n(z) + 2πi|)`
/// for `n = 1..=n_max`, stopping once either orbit leaves `|w| ≤ ESCAPE_RADIUS`.
pub fn translation_residuals(lambda: f64, z: Complex64, n_max: usize) -> Result<Vec<f64>> {
    check_lambda(lambda)?;
    let f = MapSpec::f_lambda(lambda)?;
    let shift = Complex64::new(0.0, 2.0 * PI);
    let (mut a, mut b) = (z, z + shift);
    let mut out = Vec::with_capacity(n_max);
    for _ in 0..n_max {
        let (Some(na), Some(nb)) = (f.eval(a).as_complex(), f.eval(b).as_complex()) else {
            break;
        };
        if na.norm() > ESCAPE_RADIUS || nb.norm() > ESCAPE_RADIUS {
            break;
        }
        a = na;
        b = nb;
        let want = a + shift;
        out.push((b - want).norm() / want.norm().max(1.0));
    }
    Ok(out)
}

/// Agreement of orbit verdicts: `z` converges under `f_λ` iff `e^z` converges
/// to `-1` under `h_λ`. Points where either verdict is undecided are skipped.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct VerdictAgreement {
    pub agree: usize,
    pub disagree: usize,
    pub skipped: usize,
}

pub fn verdict_agreement(
    lambda: f64,
    points: &[Complex64],
    max_iter: usize,
) -> Result<VerdictAgreement> {
    use super::orbit::{iterate, Verdict};
    use rayon::prelude::*;
    let f = MapSpec::f_lambda(lambda)?;
    let h = MapSpec::h_lambda(lambda)?;
    let results: Vec<Option<bool>> = points
        .par_iter()
        .map(|&z| {
            let vf = iterate(&f, z, max_iter).ok()?.verdict;
            let vh = iterate(&h, z.exp(), max_iter).ok()?.verdict;
            if vf == Verdict::Undecided || vh == Verdict::Undecided {
                return None;
            }
            let f_conv = matches!(vf, Verdict::Converged { .. });
            let h_conv = matches!(vh, Verdict::Converged { k_index: 0, .. });
            Some(f_conv == h_conv)
        })
        .collect();
    let mut out = VerdictAgreement::default();
    for r in results {
        match r {
            Some(true) => out.agree += 1,
            Some(false) => out.disagree += 1,
            None => out.skipped += 1,
        }
    }
    Ok(out)
}

/// Saturation-aware value of `h_λ` at an arbitrary [`SafeValue`].
pub fn h_of(lambda: f64, w: &SafeValue) -> SafeValue {
    w.mul(
        &w.add_complex(Complex64::new(1.0, 0.0))
            .scale(Complex64::new(lambda, 0.0))
            .exp(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn semiconjugacy_examples() {
        assert!(semiconjugacy_residual(1.5, c(0.0, 0.0)).unwrap().unwrap() < 1e-12);
        assert!(semiconjugacy_residual(0.5, c(1.0, 2.0)).unwrap().unwrap() < 1e-10);
        assert!(semiconjugacy_residual(1.0, c(-3.0, -1.0)).unwrap().unwrap() < 1e-12);
        assert!(semiconjugacy_residual(2.0, c(0.0, 0.0)).is_err());
        // both sides saturate far to the right
        assert!(semiconjugacy_residual(1.0, c(800.0, 0.0))
            .unwrap()
            .is_none());
    }

    #[test]
    fn large_values_compare_in_log_polar() {
        // e^{f(z)} ~ e^{1.5·e^{6}} is far outside the finite range
        let r = semiconjugacy_residual(1.5, c(6.0, 0.3)).unwrap().unwrap();
        assert!(r < 1e-9, "{r}");
    }

    #[test]
    fn phi_examples() {
        assert!((phi(1.5, -0.5) - (1.5 - 0.5 * 0.75f64.exp())).abs() < 1e-15);
        assert!(phi(1.5, -0.5) > 0.44);
        assert_eq!(phi(1.5, -1.0), 0.0);
    }

    #[test]
    fn real_line_passes() {
        for lambda in [0.5, 1.0, 1.5] {
            for c in h_real_line_checks(lambda, 1000).unwrap() {
                assert_eq!(c.status, Status::Pass, "{c:?}");
            }
        }
        assert!(h_real_line_checks(1.0, 10).is_err());
    }

    #[test]
    fn translation_is_exact_enough() {
        let r = translation_residuals(1.0, c(-3.0, 2.8), 8).unwrap();
        assert_eq!(r.len(), 8);
        assert!(r.iter().all(|&x| x < 1e-8));
        // the real axis escapes before n = 8
        assert!(translation_residuals(1.0, c(0.0, 0.0), 8).unwrap().len() < 8);
    }

    #[test]
    fn h_of_matches_map() {
        let h = MapSpec::h_lambda(0.8).unwrap();
        let w = c(-0.3, 0.7);
        let a = h_of(0.8, &SafeValue::from_complex(w)).as_complex().unwrap();
        assert!((a - h.eval(w).as_complex().unwrap()).norm() < 1e-15);
    }
}
