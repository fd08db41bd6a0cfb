//! Real-line checks for `f_{2,β}(x) = E²(x) + x - β` on `(-R, -r)`.

use crate::error::{Error, Result};
use crate::map::{EntireMap, MapSpec};
use crate::report::{Check, Status};
use crate::safe::exp_tower;

use num_complex::Complex64;

/// Right end of the interval on which monotonicity is sampled.
pub const MONOTONE_RIGHT_END: f64 = 5.0;

fn e2(x: f64) -> f64 {
    exp_tower(2, Complex64::new(x, 0.0))
        .as_complex()
        .map(|z| z.re)
        .unwrap_or(f64::INFINITY)
}

/// Checks, for `β < 1` and `R > r > (e - β)/2`:
///
/// * `E²(-r) - r - β < R`,
/// * `E²(-R) - R - β > -R`,
/// * `f_{2,β}` maps `samples` points of `(-R, -r)` into `(-R, R)`,
/// * `f_{2,β}` is strictly increasing at `samples` points of
///   `[-R, min(R, MONOTONE_RIGHT_END)]`.
pub fn example41_check(beta: f64, r: f64, big_r: f64, samples: usize) -> Result<Vec<Check>> {
    let r_min = (std::f64::consts::E - beta) / 2.0;
    if !(beta < 1.0) {
        return Err(Error::Precondition(format!(
            "β must be below 1, got {beta}"
        )));
    }
    if !(big_r > r && r > r_min) {
        return Err(Error::Precondition(format!(
            "need R > r > (e - β)/2 = {r_min:.6}, got r = {r}, R = {big_r}"
        )));
    }
    if samples < 2 {
        return Err(Error::Precondition("need at least 2 samples".into()));
    }
    let m = MapSpec::f_two_beta(beta)?;
    let f = |x: f64| {
        m.eval(Complex64::new(x, 0.0))
            .as_complex()
            .map(|z| z.re)
            .unwrap_or(f64::INFINITY)
    };
    let tag = format!("β={beta}, r={r}, R={big_r}");

    let upper = e2(-r) - r - beta;
    let lower = e2(-big_r) - big_r - beta;
    let mut checks = vec![
        Check::new(
            "ex41.upper",
            "E²(-r) - r - β < R",
            Status::from_bool(upper < big_r),
        )
        .with_residual(big_r - upper)
        .with_details(format!("{tag}: E²(-r) - r - β = {upper:.12}")),
        Check::new(
            "ex41.lower",
            "E²(-R) - R - β > -R",
            Status::from_bool(lower > -big_r),
        )
        .with_residual(lower + big_r)
        .with_details(format!("{tag}: E²(-R) - R - β = {lower:.12}")),
    ];

    // open interval: sample interior points only
    let inside: Vec<f64> = (0..samples)
        .map(|i| -big_r + (big_r - r) * (i as f64 + 0.5) / samples as f64)
        .collect();
    let escaped: Vec<f64> = inside
        .iter()
        .copied()
        .filter(|&x| {
            let y = f(x);
            !(y > -big_r && y < big_r)
        })
        .collect();
    checks.push(
        Check::new(
            "ex41.maps_into",
            "f_{2,β}((-R, -r)) ⊂ (-R, R)",
            Status::from_bool(escaped.is_empty()),
        )
        .with_details(match escaped.first() {
            None => format!("{tag}: {samples} samples inside"),
            Some(x) => format!(
                "{tag}: {} of {samples} samples leave, first x = {x}, f(x) = {}",
                escaped.len(),
                f(*x)
            ),
        }),
    );

    let right = big_r.min(MONOTONE_RIGHT_END);
    let xs: Vec<f64> = (0..samples)
        .map(|i| -big_r + (right + big_r) * i as f64 / (samples - 1) as f64)
        .collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let bad: Vec<f64> = xs
        .windows(2)
        .zip(ys.windows(2))
        .filter(|(_, y)| !(y[1] > y[0]))
        .map(|(x, _)| x[1])
        .collect();
    checks.push(
        Check::new(
            "ex41.monotone",
            "f_{2,β} is real and strictly increasing on ℝ",
            Status::from_bool(bad.is_empty()),
        )
        .with_details(match bad.first() {
            None => format!("{tag}: strictly increasing at {samples} samples of [-R, {right}]"),
            Some(x) => format!("{tag}: {} violations, first at x = {x}", bad.len()),
        }),
    );
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples_pass() {
        for (beta, r, big_r) in [(0.0, 5.0, 25.0), (0.9, 2.0, 10.0), (-1.0, 2.0, 10.0)] {
            for c in example41_check(beta, r, big_r, 1000).unwrap() {
                assert_eq!(c.status, Status::Pass, "{c:?}");
            }
        }
    }

    #[test]
    fn image_of_minus_five() {
        let m = MapSpec::f_two_beta(0.0).unwrap();
        let y = m.eval(Complex64::new(-5.0, 0.0)).as_complex().unwrap().re;
        assert!((y - (-5f64).exp().exp() + 5.0).abs() < 1e-15);
        assert!((y + 3.993239).abs() < 1e-6);
    }

    #[test]
    fn preconditions() {
        assert!(example41_check(0.0, 1.0, 1.0, 100).is_err());
        assert!(example41_check(1.0, 5.0, 25.0, 100).is_err());
        assert!(example41_check(0.0, 1.0, 25.0, 100).is_err());
    }
}
