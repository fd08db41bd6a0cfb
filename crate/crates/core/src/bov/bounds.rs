//! Pointwise lower bounds for `|f|` on the regions that cover a
//! neighbourhood of `∞`:
//!
//! * left half-plane `Re z < M₀`, `|z| ≥ ρ*` (`k = 1`):
//!   `|f(z)| ≥ lower(|z|) - |c|·e^{M₀}`;
//! * sector `|Arg z| < α`, `|z| ≥ ρ*` (`k = 1`):
//!   `|f(z)| ≥ |c|·e^{Re z} - S·(1+tan²α)^{d/2}·|Re z|^d`;
//! * tower region (any `k`):
//!   `|f(z)| ≥ |c|·K₁^{k-1}·e^{Re z} - S·(1+tan²α)^{d/2}·|Re z|^d`,
//!   with `K₁ = min cos Im E^l(z)` over the samples and `l = 0..k-2`.
//!
//! Here `S = Σ|a_i|`. Comparisons are made on logarithms so that huge
//! values of `f` never overflow.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::map::{EntireMap, MapSpec};
use crate::poly::PolyBounds;
use crate::report::{Check, Status};
use crate::safe::{exp_tower, SafeValue};

/// Violations listed in the details of a failed check.
const MAX_LISTED: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundCase {
    LeftHalfPlane { m0: f64 },
    RightSector { alpha: f64 },
    Tower { alpha: f64 },
}

impl BoundCase {
    fn id(&self) -> &'static str {
        match self {
            BoundCase::LeftHalfPlane { .. } => "bound.left_half_plane",
            BoundCase::RightSector { .. } => "bound.right_sector",
            BoundCase::Tower { .. } => "bound.tower",
        }
    }

    fn anchor(&self) -> &'static str {
        match self {
            BoundCase::LeftHalfPlane { .. } => {
                "|f(z)| ≥ (1/d)Σ|a_i||z|^i - |c|e^{M₀} for Re z < M₀, |z| ≥ ρ*"
            }
            BoundCase::RightSector { .. } => {
                "|f(z)| ≥ |c|e^{Re z} - Σ|a_i|(1+tan²α)^{d/2}|Re z|^d for |Arg z| < α"
            }
            BoundCase::Tower { .. } => {
                "|f(z)| ≥ |c|K₁^{k-1}E(Re z) - Σ|a_i|(1+tan²α)^{d/2}|Re z|^d"
            }
        }
    }

    fn alpha(&self) -> Option<f64> {
        match *self {
            BoundCase::RightSector { alpha } | BoundCase::Tower { alpha } => Some(alpha),
            BoundCase::LeftHalfPlane { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CaseBoundOutcome {
    pub check: Check,
    pub checked: usize,
    /// Samples outside the case region, ignored.
    pub out_of_region: usize,
    pub violations: Vec<Complex64>,
    /// Smallest `log` of a positive bound over the checked samples, or `None`
    /// when some bound was non-positive (and so held trivially).
    pub min_bound_log: Option<f64>,
    /// Estimated `K₁` for the tower case.
    pub k1: Option<f64>,
}

impl CaseBoundOutcome {
    pub fn bound_positive(&self) -> bool {
        self.checked > 0 && self.min_bound_log.is_some()
    }
}

/// `ln(e^a - b)` for `b ≥ 0`, or `None` when `e^a ≤ b`.
fn log_difference(a: f64, b: f64) -> Option<f64> {
    if b <= 0.0 {
        return Some(a);
    }
    let lb = b.ln();
    if a <= lb {
        return None;
    }
    Some(a + (-(lb - a).exp()).ln_1p())
}

fn in_region(case: &BoundCase, z: Complex64, bounds: &PolyBounds) -> bool {
    if z.norm() < bounds.threshold {
        return false;
    }
    match *case {
        BoundCase::LeftHalfPlane { m0 } => z.re < m0,
        BoundCase::RightSector { alpha } | BoundCase::Tower { alpha } => {
            z.re > 0.0 && z.arg().abs() < alpha
        }
    }
}

/// Checks the lower bound of `case` at every sample in its region.
pub fn case_bound_check(
    m: &MapSpec,
    case: BoundCase,
    samples: &[Complex64],
) -> Result<CaseBoundOutcome> {
    let MapSpec::TowerPoly { k, c, poly } = m else {
        return Err(Error::Precondition(
            "case bounds need a tower map c·E^k + P".into(),
        ));
    };
    if let Some(alpha) = case.alpha() {
        if !(alpha > 0.0 && alpha < std::f64::consts::FRAC_PI_2) {
            return Err(Error::Precondition(format!(
                "sector half-angle must lie in (0, π/2), got {alpha}"
            )));
        }
    }
    let skipped = |reason: String| CaseBoundOutcome {
        check: Check::new(case.id(), case.anchor(), Status::Skipped).with_details(reason),
        checked: 0,
        out_of_region: 0,
        violations: Vec::new(),
        min_bound_log: None,
        k1: None,
    };
    if *k != 1 && !matches!(case, BoundCase::Tower { .. }) {
        return Ok(skipped(format!(
            "this case applies to k = 1 only, map has k = {k}"
        )));
    }
    let bounds = poly.bounds()?;
    let inside: Vec<Complex64> = samples
        .iter()
        .copied()
        .filter(|&z| in_region(&case, z, &bounds))
        .collect();
    let out_of_region = samples.len() - inside.len();
    if inside.is_empty() {
        let mut o = skipped(String::new());
        o.out_of_region = out_of_region;
        o.check = Check::new(case.id(), case.anchor(), Status::Pass)
            .with_details(format!("no samples ({out_of_region} outside the region)"));
        return Ok(o);
    }

    let d = poly.degree() as i32;
    let s = poly.abs_coeff_sum();
    let ln_c = c.norm().ln();

    let mut k1 = None;
    if let BoundCase::Tower { .. } = case {
        let mut est = 1.0f64;
        for &z in &inside {
            for l in 0..k.saturating_sub(1) {
                let im = match exp_tower(l, z) {
                    SafeValue::Finite(w) => w.im,
                    _ => f64::NAN,
                };
                est = est.min(im.cos());
            }
        }
        if !(est > 0.0) {
            let mut o = skipped(String::new());
            o.check = Check::new(case.id(), case.anchor(), Status::Inconclusive).with_details(
                format!("estimated K₁ = {est} is not positive: samples leave the tower region"),
            );
            o.out_of_region = out_of_region;
            o.k1 = Some(est);
            return Ok(o);
        }
        k1 = Some(est);
    }

    // (log |f(z)|, log bound or None when the bound is ≤ 0)
    let results: Vec<(f64, Option<f64>)> = inside
        .par_iter()
        .map(|&z| {
            let lf = m.eval(z).log_modulus();
            let bound = match case {
                BoundCase::LeftHalfPlane { m0 } => {
                    let b = bounds.lower(z.norm()) - c.norm() * m0.exp();
                    (b > 0.0).then(|| b.ln())
                }
                BoundCase::RightSector { alpha } | BoundCase::Tower { alpha } => {
                    let sec2 = 1.0 + alpha.tan().powi(2);
                    let poly_term = s * sec2.powf(d as f64 / 2.0) * z.re.abs().powi(d);
                    let k1_term = k1.map(|v| (*k as f64 - 1.0) * v.ln()).unwrap_or(0.0);
                    log_difference(ln_c + k1_term + z.re, poly_term)
                }
            };
            (lf, bound)
        })
        .collect();

    let mut violations = Vec::new();
    let mut min_margin = f64::INFINITY;
    let mut min_bound_log = Some(f64::INFINITY);
    for (&z, &(lf, lb)) in inside.iter().zip(&results) {
        match lb {
            Some(lb) => {
                min_margin = min_margin.min(lf - lb);
                if !(lf >= lb) {
                    violations.push(z);
                }
                min_bound_log = min_bound_log.map(|v: f64| v.min(lb));
            }
            None => min_bound_log = None,
        }
    }
    let mut details = format!(
        "{} samples checked, {} outside the region, {} violations",
        inside.len(),
        out_of_region,
        violations.len()
    );
    if let Some(v) = k1 {
        details.push_str(&format!("; K₁ = {v:.6} estimated from the same samples"));
    }
    if min_bound_log.is_none() {
        details.push_str("; the bound is non-positive at some samples");
    }
    for z in violations.iter().take(MAX_LISTED) {
        details.push_str(&format!(
            "; violated at {}",
            crate::parse::format_complex(*z)
        ));
    }
    let mut check = Check::new(
        case.id(),
        case.anchor(),
        Status::from_bool(violations.is_empty()),
    )
    .with_details(details);
    if min_margin.is_finite() {
        check = check.with_residual(min_margin);
    }
    Ok(CaseBoundOutcome {
        check,
        checked: inside.len(),
        out_of_region,
        violations,
        min_bound_log,
        k1,
    })
}

/// Draws `n` points from the region of `case` with `Re z ∈ [re_lo, re_hi]`.
///
/// Left half-plane samples take `Im z` uniform in `[-(re_hi - re_lo), re_hi - re_lo]`;
/// sector samples take `Im z` uniform within the sector at the sampled real
/// part; tower samples additionally keep `|Im z| ≤ 1`.
pub fn sample_case_points<R: Rng>(
    case: BoundCase,
    n: usize,
    re_lo: f64,
    re_hi: f64,
    rng: &mut R,
) -> Vec<Complex64> {
    (0..n)
        .map(|_| {
            let x = rng.gen_range(re_lo..re_hi);
            let h = match case {
                BoundCase::LeftHalfPlane { .. } => re_hi - re_lo,
                BoundCase::RightSector { alpha } => x.abs() * alpha.tan(),
                BoundCase::Tower { alpha } => (x.abs() * alpha.tan()).min(1.0),
            };
            Complex64::new(x, rng.gen_range(-h..=h) * (1.0 - 1e-12))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn quad() -> MapSpec {
        MapSpec::exp_plus(Poly::from_real(&[0.0, 0.0, 1.0])).unwrap()
    }

    #[test]
    fn left_half_plane_quadratic() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pts = sample_case_points(
            BoundCase::LeftHalfPlane { m0: 0.0 },
            1000,
            -50.0,
            0.0,
            &mut rng,
        );
        let o = case_bound_check(&quad(), BoundCase::LeftHalfPlane { m0: 0.0 }, &pts).unwrap();
        assert_eq!(o.check.status, Status::Pass, "{:?}", o.check);
        assert!(o.checked > 900);
    }

    #[test]
    fn sector_quadratic_positive_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let case = BoundCase::RightSector { alpha: PI / 6.0 };
        let pts = sample_case_points(case, 1000, 20.0, 40.0, &mut rng);
        let o = case_bound_check(&quad(), case, &pts).unwrap();
        assert_eq!(o.check.status, Status::Pass);
        assert_eq!(o.checked, 1000);
        assert!(o.bound_positive());
    }

    #[test]
    fn tower_case() {
        let m = MapSpec::f_two_beta(0.0).unwrap();
        let case = BoundCase::Tower { alpha: PI / 4.0 };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pts = sample_case_points(case, 500, 3.0, 6.0, &mut rng);
        let o = case_bound_check(&m, case, &pts).unwrap();
        assert_eq!(o.check.status, Status::Pass, "{:?}", o.check);
        assert!(o.k1.unwrap() > 0.5);
        // case 2a does not apply to k = 2
        let o = case_bound_check(&m, BoundCase::RightSector { alpha: 0.5 }, &pts).unwrap();
        assert_eq!(o.check.status, Status::Skipped);
    }

    #[test]
    fn empty_samples() {
        let o = case_bound_check(&quad(), BoundCase::LeftHalfPlane { m0: 0.0 }, &[]).unwrap();
        assert_eq!(o.check.status, Status::Pass);
        assert!(o.check.details.contains("no samples"));
    }

    #[test]
    fn log_difference_cases() {
        assert_eq!(log_difference(1.0, 0.0), Some(1.0));
        assert!(log_difference(1.0, 3.0).is_none());
        let v = log_difference(3.0, 1.0).unwrap();
        assert!((v - (3f64.exp() - 1.0).ln()).abs() < 1e-14);
    }
}
