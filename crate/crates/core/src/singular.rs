//! Critical points and critical values of `c·E^k + P`, and ray probes for
//! finite asymptotic values.
//!
//! The census over a finite window is evidence about the critical-value set,
//! not an enumeration of it.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{seed_lattice, Rect};
use crate::map::{EntireMap, MapSpec};
use crate::newton::{multi_start, NewtonConfig};
use crate::report::{Check, Status};
use crate::safe::SafeValue;

pub const NEWTON_TOL: f64 = 1e-10;
pub const DEDUP_RADIUS: f64 = 1e-6;
pub const CROSSCHECK_TOL: f64 = 1e-8;
pub const LIMIT_TOL: f64 = 1e-6;
pub const CLUSTER_MIN: usize = 3;
pub const CLUSTER_RADIUS: f64 = 1.0;
/// Seeds per unit length along each axis.
pub const DEFAULT_SEED_DENSITY: f64 = 4.0;

/// A root `z_n` of `f'` and, once filled, its critical value `w_n = f(z_n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalDatum {
    pub point: Complex64,
    pub value: Option<SafeValue>,
    /// `|f'(point)|`.
    pub residual: f64,
    pub window_id: usize,
    /// `|f(z_n) - (P(z_n) - P'(z_n))|`, only for `e^z + P`.
    pub discrepancy: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalCensus {
    pub data: Vec<CriticalDatum>,
    pub seeds: usize,
    /// Seeds that diverged, stalled, or converged outside the window.
    pub failed_seeds: usize,
}

fn require_tower(m: &MapSpec) -> Result<()> {
    match m {
        MapSpec::TowerPoly { .. } => Ok(()),
        MapSpec::HLambda { .. } => Err(Error::Precondition(
            "critical point search needs a c·E^k + P map".into(),
        )),
    }
}

/// Roots of `f'` in `window`, deduplicated and sorted by `(Im, Re)`.
pub fn critical_points(
    m: &MapSpec,
    window: &Rect,
    seed_density: f64,
    window_id: usize,
) -> Result<CriticalCensus> {
    require_tower(m)?;
    window.validate()?;
    let g = |z: Complex64| m.derivative(z).as_complex();
    let dg = |z: Complex64| m.second_derivative(z).as_complex();
    let cfg = NewtonConfig {
        tol: NEWTON_TOL,
        ..NewtonConfig::default()
    };
    let seeds = seed_lattice(window, seed_density);
    let found = multi_start(&g, &dg, &seeds, window, &cfg, DEDUP_RADIUS);
    Ok(CriticalCensus {
        data: found
            .roots
            .into_iter()
            .map(|r| CriticalDatum {
                point: r.z,
                value: None,
                residual: r.residual,
                window_id,
                discrepancy: None,
            })
            .collect(),
        seeds: found.seeds,
        failed_seeds: found.failed_seeds,
    })
}

/// Fills critical values. For `e^z + P` the value is also computed from the
/// identity `w = P(z) - P'(z)`; the returned indices are the points where the
/// two routes disagree by more than [`CROSSCHECK_TOL`].
pub fn critical_values(
    m: &MapSpec,
    points: Vec<CriticalDatum>,
) -> Result<(Vec<CriticalDatum>, Vec<usize>)> {
    require_tower(m)?;
    let identity_poly = match m {
        MapSpec::TowerPoly { k: 1, c, poly } if *c == Complex64::new(1.0, 0.0) => {
            Some((poly, poly.derivative()))
        }
        _ => None,
    };
    let mut flagged = Vec::new();
    let data = points
        .into_iter()
        .enumerate()
        .map(|(idx, mut d)| {
            let direct = m.eval(d.point);
            d.value = Some(direct);
            if let Some((p, dp)) = &identity_poly {
                let via_identity = p.eval(d.point) - dp.eval(d.point);
                let disc = match direct.as_complex() {
                    Some(w) => (w - via_identity).norm(),
                    None => f64::INFINITY,
                };
                if !(disc <= CROSSCHECK_TOL) {
                    flagged.push(idx);
                }
                d.discrepancy = Some(disc);
            }
            d
        })
        .collect();
    Ok((data, flagged))
}

/// Critical points and values for one window.
pub fn critical_data(
    m: &MapSpec,
    window: &Rect,
    seed_density: f64,
    window_id: usize,
) -> Result<(Vec<CriticalDatum>, Vec<usize>)> {
    let census = critical_points(m, window, seed_density, window_id)?;
    critical_values(m, census.data)
}

fn value_distance(a: &SafeValue, b: &SafeValue) -> f64 {
    match (a.as_complex(), b.as_complex()) {
        (Some(x), Some(y)) => (x - y).norm(),
        _ => a.relative_distance(b).unwrap_or(f64::INFINITY),
    }
}

/// Critical data and cross-check flags for each window.
pub type WindowData = Vec<(Vec<CriticalDatum>, Vec<usize>)>;

/// Critical data for each of the given windows.
pub fn window_data(m: &MapSpec, windows: &[Rect], seed_density: f64) -> Result<WindowData> {
    windows
        .iter()
        .enumerate()
        .map(|(id, w)| critical_data(m, w, seed_density, id))
        .collect()
}

/// Evidence that the critical values of `m` accumulate only at `∞`, from a
/// census over increasing windows.
pub fn accumulation_report(m: &MapSpec, windows: &[Rect], seed_density: f64) -> Result<Vec<Check>> {
    if windows.len() < 3 {
        return accumulation_checks(windows, Vec::new());
    }
    check_nested(windows)?;
    accumulation_checks(windows, window_data(m, windows, seed_density)?)
}

fn check_nested(windows: &[Rect]) -> Result<()> {
    for pair in windows.windows(2) {
        if !pair[1].strictly_contains(&pair[0]) {
            return Err(Error::Precondition(
                "windows must be strictly nested and increasing".into(),
            ));
        }
    }
    Ok(())
}

/// [`accumulation_report`] from precomputed [`window_data`].
pub fn accumulation_checks(windows: &[Rect], data: WindowData) -> Result<Vec<Check>> {
    const ANCHOR: &str = "w_n = P(z_n) - P'(z_n) → ∞; ∞ is the only limit point of critical values";
    if windows.len() < 3 {
        return Ok(vec![Check::new(
            "critical.accumulation",
            ANCHOR,
            Status::Inconclusive,
        )
        .with_details(format!(
            "insufficient windows: {} given, at least 3 needed",
            windows.len()
        ))]);
    }
    check_nested(windows)?;
    if data.len() != windows.len() {
        return Err(Error::Precondition(format!(
            "{} windows but critical data for {}",
            windows.len(),
            data.len()
        )));
    }
    let mut per_window = Vec::with_capacity(windows.len());
    let mut flagged_total = 0;
    let mut max_disc: f64 = 0.0;
    let mut max_residual: f64 = 0.0;
    for (data, flagged) in data {
        flagged_total += flagged.len();
        for d in &data {
            max_disc = max_disc.max(d.discrepancy.unwrap_or(0.0));
            max_residual = max_residual.max(d.residual);
        }
        per_window.push(data);
    }
    let mut checks = Vec::new();

    let counts: Vec<usize> = per_window.iter().map(Vec::len).collect();
    checks.push(
        Check::new(
            "critical.residuals",
            "f'(z_n) = 0",
            Status::from_bool(max_residual <= NEWTON_TOL && counts.iter().all(|&c| c > 0)),
        )
        .with_residual(max_residual)
        .with_details(format!(
            "critical points per window: {counts:?} (census evidence, not an enumeration)"
        )),
    );

    let has_identity = per_window.iter().flatten().any(|d| d.discrepancy.is_some());
    checks.push(if has_identity {
        Check::new(
            "critical.identity",
            "w_n = P(z_n) - P'(z_n)",
            Status::from_bool(flagged_total == 0),
        )
        .with_residual(max_disc)
        .with_details(format!(
            "{flagged_total} points beyond tolerance {CROSSCHECK_TOL:e}"
        ))
    } else {
        Check::new(
            "critical.identity",
            "w_n = P(z_n) - P'(z_n)",
            Status::Skipped,
        )
        .with_details("identity applies to e^z + P only")
    });

    // (a) values of a smaller window reappear in the next larger one
    let mut worst_match: f64 = 0.0;
    let mut unmatched = 0;
    for pair in per_window.windows(2) {
        for d in &pair[0] {
            let v = d.value.unwrap();
            let best = pair[1]
                .iter()
                .map(|e| value_distance(&v, &e.value.unwrap()))
                .fold(f64::INFINITY, f64::min);
            if best >= DEDUP_RADIUS {
                unmatched += 1;
            }
            worst_match = worst_match.max(best);
        }
    }
    checks.push(
        Check::new(
            "critical.nested",
            "critical values of a window persist in every larger window",
            Status::from_bool(unmatched == 0),
        )
        .with_residual(worst_match)
        .with_details(format!(
            "{unmatched} values without a partner within {DEDUP_RADIUS:e}"
        )),
    );

    // (b) ordered by |z_n|, the moduli |w_n| grow strictly past the smallest ones
    let mut tail_violations = 0;
    for data in &per_window {
        tail_violations += tail_growth_violations(data, 5);
    }
    checks.push(
        Check::new(
            "critical.tail_growth",
            "|w_n| strictly increasing in |z_n| beyond the 5 smallest",
            Status::from_bool(tail_violations == 0),
        )
        .with_details(format!(
            "{tail_violations} ordering violations across {} windows",
            windows.len()
        )),
    );

    let largest = windows.last().unwrap();
    let inscribed = largest.width().min(largest.height()) / 2.0;
    let radii = [inscribed / 8.0, inscribed / 4.0, inscribed / 2.0];
    let mins: Vec<f64> = radii
        .iter()
        .map(|&rho| {
            per_window
                .last()
                .unwrap()
                .iter()
                .filter(|d| d.point.norm() > rho)
                .map(|d| d.value.unwrap().modulus())
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let growing = mins.iter().all(|v| v.is_finite())
        && mins.windows(2).all(|p| p[1] >= p[0])
        && mins[mins.len() - 1] > mins[0];
    checks.push(
        Check::new(
            "critical.escape",
            "min{|w_n| : |z_n| > ρ} → ∞ as ρ → ∞",
            Status::from_bool(growing),
        )
        .with_details(format!("radii {radii:?} -> minimum moduli {mins:?}")),
    );

    let clusters = persistent_clusters(&per_window);
    checks.push(
        Check::new(
            "critical.no_cluster",
            "no finite accumulation point of critical values",
            Status::from_bool(clusters == 0),
        )
        .with_details(format!(
            "{clusters} clusters of >= {CLUSTER_MIN} values within radius {CLUSTER_RADIUS} persisting in all windows"
        )),
    );
    Ok(checks)
}

/// Groups critical data by `|z|` (conjugate pairs tie) and counts places
/// beyond the first `skip` groups where `|w|` fails to increase strictly.
pub fn tail_growth_violations(data: &[CriticalDatum], skip: usize) -> usize {
    let mut items: Vec<(f64, f64)> = data
        .iter()
        .map(|d| {
            (
                d.point.norm(),
                d.value.map(|v| v.log_modulus()).unwrap_or(f64::NAN),
            )
        })
        .collect();
    items.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut groups: Vec<(f64, f64, f64)> = Vec::new(); // (|z|, min log|w|, max log|w|)
    for (r, lw) in items {
        match groups.last_mut() {
            Some(g) if (r - g.0).abs() <= DEDUP_RADIUS * r.max(1.0) => {
                g.1 = g.1.min(lw);
                g.2 = g.2.max(lw);
            }
            _ => groups.push((r, lw, lw)),
        }
    }
    groups
        .windows(2)
        .skip(skip)
        .filter(|p| !(p[1].1 > p[0].2))
        .count()
}

fn persistent_clusters(per_window: &[Vec<CriticalDatum>]) -> usize {
    let finite = |data: &Vec<CriticalDatum>| -> Vec<Complex64> {
        data.iter()
            .filter_map(|d| d.value.and_then(|v| v.as_complex()))
            .collect()
    };
    let sets: Vec<Vec<Complex64>> = per_window.iter().map(finite).collect();
    sets[0]
        .iter()
        .filter(|&&center| {
            sets.iter().all(|vals| {
                vals.iter()
                    .filter(|v| (*v - center).norm() <= CLUSTER_RADIUS)
                    .count()
                    >= CLUSTER_MIN
            })
        })
        .count()
}

#[derive(Clone, Debug, PartialEq)]
pub struct RayProbe {
    /// Set when the last quartile of samples has diameter below [`LIMIT_TOL`].
    pub finite_limit: Option<Complex64>,
    /// Smallest modulus over the last quartile (`+∞` if it overflows).
    pub tail_min_modulus: f64,
    /// Parameter where the last quartile starts.
    pub tail_start: f64,
}

/// Samples `m` along `t·e^{iθ}` for log-spaced `t ∈ [1, t_max]`.
pub fn ray_limit<M: EntireMap + ?Sized>(
    m: &M,
    theta: f64,
    t_max: f64,
    samples: usize,
) -> Result<RayProbe> {
    if samples < 16 {
        return Err(Error::Precondition(format!(
            "ray probe needs at least 16 samples, got {samples}"
        )));
    }
    if !(t_max > 1.0) {
        return Err(Error::Precondition("t_max must exceed 1".into()));
    }
    let dir = Complex64::from_polar(1.0, theta);
    let ts: Vec<f64> = (0..samples)
        .map(|i| t_max.powf(i as f64 / (samples - 1) as f64))
        .collect();
    let values: Vec<SafeValue> = ts.par_iter().map(|&t| m.eval(dir * t)).collect();
    let start = samples * 3 / 4;
    let tail = &values[start..];
    let tail_min = tail
        .iter()
        .min_by(|a, b| a.cmp_modulus(b))
        .map(|v| v.modulus())
        .unwrap_or(f64::INFINITY);
    let finite: Option<Vec<Complex64>> = tail.iter().map(|v| v.as_complex()).collect();
    let finite_limit = finite.and_then(|pts| {
        let mut diam: f64 = 0.0;
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i + 1..] {
                diam = diam.max((a - b).norm());
            }
        }
        (diam < LIMIT_TOL).then(|| *pts.last().unwrap())
    });
    Ok(RayProbe {
        finite_limit,
        tail_min_modulus: tail_min,
        tail_start: ts[start],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::ReferenceExp;
    use crate::poly::Poly;
    use std::f64::consts::PI;

    fn exp_plus_z() -> MapSpec {
        MapSpec::exp_plus(Poly::identity()).unwrap()
    }

    fn assert_odd_pi_multiples(data: &[CriticalDatum], expected: &[f64]) {
        let got: Vec<Complex64> = data.iter().map(|d| d.point).collect();
        assert_eq!(got.len(), expected.len(), "{got:?}");
        for (g, &k) in got.iter().zip(expected) {
            assert!(
                (g - Complex64::new(0.0, k * PI)).norm() < 1e-9,
                "{g} vs {k}π i"
            );
        }
    }

    #[test]
    fn exp_plus_z_critical_points() {
        let census =
            critical_points(&exp_plus_z(), &Rect::square(10.0), DEFAULT_SEED_DENSITY, 0).unwrap();
        assert_odd_pi_multiples(&census.data, &[-3.0, -1.0, 1.0, 3.0]);
        assert!(census.data.iter().all(|d| d.residual <= NEWTON_TOL));
    }

    #[test]
    fn f_lambda_one_critical_points() {
        let m = MapSpec::f_lambda(1.0).unwrap();
        let census = critical_points(&m, &Rect::square(10.0), DEFAULT_SEED_DENSITY, 0).unwrap();
        assert_odd_pi_multiples(&census.data, &[-3.0, -1.0, 1.0, 3.0]);
    }

    #[test]
    fn far_window_is_empty() {
        let census = critical_points(
            &exp_plus_z(),
            &Rect::new(100.0, 101.0, 0.0, 1.0),
            DEFAULT_SEED_DENSITY,
            0,
        )
        .unwrap();
        assert!(census.data.is_empty());
    }

    #[test]
    fn h_lambda_rejected() {
        let h = MapSpec::h_lambda(1.0).unwrap();
        assert!(critical_points(&h, &Rect::square(1.0), 4.0, 0).is_err());
    }

    #[test]
    fn critical_value_examples() {
        let (data, flagged) =
            critical_data(&exp_plus_z(), &Rect::new(-1.0, 1.0, 0.0, 10.0), 4.0, 0).unwrap();
        assert!(flagged.is_empty());
        let vals: Vec<Complex64> = data
            .iter()
            .map(|d| d.value.unwrap().as_complex().unwrap())
            .collect();
        assert!((vals[0] - Complex64::new(-1.0, PI)).norm() < 1e-9);
        assert!((vals[1] - Complex64::new(-1.0, 3.0 * PI)).norm() < 1e-9);
    }

    #[test]
    fn quadratic_identity() {
        // e^z + z²: at roots of e^z = -2z the value is z² - 2z
        let m = MapSpec::exp_plus(Poly::from_real(&[0.0, 0.0, 1.0])).unwrap();
        let (data, flagged) = critical_data(&m, &Rect::square(12.0), 4.0, 0).unwrap();
        assert!(flagged.is_empty());
        assert!(!data.is_empty());
        for d in &data {
            let z = d.point;
            let w = d.value.unwrap().as_complex().unwrap();
            assert!((w - (z * z - 2.0 * z)).norm() < 1e-8);
        }
    }

    #[test]
    fn repolish_is_stable() {
        let m = MapSpec::exp_plus(Poly::from_real(&[1.0, -2.0, 1.0])).unwrap();
        let census = critical_points(&m, &Rect::square(15.0), 4.0, 0).unwrap();
        for d in &census.data {
            let mut z = d.point;
            for _ in 0..5 {
                let g = m.derivative(z).as_complex().unwrap();
                let dg = m.second_derivative(z).as_complex().unwrap();
                z -= g / dg;
            }
            assert!(
                (z - d.point).norm() < 10.0 * NEWTON_TOL,
                "{} moved to {}",
                d.point,
                z
            );
        }
    }

    #[test]
    fn insufficient_windows() {
        let checks = accumulation_report(&exp_plus_z(), &[Rect::square(10.0)], 4.0).unwrap();
        assert_eq!(checks.len(), 1);
        assert_eq!(checks[0].status, Status::Inconclusive);
        assert!(checks[0].details.contains("insufficient windows"));
    }

    #[test]
    fn accumulation_exp_plus_z() {
        let windows = [Rect::square(10.0), Rect::square(20.0), Rect::square(40.0)];
        let checks = accumulation_report(&exp_plus_z(), &windows, 2.0).unwrap();
        for c in &checks {
            assert_eq!(c.status, Status::Pass, "{c:?}");
        }
    }

    #[test]
    fn ray_probes() {
        let e = ray_limit(&ReferenceExp, PI, 100.0, 64).unwrap();
        let lim = e.finite_limit.expect("0 is an asymptotic value of e^z");
        assert!(lim.norm() < 1e-6);

        let p = ray_limit(&exp_plus_z(), PI, 100.0, 64).unwrap();
        assert!(p.finite_limit.is_none());
        assert!(p.tail_min_modulus >= p.tail_start - 1.0);
        let p2 = ray_limit(&exp_plus_z(), PI, 1000.0, 64).unwrap();
        assert!(p2.tail_min_modulus > p.tail_min_modulus);

        let f = ray_limit(&MapSpec::f_lambda(1.5).unwrap(), 0.0, 1000.0, 64).unwrap();
        assert!(f.finite_limit.is_none());
        // the last quartile starts near t = 178, where |f| ≈ 1.5·e^{178}
        assert!(f.tail_min_modulus > 1e77);
        assert!(ray_limit(&ReferenceExp, 0.0, 10.0, 8).is_err());
    }

    #[test]
    fn doubling_density_keeps_roots() {
        let m = MapSpec::exp_plus(Poly::from_real(&[0.0, 0.0, 1.0])).unwrap();
        let w = Rect::square(15.0);
        let coarse = critical_points(&m, &w, 1.0, 0).unwrap();
        let fine = critical_points(&m, &w, 2.0, 0).unwrap();
        for d in &coarse.data {
            assert!(fine
                .data
                .iter()
                .any(|e| (e.point - d.point).norm() < DEDUP_RADIUS));
        }
    }
}
