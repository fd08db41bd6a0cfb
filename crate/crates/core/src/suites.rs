//! Named verification suites bundled by `bovdyn verify`.
//!
//! Every suite is deterministic for a given [`SuiteOptions`]: random samples
//! come from a ChaCha8 stream seeded by `seed` and drawn sequentially, and
//! parallel work is collected in input order.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bov::{
    bov_evidence, case_bound_check, curve_growth, injectivity_falsifier, preimage_count,
    sample_case_points, BoundCase, CurveKind, CurveSpec, Sector,
};
use crate::dynamics::{
    classify_grid, example41_check, fixed_point_multiplier, h_real_line_checks, iterate,
    semiconjugacy_residual, translation_residuals, verdict_agreement, wandering_tracker, Verdict,
    LABEL_ESCAPED, LABEL_UNDECIDED,
};
use crate::error::{Error, Result};
use crate::geom::Rect;
use crate::lambert::exp_plus_square_critical_points;
use crate::map::{EntireMap, MapSpec, ReferenceExp};
use crate::poly::Poly;
use crate::report::{json::digest, pnm, Check, Status, VerificationReport};
use crate::singular::{accumulation_checks, window_data, DEFAULT_SEED_DENSITY};

pub const SUITE_NAMES: [&str; 7] = [
    "lemma23",
    "corollary13",
    "bovsuite",
    "example41",
    "example42",
    "example43",
    "all",
];

pub const POLY_COUNT: usize = 20;
pub const POLY_MAX_DEGREE: usize = 5;
pub const POLY_MAX_COEFF: f64 = 10.0;
pub const POLY_POINTS: usize = 10_000;
/// Sample moduli are log-uniform in `[ρ*, POLY_SPAN·ρ*]`.
pub const POLY_SPAN: f64 = 1e3;

pub const CRITICAL_WINDOWS: [f64; 3] = [20.0, 40.0, 80.0];
/// Distance allowed between a computed critical point and its closed form.
pub const ORACLE_TOL: f64 = 1e-8;

pub const CURVE_T: (f64, f64) = (1.0, 1e4);
pub const CURVE_SAMPLES: usize = 16_384;
pub const CURVE_TAIL: usize = 3;
/// Bound on the last decade minimum of `e^z` along the left ray.
pub const NEGATIVE_TAIL_MIN: f64 = 1e-3;

pub const PREIMAGE_DENSITY: f64 = 2.0;
/// Allowed relative deviation from a fourfold preimage count.
pub const PREIMAGE_RATIO_TOL: f64 = 0.1;

pub const SEMICONJUGACY_POINTS: usize = 1000;
pub const SEMICONJUGACY_TOL: f64 = 1e-10;
pub const MULTIPLIER_TOL: f64 = 1e-9;
pub const LINE_POINTS: usize = 100;
pub const TRANSLATION_POINTS: usize = 100;
pub const TRANSLATION_DEPTH: usize = 8;
pub const TRANSLATION_TOL: f64 = 1e-8;
pub const AGREEMENT_POINTS: usize = 200;
pub const H_REAL_SAMPLES: usize = 10_000;
/// Iteration budget for single orbits whose verdict is asserted.
pub const ORBIT_MAX_ITER: usize = 4096;
pub const SHIFT_GRID: usize = 48;

pub const WANDERING_STEPS: usize = 50;
pub const WANDERING_MIN_DEPTH: usize = 5;
pub const PI_ORBIT_STEPS: usize = 20;
pub const PI_ORBIT_TOL: f64 = 1e-10;

pub const EX41_BETAS: [f64; 3] = [-1.0, 0.0, 0.9];
pub const EX41_RADII: [(f64, f64); 2] = [(2.0, 10.0), (5.0, 25.0)];
pub const EX41_SAMPLES: usize = 1000;

pub const EX42_LAMBDAS: [f64; 3] = [0.5, 1.0, 1.5];
pub const EX43_LAMBDAS: [f64; 2] = [1.0, 1.5];

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Restricts the `λ` families to this parameter.
    pub lambda: Option<f64>,
    /// Restricts the `f_{2,β}` checks to this parameter.
    pub beta: Option<f64>,
    /// Raster size of the bov windows.
    pub resolution: usize,
    /// Raster size of basin images.
    pub image_resolution: usize,
    /// Iteration budget of basin images.
    pub max_iter: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0,
            lambda: None,
            beta: None,
            resolution: 1024,
            image_resolution: 256,
            max_iter: crate::dynamics::DEFAULT_MAX_ITER,
        }
    }
}

impl SuiteOptions {
    fn describe(&self) -> String {
        format!(
            "seed={} lambda={:?} beta={:?} resolution={} image_resolution={} max_iter={}",
            self.seed,
            self.lambda,
            self.beta,
            self.resolution,
            self.image_resolution,
            self.max_iter
        )
    }
}

/// A named binary output of a suite.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

#[derive(Clone, Debug)]
pub struct SuiteOutput {
    pub report: VerificationReport,
    pub artifacts: Vec<Artifact>,
}

/// Appends `@label` to every check id.
fn labelled(checks: Vec<Check>, label: &str) -> Vec<Check> {
    checks
        .into_iter()
        .map(|mut c| {
            c.id = format!("{}@{label}", c.id);
            c
        })
        .collect()
}

fn squares(half_widths: &[f64]) -> Vec<Rect> {
    half_widths.iter().map(|&h| Rect::square(h)).collect()
}

fn exp_plus_z() -> MapSpec {
    MapSpec::exp_plus(Poly::identity()).expect("valid map")
}

fn exp_plus_z2() -> MapSpec {
    MapSpec::exp_plus(Poly::from_real(&[0.0, 0.0, 1.0])).expect("valid map")
}

fn sample_square<R: Rng>(rng: &mut R, n: usize, half: f64) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-half..half), rng.gen_range(-half..half)))
        .collect()
}

fn sci_list(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn fmt_param(v: f64) -> String {
    format!("{v}")
}

// ---------------------------------------------------------------- lemma23

/// Polynomial of degree `1..=POLY_MAX_DEGREE` with coefficient moduli in
/// `[0, POLY_MAX_COEFF]` and uniform arguments; the leading modulus is at
/// least `0.1`.
pub fn random_poly<R: Rng>(rng: &mut R) -> Poly {
    let d = rng.gen_range(1..=POLY_MAX_DEGREE);
    let coeffs = (0..=d)
        .map(|i| {
            let r = if i == d {
                rng.gen_range(0.1..=POLY_MAX_COEFF)
            } else {
                rng.gen_range(0.0..=POLY_MAX_COEFF)
            };
            Complex64::from_polar(r, rng.gen_range(0.0..2.0 * PI))
        })
        .collect();
    Poly::new(coeffs)
}

/// Both polynomial growth bounds at `POLY_POINTS` points with `|z| ≥ ρ*`
/// for each of `POLY_COUNT` random polynomials.
pub fn poly_bound_checks(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lower_bad = 0usize;
    let mut upper_bad = 0usize;
    let mut lower_slack = f64::INFINITY;
    let mut upper_slack = f64::INFINITY;
    let mut degrees = Vec::with_capacity(POLY_COUNT);
    for _ in 0..POLY_COUNT {
        let p = random_poly(&mut rng);
        let b = p.bounds()?;
        degrees.push(p.degree());
        let pts: Vec<Complex64> = (0..POLY_POINTS)
            .map(|i| {
                let scale = if i == 0 {
                    1.0
                } else {
                    POLY_SPAN.powf(rng.gen::<f64>())
                };
                Complex64::from_polar(b.threshold * scale, rng.gen_range(0.0..2.0 * PI))
            })
            .collect();
        let res: Vec<(f64, f64, f64)> = pts
            .par_iter()
            .map(|&z| {
                let r = z.norm();
                (b.lower(r), p.eval(z).norm(), b.upper(r))
            })
            .collect();
        for (lo, v, hi) in res {
            if !(lo <= v) {
                lower_bad += 1;
            }
            if !(v <= hi) {
                upper_bad += 1;
            }
            lower_slack = lower_slack.min(v / lo);
            upper_slack = upper_slack.min(hi / v);
        }
    }
    let total = POLY_COUNT * POLY_POINTS;
    Ok(vec![
        Check::new(
            "poly.lower_bound",
            "|P(z)| ≥ (1/d)Σ_{i<d}|a_i||z|^i for |z| ≥ ρ*",
            Status::from_bool(lower_bad == 0),
        )
        .with_residual(lower_slack)
        .with_details(format!(
            "{lower_bad} of {total} samples violate; degrees {degrees:?}; smallest |P|/bound = {lower_slack:.6}"
        )),
        Check::new(
            "poly.upper_bound",
            "|P(z)| ≤ (Σ|a_i|)|z|^d for |z| ≥ ρ*",
            Status::from_bool(upper_bad == 0),
        )
        .with_residual(upper_slack)
        .with_details(format!(
            "{upper_bad} of {total} samples violate; smallest bound/|P| = {upper_slack:.6}"
        )),
    ])
}

// ------------------------------------------------------------ corollary13

/// Closed-form critical points of `e^z + P` inside `window` for `P = z`
/// (`(2k+1)πi`) and `P = z²` (`-W_k(1/2)`).
pub fn closed_form_critical_points(square_degree: bool, window: &Rect) -> Result<Vec<Complex64>> {
    let pts = if square_degree {
        exp_plus_square_critical_points(window.im_min, window.im_max)?
    } else {
        let k_lo = (window.im_min / PI).floor() as i64 - 1;
        let k_hi = (window.im_max / PI).ceil() as i64 + 1;
        (k_lo..=k_hi)
            .filter(|k| k.rem_euclid(2) == 1)
            .map(|k| Complex64::new(0.0, k as f64 * PI))
            .collect()
    };
    Ok(pts.into_iter().filter(|&z| window.contains(z)).collect())
}

/// Largest distance from a point of either set to the nearest point of the
/// other, or infinity when the sizes differ.
fn set_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let one_way = |x: &[Complex64], y: &[Complex64]| {
        x.iter()
            .map(|p| {
                y.iter()
                    .map(|q| (p - q).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

/// Critical points against their closed forms, and accumulation evidence for
/// the critical values, for `e^z + z` and `e^z + z²`.
pub fn critical_checks() -> Result<Vec<Check>> {
    let windows = squares(&CRITICAL_WINDOWS);
    let mut checks = Vec::new();
    for (label, square, m) in [
        ("e^z+z", false, exp_plus_z()),
        ("e^z+z^2", true, exp_plus_z2()),
    ] {
        let data = window_data(&m, &windows, DEFAULT_SEED_DENSITY)?;
        let mut worst: f64 = 0.0;
        let mut counts = Vec::new();
        for (w, (found, _)) in windows.iter().zip(&data) {
            let found: Vec<Complex64> = found.iter().map(|d| d.point).collect();
            let oracle = closed_form_critical_points(square, w)?;
            counts.push((found.len(), oracle.len()));
            worst = worst.max(set_distance(&found, &oracle));
        }
        let anchor = if square {
            "critical points are -W_k(1/2)"
        } else {
            "critical points are (2k+1)πi"
        };
        checks.push(
            Check::new(
                format!("critical.closed_form@{label}"),
                anchor,
                Status::from_bool(worst <= ORACLE_TOL),
            )
            .with_residual(worst)
            .with_details(format!(
                "(found, closed form) per window {counts:?}; worst distance {worst:e}"
            )),
        );
        checks.extend(labelled(accumulation_checks(&windows, data)?, label));
    }
    Ok(checks)
}

// --------------------------------------------------------------- bovsuite

/// `(label, map, R, window half-widths)` of the positive controls.
pub fn positive_controls() -> Vec<(&'static str, MapSpec, f64, Vec<f64>)> {
    vec![
        ("e^z+z", exp_plus_z(), 10.0, vec![20.0, 40.0, 80.0]),
        (
            "f_2,0",
            MapSpec::f_two_beta(0.0).expect("valid map"),
            20.0,
            vec![12.5, 25.0, 50.0],
        ),
    ]
}

pub const NEGATIVE_CONTROL_R: f64 = 10.0;
pub const NEGATIVE_CONTROL_WINDOWS: [f64; 3] = [20.0, 40.0, 80.0];

fn mask_artifact(name: &str, ev: &crate::bov::BovEvidence) -> Result<Artifact> {
    Ok(Artifact {
        name: name.to_string(),
        bytes: pnm::emit_pbm(ev.masks.last().expect("at least three windows"))?,
    })
}

/// bov evidence for the positive controls, with the superlevel mask of each
/// largest window.
pub fn bov_positive_checks(resolution: usize) -> Result<(Vec<Check>, Vec<Artifact>)> {
    let mut checks = Vec::new();
    let mut artifacts = Vec::new();
    for (label, m, r, hs) in positive_controls() {
        let ev = bov_evidence(&m, r, &squares(&hs), resolution)?;
        artifacts.push(mask_artifact(
            &format!("bov_{}_R{r}.pbm", label.replace(['^', '+', ','], "_")),
            &ev,
        )?);
        checks.extend(labelled(ev.checks, label));
    }
    Ok((checks, artifacts))
}

/// The exponential must fail the bov census in every window, and its values
/// along the left ray must decay.
pub fn bov_negative_checks(resolution: usize) -> Result<(Vec<Check>, Vec<Artifact>)> {
    let ev = bov_evidence(
        &ReferenceExp,
        NEGATIVE_CONTROL_R,
        &squares(&NEGATIVE_CONTROL_WINDOWS),
        resolution,
    )?;
    let spanning: Vec<bool> = ev.windows.iter().map(|w| w.spanning).collect();
    let failed = ev.status() == Status::Fail && spanning.iter().all(|&s| s);
    let curve = CurveSpec::new(CurveKind::LeftRay, CURVE_T.0, CURVE_T.1)?;
    let g = curve_growth(&ReferenceExp, &curve, CURVE_SAMPLES)?;
    let minima = g.minima();
    let last = *minima.last().unwrap_or(&f64::INFINITY);
    let checks = vec![
        Check::new(
            "control.exp_census",
            "e^z: {|e^z| ≤ R} is a half-plane, so the bov census fails",
            Status::from_bool(failed),
        )
        .with_details(format!(
            "census status {}; sublevel component touching ≥ 3 frame edges per window {spanning:?}",
            ev.status()
        )),
        Check::new(
            "control.exp_left_ray",
            "|e^{-t}| → 0 along the left ray",
            Status::from_bool(g.non_increasing() && last < NEGATIVE_TAIL_MIN),
        )
        .with_residual(last)
        .with_details(format!("decade minima {}", sci_list(&minima))),
    ];
    let artifacts = vec![mask_artifact(
        &format!("bov_exp_R{NEGATIVE_CONTROL_R}.pbm"),
        &ev,
    )?];
    Ok((checks, artifacts))
}

pub fn curve_kinds() -> [(&'static str, CurveKind); 4] {
    [
        ("left_ray", CurveKind::LeftRay),
        ("sector_ray", CurveKind::SectorRay(FRAC_PI_4)),
        ("vertical_zigzag", CurveKind::VerticalZigzag(1.4)),
        ("log_spiral", CurveKind::LogSpiral(0.0, 3.0)),
    ]
}

/// Per-decade minima of `|f|` along four unbounded curves for `e^z + z` and
/// `e^z + z²`.
pub fn curve_checks() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (label, m) in [("e^z+z", exp_plus_z()), ("e^z+z^2", exp_plus_z2())] {
        for (name, kind) in curve_kinds() {
            let g = curve_growth(
                &m,
                &CurveSpec::new(kind, CURVE_T.0, CURVE_T.1)?,
                CURVE_SAMPLES,
            )?;
            checks.push(
                Check::new(
                    format!("curve.growth@{label}/{name}"),
                    "f(γ) is unbounded along an unbounded curve γ",
                    Status::from_bool(g.eventually_increasing(CURVE_TAIL)),
                )
                .with_details(format!(
                    "{kind:?}: decade minima {}; increasing tail {}",
                    sci_list(&g.minima()),
                    g.increasing_tail()
                )),
            );
        }
    }
    Ok(checks)
}

/// Preimages of `0` under `e^z + z` on `[-20,20]×[-H,H]` for `H = 100, 400`.
pub fn preimage_checks() -> Result<Vec<Check>> {
    let m = exp_plus_z();
    let w = Complex64::new(0.0, 0.0);
    let small = preimage_count(
        &m,
        w,
        &Rect::new(-20.0, 20.0, -100.0, 100.0),
        PREIMAGE_DENSITY,
    )?;
    let large = preimage_count(
        &m,
        w,
        &Rect::new(-20.0, 20.0, -400.0, 400.0),
        PREIMAGE_DENSITY,
    )?;
    let ratio = large as f64 / small.max(1) as f64;
    Ok(vec![Check::new(
        "preimage.growth",
        "every finite value has infinitely many preimages",
        Status::from_bool(small > 0 && (ratio - 4.0).abs() <= 4.0 * PREIMAGE_RATIO_TOL),
    )
    .with_residual(ratio)
    .with_details(format!(
        "{small} preimages of 0 for |Im| ≤ 100, {large} for |Im| ≤ 400"
    ))])
}

/// Lower bounds on `|f|` in the three regions near `∞`.
pub fn case_bound_checks(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xb0);
    let quad = exp_plus_z2();
    let left = BoundCase::LeftHalfPlane { m0: 0.0 };
    let sector = BoundCase::RightSector { alpha: FRAC_PI_6 };
    let tower = BoundCase::Tower { alpha: FRAC_PI_4 };
    let pts_left = sample_case_points(left, 1000, -50.0, 0.0, &mut rng);
    let pts_sector = sample_case_points(sector, 1000, 20.0, 40.0, &mut rng);
    let pts_tower = sample_case_points(tower, 1000, 3.0, 6.0, &mut rng);
    let a = case_bound_check(&quad, left, &pts_left)?;
    let b = case_bound_check(&quad, sector, &pts_sector)?;
    let mut b_check = b.check.clone();
    if b_check.status == Status::Pass && !b.bound_positive() {
        b_check.status = Status::Fail;
        b_check
            .details
            .push_str("; the bound is not positive everywhere");
    }
    let c = case_bound_check(&MapSpec::f_two_beta(0.0)?, tower, &pts_tower)?;
    let mut out = labelled(vec![a.check, b_check], "e^z+z^2");
    out.extend(labelled(vec![c.check], "f_2,0"));
    Ok(out)
}

/// Injectivity of `z²` on a sector inside `|Arg z| < π/2`, of `z` on the
/// plane, and a collision of `z²` on the plane.
pub fn injectivity_checks(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1a);
    let square = Poly::from_real(&[0.0, 0.0, 1.0]);
    let half = Sector::new(Complex64::new(0.0, 0.0), 0.0, FRAC_PI_2 - 0.01, 100.0)?;
    let a = injectivity_falsifier(&square, &half, 100_000, &mut rng)?;
    let b = injectivity_falsifier(
        &Poly::identity(),
        &Sector::whole_plane(100.0)?,
        10_000,
        &mut rng,
    )?;
    let c = injectivity_falsifier(&square, &Sector::whole_plane(100.0)?, 1000, &mut rng)?;
    let report = |r: &crate::bov::InjectivityResult| match r.collision {
        None => format!("no collision in {} trials", r.trials_run),
        Some((u, v)) => format!("collision {u} ~ {v} at trial {}", r.trials_run),
    };
    Ok(vec![
        Check::new(
            "injectivity.sector@z^2",
            "P is injective in |Arg z| < π/d",
            Status::from_bool(a.collision.is_none()),
        )
        .with_details(report(&a)),
        Check::new(
            "injectivity.plane@z",
            "a degree-1 P is injective on ℂ",
            Status::from_bool(b.collision.is_none()),
        )
        .with_details(report(&b)),
        Check::new(
            "injectivity.control@z^2",
            "z² identifies z and -z",
            Status::from_bool(c.collision.is_some()),
        )
        .with_details(report(&c)),
    ])
}

// -------------------------------------------------------------- example41

pub fn example41_checks(beta: Option<f64>) -> Result<Vec<Check>> {
    let betas = beta.map(|b| vec![b]).unwrap_or_else(|| EX41_BETAS.to_vec());
    let mut out = Vec::new();
    for b in betas {
        for (r, big_r) in EX41_RADII {
            let label = format!(
                "beta={},r={},R={}",
                fmt_param(b),
                fmt_param(r),
                fmt_param(big_r)
            );
            out.extend(labelled(
                example41_check(b, r, big_r, EX41_SAMPLES)?,
                &label,
            ));
        }
    }
    Ok(out)
}

// -------------------------------------------------------------- example42

fn lambda_list(lambda: Option<f64>, defaults: &[f64]) -> Vec<f64> {
    lambda.map(|l| vec![l]).unwrap_or_else(|| defaults.to_vec())
}

fn linspace_centers(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo + (hi - lo) * (i as f64 + 0.5) / n as f64)
}

/// Checks on `f_λ` and `h_λ` for one `λ`; the seeded samples come from `rng`.
pub fn example42_lambda_checks<R: Rng>(lambda: f64, rng: &mut R) -> Result<Vec<Check>> {
    let f = MapSpec::f_lambda(lambda)?;
    let mut checks = Vec::new();

    let want = Complex64::new(1.0 - lambda, 0.0);
    let mut mult_err: f64 = 0.0;
    for z in [Complex64::new(0.0, PI), Complex64::new(0.0, 3.0 * PI)] {
        mult_err = mult_err.max((fixed_point_multiplier(&f, z)? - want).norm());
    }
    checks.push(
        Check::new(
            "ex42.multiplier",
            "f_λ'((2k+1)πi) = 1 - λ",
            Status::from_bool(mult_err <= MULTIPLIER_TOL),
        )
        .with_residual(mult_err)
        .with_details(format!(
            "at πi and 3πi: worst |f'(z) - (1-λ)| = {mult_err:e}"
        )),
    );

    let pts = sample_square(rng, SEMICONJUGACY_POINTS, 5.0);
    let res: Vec<Option<f64>> = pts
        .par_iter()
        .map(|&z| semiconjugacy_residual(lambda, z).ok().flatten())
        .collect();
    let missing = res.iter().filter(|r| r.is_none()).count();
    let worst = res.iter().flatten().fold(0.0f64, |a, &b| a.max(b));
    checks.push(
        Check::new(
            "ex42.semiconjugacy",
            "h_λ ∘ exp = exp ∘ f_λ",
            Status::from_bool(missing == 0 && worst < SEMICONJUGACY_TOL),
        )
        .with_residual(worst)
        .with_details(format!(
            "{} points of [-5,5]²: worst relative residual {worst:e}, {missing} saturated",
            pts.len()
        )),
    );

    checks.extend(h_real_line_checks(lambda, H_REAL_SAMPLES)?);

    let line: Vec<Complex64> = linspace_centers(-6.0, 6.0, LINE_POINTS)
        .map(|x| Complex64::new(x, PI))
        .collect();
    let verdicts: Vec<Verdict> = line
        .par_iter()
        .map(|&z| iterate(&f, z, ORBIT_MAX_ITER).map(|o| o.verdict))
        .collect::<Result<_>>()?;
    let to_pi = verdicts
        .iter()
        .filter(|v| matches!(v, Verdict::Converged { k_index: 0, .. }))
        .count();
    checks.push(
        Check::new(
            "ex42.line_converges",
            "Im z = π lies in the basin of πi",
            Status::from_bool(to_pi == LINE_POINTS),
        )
        .with_details(format!(
            "{to_pi} of {LINE_POINTS} points of [-6,6] + πi converge to πi"
        )),
    );
    let real: Vec<Complex64> = linspace_centers(-6.0, 6.0, LINE_POINTS)
        .map(|x| Complex64::new(x, 0.0))
        .collect();
    let escaped = real
        .par_iter()
        .map(|&z| {
            iterate(&f, z, ORBIT_MAX_ITER).map(|o| matches!(o.verdict, Verdict::Escaped { .. }))
        })
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|&e| e)
        .count();
    checks.push(
        Check::new(
            "ex42.real_escapes",
            "f_λ^n(x) → ∞ for real x",
            Status::from_bool(escaped == LINE_POINTS),
        )
        .with_details(format!(
            "{escaped} of {LINE_POINTS} points of [-6,6] escape"
        )),
    );

    let pts = sample_square(rng, TRANSLATION_POINTS, 5.0);
    let runs: Vec<Vec<f64>> = pts
        .par_iter()
        .map(|&z| translation_residuals(lambda, z, TRANSLATION_DEPTH))
        .collect::<Result<_>>()?;
    let worst = runs.iter().flatten().fold(0.0f64, |a, &b| a.max(b));
    let full = runs.iter().filter(|r| r.len() == TRANSLATION_DEPTH).count();
    checks.push(
        Check::new(
            "ex42.translation",
            "f_λ^n(z + 2πi) = f_λ^n(z) + 2πi",
            Status::from_bool(worst < TRANSLATION_TOL),
        )
        .with_residual(worst)
        .with_details(format!(
            "{} points of [-5,5]², n ≤ {TRANSLATION_DEPTH} until escape: worst relative residual {worst:e}; {full} points reach n = {TRANSLATION_DEPTH}",
            pts.len()
        )),
    );

    let pts: Vec<Complex64> = (0..AGREEMENT_POINTS)
        .map(|_| Complex64::new(rng.gen_range(-5.0..5.0), rng.gen_range(-PI..PI)))
        .collect();
    let agree = verdict_agreement(lambda, &pts, ORBIT_MAX_ITER)?;
    checks.push(
        Check::new(
            "ex42.verdict_agreement",
            "f_λ^n(z) converges iff h_λ^n(e^z) → -1",
            Status::from_bool(agree.disagree == 0 && agree.agree > 0),
        )
        .with_details(format!(
            "{} agree, {} disagree, {} undecided",
            agree.agree, agree.disagree, agree.skipped
        )),
    );

    let base = Rect::new(-6.0, 6.0, 0.0, 2.0 * PI);
    let g0 = classify_grid(&f, &base, SHIFT_GRID, SHIFT_GRID, ORBIT_MAX_ITER)?;
    let g1 = classify_grid(
        &f,
        &base.translated(Complex64::new(0.0, 2.0 * PI)),
        SHIFT_GRID,
        SHIFT_GRID,
        ORBIT_MAX_ITER,
    )?;
    let mut compared = 0usize;
    let mut mismatched = 0usize;
    for (&a, &b) in g0.labels.iter().zip(&g1.labels) {
        if a == LABEL_UNDECIDED || b == LABEL_UNDECIDED {
            continue;
        }
        compared += 1;
        let ok = match (
            crate::dynamics::decode_label(a),
            crate::dynamics::decode_label(b),
        ) {
            (Some(k), Some(j)) => j == k + 1,
            (None, None) => a == LABEL_ESCAPED && b == LABEL_ESCAPED,
            _ => false,
        };
        if !ok {
            mismatched += 1;
        }
    }
    checks.push(
        Check::new(
            "ex42.basin_shift",
            "z ∈ A((2k+1)πi) iff z + 2πi ∈ A((2k+3)πi)",
            Status::from_bool(mismatched == 0 && compared > 0),
        )
        .with_details(format!(
            "{SHIFT_GRID}² grid on [-6,6]×[0,2π]: {mismatched} of {compared} decided pixels disagree"
        )),
    );
    Ok(checks)
}

/// Basin raster of `f_λ` on `[-6,6]×[-2π,2π]`.
pub fn basin_image(lambda: f64, resolution: usize, max_iter: usize) -> Result<Artifact> {
    let f = MapSpec::f_lambda(lambda)?;
    let g = classify_grid(
        &f,
        &Rect::new(-6.0, 6.0, -2.0 * PI, 2.0 * PI),
        resolution,
        resolution,
        max_iter,
    )?;
    Ok(Artifact {
        name: format!("example42_basins_lambda{}.ppm", fmt_param(lambda)),
        bytes: pnm::emit_ppm_grid(&g)?,
    })
}

// -------------------------------------------------------------- example43

/// Wandering orbits of `F_λ` from `-2 + πi`, and the exact orbit of `πi`
/// under `F_1` when `λ = 1` is among the parameters.
pub fn example43_checks(lambda: Option<f64>) -> Result<Vec<Check>> {
    let lambdas = lambda_list(lambda, &EX43_LAMBDAS);
    let mut out = Vec::new();
    let z0 = Complex64::new(-2.0, PI);
    for &l in &lambdas {
        let t = wandering_tracker(l, z0, WANDERING_STEPS)?;
        let worst = t
            .translation_residuals
            .iter()
            .fold(0.0f64, |a, &b| a.max(b));
        let label = format!("lambda={}", fmt_param(l));
        out.push(
            Check::new(
                format!("ex43.translation@{label}"),
                "F_λ^n = f_λ^n + 2nπi",
                Status::from_bool(t.depth >= WANDERING_MIN_DEPTH && worst < TRANSLATION_TOL),
            )
            .with_residual(worst)
            .with_details(format!(
                "from -2+πi: depth {}, worst relative residual {worst:e}",
                t.depth
            )),
        );
        out.push(
            Check::new(
                format!("ex43.escape@{label}"),
                "F_λ^n(z) → ∞ with increasing imaginary part",
                Status::from_bool(t.escape_confirmed),
            )
            .with_details(match t.escape_step {
                Some(n) => format!("|F^n| passed the escape radius at n = {n}"),
                None => "no escape within the step cap".to_string(),
            }),
        );
    }
    if lambdas.contains(&1.0) {
        let big = MapSpec::big_f_lambda(1.0)?;
        let mut z = Complex64::new(0.0, PI);
        let mut worst: f64 = 0.0;
        for n in 1..=PI_ORBIT_STEPS {
            z = big
                .eval(z)
                .as_complex()
                .ok_or_else(|| Error::Precondition("orbit of πi saturated".into()))?;
            worst = worst.max((z - Complex64::new(0.0, (2 * n + 1) as f64 * PI)).norm());
        }
        out.push(
            Check::new(
                "ex43.orbit_pi_i@lambda=1",
                "F_1^n(πi) = (2n+1)πi",
                Status::from_bool(worst <= PI_ORBIT_TOL),
            )
            .with_residual(worst)
            .with_details(format!(
                "n ≤ {PI_ORBIT_STEPS}: worst |F^n(πi) - (2n+1)πi| = {worst:e}"
            )),
        );
    }
    Ok(out)
}

// ------------------------------------------------------------------ suites

fn finish(
    name: &str,
    opts: &SuiteOptions,
    checks: Vec<Check>,
    artifacts: Vec<Artifact>,
) -> SuiteOutput {
    let mut report = VerificationReport::new(name);
    report.extend(checks);
    report.input_digest = digest(&format!("suite={name} {}", opts.describe()));
    SuiteOutput { report, artifacts }
}

fn suite_parts(name: &str, opts: &SuiteOptions) -> Result<(Vec<Check>, Vec<Artifact>)> {
    let mut checks = Vec::new();
    let mut artifacts = Vec::new();
    match name {
        "lemma23" => checks = poly_bound_checks(opts.seed)?,
        "corollary13" => checks = critical_checks()?,
        "bovsuite" => {
            let (c, a) = bov_positive_checks(opts.resolution)?;
            checks.extend(c);
            artifacts.extend(a);
            let (c, a) = bov_negative_checks(opts.resolution)?;
            checks.extend(c);
            artifacts.extend(a);
            checks.extend(curve_checks()?);
            checks.extend(preimage_checks()?);
            checks.extend(case_bound_checks(opts.seed)?);
            checks.extend(injectivity_checks(opts.seed)?);
        }
        "example41" => checks = example41_checks(opts.beta)?,
        "example42" => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            for l in lambda_list(opts.lambda, &EX42_LAMBDAS) {
                checks.extend(labelled(
                    example42_lambda_checks(l, &mut rng)?,
                    &format!("lambda={}", fmt_param(l)),
                ));
                artifacts.push(basin_image(l, opts.image_resolution, opts.max_iter)?);
            }
        }
        "example43" => checks = example43_checks(opts.lambda)?,
        "all" => {
            for sub in &SUITE_NAMES[..SUITE_NAMES.len() - 1] {
                let (c, a) = suite_parts(sub, opts)?;
                checks.extend(c);
                artifacts.extend(a);
            }
        }
        other => {
            return Err(Error::Precondition(format!(
                "unknown suite `{other}`; expected one of {}",
                SUITE_NAMES.join(", ")
            )))
        }
    }
    Ok((checks, artifacts))
}

/// Runs the named suite.
pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<SuiteOutput> {
    let (checks, artifacts) = suite_parts(name, opts)?;
    Ok(finish(name, opts, checks, artifacts))
}
