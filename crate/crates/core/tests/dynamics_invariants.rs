use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bovdyn::dynamics::{
    classify_grid, decode_label, fixed_point_multiplier, iterate, translation_residuals,
    verdict_agreement, GridClassification, Verdict, LABEL_ESCAPED, LABEL_UNDECIDED,
};
use bovdyn::geom::Rect;
use bovdyn::MapSpec;

fn lambda() -> impl Strategy<Value = f64> {
    0.1..1.9f64
}

#[test]
fn translation_equivariance_at_a_thousand_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let l = rng.gen_range(0.1..1.9);
        let z = Complex64::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let res = translation_residuals(l, z, 8).unwrap();
        assert!(res.iter().all(|&r| r < 1e-8), "λ={l} z={z}: {res:?}");
    }
}

#[test]
fn verdicts_agree_with_h() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for l in [0.5, 1.0, 1.5] {
        let pts: Vec<Complex64> = (0..1000)
            .map(|_| Complex64::new(rng.gen_range(-5.0..5.0), rng.gen_range(-PI..PI)))
            .collect();
        let a = verdict_agreement(l, &pts, 4096).unwrap();
        assert_eq!(a.disagree, 0, "λ={l}: {a:?}");
        assert!(a.agree > 500, "λ={l}: {a:?}");
    }
}

/// Pixels whose 4-neighbours carry the same label.
fn uniform(g: &GridClassification) -> Vec<bool> {
    let (nx, ny) = (g.nx(), g.ny());
    let mut out = vec![false; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            let l = g.label(i, j);
            let mut same = true;
            if i > 0 {
                same &= g.label(i - 1, j) == l;
            }
            if i + 1 < nx {
                same &= g.label(i + 1, j) == l;
            }
            if j > 0 {
                same &= g.label(i, j - 1) == l;
            }
            if j + 1 < ny {
                same &= g.label(i, j + 1) == l;
            }
            out[j * nx + i] = same;
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn basin_labels_shift_with_the_window(l in lambda(), re0 in -6.0..0.0f64, im0 in -PI..PI) {
        let f = MapSpec::f_lambda(l).unwrap();
        let w = Rect::new(re0, re0 + 6.0, im0, im0 + 2.0 * PI);
        let a = classify_grid(&f, &w, 24, 24, 4096).unwrap();
        let b = classify_grid(&f, &w.translated(Complex64::new(0.0, 2.0 * PI)), 24, 24, 4096).unwrap();
        let (ua, ub) = (uniform(&a), uniform(&b));
        for (p, (&x, &y)) in a.labels.iter().zip(&b.labels).enumerate() {
            if x == LABEL_UNDECIDED || y == LABEL_UNDECIDED || !(ua[p] && ub[p]) {
                continue;
            }
            match (decode_label(x), decode_label(y)) {
                (Some(k), Some(j)) => prop_assert_eq!(j, k + 1),
                _ => prop_assert!(x == LABEL_ESCAPED && y == LABEL_ESCAPED, "{x} vs {y}"),
            }
        }
    }

    #[test]
    fn h_negative_axis_converges_positive_axis_escapes(l in lambda(), t in -6.0..6.0f64) {
        let h = MapSpec::h_lambda(l).unwrap();
        let x = 10f64.powf(t);
        // climbing out of the underflow region takes about |x| steps
        let neg = iterate(&h, Complex64::new(-x, 0.0), 4_000_000).unwrap().verdict;
        prop_assert!(matches!(neg, Verdict::Converged { k_index: 0, .. }), "-{x}: {neg:?}");
        let pos = iterate(&h, Complex64::new(x, 0.0), 4096).unwrap().verdict;
        prop_assert!(matches!(pos, Verdict::Escaped { .. }), "{x}: {pos:?}");
    }

    #[test]
    fn multiplier_at_found_fixed_points(l in lambda(), im in -20.0..20.0f64) {
        let f = MapSpec::f_lambda(l).unwrap();
        let o = iterate(&f, Complex64::new(-1.0, im), 4096).unwrap();
        if let Verdict::Converged { fixed_point, .. } = o.verdict {
            let mu = fixed_point_multiplier(&f, fixed_point).unwrap();
            prop_assert!((mu - Complex64::new(1.0 - l, 0.0)).norm() <= 1e-9);
        }
    }
}
