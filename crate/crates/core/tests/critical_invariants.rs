use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use bovdyn::geom::Rect;
use bovdyn::singular::{critical_data, critical_points, CROSSCHECK_TOL, NEWTON_TOL};
use bovdyn::{EntireMap, MapSpec, Poly};

fn exp_plus(coeffs: &[f64]) -> MapSpec {
    MapSpec::exp_plus(Poly::from_real(coeffs)).unwrap()
}

fn window(re: f64, im: f64, w: f64, h: f64) -> Rect {
    Rect::new(re, re + w, im, im + h)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exp_plus_z_roots_are_odd_multiples_of_pi_i(re in -8.0..2.0f64, im in -60.0..60.0f64, w in 1.0..6.0f64, h in 2.0..20.0f64) {
        let win = window(re, im, w, h);
        let found = critical_points(&exp_plus(&[0.0, 1.0]), &win, 4.0, 0).unwrap().data;
        let oracle: Vec<f64> = (-40i64..40)
            .map(|k| (2 * k + 1) as f64 * PI)
            .filter(|&y| win.contains(Complex64::new(0.0, y)))
            .collect();
        prop_assert_eq!(found.len(), oracle.len());
        for (d, y) in found.iter().zip(&oracle) {
            prop_assert!((d.point - Complex64::new(0.0, *y)).norm() <= 1e-8, "{} vs {y}", d.point);
        }
    }

    #[test]
    fn accepted_roots_are_polished(c0 in -3.0..3.0f64, c1 in -3.0..3.0f64, c2 in 0.2..2.0f64, im in -30.0..30.0f64) {
        let m = exp_plus(&[c0, c1, c2]);
        let win = window(-6.0, im, 10.0, 12.0);
        let (data, flagged) = critical_data(&m, &win, 4.0, 0).unwrap();
        prop_assert!(flagged.is_empty());
        for d in &data {
            prop_assert!(d.residual <= NEWTON_TOL);
            prop_assert!(d.discrepancy.unwrap() <= CROSSCHECK_TOL);
            // five more Newton steps on f' barely move the point
            let mut z = d.point;
            for _ in 0..5 {
                let g = m.derivative(z).as_complex().unwrap();
                let dg = m.second_derivative(z).as_complex().unwrap();
                z -= g / dg;
            }
            prop_assert!((z - d.point).norm() < 10.0 * NEWTON_TOL * d.point.norm().max(1.0));
        }
    }

    #[test]
    fn doubling_density_keeps_roots(c1 in -3.0..3.0f64, im in -30.0..30.0f64) {
        let m = exp_plus(&[0.0, c1, 1.0]);
        let win = window(-5.0, im, 8.0, 10.0);
        let coarse = critical_points(&m, &win, 2.0, 0).unwrap().data;
        let fine = critical_points(&m, &win, 4.0, 0).unwrap().data;
        for d in &coarse {
            prop_assert!(fine.iter().any(|e| (e.point - d.point).norm() < 1e-6), "lost {}", d.point);
        }
    }
}

#[test]
fn identity_holds_for_cubic() {
    let m = exp_plus(&[1.0, -2.0, 0.5, 0.25]);
    let (data, flagged) = critical_data(&m, &Rect::square(15.0), 4.0, 0).unwrap();
    assert!(!data.is_empty());
    assert!(flagged.is_empty());
    for d in &data {
        let p = m.poly().unwrap();
        let via = p.eval(d.point) - p.derivative().eval(d.point);
        let direct = d.value.unwrap().as_complex().unwrap();
        assert!((via - direct).norm() <= CROSSCHECK_TOL);
    }
}
