//! The map families `c·E^k(z) + P(z)` and `h_λ(z) = z·e^{λ(z+1)}`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::safe::{exp_tower, SafeValue};

/// Anything that can be evaluated as an entire map with overflow-safe values.
pub trait EntireMap: Sync {
    fn eval(&self, z: Complex64) -> SafeValue;
    fn derivative(&self, z: Complex64) -> SafeValue;

    /// Degree of the polynomial part, if the map has one.
    fn poly_degree(&self) -> Option<usize> {
        None
    }
}

/// Plain `e^z`. It has the omitted value 0, which makes it the negative
/// control for every omitted-value test; it is not expressible as a
/// [`MapSpec`] because the polynomial part would be constant.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ReferenceExp;

impl EntireMap for ReferenceExp {
    fn eval(&self, z: Complex64) -> SafeValue {
        exp_tower(1, z)
    }

    fn derivative(&self, z: Complex64) -> SafeValue {
        exp_tower(1, z)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MapSpec {
    /// `c·E^k(z) + P(z)`, `k ≥ 1`, `c ≠ 0`, `deg P ≥ 1`.
    TowerPoly { k: u32, c: Complex64, poly: Poly },
    /// `z·e^{λ(z+1)}`, `0 < λ < 2`.
    HLambda { lambda: f64 },
}

/// Known fixed points that converged orbits may snap to.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FixedPointFamily {
    /// `(2k+1)πi` for every integer `k` (the `f_λ` family).
    OddMultiplesOfPiI,
    /// `-1` (index 0) and `0` (index 1), for `h_λ`.
    MinusOneAndZero,
    Unknown,
}

impl MapSpec {
    pub fn tower(k: u32, c: Complex64, poly: Poly) -> Result<Self> {
        let m = MapSpec::TowerPoly { k, c, poly };
        m.validate()?;
        Ok(m)
    }

    pub fn h_lambda(lambda: f64) -> Result<Self> {
        let m = MapSpec::HLambda { lambda };
        m.validate()?;
        Ok(m)
    }

    /// `e^z + P(z)`.
    pub fn exp_plus(poly: Poly) -> Result<Self> {
        MapSpec::tower(1, Complex64::new(1.0, 0.0), poly)
    }

    /// `f_λ(z) = λe^z + z + λ`.
    pub fn f_lambda(lambda: f64) -> Result<Self> {
        check_lambda(lambda)?;
        MapSpec::tower(
            1,
            Complex64::new(lambda, 0.0),
            Poly::from_real(&[lambda, 1.0]),
        )
    }

    /// `F_λ(z) = f_λ(z) + 2πi`.
    pub fn big_f_lambda(lambda: f64) -> Result<Self> {
        check_lambda(lambda)?;
        MapSpec::tower(
            1,
            Complex64::new(lambda, 0.0),
            Poly::new(vec![
                Complex64::new(lambda, 2.0 * PI),
                Complex64::new(1.0, 0.0),
            ]),
        )
    }

    /// `f_{2,β}(z) = E^2(z) + z - β`.
    pub fn f_two_beta(beta: f64) -> Result<Self> {
        MapSpec::tower(2, Complex64::new(1.0, 0.0), Poly::from_real(&[-beta, 1.0]))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            MapSpec::TowerPoly { k, c, poly } => {
                if *k == 0 {
                    return Err(Error::InvalidMap(
                        "tower height k must be at least 1".into(),
                    ));
                }
                if *c == Complex64::new(0.0, 0.0) || !(c.re.is_finite() && c.im.is_finite()) {
                    return Err(Error::InvalidMap(
                        "coefficient c must be finite and nonzero".into(),
                    ));
                }
                if poly.is_constant() {
                    return Err(Error::InvalidMap(
                        "polynomial part must be non-constant".into(),
                    ));
                }
                if poly
                    .coeffs()
                    .iter()
                    .any(|a| !(a.re.is_finite() && a.im.is_finite()))
                {
                    return Err(Error::InvalidMap(
                        "polynomial coefficients must be finite".into(),
                    ));
                }
                Ok(())
            }
            MapSpec::HLambda { lambda } => check_lambda(*lambda),
        }
    }

    pub fn poly(&self) -> Option<&Poly> {
        match self {
            MapSpec::TowerPoly { poly, .. } => Some(poly),
            MapSpec::HLambda { .. } => None,
        }
    }

    pub fn fixed_point_family(&self) -> FixedPointFamily {
        match self {
            MapSpec::HLambda { .. } => FixedPointFamily::MinusOneAndZero,
            MapSpec::TowerPoly { k: 1, c, poly } => {
                let lambda = c.re;
                let is_f_lambda = c.im == 0.0
                    && lambda > 0.0
                    && lambda < 2.0
                    && poly.coeffs() == [Complex64::new(lambda, 0.0), Complex64::new(1.0, 0.0)];
                if is_f_lambda {
                    FixedPointFamily::OddMultiplesOfPiI
                } else {
                    FixedPointFamily::Unknown
                }
            }
            MapSpec::TowerPoly { .. } => FixedPointFamily::Unknown,
        }
    }

    /// Second derivative, used by Newton on `f'`.
    pub fn second_derivative(&self, z: Complex64) -> SafeValue {
        match self {
            MapSpec::TowerPoly { k, c, poly } => {
                // d/dz ∏_{j=1}^k E^j = ∏_{j=1}^k E^j · Σ_{j=0}^{k-1} ∏_{i=1}^{j} E^i
                let mut level = SafeValue::from_complex(z);
                let mut prod = SafeValue::from_complex(Complex64::new(1.0, 0.0));
                let mut sum = SafeValue::ZERO;
                for _ in 0..*k {
                    sum = sum.add(&prod);
                    level = level.exp();
                    prod = prod.mul(&level);
                }
                prod.mul(&sum)
                    .scale(*c)
                    .add_complex(poly.derivative().derivative().eval(z))
            }
            MapSpec::HLambda { lambda } => {
                let e = SafeValue::from_complex(*lambda * (z + 1.0)).exp();
                e.scale(*lambda * (2.0 + *lambda * z))
            }
        }
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda < 2.0 {
        Ok(())
    } else {
        Err(Error::InvalidMap(format!(
            "lambda must lie in (0, 2), got {lambda}"
        )))
    }
}

impl EntireMap for MapSpec {
    fn poly_degree(&self) -> Option<usize> {
        self.poly().map(Poly::degree)
    }

    fn eval(&self, z: Complex64) -> SafeValue {
        match self {
            MapSpec::TowerPoly { k, c, poly } => {
                exp_tower(*k, z).scale(*c).add_complex(poly.eval(z))
            }
            MapSpec::HLambda { lambda } => {
                let e = SafeValue::from_complex(*lambda * (z + 1.0)).exp();
                e.scale(z)
            }
        }
    }

    fn derivative(&self, z: Complex64) -> SafeValue {
        match self {
            MapSpec::TowerPoly { k, c, poly } => {
                let mut level = SafeValue::from_complex(z);
                let mut prod = SafeValue::from_complex(Complex64::new(1.0, 0.0));
                for _ in 0..*k {
                    level = level.exp();
                    prod = prod.mul(&level);
                }
                prod.scale(*c).add_complex(poly.derivative().eval(z))
            }
            MapSpec::HLambda { lambda } => {
                let e = SafeValue::from_complex(*lambda * (z + 1.0)).exp();
                e.scale(1.0 + *lambda * z)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn finite(v: SafeValue) -> Complex64 {
        v.as_complex().expect("finite value")
    }

    #[test]
    fn eval_examples() {
        let f1 = MapSpec::f_lambda(1.0).unwrap();
        assert!((finite(f1.eval(c(0.0, 0.0))) - c(2.0, 0.0)).norm() < 1e-15);
        let f2 = MapSpec::f_two_beta(0.0).unwrap();
        assert!((finite(f2.eval(c(0.0, 0.0))) - c(std::f64::consts::E, 0.0)).norm() < 1e-15);
        let h = MapSpec::h_lambda(1.5).unwrap();
        assert!((finite(h.eval(c(-1.0, 0.0))) - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn derivative_examples() {
        let f1 = MapSpec::f_lambda(1.0).unwrap();
        assert!(finite(f1.derivative(c(0.0, PI))).norm() < 1e-15);
        let h = MapSpec::h_lambda(1.5).unwrap();
        assert!(finite(h.derivative(c(-1.0 / 1.5, 0.0))).norm() < 1e-15);
        let f05 = MapSpec::f_lambda(0.5).unwrap();
        assert!((finite(f05.derivative(c(0.0, PI))) - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn second_derivative_tower_two() {
        // (E^2)'' = E^2·e^z·(e^z + 1)
        let m = MapSpec::f_two_beta(0.3).unwrap();
        let z = c(0.4, -0.7);
        let ez = z.exp();
        let want = ez.exp() * ez * (ez + 1.0);
        assert!((finite(m.second_derivative(z)) - want).norm() < 1e-12);
    }

    #[test]
    fn invalid_maps_rejected() {
        assert!(MapSpec::tower(0, c(1.0, 0.0), Poly::identity()).is_err());
        assert!(MapSpec::tower(1, c(0.0, 0.0), Poly::identity()).is_err());
        assert!(MapSpec::tower(1, c(1.0, 0.0), Poly::from_real(&[3.0])).is_err());
        assert!(MapSpec::h_lambda(2.0).is_err());
        assert!(MapSpec::h_lambda(0.0).is_err());
        assert!(MapSpec::f_lambda(-0.1).is_err());
    }

    #[test]
    fn family_detection() {
        assert_eq!(
            MapSpec::f_lambda(0.7).unwrap().fixed_point_family(),
            FixedPointFamily::OddMultiplesOfPiI
        );
        assert_eq!(
            MapSpec::big_f_lambda(0.7).unwrap().fixed_point_family(),
            FixedPointFamily::Unknown
        );
        assert_eq!(
            MapSpec::h_lambda(0.7).unwrap().fixed_point_family(),
            FixedPointFamily::MinusOneAndZero
        );
    }

    #[test]
    fn huge_argument_is_absorbed() {
        let f1 = MapSpec::f_lambda(1.0).unwrap();
        let v = f1.eval(c(1000.0, 0.5));
        assert_eq!(v, SafeValue::from_log_polar(1000.0, 0.5));
        assert!(MapSpec::f_two_beta(0.0)
            .unwrap()
            .eval(c(800.0, 0.0))
            .is_saturated());
    }
}
