//! Complex polynomials with certified large-modulus bounds.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Guard added to the threshold radius of [`Poly::bounds`].
pub const RHO_GUARD: f64 = 1e-9;

/// `a_0 + a_1 z + ... + a_d z^d`. Trailing zero coefficients are trimmed, so
/// the stored leading coefficient is nonzero whenever the degree is positive.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == Complex64::new(0.0, 0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Poly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Poly::new(coeffs.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// `z`.
    pub fn identity() -> Self {
        Poly::from_real(&[0.0, 1.0])
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().unwrap()
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    /// Horner evaluation from `a_d` downwards.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() == 1 {
            return Poly::new(vec![]);
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &a)| a * i as f64)
                .collect(),
        )
    }

    /// Adds a constant to `a_0`.
    pub fn shifted(&self, c: Complex64) -> Poly {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] += c;
        Poly::new(coeffs)
    }

    /// `Σ |a_i|`.
    pub fn abs_coeff_sum(&self) -> f64 {
        self.coeffs.iter().map(|a| a.norm()).sum()
    }

    /// Quotient of synthetic division by `(z - root)`; the remainder is dropped.
    pub fn deflate(&self, root: Complex64) -> Poly {
        let d = self.degree();
        if d == 0 {
            return Poly::new(vec![]);
        }
        let mut q = vec![Complex64::new(0.0, 0.0); d];
        let mut acc = Complex64::new(0.0, 0.0);
        for i in (1..=d).rev() {
            acc = acc * root + self.coeffs[i];
            q[i - 1] = acc;
        }
        Poly::new(q)
    }

    /// All roots by Aberth–Ehrlich iteration, each polished by Newton.
    pub fn roots(&self) -> Vec<Complex64> {
        let d = self.degree();
        if d == 0 {
            return Vec::new();
        }
        let lead = self.leading();
        if d == 1 {
            return vec![-self.coeffs[0] / lead];
        }
        let dp = self.derivative();
        // Cauchy bound for the starting circle
        let radius = 1.0
            + self.coeffs[..d]
                .iter()
                .map(|a| (a / lead).norm())
                .fold(0.0, f64::max);
        let mut z: Vec<Complex64> = (0..d)
            .map(|j| {
                Complex64::from_polar(
                    radius,
                    0.4 + 2.0 * std::f64::consts::PI * j as f64 / d as f64,
                )
            })
            .collect();
        for _ in 0..500 {
            let mut max_step = 0.0f64;
            for j in 0..d {
                let p = self.eval(z[j]);
                let pd = dp.eval(z[j]);
                if p == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let ratio = p / pd;
                let repulsion: Complex64 = (0..d)
                    .filter(|&m| m != j)
                    .map(|m| (z[j] - z[m]).inv())
                    .sum();
                let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
                if step.re.is_finite() && step.im.is_finite() {
                    z[j] -= step;
                    max_step = max_step.max(step.norm() / z[j].norm().max(1.0));
                }
            }
            if max_step < 1e-15 {
                break;
            }
        }
        for r in z.iter_mut() {
            for _ in 0..3 {
                let pd = dp.eval(*r);
                if pd.norm() == 0.0 {
                    break;
                }
                let step = self.eval(*r) / pd;
                if !(step.re.is_finite() && step.im.is_finite()) {
                    break;
                }
                *r -= step;
            }
        }
        z
    }

    /// Threshold radius and bound functions valid for `|z| ≥ ρ*`.
    pub fn bounds(&self) -> Result<PolyBounds> {
        let d = self.degree();
        if d == 0 {
            return Err(Error::InvalidMap(
                "constant polynomial has no growth bounds".into(),
            ));
        }
        let lead = self.leading().norm();
        let mut rho: f64 = 1.0;
        for (i, a) in self.coeffs[..d].iter().enumerate() {
            let t = ((d as f64 + 1.0) * a.norm() / lead).powf(1.0 / (d - i) as f64);
            rho = rho.max(t);
        }
        Ok(PolyBounds {
            threshold: rho + RHO_GUARD,
            degree: d,
            abs_coeffs: self.coeffs.iter().map(|a| a.norm()).collect(),
        })
    }
}

impl fmt::Display for Poly {
    /// Bracketed coefficient list `a_0..a_d` in the map text format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", crate::parse::format_complex(*a))?;
        }
        write!(f, "]")
    }
}

/// Growth bounds of a polynomial of degree `d ≥ 1` outside radius `threshold`:
///
/// `(1/d)·Σ_{i<d}|a_i||z|^i ≤ |P(z)| ≤ (Σ_i |a_i|)·|z|^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyBounds {
    pub threshold: f64,
    degree: usize,
    abs_coeffs: Vec<f64>,
}

impl PolyBounds {
    pub fn lower(&self, modulus: f64) -> f64 {
        let d = self.degree;
        let s: f64 = self.abs_coeffs[..d]
            .iter()
            .enumerate()
            .map(|(i, a)| a * modulus.powi(i as i32))
            .sum();
        s / d as f64
    }

    pub fn upper(&self, modulus: f64) -> f64 {
        self.abs_coeffs.iter().sum::<f64>() * modulus.powi(self.degree as i32)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_examples() {
        let p = Poly::from_real(&[1.0, 0.0, 1.0]);
        assert_eq!(p.eval(c(0.0, 0.0)), c(1.0, 0.0));
        assert_eq!(p.eval(c(2.0, 0.0)), c(5.0, 0.0));
        let q = Poly::from_real(&[1.5, 1.0]);
        let pi = std::f64::consts::PI;
        assert_eq!(q.eval(c(0.0, pi)), c(1.5, pi));
        assert_eq!(Poly::from_real(&[7.0]).eval(c(3.0, -2.0)), c(7.0, 0.0));
    }

    #[test]
    fn trailing_zeros_trimmed() {
        let p = Poly::from_real(&[1.0, 2.0, 0.0, 0.0]);
        assert_eq!(p.degree(), 1);
        assert_eq!(Poly::new(vec![]).degree(), 0);
        assert!(Poly::new(vec![]).is_constant());
    }

    #[test]
    fn bounds_examples() {
        let p = Poly::from_real(&[1.0, 0.0, 1.0]);
        let b = p.bounds().unwrap();
        assert!((b.threshold - (3f64.sqrt() + RHO_GUARD)).abs() < 1e-15);
        assert_eq!(b.lower(2.0), 0.5);
        assert_eq!(b.upper(2.0), 8.0);
        let id = Poly::identity().bounds().unwrap();
        assert_eq!(id.threshold, 1.0 + RHO_GUARD);
        assert_eq!(id.lower(3.0), 0.0);
        assert_eq!(id.upper(3.0), 3.0);
        assert!(Poly::from_real(&[4.0]).bounds().is_err());
    }

    #[test]
    fn derivative_and_deflate() {
        let p = Poly::from_real(&[-6.0, 11.0, -6.0, 1.0]); // (z-1)(z-2)(z-3)
        assert_eq!(p.derivative(), Poly::from_real(&[11.0, -12.0, 3.0]));
        let q = p.deflate(c(1.0, 0.0));
        assert_eq!(q, Poly::from_real(&[6.0, -5.0, 1.0]));
        let mut r = p.roots();
        r.sort_by(|a, b| a.re.total_cmp(&b.re));
        for (got, want) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - c(want, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn roots_of_unity() {
        let p = Poly::new(vec![
            c(-1.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(1.0, 0.0),
        ]);
        let roots = p.roots();
        assert_eq!(roots.len(), 5);
        for r in roots {
            assert!((r.powu(5) - 1.0).norm() < 1e-12);
        }
    }
}
