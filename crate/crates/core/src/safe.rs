//! Overflow-safe complex values.
//!
//! Iterated exponentials leave the range of `f64` for very modest inputs
//! (`E^2` already overflows at `Re z ≈ 6.57`). [`SafeValue`] keeps ordinary
//! complex numbers while their modulus is at most [`OVERFLOW_CAP`] and switches
//! to a log-polar representation above it. When even the logarithm of the
//! modulus cannot be represented the value is [`SafeValue::Saturated`], which
//! compares greater than every other value.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;

/// Largest modulus kept in [`SafeValue::Finite`] form. Squaring stays finite.
pub const OVERFLOW_CAP: f64 = 1e150;

/// Summands smaller than the dominant one by more than this many nats are
/// dropped in [`SafeValue::add`].
pub const ABSORB_MARGIN: f64 = 40.0;

/// `ln(OVERFLOW_CAP)`.
pub fn ln_cap() -> f64 {
    OVERFLOW_CAP.ln()
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_angle(theta: f64) -> f64 {
    if !theta.is_finite() {
        return 0.0;
    }
    if theta > -PI && theta <= PI {
        return theta;
    }
    let r = theta.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// A complex value that degrades to log-polar form instead of overflowing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SafeValue {
    /// Ordinary value with modulus at most [`OVERFLOW_CAP`].
    Finite(Complex64),
    /// `exp(logmag + i·arg)` with `logmag > ln(OVERFLOW_CAP)`.
    LogPolar { logmag: f64, arg: f64 },
    /// Modulus beyond any representable log-magnitude.
    Saturated,
}

impl SafeValue {
    pub const ZERO: SafeValue = SafeValue::Finite(Complex64 { re: 0.0, im: 0.0 });

    /// Normalizes a plain complex number. Non-finite input saturates.
    pub fn from_complex(z: Complex64) -> Self {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return SafeValue::Saturated;
        }
        let r = z.norm();
        if r <= OVERFLOW_CAP {
            SafeValue::Finite(z)
        } else if r.is_finite() {
            SafeValue::LogPolar {
                logmag: r.ln(),
                arg: z.arg(),
            }
        } else {
            // hypot overflowed; rescale before taking the log
            let s = z / OVERFLOW_CAP;
            SafeValue::LogPolar {
                logmag: s.norm().ln() + ln_cap(),
                arg: s.arg(),
            }
        }
    }

    /// Builds `exp(logmag + i·arg)`, choosing the representation from the size.
    pub fn from_log_polar(logmag: f64, arg: f64) -> Self {
        if logmag.is_nan() {
            return SafeValue::Saturated;
        }
        if logmag == f64::NEG_INFINITY {
            return SafeValue::ZERO;
        }
        if logmag <= ln_cap() {
            SafeValue::Finite(Complex64::from_polar(logmag.exp(), arg))
        } else if logmag.is_finite() {
            SafeValue::LogPolar {
                logmag,
                arg: wrap_angle(arg),
            }
        } else {
            SafeValue::Saturated
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, SafeValue::Finite(_))
    }

    pub fn is_saturated(&self) -> bool {
        matches!(self, SafeValue::Saturated)
    }

    pub fn as_complex(&self) -> Option<Complex64> {
        match *self {
            SafeValue::Finite(z) => Some(z),
            _ => None,
        }
    }

    /// Natural log of the modulus; `+∞` when saturated, `-∞` for zero.
    pub fn log_modulus(&self) -> f64 {
        match *self {
            SafeValue::Finite(z) => z.norm().ln(),
            SafeValue::LogPolar { logmag, .. } => logmag,
            SafeValue::Saturated => f64::INFINITY,
        }
    }

    /// Modulus as `f64`, `+∞` when it does not fit.
    pub fn modulus(&self) -> f64 {
        match *self {
            SafeValue::Finite(z) => z.norm(),
            SafeValue::LogPolar { logmag, .. } => logmag.exp(),
            SafeValue::Saturated => f64::INFINITY,
        }
    }

    /// Argument in `(-π, π]`. Saturated values report 0.
    pub fn arg(&self) -> f64 {
        match *self {
            SafeValue::Finite(z) => z.arg(),
            SafeValue::LogPolar { arg, .. } => arg,
            SafeValue::Saturated => 0.0,
        }
    }

    /// Total order on moduli.
    ///
    /// Finite values never exceed the cap and log-polar values always do, so
    /// mixed comparisons need no arithmetic at all.
    pub fn cmp_modulus(&self, other: &SafeValue) -> Ordering {
        use SafeValue::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.norm().total_cmp(&b.norm()),
            (Finite(_), _) => Ordering::Less,
            (LogPolar { .. }, Finite(_)) => Ordering::Greater,
            (LogPolar { logmag: a, .. }, LogPolar { logmag: b, .. }) => a.total_cmp(b),
            (LogPolar { .. }, Saturated) => Ordering::Less,
            (Saturated, Saturated) => Ordering::Equal,
            (Saturated, _) => Ordering::Greater,
        }
    }

    /// `|self| > radius`.
    pub fn exceeds(&self, radius: f64) -> bool {
        match *self {
            SafeValue::Finite(z) => z.norm() > radius,
            SafeValue::LogPolar { logmag, .. } => radius <= OVERFLOW_CAP || logmag > radius.ln(),
            SafeValue::Saturated => true,
        }
    }

    /// `exp(self)`.
    ///
    /// For a log-polar input `w = e^L·e^{iθ}` the result has log-magnitude
    /// `Re w = e^L cos θ`; once that itself overflows the value saturates (or
    /// underflows to zero when `cos θ < 0`).
    pub fn exp(&self) -> SafeValue {
        match *self {
            SafeValue::Finite(w) => SafeValue::from_log_polar(w.re, w.im),
            SafeValue::LogPolar { logmag, arg } => {
                let scale = logmag.exp();
                let re = scale * arg.cos();
                let im = scale * arg.sin();
                if re.is_nan() || re == f64::INFINITY {
                    SafeValue::Saturated
                } else if re == f64::NEG_INFINITY {
                    SafeValue::ZERO
                } else {
                    SafeValue::from_log_polar(re, wrap_angle(im))
                }
            }
            SafeValue::Saturated => SafeValue::Saturated,
        }
    }

    /// Product in log-polar bookkeeping when needed.
    pub fn mul(&self, other: &SafeValue) -> SafeValue {
        match (*self, *other) {
            (SafeValue::Finite(a), SafeValue::Finite(b)) => {
                let p = a * b;
                if p.re.is_finite() && p.im.is_finite() {
                    SafeValue::from_complex(p)
                } else {
                    SafeValue::from_log_polar(a.norm().ln() + b.norm().ln(), a.arg() + b.arg())
                }
            }
            (SafeValue::Finite(z), _) | (_, SafeValue::Finite(z))
                if z == Complex64::new(0.0, 0.0) =>
            {
                SafeValue::ZERO
            }
            (SafeValue::Saturated, _) | (_, SafeValue::Saturated) => SafeValue::Saturated,
            (a, b) => {
                SafeValue::from_log_polar(a.log_modulus() + b.log_modulus(), a.arg() + b.arg())
            }
        }
    }

    pub fn scale(&self, c: Complex64) -> SafeValue {
        self.mul(&SafeValue::Finite(c))
    }

    /// Sum with absorption: if the larger summand dominates by more than
    /// [`ABSORB_MARGIN`] nats and is not finite, it is returned unchanged.
    pub fn add(&self, other: &SafeValue) -> SafeValue {
        match (*self, *other) {
            (SafeValue::Finite(a), SafeValue::Finite(b)) => SafeValue::from_complex(a + b),
            (SafeValue::Saturated, _) | (_, SafeValue::Saturated) => SafeValue::Saturated,
            (a, b) => {
                let (big, small) = if a.cmp_modulus(&b) == Ordering::Less {
                    (b, a)
                } else {
                    (a, b)
                };
                let big_log = big.log_modulus();
                let small_log = small.log_modulus();
                if big_log - small_log > ABSORB_MARGIN {
                    return big;
                }
                // factor out e^{big_log}
                let unit = Complex64::from_polar(1.0, big.arg());
                let rel = Complex64::from_polar((small_log - big_log).exp(), small.arg());
                let s = unit + rel;
                let r = s.norm();
                if r == 0.0 {
                    SafeValue::ZERO
                } else {
                    SafeValue::from_log_polar(big_log + r.ln(), s.arg())
                }
            }
        }
    }

    pub fn add_complex(&self, z: Complex64) -> SafeValue {
        self.add(&SafeValue::from_complex(z))
    }

    pub fn neg(&self) -> SafeValue {
        match *self {
            SafeValue::Finite(z) => SafeValue::Finite(-z),
            SafeValue::LogPolar { logmag, arg } => SafeValue::LogPolar {
                logmag,
                arg: wrap_angle(arg + PI),
            },
            SafeValue::Saturated => SafeValue::Saturated,
        }
    }

    /// `|self - other| / max(1, |other|)`, computed without overflow.
    ///
    /// Returns `None` when either side is saturated.
    pub fn relative_distance(&self, other: &SafeValue) -> Option<f64> {
        match (*self, *other) {
            (SafeValue::Saturated, _) | (_, SafeValue::Saturated) => None,
            (SafeValue::Finite(a), SafeValue::Finite(b)) => {
                Some((a - b).norm() / b.norm().max(1.0))
            }
            (a, b) => {
                let dl = a.log_modulus() - b.log_modulus();
                let dt = wrap_angle(a.arg() - b.arg());
                let ratio = Complex64::new(dl, dt).exp() - 1.0;
                let norm = ratio.norm();
                if b.log_modulus() >= 0.0 {
                    Some(norm)
                } else {
                    // |b| < 1 but a is huge: scale back to absolute distance
                    Some(norm * b.modulus())
                }
            }
        }
    }
}

impl From<Complex64> for SafeValue {
    fn from(z: Complex64) -> Self {
        SafeValue::from_complex(z)
    }
}

/// `E^k(z)`: the k-fold composition of `exp`.
pub fn exp_tower(k: u32, z: Complex64) -> SafeValue {
    let mut v = SafeValue::from_complex(z);
    for _ in 0..k {
        v = v.exp();
    }
    v
}
