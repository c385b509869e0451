use std::fmt;

use crate::error::{invalid, Result};

/// An exponent `p` in `[1, ∞]`.
///
/// Infinity is a distinguished value with `1/∞ = 0` exactly.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Exponent(f64);

impl Exponent {
    pub const ONE: Exponent = Exponent(1.0);
    pub const TWO: Exponent = Exponent(2.0);
    pub const INFINITY: Exponent = Exponent(f64::INFINITY);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return invalid(format!("exponent must lie in [1, inf], got {p}"));
        }
        Ok(Exponent(p))
    }

    /// Builds the exponent whose reciprocal is `t ∈ [0, 1]`.
    pub fn from_recip(t: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return invalid(format!("reciprocal exponent must lie in [0, 1], got {t}"));
        }
        if t == 0.0 {
            Ok(Self::INFINITY)
        } else {
            Ok(Exponent(1.0 / t))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    pub fn recip(self) -> f64 {
        1.0 / self.0
    }

    /// The conjugate exponent `p*` with `1/p + 1/p* = 1`.
    pub fn conjugate(self) -> Exponent {
        if self.0 == 1.0 {
            Self::INFINITY
        } else if self.is_infinite() {
            Self::ONE
        } else {
            Exponent(self.0 / (self.0 - 1.0))
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Conjugate of a finite exponent `p > 1`.
pub fn conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// The ℓ_p norm of the moduli of `x`; `p = ∞` gives the max.
pub fn lp_norm(x: &[f64], p: f64) -> f64 {
    let m = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if m == 0.0 || p.is_infinite() {
        return m;
    }
    if p == 1.0 {
        return x.iter().map(|v| v.abs()).sum();
    }
    if p == 2.0 {
        return m * x.iter().map(|v| (v / m) * (v / m)).sum::<f64>().sqrt();
    }
    m * x.iter().map(|v| (v.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
}
