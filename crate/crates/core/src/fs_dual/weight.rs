use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::TaylorFunction;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Arity {
    OnePoint,
    TwoPoint,
}

/// Powers of |F'(z)|, (1 - |z|) and of the reciprocal level term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Exponents {
    pub u: f64,
    pub v: f64,
    pub s: f64,
}

/// ω = scale · |F'(z)|^u (1 - |z|)^v (L + ε)^{-s}, where L is |F(z)| for
/// one-point weights and |F(z) - F(w)| for two-point weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    pub arity: Arity,
    pub exponents: Exponents,
    pub softening: f64,
    pub scale: f64,
}

impl WeightSpec {
    pub fn new(arity: Arity, exponents: Exponents, softening: f64, scale: f64) -> Result<Self> {
        let w = Self {
            arity,
            exponents,
            softening,
            scale,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        let e = &self.exponents;
        if !(e.u.is_finite() && e.v.is_finite() && e.s.is_finite()) {
            return Err(Error::domain("weight exponents must be finite"));
        }
        if !(self.softening >= 0.0) || !self.softening.is_finite() {
            return Err(Error::domain(format!("softening must be >= 0, got {}", self.softening)));
        }
        if !(self.scale > 0.0) || !self.scale.is_finite() {
            return Err(Error::domain(format!("scale must be > 0, got {}", self.scale)));
        }
        Ok(())
    }

    pub fn with_scale(&self, scale: f64) -> Self {
        Self { scale, ..*self }
    }

    /// ln ω / scale from ln|F'|, ln(1 - |z|) and ln(L + ε).
    #[inline]
    pub(crate) fn log_unit(&self, ln_slope: f64, ln_dist: f64, ln_level: f64) -> f64 {
        let e = &self.exponents;
        term(e.u, ln_slope) + term(e.v, ln_dist) - term(e.s, ln_level)
    }

    /// Point value of the weight; `w` is ignored for one-point weights.
    pub fn value(&self, f: &TaylorFunction, z: Complex64, w: Complex64) -> Result<f64> {
        crate::analytic::check_in_disc(z)?;
        let (fz, dz) = f.eval_with_derivative(z);
        let level = match self.arity {
            Arity::OnePoint => fz.norm(),
            Arity::TwoPoint => {
                crate::analytic::check_in_disc(w)?;
                (z - w).norm() * f.divided_difference(z, w).norm()
            }
        };
        let ln = self.log_unit(dz.norm().ln(), (1.0 - z.norm()).ln(), (level + self.softening).ln());
        Ok(self.scale * ln.exp())
    }
}

/// c·l with the convention 0·(±∞) = 0.
#[inline]
pub(crate) fn term(c: f64, l: f64) -> f64 {
    if c == 0.0 {
        0.0
    } else {
        c * l
    }
}
