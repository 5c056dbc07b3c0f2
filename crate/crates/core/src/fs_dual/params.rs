use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Theorem {
    #[serde(rename = "S1_hardy")]
    S1Hardy,
    #[serde(rename = "S2_bergman")]
    S2Bergman,
    #[serde(rename = "S3_bloch")]
    S3Bloch,
    #[serde(rename = "S4_bp")]
    S4Bp,
}

impl Theorem {
    pub fn name(&self) -> &'static str {
        match self {
            Theorem::S1Hardy => "S1_hardy",
            Theorem::S2Bergman => "S2_bergman",
            Theorem::S3Bloch => "S3_bloch",
            Theorem::S4Bp => "S4_bp",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "S1_hardy" | "S1" | "s1" => Ok(Theorem::S1Hardy),
            "S2_bergman" | "S2" | "s2" => Ok(Theorem::S2Bergman),
            "S3_bloch" | "S3" | "s3" => Ok(Theorem::S3Bloch),
            "S4_bp" | "S4" | "s4" => Ok(Theorem::S4Bp),
            other => Err(Error::config(format!("unknown theorem '{other}'"))),
        }
    }

    pub fn is_two_point(&self) -> bool {
        matches!(self, Theorem::S3Bloch | Theorem::S4Bp)
    }
}

pub const DEFAULT_ALPHA: f64 = 1.8;
pub const DEFAULT_P: f64 = 3.0;
pub const DEFAULT_APERTURE: f64 = 2.0;

/// Exponents of one dual problem. `s` and `aperture` only apply to S₁.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualParams {
    pub p: f64,
    pub alpha: f64,
    pub alpha_conj: f64,
    pub theorem: Theorem,
    pub s: Option<f64>,
    pub aperture: Option<f64>,
}

impl DualParams {
    /// Parameters for S₂, S₃ or S₄; requires 1 < α < 2 and p ≥ α′.
    pub fn new(theorem: Theorem, p: f64, alpha: f64) -> Result<Self> {
        if theorem == Theorem::S1Hardy {
            return Self::hardy(p, 1.0, DEFAULT_APERTURE);
        }
        let params = Self {
            p,
            alpha,
            alpha_conj: conjugate(alpha),
            theorem,
            s: None,
            aperture: None,
        };
        params.validate()?;
        Ok(params)
    }

    /// Parameters for S₁; requires 0 < p < 2, s > 0 and aperture > 1.
    pub fn hardy(p: f64, s: f64, aperture: f64) -> Result<Self> {
        let params = Self {
            p,
            alpha: DEFAULT_ALPHA,
            alpha_conj: conjugate(DEFAULT_ALPHA),
            theorem: Theorem::S1Hardy,
            s: Some(s),
            aperture: Some(aperture),
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 1.0 && self.alpha < 2.0) {
            return Err(Error::domain(format!("alpha must lie in (1, 2), got {}", self.alpha)));
        }
        if (1.0 / self.alpha + 1.0 / self.alpha_conj - 1.0).abs() > 1e-12 {
            return Err(Error::domain("alpha and alpha_conj are not conjugate"));
        }
        match self.theorem {
            Theorem::S1Hardy => {
                if !(self.p > 0.0 && self.p < 2.0) {
                    return Err(Error::domain(format!("S1 requires 0 < p < 2, got p = {}", self.p)));
                }
                match self.s {
                    Some(s) if s > 0.0 && s.is_finite() => {}
                    _ => return Err(Error::domain("S1 requires s > 0")),
                }
                match self.aperture {
                    Some(a) if a > 1.0 && a.is_finite() => {}
                    _ => return Err(Error::domain("S1 requires aperture > 1")),
                }
            }
            _ => {
                if !self.p.is_finite() || self.p < self.alpha_conj {
                    return Err(Error::domain(format!(
                        "hypothesis p ≥ α′ violated: p = {}, α′ = {}",
                        self.p, self.alpha_conj
                    )));
                }
            }
        }
        Ok(())
    }

    /// Exponent k with constraint(cω) = c^k constraint(ω).
    pub fn constraint_degree(&self) -> f64 {
        match self.theorem {
            Theorem::S1Hardy => 1.0,
            _ => -self.alpha_conj,
        }
    }

    /// Exponent k with dual(cω) = c^k dual(ω).
    pub fn dual_degree(&self) -> f64 {
        match self.theorem {
            Theorem::S1Hardy => -1.0,
            _ => self.alpha,
        }
    }

    /// Power applied to the dual integral in reports (1/α, or p/2 for S₁).
    pub fn report_power(&self) -> f64 {
        match self.theorem {
            Theorem::S1Hardy => self.p / 2.0,
            _ => 1.0 / self.alpha,
        }
    }
}

pub fn conjugate(alpha: f64) -> f64 {
    alpha / (alpha - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugate_exponents() {
        let p = DualParams::new(Theorem::S2Bergman, 3.0, 1.8).unwrap();
        assert!((p.alpha_conj - 2.25).abs() < 1e-15);
        assert!((1.0 / p.alpha + 1.0 / p.alpha_conj - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hypotheses_enforced() {
        let err = DualParams::new(Theorem::S3Bloch, 2.0, 1.8).unwrap_err();
        assert!(err.to_string().contains("p ≥ α′"));
        assert!(DualParams::new(Theorem::S4Bp, 2.25, 1.8).is_ok());
        assert!(DualParams::new(Theorem::S2Bergman, 3.0, 2.0).is_err());
        assert!(DualParams::hardy(2.0, 1.0, 2.0).is_err());
        assert!(DualParams::hardy(1.0, 0.0, 2.0).is_err());
        assert!(DualParams::hardy(1.0, 1.0, 1.0).is_err());
        assert!(DualParams::hardy(1.0, 1.0, 2.0).is_ok());
    }

    #[test]
    fn theorem_names_round_trip() {
        for t in [Theorem::S1Hardy, Theorem::S2Bergman, Theorem::S3Bloch, Theorem::S4Bp] {
            assert_eq!(Theorem::parse(t.name()).unwrap(), t);
            let json = serde_json::to_string(&t).unwrap();
            assert_eq!(json, format!("\"{}\"", t.name()));
        }
        assert!(Theorem::parse("S5").is_err());
    }
}
