//! Analytic functions on the unit disc, represented by truncated Taylor series.
//!
//! A [`TaylorFunction`] stores the coefficients `a_0, ..., a_N` of
//! `f(z) = sum a_n z^n`. All operations return new values; nothing is mutated
//! after construction.

mod corpus;
mod roots;

pub use corpus::{make_corpus, CorpusConfig, CorpusEntry, FamilySpec, Provenance, ReferenceValue, DEFAULT_DEGREE};
pub use roots::polynomial_roots;

use std::ops::Add;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Analytic function given by the finite power series `sum_{n=0}^{N} a_n z^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorFunction {
    coeffs: Vec<Complex64>,
}

impl TaylorFunction {
    /// Builds a function from its coefficients `a_0..=a_N`.
    ///
    /// An empty slice is read as the zero function.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if let Some((n, a)) = coeffs
            .iter()
            .enumerate()
            .find(|(_, a)| !(a.re.is_finite() && a.im.is_finite()))
        {
            return Err(Error::domain(format!("coefficient a_{n} = {a} is not finite")));
        }
        if coeffs.is_empty() {
            return Ok(Self::zero());
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0)],
        }
    }

    /// `z^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[n] = Complex64::new(1.0, 0.0);
        Self { coeffs }
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Truncation degree `N` (length of the coefficient vector minus one).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `true` iff `a_0 == 0` exactly.
    pub fn vanishes_at_zero(&self) -> bool {
        self.coeffs[0] == Complex64::new(0.0, 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|a| *a == Complex64::new(0.0, 0.0))
    }

    /// `true` when every coefficient beyond `a_0` is zero.
    pub fn is_constant(&self) -> bool {
        self.coeffs[1..].iter().all(|a| *a == Complex64::new(0.0, 0.0))
    }

    /// Evaluates `f(z)` for `|z| < 1`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        check_in_disc(z)?;
        Ok(self.eval_unchecked(z))
    }

    /// Horner evaluation without the domain check. Quadrature code calls this
    /// on nodes that are inside the disc by construction.
    pub fn eval_unchecked(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
    }

    /// `(f(z), f'(z))` in a single Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut value = Complex64::new(0.0, 0.0);
        let mut slope = Complex64::new(0.0, 0.0);
        for &a in self.coeffs.iter().rev() {
            slope = slope * z + value;
            value = value * z + a;
        }
        (value, slope)
    }

    /// Divided difference `f[z, w] = (f(z) - f(w)) / (z - w)`, continuous across
    /// the diagonal where it equals `f'(z)`.
    ///
    /// Computing `|f(z) - f(w)|` as `|z - w| * |f[z, w]|` keeps full relative
    /// accuracy when `z` and `w` nearly coincide.
    pub fn divided_difference(&self, z: Complex64, w: Complex64) -> Complex64 {
        let mut value = Complex64::new(0.0, 0.0);
        let mut diff = Complex64::new(0.0, 0.0);
        for &a in self.coeffs.iter().rev() {
            diff = diff * w + value;
            value = value * z + a;
        }
        diff
    }

    /// Coefficients in `w` of the polynomial `w -> f[z, w]` (degree `N - 1`).
    pub fn divided_difference_coefficients(&self, z: Complex64) -> Vec<Complex64> {
        let n = self.degree();
        if n == 0 {
            return vec![Complex64::new(0.0, 0.0)];
        }
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        out[n - 1] = self.coeffs[n];
        for k in (0..n - 1).rev() {
            out[k] = self.coeffs[k + 1] + z * out[k + 1];
        }
        out
    }

    /// `f'`, with coefficients `(n + 1) a_{n+1}`.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero();
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(n, &a)| a * (n as f64 + 1.0))
            .collect();
        Self { coeffs }
    }

    /// Fractional derivative `D^t f = sum (n + 1)^t a_n z^n`.
    pub fn fractional_derivative(&self, t: f64) -> Result<Self> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::domain(format!(
                "fractional derivative order must be finite and >= 0, got {t}"
            )));
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, &a)| a * (n as f64 + 1.0).powf(t))
            .collect();
        Ok(Self { coeffs })
    }

    /// `lambda * f`.
    pub fn scale(&self, lambda: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&a| a * lambda).collect(),
        }
    }

    /// `z -> f(e^{i theta} z)`, coefficients `a_n e^{i n theta}`.
    pub fn rotate(&self, theta: f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, &a)| a * Complex64::from_polar(1.0, n as f64 * theta))
            .collect();
        Self { coeffs }
    }

    /// `sum |a_n|^2`, the squared H^2 norm.
    pub fn coefficient_energy(&self) -> f64 {
        self.coeffs.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Zeros of `f` inside the open unit disc (with multiplicity).
    pub fn zeros_in_disc(&self) -> Vec<Complex64> {
        polynomial_roots(&self.coeffs)
            .into_iter()
            .filter(|r| r.norm() < 1.0)
            .collect()
    }

    /// Points `w != z` of the open disc where `f(w) = f(z)`.
    pub fn level_set_partners(&self, z: Complex64) -> Vec<Complex64> {
        polynomial_roots(&self.divided_difference_coefficients(z))
            .into_iter()
            .filter(|r| r.norm() < 1.0)
            .collect()
    }
}

impl Add for &TaylorFunction {
    type Output = TaylorFunction;

    fn add(self, rhs: &TaylorFunction) -> TaylorFunction {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        let coeffs = (0..len)
            .map(|n| self.coeffs.get(n).copied().unwrap_or(zero) + rhs.coeffs.get(n).copied().unwrap_or(zero))
            .collect();
        TaylorFunction { coeffs }
    }
}

pub(crate) fn check_in_disc(z: Complex64) -> Result<()> {
    if z.norm() < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("point {z} is not inside the unit disc")))
    }
}

// Coefficients travel as `[re, im]` pairs.
impl Serialize for TaylorFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.coeffs.iter().map(|a| [a.re, a.im]).collect();
        pairs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TaylorFunction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(deserializer)?;
        TaylorFunction::new(pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect())
            .map_err(serde::de::Error::custom)
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
        let id = TaylorFunction::monomial(1);
        assert_eq!(id.eval(c(0.5, 0.0)).unwrap(), c(0.5, 0.0));
        let sq = TaylorFunction::monomial(2);
        let v = sq.eval(c(0.0, 0.5)).unwrap();
        assert!((v - c(-0.25, 0.0)).norm() < 1e-15);
        let f = TaylorFunction::from_real(&[0.0, 1.0, 0.0, 2.0]).unwrap();
        assert!((f.eval(c(0.5, 0.0)).unwrap() - c(0.75, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn eval_rejects_boundary() {
        let f = TaylorFunction::monomial(1);
        assert!(matches!(f.eval(c(1.0, 0.0)), Err(Error::Domain(_))));
        assert!(matches!(f.eval(c(0.8, 0.7)), Err(Error::Domain(_))));
    }

    #[test]
    fn non_finite_coefficients_rejected() {
        assert!(TaylorFunction::from_real(&[0.0, f64::NAN]).is_err());
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(TaylorFunction::monomial(1).derivative().coefficients(), &[c(1.0, 0.0)]);
        assert_eq!(
            TaylorFunction::monomial(3).derivative().coefficients(),
            &[c(0.0, 0.0), c(0.0, 0.0), c(3.0, 0.0)]
        );
        let f = TaylorFunction::from_real(&[0.0, 1.0, 0.0, 2.0]).unwrap();
        assert_eq!(f.derivative().coefficients(), &[c(1.0, 0.0), c(0.0, 0.0), c(6.0, 0.0)]);
        let constant = TaylorFunction::from_real(&[4.0]).unwrap();
        assert_eq!(constant.derivative().coefficients(), &[c(0.0, 0.0)]);
    }

    #[test]
    fn fractional_derivative_examples() {
        let f = TaylorFunction::from_real(&[0.3, -1.0, 0.5]).unwrap();
        assert_eq!(f.fractional_derivative(0.0).unwrap(), f);
        let d = TaylorFunction::monomial(2).fractional_derivative(1.0).unwrap();
        assert_eq!(d.coefficients()[2], c(3.0, 0.0));
        let d = TaylorFunction::monomial(1).fractional_derivative(2.0).unwrap();
        assert_eq!(d.coefficients()[1], c(4.0, 0.0));
        assert!(TaylorFunction::monomial(1).fractional_derivative(-0.5).is_err());
    }

    #[test]
    fn eval_with_derivative_matches_derivative() {
        let f = TaylorFunction::new(vec![c(0.0, 0.0), c(1.0, -0.5), c(0.25, 0.75), c(-0.3, 0.1)]).unwrap();
        let z = c(0.3, -0.4);
        let (v, d) = f.eval_with_derivative(z);
        assert!((v - f.eval(z).unwrap()).norm() < 1e-15);
        assert!((d - f.derivative().eval(z).unwrap()).norm() < 1e-15);
    }

    #[test]
    fn divided_difference_agrees_with_quotient() {
        let f = TaylorFunction::new(vec![c(0.0, 0.0), c(0.2, 0.1), c(-1.0, 0.5), c(0.0, 0.3), c(0.7, 0.0)]).unwrap();
        let z = c(0.31, 0.2);
        let w = c(-0.5, 0.45);
        let quotient = (f.eval_unchecked(z) - f.eval_unchecked(w)) / (z - w);
        assert!((f.divided_difference(z, w) - quotient).norm() < 1e-14);
        // On the diagonal it is the derivative.
        let (_, slope) = f.eval_with_derivative(z);
        assert!((f.divided_difference(z, z) - slope).norm() < 1e-14);
        // Coefficient form evaluates to the same polynomial.
        let coeffs = f.divided_difference_coefficients(z);
        let g = TaylorFunction::new(coeffs).unwrap();
        assert!((g.eval_unchecked(w) - quotient).norm() < 1e-14);
    }

    #[test]
    fn scale_examples() {
        let f = TaylorFunction::from_real(&[0.0, 1.0, -2.0]).unwrap();
        assert_eq!(f.scale(c(1.0, 0.0)), f);
        assert!(f.scale(c(0.0, 0.0)).is_zero());
        assert_eq!(
            TaylorFunction::monomial(1).scale(c(2.0, 0.0)).coefficients(),
            &[c(0.0, 0.0), c(2.0, 0.0)]
        );
    }

    #[test]
    fn level_set_partners_of_monomial() {
        let f = TaylorFunction::monomial(3);
        let z = c(0.5, 0.1);
        let mut partners = f.level_set_partners(z);
        assert_eq!(partners.len(), 2);
        partners.sort_by(|a, b| a.arg().partial_cmp(&b.arg()).unwrap());
        for p in partners {
            assert!((p.powu(3) - z.powu(3)).norm() < 1e-13);
            assert!((p - z).norm() > 0.1);
        }
    }

    #[test]
    fn serde_pairs() {
        let f = TaylorFunction::new(vec![c(0.0, 0.0), c(1.5, -2.0)]).unwrap();
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(text, "[[0.0,0.0],[1.5,-2.0]]");
        let back: TaylorFunction = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
    }
}
