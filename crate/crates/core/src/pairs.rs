//! Shared per-node tables for pair integrands built from one function.

use num_complex::Complex64;

use crate::analytic::polynomial_roots;
use crate::analytic::TaylorFunction;
use crate::quadrature::{BidiscRule, DiscNode};

/// Polynomial value; long inputs run as two interleaved chains in x².
#[inline(always)]
pub(crate) fn horner(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    let zero = Complex64::new(0.0, 0.0);
    if coeffs.len() < 8 {
        return coeffs.iter().rev().fold(zero, |acc, &a| acc * x + a);
    }
    let x2 = x * x;
    let mut even = zero;
    let mut odd = zero;
    let mut k = coeffs.len();
    if k % 2 == 1 {
        k -= 1;
        even = coeffs[k];
    }
    while k >= 2 {
        k -= 2;
        odd = odd * x2 + coeffs[k + 1];
        even = even * x2 + coeffs[k];
    }
    even + x * odd
}

/// Which factor rule holds the outer nodes of a kernel integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Measure {
    /// dμ: outer variable z.
    Mu,
    /// dμ_a: outer variable w.
    MuA,
}

/// Divided-difference coefficients of f at each outer node, plus f' and the
/// level-set partners of each outer node.
pub(crate) struct PairTables {
    measure: Measure,
    divided: Vec<Vec<Complex64>>,
    derivative: Vec<Complex64>,
    outer_derivative: Vec<f64>,
    partners: Vec<Vec<Complex64>>,
}

impl PairTables {
    pub(crate) fn new(f: &TaylorFunction, rule: &BidiscRule, measure: Measure) -> Self {
        let outer: &[DiscNode] = match measure {
            Measure::Mu => rule.rule_z().nodes(),
            Measure::MuA => rule.rule_w().nodes(),
        };
        let deriv = f.derivative();
        let divided: Vec<Vec<Complex64>> = outer.iter().map(|n| f.divided_difference_coefficients(n.z)).collect();
        let partners = divided
            .iter()
            .map(|c| polynomial_roots(c).into_iter().filter(|r| r.norm() < 1.0).collect())
            .collect();
        Self {
            measure,
            outer_derivative: outer.iter().map(|n| horner(deriv.coefficients(), n.z).norm()).collect(),
            derivative: deriv.coefficients().to_vec(),
            divided,
            partners,
        }
    }

    pub(crate) fn measure(&self) -> Measure {
        self.measure
    }

    /// Level-set partners of outer node `outer_index`.
    pub(crate) fn partners(&self, outer_index: usize) -> Vec<Complex64> {
        self.partners[outer_index].clone()
    }

    /// |f(z) - f(w)| given the pair difference and the inner point.
    #[inline]
    pub(crate) fn level_gap(&self, outer_index: usize, inner: Complex64, difference: Complex64) -> f64 {
        difference.norm() * horner(&self.divided[outer_index], inner).norm()
    }

    /// |f(z) - f(w)|².
    #[inline]
    pub(crate) fn level_gap_sqr(&self, outer_index: usize, inner: Complex64, difference: Complex64) -> f64 {
        difference.norm_sqr() * horner(&self.divided[outer_index], inner).norm_sqr()
    }

    #[inline]
    pub(crate) fn derivative_at(&self, z: Complex64) -> f64 {
        horner(&self.derivative, z).norm()
    }

    #[inline]
    pub(crate) fn outer_derivative(&self, outer_index: usize) -> f64 {
        self.outer_derivative[outer_index]
    }
}
