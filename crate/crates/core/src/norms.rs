//! Classical (quasi)norms and the integral functionals compared against them.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::TaylorFunction;
use crate::error::{Error, Result};
use crate::pairs::{Measure, PairTables};
use crate::quadrature::{
    integrate_disc, mu_a_sums, mu_sums, BidiscRule, CompensatedSum, DiscRule, MoebiusPoint, StolzRegion,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    HardyP,
    BergmanP,
    Bloch,
    Bp,
    Lusin,
    KwonAst,
    KwonBloch,
    KwonBp,
}

impl NormKind {
    pub fn name(&self) -> &'static str {
        match self {
            NormKind::HardyP => "hardy_p",
            NormKind::BergmanP => "bergman_p",
            NormKind::Bloch => "bloch",
            NormKind::Bp => "bp",
            NormKind::Lusin => "lusin",
            NormKind::KwonAst => "kwon_ast",
            NormKind::KwonBloch => "kwon_bloch",
            NormKind::KwonBp => "kwon_bp",
        }
    }
}

/// A computed norm or functional with the parameters that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormValue {
    pub kind: NormKind,
    pub value: f64,
    pub params: BTreeMap<String, f64>,
    pub grid: String,
}

impl NormValue {
    fn new(kind: NormKind, value: f64, params: &[(&str, f64)], grid: String) -> Result<Self> {
        if !(value >= 0.0) || !value.is_finite() {
            return Err(Error::Evaluation {
                location: format!("{} result", kind.name()),
                value,
            });
        }
        Ok(Self {
            kind,
            value,
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            grid,
        })
    }
}

fn check_positive(name: &str, v: f64, bound: f64) -> Result<()> {
    if !(v > bound) || !v.is_finite() {
        return Err(Error::domain(format!("{name} must be finite and > {bound}, got {v}")));
    }
    Ok(())
}

fn check_beta(p: f64, beta: f64) -> Result<()> {
    if !(beta >= 0.0 && beta < p + 2.0) {
        return Err(Error::domain(format!(
            "beta must lie in [0, p + 2) = [0, {}), got {beta}",
            p + 2.0
        )));
    }
    Ok(())
}

/// x^e with 0^0 = 1.
#[inline]
pub(crate) fn pow0(x: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else {
        x.powf(e)
    }
}

/// Grid supremum of |f'(z)|(1 - |z|) over the rule nodes and z = 0.
pub fn bloch_norm(f: &TaylorFunction, rule: &DiscRule) -> NormValue {
    let d = f.derivative();
    let mut best = d.eval_unchecked(Complex64::new(0.0, 0.0)).norm();
    for n in rule.nodes() {
        best = best.max(d.eval_unchecked(n.z).norm() * n.boundary_distance);
    }
    NormValue {
        kind: NormKind::Bloch,
        value: best,
        params: BTreeMap::new(),
        grid: rule.provenance(),
    }
}

/// ∫ |f'|^p (1 - |z|)^{p-2} dm.
pub fn bp_norm_p(f: &TaylorFunction, p: f64, rule: &DiscRule) -> Result<NormValue> {
    check_positive("p", p, 1.0)?;
    let d = f.derivative();
    let v = integrate_disc(rule, |n| {
        d.eval_unchecked(n.z).norm().powf(p) * n.boundary_distance.powf(p - 2.0)
    })?;
    NormValue::new(NormKind::Bp, v, &[("p", p)], rule.provenance())
}

/// ∫ |F|^p dm.
pub fn bergman_norm_p(f: &TaylorFunction, p: f64, rule: &DiscRule) -> Result<NormValue> {
    check_positive("p", p, 0.0)?;
    let v = integrate_disc(rule, |n| f.eval_unchecked(n.z).norm().powf(p))?;
    NormValue::new(NormKind::BergmanP, v, &[("p", p)], rule.provenance())
}

/// r_k = 1 - 2^{-k}, k = 1..40.
pub fn default_hardy_radii() -> Vec<f64> {
    (1..=40).map(|k| 1.0 - 0.5_f64.powi(k)).collect()
}

/// Largest normalized circle mean of |f|^p over the given radii.
pub fn hardy_norm_p(f: &TaylorFunction, p: f64, radii: &[f64], angular_count: usize) -> Result<NormValue> {
    check_positive("p", p, 0.0)?;
    if radii.is_empty() {
        return Err(Error::domain("at least one radius is required"));
    }
    let mut best = 0.0_f64;
    for &r in radii {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::domain(format!("radii must lie in (0, 1), got {r}")));
        }
        let mean = crate::quadrature::integrate_circle(angular_count, |xi| f.eval_unchecked(xi * r).norm().powf(p))?;
        best = best.max(mean);
    }
    NormValue::new(
        NormKind::HardyP,
        best,
        &[("p", p), ("radii", radii.len() as f64)],
        format!(
            "circle(m={angular_count},r_max={})",
            radii.iter().cloned().fold(0.0, f64::max)
        ),
    )
}

/// ∫_T ( Σ_{nodes in Γ(ξ)} values )^{power} dξ over `angular_count` vertices.
pub(crate) fn cone_average(
    rule: &DiscRule,
    weighted_values: &[f64],
    power: f64,
    aperture: f64,
    angular_count: usize,
) -> Result<f64> {
    if angular_count < 4 {
        return Err(Error::config(format!(
            "circle rule needs at least 4 nodes, got {angular_count}"
        )));
    }
    let step = 2.0 * std::f64::consts::PI / angular_count as f64;
    let mut outer = CompensatedSum::new();
    for j in 0..angular_count {
        let region = StolzRegion::new(Complex64::from_polar(1.0, step * j as f64), aperture)?;
        let mut inner = CompensatedSum::new();
        for (n, v) in rule.nodes().iter().zip(weighted_values) {
            if region.contains_with_distance(n.z, n.boundary_distance) {
                inner.add(*v);
            }
        }
        outer.add(pow0(inner.value(), power));
    }
    Ok(outer.value() / angular_count as f64)
}

/// ∫_T ( ∫_{Γ(ξ)} |D^t f|² (1 - |z|)^{2t-2} dm )^{p/2} dξ.
pub fn lusin_functional(
    f: &TaylorFunction,
    p: f64,
    t: f64,
    aperture: f64,
    rule: &DiscRule,
    angular_count: usize,
) -> Result<NormValue> {
    check_positive("p", p, 0.0)?;
    check_positive("t", t, 0.0)?;
    check_positive("aperture", aperture, 1.0)?;
    let g = f.fractional_derivative(t)?;
    let values: Vec<f64> = rule
        .nodes()
        .iter()
        .map(|n| n.weight * g.eval_unchecked(n.z).norm_sqr() * n.boundary_distance.powf(2.0 * t - 2.0))
        .collect();
    let v = cone_average(rule, &values, p / 2.0, aperture, angular_count)?;
    NormValue::new(
        NormKind::Lusin,
        v,
        &[
            ("p", p),
            ("t", t),
            ("aperture", aperture),
            ("circle", angular_count as f64),
        ],
        rule.provenance(),
    )
}

/// ∫ |F|^{p-β} |F'|^β (1 - |z|)^β dm.
pub fn kwon_ast_rhs(f: &TaylorFunction, p: f64, beta: f64, rule: &DiscRule) -> Result<NormValue> {
    check_positive("p", p, 0.0)?;
    check_beta(p, beta)?;
    if !f.vanishes_at_zero() {
        return Err(Error::domain("function must vanish at the origin"));
    }
    let v = integrate_disc(rule, |n| {
        let (val, der) = f.eval_with_derivative(n.z);
        pow0(val.norm(), p - beta) * pow0(der.norm() * n.boundary_distance, beta)
    })?;
    NormValue::new(NormKind::KwonAst, v, &[("p", p), ("beta", beta)], rule.provenance())
}

/// sup_a ∫∫ |f(z) - f(w)|^{p-β} |f'(z)|^β (1 - |z|)^β dμ_a over the a-grid.
pub fn kwon_bloch_functional(
    f: &TaylorFunction,
    p: f64,
    beta: f64,
    a_grid: &[MoebiusPoint],
    rule: &BidiscRule,
) -> Result<NormValue> {
    check_positive("p", p, 0.0)?;
    check_beta(p, beta)?;
    if a_grid.is_empty() {
        return Err(Error::domain("a-grid must not be empty"));
    }
    let tables = PairTables::new(f, rule, Measure::MuA);
    let partners = |i: usize, _: Complex64| tables.partners(i);
    let sums = mu_a_sums(rule, Some(&partners), |pn| {
        let gap = tables.level_gap(pn.outer_index, pn.z, pn.difference);
        let slope = tables.derivative_at(pn.z) * pn.z_boundary_distance;
        [pow0(gap, p - beta) * pow0(slope, beta)]
    })?;
    let v = sums.sup(a_grid)?[0];
    NormValue::new(
        NormKind::KwonBloch,
        v,
        &[("p", p), ("beta", beta), ("a_grid", a_grid.len() as f64)],
        rule.provenance(),
    )
}

/// ∫∫ |f(w) - f(z)|^{p-β} |f'(z)|^β (1 - |z|)^β dμ.
pub fn kwon_bp_functional(f: &TaylorFunction, p: f64, beta: f64, rule: &BidiscRule) -> Result<NormValue> {
    check_positive("p", p, 1.0)?;
    check_beta(p, beta)?;
    let tables = PairTables::new(f, rule, Measure::Mu);
    let partners = |i: usize, _: Complex64| tables.partners(i);
    let v = mu_sums(rule, Some(&partners), |pn| {
        let gap = tables.level_gap(pn.outer_index, pn.w, pn.difference);
        let slope = tables.outer_derivative(pn.outer_index) * pn.z_boundary_distance;
        [pow0(gap, p - beta) * pow0(slope, beta)]
    })?[0];
    NormValue::new(NormKind::KwonBp, v, &[("p", p), ("beta", beta)], rule.provenance())
}
