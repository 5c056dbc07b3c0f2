use serde::{Deserialize, Serialize};

use super::params::{DualParams, Theorem};
use super::weight::{term, Arity, Exponents, WeightSpec};
use num_complex::Complex64;

use crate::analytic::TaylorFunction;
use crate::error::{Error, Result};
use crate::norms::cone_average;
use crate::pairs::{Measure, PairTables};
use crate::quadrature::{
    default_a_grid, mu_a_sums, mu_sums, BidiscRule, CompensatedSum, DiscRule, GridConfig, MoebiusPoint, PairNode,
};

/// The quadrature rules a dual evaluation runs on.
#[derive(Debug, Clone)]
pub struct DualRules {
    pub disc: DiscRule,
    pub bidisc: BidiscRule,
    pub a_grid: Vec<MoebiusPoint>,
    /// Circle nodes for S₁.
    pub circle: usize,
    pub grid: GridConfig,
}

impl DualRules {
    pub fn from_grid(grid: &GridConfig) -> Result<Self> {
        Self::with_a_grid(grid, default_a_grid())
    }

    pub fn with_a_grid(grid: &GridConfig, a_grid: Vec<MoebiusPoint>) -> Result<Self> {
        grid.validate()?;
        Ok(Self {
            disc: grid.disc_rule()?,
            bidisc: grid.bidisc_rule()?,
            a_grid,
            circle: grid.circle,
            grid: *grid,
        })
    }

    /// Same rules with the disc rule patched at the zeros of `f` inside D.
    pub fn adapted_to(&self, f: &TaylorFunction) -> Result<Self> {
        let mut out = self.clone();
        out.disc = self.disc.with_singular_points(&f.zeros_in_disc(), &self.grid.patch)?;
        Ok(out)
    }

    pub fn provenance(&self, theorem: Theorem) -> String {
        match theorem {
            Theorem::S1Hardy => format!("{};circle={}", self.disc.provenance(), self.circle),
            Theorem::S2Bergman => self.disc.provenance(),
            Theorem::S3Bloch => format!("{};a_grid={}", self.bidisc.provenance(), self.a_grid.len()),
            Theorem::S4Bp => self.bidisc.provenance(),
        }
    }
}

/// Constraint, dual and Hölder-floor node sums of one weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightValues {
    pub constraint: f64,
    pub dual: f64,
    /// Σ |F'|^p (1-|z|)^p over the same nodes (sup over a for S₃); none for S₁.
    pub floor: Option<f64>,
}

/// Exponents (slope, distance, level) of the constraint, dual and floor terms.
struct Powers {
    constraint: [f64; 3],
    dual: [f64; 3],
    floor: [f64; 2],
}

impl Powers {
    fn new(params: &DualParams, e: &Exponents) -> Self {
        let (p, a, ac) = (params.p, params.alpha, params.alpha_conj);
        Self {
            // |F'|^{α'(p-1)} ω^{-α'} (1-|z|)^{pα'}
            constraint: [ac * (p - 1.0) - ac * e.u, p * ac - ac * e.v, ac * e.s],
            // |F'|^α ω^α
            dual: [a + a * e.u, a * e.v, -a * e.s],
            floor: [p, p],
        }
    }

    #[inline]
    fn eval(&self, slope: f64, dist: f64, lq: f64) -> [f64; 3] {
        let (ls, ld) = (slope.ln(), dist.ln());
        let c = &self.constraint;
        let d = &self.dual;
        [
            (term(c[0], ls) + term(c[1], ld) + term(c[2], lq)).exp(),
            (term(d[0], ls) + term(d[1], ld) + term(d[2], lq)).exp(),
            self.floor_term(slope, dist),
        ]
    }

    /// (|F'| (1-|z|))^p from the slope and distance themselves.
    #[inline]
    fn floor_term(&self, slope: f64, dist: f64) -> f64 {
        let p = self.floor[0];
        let x = slope * dist;
        if p.fract() == 0.0 && p.abs() <= 64.0 {
            x.powi(p as i32)
        } else {
            x.powf(p)
        }
    }
}

fn check_arity(params: &DualParams, weight: &WeightSpec) -> Result<()> {
    let want = if params.theorem.is_two_point() {
        Arity::TwoPoint
    } else {
        Arity::OnePoint
    };
    if weight.arity != want {
        return Err(Error::domain(format!(
            "{} needs a {:?} weight, got {:?}",
            params.theorem.name(),
            want,
            weight.arity
        )));
    }
    weight.validate()
}

fn check_function(f: &TaylorFunction, params: &DualParams) -> Result<()> {
    match params.theorem {
        Theorem::S1Hardy => Ok(()),
        Theorem::S2Bergman => {
            if !f.vanishes_at_zero() {
                return Err(Error::domain("S2 requires F(0) = 0"));
            }
            if f.is_zero() {
                return Err(Error::domain("S2 requires F not identically zero"));
            }
            Ok(())
        }
        _ => {
            if f.is_constant() {
                return Err(Error::domain(format!(
                    "{} requires a nonconstant function",
                    params.theorem.name()
                )));
            }
            Ok(())
        }
    }
}

fn one_point_raw(
    f: &TaylorFunction,
    weight: &WeightSpec,
    params: &DualParams,
    rule: &DiscRule,
) -> Result<WeightValues> {
    let powers = Powers::new(params, &weight.exponents);
    let eps = weight.softening;
    let mut acc = [CompensatedSum::new(); 3];
    for n in rule.nodes() {
        let (val, der) = f.eval_with_derivative(n.z);
        let lq = if weight.exponents.s == 0.0 {
            0.0
        } else {
            (val.norm() + eps).ln()
        };
        let vals = powers.eval(der.norm(), n.boundary_distance, lq);
        for k in 0..3 {
            if !vals[k].is_finite() {
                return Err(Error::Evaluation {
                    location: format!("z = {} {:+}i", n.z.re, n.z.im),
                    value: vals[k],
                });
            }
            acc[k].add(n.weight * vals[k]);
        }
    }
    Ok(WeightValues {
        constraint: acc[0].value(),
        dual: acc[1].value(),
        floor: Some(acc[2].value()),
    })
}

/// Per-function tables for two-point theorems, reusable across weights.
pub(crate) fn prepare_tables(f: &TaylorFunction, params: &DualParams, rules: &DualRules) -> Option<PairTables> {
    match params.theorem {
        Theorem::S4Bp => Some(PairTables::new(f, &rules.bidisc, Measure::Mu)),
        Theorem::S3Bloch => Some(PairTables::new(f, &rules.bidisc, Measure::MuA)),
        _ => None,
    }
}

fn two_point_raw(
    tables: &PairTables,
    weight: &WeightSpec,
    params: &DualParams,
    rule: &BidiscRule,
    a_grid: &[MoebiusPoint],
) -> Result<WeightValues> {
    let powers = Powers::new(params, &weight.exponents);
    let eps = weight.softening;
    let need_level = weight.exponents.s != 0.0;
    let partners = |i: usize, _: Complex64| tables.partners(i);
    match params.theorem {
        Theorem::S4Bp => {
            debug_assert_eq!(tables.measure(), Measure::Mu);
            // Slope and distance factors depend only on the outer node.
            let outer: Vec<[f64; 3]> = rule
                .rule_z()
                .nodes()
                .iter()
                .enumerate()
                .map(|(i, n)| {
                    let (slope, dist) = (tables.outer_derivative(i), n.boundary_distance);
                    let (ls, ld) = (slope.ln(), dist.ln());
                    let c = &powers.constraint;
                    let d = &powers.dual;
                    [
                        term(c[0], ls) + term(c[1], ld),
                        term(d[0], ls) + term(d[1], ld),
                        powers.floor_term(slope, dist),
                    ]
                })
                .collect();
            let (cl, dl) = (powers.constraint[2], powers.dual[2]);
            let v = mu_sums(rule, Some(&partners), |pn: &PairNode| {
                let o = &outer[pn.outer_index];
                let lq = if !need_level {
                    0.0
                } else if eps == 0.0 {
                    0.5 * tables.level_gap_sqr(pn.outer_index, pn.w, pn.difference).ln()
                } else {
                    (tables.level_gap(pn.outer_index, pn.w, pn.difference) + eps).ln()
                };
                [(o[0] + term(cl, lq)).exp(), (o[1] + term(dl, lq)).exp(), o[2]]
            })?;
            Ok(WeightValues {
                constraint: v[0],
                dual: v[1],
                floor: Some(v[2]),
            })
        }
        Theorem::S3Bloch => {
            debug_assert_eq!(tables.measure(), Measure::MuA);
            let sums = mu_a_sums(rule, Some(&partners), |pn: &PairNode| {
                let lq = if !need_level {
                    0.0
                } else if eps == 0.0 {
                    0.5 * tables.level_gap_sqr(pn.outer_index, pn.z, pn.difference).ln()
                } else {
                    (tables.level_gap(pn.outer_index, pn.z, pn.difference) + eps).ln()
                };
                powers.eval(tables.derivative_at(pn.z), pn.z_boundary_distance, lq)
            })?;
            let v = sums.sup(a_grid)?;
            Ok(WeightValues {
                constraint: v[0],
                dual: v[1],
                floor: Some(v[2]),
            })
        }
        _ => unreachable!("two-point evaluation for a one-point theorem"),
    }
}

fn hardy_raw(
    f: &TaylorFunction,
    weight: &WeightSpec,
    params: &DualParams,
    rule: &DiscRule,
    circle: usize,
) -> Result<WeightValues> {
    let s = params.s.unwrap_or(1.0);
    let aperture = params.aperture.unwrap_or(super::params::DEFAULT_APERTURE);
    let eps = weight.softening;
    let mut sup_values = Vec::with_capacity(rule.len());
    let mut acc = CompensatedSum::new();
    for n in rule.nodes() {
        let (val, der) = f.eval_with_derivative(n.z);
        let ls = der.norm().ln();
        let ld = n.boundary_distance.ln();
        let lq = if weight.exponents.s == 0.0 {
            0.0
        } else {
            (val.norm() + eps).ln()
        };
        let lw = weight.log_unit(ls, ld, lq);
        // ω (1-|z|)^{2-s} |f'|^{2-s}
        let c = (lw + term(2.0 - s, ls + ld)).exp();
        // |f'|^s (1-|z|)^{s-1} / ω
        let d = (term(s, ls) + term(s - 1.0, ld) - lw).exp();
        for v in [c, d] {
            if !v.is_finite() {
                return Err(Error::Evaluation {
                    location: format!("z = {} {:+}i", n.z.re, n.z.im),
                    value: v,
                });
            }
        }
        sup_values.push(c);
        acc.add(n.weight * d);
    }
    let q = params.p / (2.0 - params.p);
    let constraint = cone_sup_norm(rule, &sup_values, q, aperture, circle)?;
    Ok(WeightValues {
        constraint,
        dual: acc.value(),
        floor: None,
    })
}

/// ‖ sup_{Γ(ξ)} values ‖_{L^q(T)} with the normalized circle measure.
fn cone_sup_norm(rule: &DiscRule, values: &[f64], q: f64, aperture: f64, circle: usize) -> Result<f64> {
    if circle < 4 {
        return Err(Error::config("circle rule needs at least 4 nodes"));
    }
    let step = 2.0 * std::f64::consts::PI / circle as f64;
    let mut acc = CompensatedSum::new();
    for j in 0..circle {
        let region =
            crate::quadrature::StolzRegion::new(num_complex::Complex64::from_polar(1.0, step * j as f64), aperture)?;
        let mut best = 0.0_f64;
        for (n, v) in rule.nodes().iter().zip(values) {
            if *v > best && region.contains(n.z) {
                best = *v;
            }
        }
        acc.add(best.powf(q));
    }
    Ok((acc.value() / circle as f64).powf(1.0 / q))
}

/// Node sums for the weight with unit scale.
fn unit_values(
    f: &TaylorFunction,
    weight: &WeightSpec,
    params: &DualParams,
    rules: &DualRules,
) -> Result<WeightValues> {
    unit_values_with(f, weight, params, rules, None)
}

/// As `unit_values`, reusing tables from `prepare_tables` when given.
pub(crate) fn unit_values_with(
    f: &TaylorFunction,
    weight: &WeightSpec,
    params: &DualParams,
    rules: &DualRules,
    tables: Option<&PairTables>,
) -> Result<WeightValues> {
    params.validate()?;
    check_arity(params, weight)?;
    check_function(f, params)?;
    match params.theorem {
        Theorem::S1Hardy => hardy_raw(f, weight, params, &rules.disc, rules.circle),
        Theorem::S2Bergman => one_point_raw(f, weight, params, &rules.disc),
        _ => match tables {
            Some(t) => two_point_raw(t, weight, params, &rules.bidisc, &rules.a_grid),
            None => {
                let t = prepare_tables(f, params, rules).expect("two-point theorem");
                two_point_raw(&t, weight, params, &rules.bidisc, &rules.a_grid)
            }
        },
    }
}

fn apply_scale(unit: &WeightValues, scale: f64, params: &DualParams) -> WeightValues {
    WeightValues {
        constraint: unit.constraint * scale.powf(params.constraint_degree()),
        dual: unit.dual * scale.powf(params.dual_degree()),
        floor: unit.floor,
    }
}

/// Constraint, dual and floor sums of `weight` on the rules of its theorem.
pub fn evaluate_weight(
    f: &TaylorFunction,
    weight: &WeightSpec,
    params: &DualParams,
    rules: &DualRules,
) -> Result<WeightValues> {
    let unit = unit_values(f, weight, params, rules)?;
    Ok(apply_scale(&unit, weight.scale, params))
}

/// A weight rescaled onto its constraint surface, with its values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualEvaluation {
    pub constraint_value: f64,
    pub dual_value: f64,
    pub normalization_scale: f64,
    pub feasible: bool,
    pub weight: WeightSpec,
    pub params: DualParams,
    pub grid_provenance: String,
    pub holder_floor: Option<f64>,
}

impl DualEvaluation {
    /// The dual raised to the report power (1/α, or p/2 for S₁).
    pub fn reported_dual(&self) -> f64 {
        self.dual_value.powf(self.params.report_power())
    }
}

/// Multiplies the scale of `weight` so that its constraint equals 1.
pub fn normalize_weight(
    f: &TaylorFunction,
    weight: &WeightSpec,
    params: &DualParams,
    rules: &DualRules,
) -> Result<DualEvaluation> {
    normalize_weight_with(f, weight, params, rules, None)
}

pub(crate) fn normalize_weight_with(
    f: &TaylorFunction,
    weight: &WeightSpec,
    params: &DualParams,
    rules: &DualRules,
    tables: Option<&PairTables>,
) -> Result<DualEvaluation> {
    let unit = unit_values_with(f, weight, params, rules, tables)?;
    let current = apply_scale(&unit, weight.scale, params);
    let c = current.constraint;
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::Normalization(format!(
            "constraint value {c} cannot be normalized"
        )));
    }
    let factor = c.powf(-1.0 / params.constraint_degree());
    let scale = weight.scale * factor;
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::Normalization(format!("normalized scale {scale} is not finite")));
    }
    let scaled = weight.with_scale(scale);
    let values = apply_scale(&unit, scale, params);
    Ok(DualEvaluation {
        constraint_value: values.constraint,
        dual_value: values.dual,
        normalization_scale: scale,
        feasible: (values.constraint - 1.0).abs() <= 1e-9 && values.dual.is_finite(),
        weight: scaled,
        params: *params,
        grid_provenance: rules.provenance(params.theorem),
        holder_floor: values.floor,
    })
}

fn s2_rules(rule: &DiscRule) -> DualRules {
    bare_rules(rule.clone(), None, Vec::new(), 0)
}

fn bare_rules(disc: DiscRule, bidisc: Option<&BidiscRule>, a_grid: Vec<MoebiusPoint>, circle: usize) -> DualRules {
    let grid = GridConfig::default();
    let bidisc = match bidisc {
        Some(b) => b.clone(),
        None => BidiscRule::new(4, 4, 1.0).expect("minimal bidisc rule"),
    };
    DualRules {
        disc,
        bidisc,
        a_grid,
        circle,
        grid,
    }
}

fn expect(params: &DualParams, theorem: Theorem) -> Result<()> {
    if params.theorem != theorem {
        return Err(Error::domain(format!(
            "parameters are for {}, operation needs {}",
            params.theorem.name(),
            theorem.name()
        )));
    }
    Ok(())
}

/// ∫ |F'|^{(p-1)α'} ω^{-α'} (1-|z|)^{pα'} dm.
pub fn constraint_s2(f: &TaylorFunction, weight: &WeightSpec, params: &DualParams, rule: &DiscRule) -> Result<f64> {
    expect(params, Theorem::S2Bergman)?;
    Ok(evaluate_weight(f, weight, params, &s2_rules(rule))?.constraint)
}

/// ∫ |F'|^α ω^α dm.
pub fn dual_s2(f: &TaylorFunction, weight: &WeightSpec, params: &DualParams, rule: &DiscRule) -> Result<f64> {
    expect(params, Theorem::S2Bergman)?;
    Ok(evaluate_weight(f, weight, params, &s2_rules(rule))?.dual)
}

fn bidisc_rules(rule: &BidiscRule, a_grid: &[MoebiusPoint]) -> DualRules {
    let disc = rule.rule_z().clone();
    bare_rules(disc, Some(rule), a_grid.to_vec(), 0)
}

/// sup_a ∫∫ |F'(z)|^{α'(p-1)} ω^{-α'} (1-|z|)^{pα'} dμ_a over the a-grid.
pub fn constraint_s3(
    f: &TaylorFunction,
    weight: &WeightSpec,
    params: &DualParams,
    a_grid: &[MoebiusPoint],
    rule: &BidiscRule,
) -> Result<f64> {
    expect(params, Theorem::S3Bloch)?;
    Ok(evaluate_weight(f, weight, params, &bidisc_rules(rule, a_grid))?.constraint)
}

/// sup_a ∫∫ ω^α |F'(z)|^α dμ_a over the a-grid.
pub fn dual_s3(
    f: &TaylorFunction,
    weight: &WeightSpec,
    params: &DualParams,
    a_grid: &[MoebiusPoint],
    rule: &BidiscRule,
) -> Result<f64> {
    expect(params, Theorem::S3Bloch)?;
    Ok(evaluate_weight(f, weight, params, &bidisc_rules(rule, a_grid))?.dual)
}

/// ∫∫ |F'(z)|^{α'(p-1)} ω^{-α'} (1-|z|)^{pα'} dμ.
pub fn constraint_s4(f: &TaylorFunction, weight: &WeightSpec, params: &DualParams, rule: &BidiscRule) -> Result<f64> {
    expect(params, Theorem::S4Bp)?;
    Ok(evaluate_weight(f, weight, params, &bidisc_rules(rule, &[]))?.constraint)
}

/// ∫∫ ω^α |F'(z)|^α dμ.
pub fn dual_s4(f: &TaylorFunction, weight: &WeightSpec, params: &DualParams, rule: &BidiscRule) -> Result<f64> {
    expect(params, Theorem::S4Bp)?;
    Ok(evaluate_weight(f, weight, params, &bidisc_rules(rule, &[]))?.dual)
}

/// ‖ sup_{Γ(ξ)} ω (1-|z|)^{2-s} |f'|^{2-s} ‖_{L^{p/(2-p)}(T)}.
pub fn constraint_s1(
    f: &TaylorFunction,
    weight: &WeightSpec,
    params: &DualParams,
    rule: &DiscRule,
    angular_count: usize,
) -> Result<f64> {
    expect(params, Theorem::S1Hardy)?;
    let rules = bare_rules(rule.clone(), None, Vec::new(), angular_count);
    Ok(evaluate_weight(f, weight, params, &rules)?.constraint)
}

/// ∫ |f'|^s (1-|z|)^{s-1} ω^{-1} dm.
pub fn dual_s1(f: &TaylorFunction, weight: &WeightSpec, params: &DualParams, rule: &DiscRule) -> Result<f64> {
    expect(params, Theorem::S1Hardy)?;
    let rules = bare_rules(rule.clone(), None, Vec::new(), 4);
    Ok(evaluate_weight(f, weight, params, &rules)?.dual)
}

/// ∫_T ( ∫_{Γ(ξ)} |f'|² dm )^{p/2} dξ, the left side for S₁.
pub fn hardy_area_functional(
    f: &TaylorFunction,
    params: &DualParams,
    rule: &DiscRule,
    angular_count: usize,
) -> Result<f64> {
    expect(params, Theorem::S1Hardy)?;
    let d = f.derivative();
    let values: Vec<f64> = rule
        .nodes()
        .iter()
        .map(|n| n.weight * d.eval_unchecked(n.z).norm_sqr())
        .collect();
    cone_average(
        rule,
        &values,
        params.p / 2.0,
        params.aperture.unwrap_or(super::params::DEFAULT_APERTURE),
        angular_count,
    )
}

/// ω̃ = |F'|^{p/α} (1-|z|)^{1+p/α} / |F|.
pub fn test_weight_s2(f: &TaylorFunction, params: &DualParams) -> Result<WeightSpec> {
    if f.is_zero() {
        return Err(Error::domain("test weight is undefined for F = 0"));
    }
    let r = params.p / params.alpha;
    WeightSpec::new(
        Arity::OnePoint,
        Exponents {
            u: r,
            v: 1.0 + r,
            s: 1.0,
        },
        0.0,
        1.0,
    )
}

/// ω̃ = |F'(z)|^{p/α} (1-|z|)^{(p+α)/α} / |F(z) - F(w)|.
pub fn test_weight_s3(f: &TaylorFunction, params: &DualParams) -> Result<WeightSpec> {
    if f.is_constant() {
        return Err(Error::domain("test weight is undefined for constant F"));
    }
    let r = params.p / params.alpha;
    WeightSpec::new(
        Arity::TwoPoint,
        Exponents {
            u: r,
            v: (params.p + params.alpha) / params.alpha,
            s: 1.0,
        },
        0.0,
        1.0,
    )
}

/// The explicit test weight for the theorem of `params`, if there is one.
pub fn test_weight(f: &TaylorFunction, params: &DualParams) -> Result<Option<WeightSpec>> {
    match params.theorem {
        Theorem::S1Hardy => Ok(None),
        Theorem::S2Bergman => test_weight_s2(f, params).map(Some),
        _ => test_weight_s3(f, params).map(Some),
    }
}
