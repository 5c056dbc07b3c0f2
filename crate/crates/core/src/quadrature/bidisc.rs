//! Product quadrature on D×D and integration against the kernel measures
//! dμ(z,w) = |1 - w̄z|^{-4} dm dm and dμ_a.
//!
//! With `MoebiusCentered` the inner variable is written as φ_x(ζ) with
//! φ_x(ζ) = (x - ζ)/(1 - x̄ζ) and x the outer node. The kernel then cancels
//! against the Jacobian and the diagonal moves to ζ = 0, where the inner rule
//! is graded. Other coincidences F(z) = F(w) can be covered by patches.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::disc::{DiscNode, DiscRule};
use super::patch::{patch_layout, visit_patched, PatchConfig, PatchTemplate};
use super::sum::CompensatedSum;
use crate::error::{Error, Result};

pub const DEFAULT_BIDISC_RADIAL: usize = 48;
pub const DEFAULT_BIDISC_ANGULAR: usize = 64;

/// Maps an outer node (index and point) to the points where the inner
/// integrand is singular.
pub type PartnerFn<'a> = &'a (dyn Fn(usize, Complex64) -> Vec<Complex64> + Sync);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagonalPolicy {
    /// Plain tensor product of the two offset grids.
    OffsetGrids,
    /// Kernel measures are integrated in Möbius coordinates around the outer node.
    MoebiusCentered,
}

#[derive(Debug, Clone)]
pub struct BidiscRule {
    rule_z: DiscRule,
    rule_w: DiscRule,
    diagonal_policy: DiagonalPolicy,
    patch: PatchConfig,
}

impl BidiscRule {
    /// Two factor grids with angular offsets 0 and π/m.
    pub fn new(radial_count: usize, angular_count: usize, grading_exponent: f64) -> Result<Self> {
        let rule_z = super::make_disc_rule(radial_count, angular_count, grading_exponent, 0.0)?;
        let rule_w = super::make_disc_rule(radial_count, angular_count, grading_exponent, PI / angular_count as f64)?;
        Self::from_rules(rule_z, rule_w, DiagonalPolicy::MoebiusCentered, PatchConfig::default())
    }

    pub fn from_rules(
        rule_z: DiscRule,
        rule_w: DiscRule,
        diagonal_policy: DiagonalPolicy,
        patch: PatchConfig,
    ) -> Result<Self> {
        if rule_z.angular_offset() == rule_w.angular_offset() {
            return Err(Error::config("bidisc factor grids need distinct angular offsets"));
        }
        patch.validate()?;
        Ok(Self {
            rule_z,
            rule_w,
            diagonal_policy,
            patch,
        })
    }

    pub fn with_policy(mut self, policy: DiagonalPolicy) -> Self {
        self.diagonal_policy = policy;
        self
    }

    pub fn rule_z(&self) -> &DiscRule {
        &self.rule_z
    }

    pub fn rule_w(&self) -> &DiscRule {
        &self.rule_w
    }

    pub fn diagonal_policy(&self) -> DiagonalPolicy {
        self.diagonal_policy
    }

    pub fn patch(&self) -> &PatchConfig {
        &self.patch
    }

    pub fn provenance(&self) -> String {
        let policy = match self.diagonal_policy {
            DiagonalPolicy::OffsetGrids => "offset",
            DiagonalPolicy::MoebiusCentered => "moebius",
        };
        format!(
            "bidisc({}x{},{},patch={}x{})",
            self.rule_z.radial_count(),
            self.rule_z.angular_count(),
            policy,
            self.patch.radial,
            self.patch.angular
        )
    }
}

/// Parameter of the measure dμ_a.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoebiusPoint {
    a: Complex64,
}

impl MoebiusPoint {
    pub fn new(a: Complex64) -> Result<Self> {
        if !(a.norm() < 1.0) {
            return Err(Error::domain(format!(
                "Moebius parameter must satisfy |a| < 1, got |a| = {}",
                a.norm()
            )));
        }
        Ok(Self { a })
    }

    pub fn origin() -> Self {
        Self {
            a: Complex64::new(0.0, 0.0),
        }
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    /// (1 - |a|)² / |1 - w̄a|⁴.
    #[inline]
    pub fn density(&self, w: Complex64) -> f64 {
        let one_minus = 1.0 - self.a.norm();
        let den = (1.0 - w.conj() * self.a).norm_sqr();
        one_minus * one_minus / (den * den)
    }
}

fn a_grid_from(radii: &[f64], phases: usize) -> Vec<MoebiusPoint> {
    let mut grid = vec![MoebiusPoint::origin()];
    for &r in radii {
        for k in 0..phases {
            let a = Complex64::from_polar(r, 2.0 * PI * k as f64 / phases as f64);
            grid.push(MoebiusPoint { a });
        }
    }
    grid
}

/// {0} ∪ {0.3, 0.6, 0.85} × 8 phases.
pub fn default_a_grid() -> Vec<MoebiusPoint> {
    a_grid_from(&[0.3, 0.6, 0.85], 8)
}

/// Twice as dense in modulus and phase over the same range of |a|.
pub fn refined_a_grid() -> Vec<MoebiusPoint> {
    a_grid_from(&[0.15, 0.3, 0.45, 0.6, 0.725, 0.85], 16)
}

/// One node pair handed to a pair integrand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairNode {
    pub z: Complex64,
    pub w: Complex64,
    pub z_boundary_distance: f64,
    pub w_boundary_distance: f64,
    /// z - w, accurate even when the points nearly coincide.
    pub difference: Complex64,
    /// Index of the outer node in its factor rule.
    pub outer_index: usize,
}

fn pair_error(z: Complex64, w: Complex64, value: f64) -> Error {
    Error::Evaluation {
        location: format!("(z, w) = ({} {:+}i, {} {:+}i)", z.re, z.im, w.re, w.im),
        value,
    }
}

/// Tensor-product sum over the two offset factor grids.
pub fn integrate_bidisc<G>(rule: &BidiscRule, g: G) -> Result<f64>
where
    G: Fn(&PairNode) -> f64,
{
    let mut acc = CompensatedSum::new();
    for (i, zn) in rule.rule_z.nodes().iter().enumerate() {
        for wn in rule.rule_w.nodes() {
            let pair = PairNode {
                z: zn.z,
                w: wn.z,
                z_boundary_distance: zn.boundary_distance,
                w_boundary_distance: wn.boundary_distance,
                difference: zn.z - wn.z,
                outer_index: i,
            };
            let v = g(&pair);
            if !v.is_finite() {
                return Err(pair_error(zn.z, wn.z, v));
            }
            acc.add(zn.weight * wn.weight * v);
        }
    }
    Ok(acc.value())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outer {
    Z,
    W,
}

/// Per-outer-node inner sums; the pair integral is Σ factor·sums.
#[derive(Debug, Clone)]
struct OuterSums<const K: usize> {
    point: Complex64,
    factor: f64,
    sums: [f64; K],
}

struct OuterGeometry {
    x: Complex64,
    d: f64,
    one_minus_sq: f64,
    angle: f64,
    radius: f64,
}

impl OuterGeometry {
    fn new(node: &DiscNode) -> Self {
        let d = node.boundary_distance;
        Self {
            x: node.z,
            d,
            one_minus_sq: d * (2.0 - d),
            angle: node.z.arg(),
            radius: node.z.norm(),
        }
    }

    /// 1 - x̄ζ, with the near-boundary cancellation removed.
    #[inline]
    fn denominator(&self, zeta: Complex64, zeta_d: f64) -> Complex64 {
        let den = 1.0 - self.x.conj() * zeta;
        if den.norm_sqr() > 2.5e-3 {
            return den;
        }
        let rho = self.radius * (1.0 - zeta_d);
        let one_minus_rho = self.d + zeta_d - self.d * zeta_d;
        let phi = zeta.arg() - self.angle;
        let half = (0.5 * phi).sin();
        Complex64::new(one_minus_rho + 2.0 * rho * half * half, -rho * phi.sin())
    }

    /// φ_x(ζ), its boundary distance and x - φ_x(ζ).
    #[inline]
    fn map(&self, zeta: &DiscNode) -> (Complex64, f64, Complex64) {
        let den = self.denominator(zeta.z, zeta.boundary_distance);
        let den_sq = den.norm_sqr();
        let inv = den.conj() / den_sq;
        let y = (self.x - zeta.z) * inv;
        let zd = zeta.boundary_distance;
        let one_minus_y_sq = self.one_minus_sq * zd * (2.0 - zd) / den_sq;
        let dy = one_minus_y_sq / (1.0 + y.norm_sqr().sqrt());
        let diff = zeta.z * (inv * self.one_minus_sq);
        (y, dy, diff)
    }
}

fn outer_sums<const K: usize, G>(
    rule: &BidiscRule,
    outer: Outer,
    partners: Option<PartnerFn<'_>>,
    g: &G,
) -> Result<Vec<OuterSums<K>>>
where
    G: Fn(&PairNode) -> [f64; K] + Sync,
{
    let (outer_rule, inner_rule) = match outer {
        Outer::Z => (&rule.rule_z, &rule.rule_w),
        Outer::W => (&rule.rule_w, &rule.rule_z),
    };
    let template = PatchTemplate::new(&rule.patch);
    let nodes = outer_rule.nodes();
    (0..nodes.len())
        .into_par_iter()
        .map(|i| match rule.diagonal_policy {
            DiagonalPolicy::OffsetGrids => offset_outer(i, &nodes[i], inner_rule, outer, g),
            DiagonalPolicy::MoebiusCentered => moebius_outer(
                i,
                &nodes[i],
                inner_rule,
                outer,
                partners,
                &template,
                rule.patch.max_radius,
                g,
            ),
        })
        .collect()
}

fn offset_outer<const K: usize, G>(
    i: usize,
    on: &DiscNode,
    inner_rule: &DiscRule,
    outer: Outer,
    g: &G,
) -> Result<OuterSums<K>>
where
    G: Fn(&PairNode) -> [f64; K],
{
    let mut acc = [CompensatedSum::new(); K];
    for inn in inner_rule.nodes() {
        let (zn, wn) = match outer {
            Outer::Z => (on, inn),
            Outer::W => (inn, on),
        };
        let pair = PairNode {
            z: zn.z,
            w: wn.z,
            z_boundary_distance: zn.boundary_distance,
            w_boundary_distance: wn.boundary_distance,
            difference: zn.z - wn.z,
            outer_index: i,
        };
        let kernel = (1.0 - wn.z.conj() * zn.z).norm_sqr().powi(-2);
        let vals = g(&pair);
        for k in 0..K {
            if !vals[k].is_finite() {
                return Err(pair_error(pair.z, pair.w, vals[k]));
            }
            acc[k].add(inn.weight * kernel * vals[k]);
        }
    }
    let factor = match outer {
        Outer::Z => on.weight,
        Outer::W => on.weight * on.boundary_distance * on.boundary_distance,
    };
    Ok(OuterSums {
        point: on.z,
        factor,
        sums: acc.map(|a| a.value()),
    })
}

#[allow(clippy::too_many_arguments)]
fn moebius_outer<const K: usize, G>(
    i: usize,
    on: &DiscNode,
    inner_rule: &DiscRule,
    outer: Outer,
    partners: Option<PartnerFn<'_>>,
    template: &PatchTemplate,
    max_radius: f64,
    g: &G,
) -> Result<OuterSums<K>>
where
    G: Fn(&PairNode) -> [f64; K],
{
    let geo = OuterGeometry::new(on);
    let layout = match partners {
        Some(f) => {
            let pts: Vec<Complex64> = f(i, on.z)
                .into_iter()
                .map(|p| (on.z - p) / (1.0 - on.z.conj() * p))
                .collect();
            patch_layout(&pts, max_radius)
        }
        None => Vec::new(),
    };
    let mut acc = [CompensatedSum::new(); K];
    let mut failure: Option<Error> = None;
    visit_patched(inner_rule.nodes(), template, &layout, |zeta| {
        if failure.is_some() {
            return;
        }
        let (y, dy, x_minus_y) = geo.map(zeta);
        let pair = match outer {
            Outer::Z => PairNode {
                z: on.z,
                w: y,
                z_boundary_distance: on.boundary_distance,
                w_boundary_distance: dy,
                difference: x_minus_y,
                outer_index: i,
            },
            Outer::W => PairNode {
                z: y,
                w: on.z,
                z_boundary_distance: dy,
                w_boundary_distance: on.boundary_distance,
                difference: -x_minus_y,
                outer_index: i,
            },
        };
        let vals = g(&pair);
        for k in 0..K {
            if !vals[k].is_finite() {
                failure = Some(pair_error(pair.z, pair.w, vals[k]));
                return;
            }
            acc[k].add(zeta.weight * vals[k]);
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let factor = match outer {
        Outer::Z => on.weight / (geo.one_minus_sq * geo.one_minus_sq),
        Outer::W => {
            let s = 1.0 + geo.radius;
            on.weight / (s * s)
        }
    };
    Ok(OuterSums {
        point: on.z,
        factor,
        sums: acc.map(|a| a.value()),
    })
}

fn finish<const K: usize>(sums: &[f64; K]) -> Result<[f64; K]> {
    for v in sums {
        if !v.is_finite() {
            return Err(Error::Evaluation {
                location: "pair sum".into(),
                value: *v,
            });
        }
    }
    Ok(*sums)
}

/// K simultaneous integrals against dμ, sharing one pass over the node pairs.
pub fn mu_sums<const K: usize, G>(rule: &BidiscRule, partners: Option<PartnerFn<'_>>, g: G) -> Result<[f64; K]>
where
    G: Fn(&PairNode) -> [f64; K] + Sync,
{
    let per = outer_sums(rule, Outer::Z, partners, &g)?;
    let mut acc = [CompensatedSum::new(); K];
    for o in &per {
        for (a, s) in acc.iter_mut().zip(&o.sums) {
            a.add(o.factor * s);
        }
    }
    finish(&acc.map(|a| a.value()))
}

/// ∫∫ g dμ.
pub fn integrate_mu<G>(rule: &BidiscRule, g: G) -> Result<f64>
where
    G: Fn(&PairNode) -> f64 + Sync,
{
    Ok(mu_sums(rule, None, |p| [g(p)])?[0])
}

/// Inner sums for dμ_a, reusable across values of a.
#[derive(Debug, Clone)]
pub struct MuASums<const K: usize> {
    outer: Vec<OuterSums<K>>,
}

impl<const K: usize> MuASums<K> {
    /// The K integrals against dμ_a.
    pub fn at(&self, a: &MoebiusPoint) -> Result<[f64; K]> {
        let mut acc = [CompensatedSum::new(); K];
        for o in &self.outer {
            let f = o.factor * a.density(o.point);
            for (a, s) in acc.iter_mut().zip(&o.sums) {
                a.add(f * s);
            }
        }
        finish(&acc.map(|a| a.value()))
    }

    /// Componentwise maximum over the grid.
    pub fn sup(&self, grid: &[MoebiusPoint]) -> Result<[f64; K]> {
        if grid.is_empty() {
            return Err(Error::config("a-grid must not be empty"));
        }
        let mut best = [f64::NEG_INFINITY; K];
        for a in grid {
            let v = self.at(a)?;
            for k in 0..K {
                best[k] = best[k].max(v[k]);
            }
        }
        Ok(best)
    }
}

/// K simultaneous dμ_a integrands; the outer variable is w.
pub fn mu_a_sums<const K: usize, G>(rule: &BidiscRule, partners: Option<PartnerFn<'_>>, g: G) -> Result<MuASums<K>>
where
    G: Fn(&PairNode) -> [f64; K] + Sync,
{
    Ok(MuASums {
        outer: outer_sums(rule, Outer::W, partners, &g)?,
    })
}

/// ∫∫ g dμ_a.
pub fn integrate_mu_a<G>(rule: &BidiscRule, a: &MoebiusPoint, g: G) -> Result<f64>
where
    G: Fn(&PairNode) -> f64 + Sync,
{
    Ok(mu_a_sums(rule, None, |p| [g(p)])?.at(a)?[0])
}
