//! Local polar patches around interior singular points.
//!
//! A patch of radius ρ around s replaces the base rule on the disc |ζ - s| < ρ
//! through a smooth partition of unity: base weights are multiplied by
//! 1 - χ(|ζ - s|/ρ) and the patch carries χ. Patch nodes are graded towards s.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::disc::{DiscNode, DiscRule};
use super::gauss::gauss_legendre_unit;
use crate::error::{Error, Result};

const MIN_RADIUS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PatchConfig {
    pub radial: usize,
    pub angular: usize,
    pub grading: u32,
    pub max_radius: f64,
    /// Below this fraction of ρ the patch carries the full weight.
    pub inner_fraction: f64,
}

impl Default for PatchConfig {
    fn default() -> Self {
        Self {
            radial: 12,
            angular: 16,
            grading: 5,
            max_radius: 0.25,
            inner_fraction: 0.3,
        }
    }
}

impl PatchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.radial < 1 || self.angular < 1 || self.grading < 1 {
            return Err(Error::config("patch counts and grading must be positive"));
        }
        if !(self.max_radius > 0.0 && self.max_radius < 1.0) {
            return Err(Error::config("patch max_radius must lie in (0, 1)"));
        }
        if !(self.inner_fraction >= 0.0 && self.inner_fraction < 1.0) {
            return Err(Error::config("patch inner_fraction must lie in [0, 1)"));
        }
        Ok(())
    }

    pub fn scaled(&self, k: usize) -> Self {
        Self {
            radial: self.radial * k,
            angular: self.angular * k,
            ..*self
        }
    }
}

/// Septic smoothstep cutoff: 1 below `inner`, 0 at and beyond 1.
#[inline]
pub(crate) fn cutoff(t: f64, inner: f64) -> f64 {
    if t <= inner {
        1.0
    } else if t >= 1.0 {
        0.0
    } else {
        let x = (t - inner) / (1.0 - inner);
        1.0 - x * x * x * x * (35.0 - 84.0 * x + 70.0 * x * x - 20.0 * x * x * x)
    }
}

/// Unit patch nodes: offsets t·e^{iφ} with weights already multiplied by χ(t).
#[derive(Debug, Clone)]
pub(crate) struct PatchTemplate {
    offsets: Vec<Complex64>,
    weights: Vec<f64>,
    inner_fraction: f64,
}

impl PatchTemplate {
    pub(crate) fn new(config: &PatchConfig) -> Self {
        // Graded nodes on [0, inner], where χ = 1, and plain Gauss-Legendre on
        // [inner, 1], where χ·t is a polynomial integrated exactly.
        let inner = config.inner_fraction;
        let n_outer = if inner > 0.0 { (config.radial / 2).max(4) } else { 0 };
        let n_inner = config.radial.saturating_sub(n_outer).max(1);
        let q = config.grading as i32;
        let h = 2.0 * PI / config.angular as f64;
        let mut radial: Vec<(f64, f64)> = Vec::with_capacity(n_inner + n_outer);
        let span = if inner > 0.0 { inner } else { 1.0 };
        let (u, wu) = gauss_legendre_unit(n_inner);
        for (uk, wk) in u.iter().zip(&wu) {
            let t = span * uk.powi(q);
            let dt = span * q as f64 * uk.powi(q - 1);
            radial.push((t, wk * dt * t * cutoff(t, inner)));
        }
        if n_outer > 0 {
            let (u, wu) = gauss_legendre_unit(n_outer);
            for (uk, wk) in u.iter().zip(&wu) {
                let t = inner + (1.0 - inner) * uk;
                radial.push((t, wk * (1.0 - inner) * t * cutoff(t, inner)));
            }
        }
        let mut offsets = Vec::with_capacity(radial.len() * config.angular);
        let mut weights = Vec::with_capacity(radial.len() * config.angular);
        for (t, w) in radial {
            for j in 0..config.angular {
                offsets.push(Complex64::from_polar(t, h * (j as f64 + 0.5)));
                weights.push(w * h);
            }
        }
        Self {
            offsets,
            weights,
            inner_fraction: config.inner_fraction,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.offsets.len()
    }
}

/// Centers and radii of the patches for a set of singular points.
///
/// The origin is excluded: the base rule is already graded there. Radii keep
/// patches disjoint, away from the origin and inside the disc.
pub(crate) fn patch_layout(points: &[Complex64], max_radius: f64) -> Vec<(Complex64, f64)> {
    let mut centers: Vec<Complex64> = Vec::new();
    for &s in points {
        let m = s.norm();
        if !(m < 1.0) || m < MIN_RADIUS || !s.re.is_finite() || !s.im.is_finite() {
            continue;
        }
        if centers.iter().any(|c| (c - s).norm() < MIN_RADIUS) {
            continue;
        }
        centers.push(s);
    }
    let mut out = Vec::with_capacity(centers.len());
    for (k, &s) in centers.iter().enumerate() {
        let m = s.norm();
        let mut rho = max_radius.min(0.5 * (1.0 - m)).min(0.5 * m);
        for (j, &t) in centers.iter().enumerate() {
            if j != k {
                rho = rho.min(0.5 * (s - t).norm());
            }
        }
        if rho >= MIN_RADIUS {
            out.push((s, rho));
        }
    }
    out
}

/// Visits the nodes of `base` reweighted by the patch partition, followed by
/// the patch nodes, in a fixed order. Zero-weight nodes are skipped.
pub(crate) fn visit_patched<V>(base: &[DiscNode], template: &PatchTemplate, layout: &[(Complex64, f64)], mut visit: V)
where
    V: FnMut(&DiscNode),
{
    if layout.is_empty() {
        base.iter().for_each(&mut visit);
        return;
    }
    for node in base {
        let mut factor = 1.0;
        for &(s, rho) in layout {
            let d2 = (node.z - s).norm_sqr();
            if d2 < rho * rho {
                factor = 1.0 - cutoff(d2.sqrt() / rho, template.inner_fraction);
                break;
            }
        }
        if factor > 0.0 {
            visit(&DiscNode {
                weight: node.weight * factor,
                ..*node
            });
        }
    }
    for &(s, rho) in layout {
        let area = rho * rho;
        for (off, w) in template.offsets.iter().zip(&template.weights) {
            if *w <= 0.0 {
                continue;
            }
            let z = s + off * rho;
            visit(&DiscNode {
                z,
                weight: w * area,
                boundary_distance: 1.0 - z.norm(),
            });
        }
    }
}

impl DiscRule {
    /// Copy of the rule with graded patches around the given interior points.
    pub fn with_singular_points(&self, points: &[Complex64], config: &PatchConfig) -> Result<DiscRule> {
        config.validate()?;
        let layout = patch_layout(points, config.max_radius);
        if layout.is_empty() {
            return Ok(self.clone());
        }
        let template = PatchTemplate::new(config);
        let mut nodes = Vec::with_capacity(self.len() + layout.len() * template.len());
        visit_patched(self.nodes(), &template, &layout, |n| nodes.push(*n));
        Ok(self.with_nodes(nodes, self.patch_count() + layout.len()))
    }
}
