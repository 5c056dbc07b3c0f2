use std::f64::consts::PI;

use num_complex::Complex64;

use super::gauss::gauss_legendre_unit;
use super::radial::RadialMap;
use super::sum::CompensatedSum;
use crate::error::{Error, Result};

pub const DEFAULT_RADIAL: usize = 96;
pub const DEFAULT_ANGULAR: usize = 128;
pub const DEFAULT_GRADING: f64 = 3.0;
pub const DEFAULT_ORIGIN_GRADING: u32 = 4;

/// A quadrature node on the disc with its area weight.
///
/// `boundary_distance` is 1 - |z| computed without cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscNode {
    pub z: Complex64,
    pub weight: f64,
    pub boundary_distance: f64,
}

/// Graded polar product rule on the unit disc, optionally with local patches.
#[derive(Debug, Clone)]
pub struct DiscRule {
    nodes: Vec<DiscNode>,
    radial_count: usize,
    angular_count: usize,
    grading_exponent: f64,
    origin_grading: u32,
    angular_offset: f64,
    patch_count: usize,
}

/// Polar rule with the default origin grading.
pub fn make_disc_rule(
    radial_count: usize,
    angular_count: usize,
    grading_exponent: f64,
    angular_offset: f64,
) -> Result<DiscRule> {
    DiscRule::polar(
        radial_count,
        angular_count,
        grading_exponent,
        DEFAULT_ORIGIN_GRADING,
        angular_offset,
    )
}

impl DiscRule {
    /// Gauss-Legendre in u, r = I_u(q, γ), equispaced angles.
    pub fn polar(
        radial_count: usize,
        angular_count: usize,
        grading_exponent: f64,
        origin_grading: u32,
        angular_offset: f64,
    ) -> Result<Self> {
        if radial_count < 4 || angular_count < 4 {
            return Err(Error::config(format!(
                "disc rule needs at least 4 radial and 4 angular nodes, got {radial_count}x{angular_count}"
            )));
        }
        if !(grading_exponent >= 1.0) || !grading_exponent.is_finite() {
            return Err(Error::config(format!(
                "grading exponent must be >= 1, got {grading_exponent}"
            )));
        }
        if origin_grading == 0 {
            return Err(Error::config("origin grading must be a positive integer"));
        }
        if !angular_offset.is_finite() {
            return Err(Error::config("angular offset must be finite"));
        }
        let map = RadialMap::new(origin_grading, grading_exponent);
        let (u, wu) = gauss_legendre_unit(radial_count);
        let h = 2.0 * PI / angular_count as f64;
        let mut nodes = Vec::with_capacity(radial_count * angular_count);
        for (uk, wk) in u.iter().zip(&wu) {
            let (r, d, jac) = map.eval(*uk);
            let radial_weight = wk * jac * r;
            for j in 0..angular_count {
                let theta = angular_offset + h * j as f64;
                nodes.push(DiscNode {
                    z: Complex64::from_polar(r, theta),
                    weight: radial_weight * h,
                    boundary_distance: d,
                });
            }
        }
        Ok(Self {
            nodes,
            radial_count,
            angular_count,
            grading_exponent,
            origin_grading,
            angular_offset,
            patch_count: 0,
        })
    }

    pub fn nodes(&self) -> &[DiscNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn radial_count(&self) -> usize {
        self.radial_count
    }

    pub fn angular_count(&self) -> usize {
        self.angular_count
    }

    pub fn grading_exponent(&self) -> f64 {
        self.grading_exponent
    }

    pub fn origin_grading(&self) -> u32 {
        self.origin_grading
    }

    pub fn angular_offset(&self) -> f64 {
        self.angular_offset
    }

    pub fn patch_count(&self) -> usize {
        self.patch_count
    }

    pub fn total_weight(&self) -> f64 {
        let mut acc = CompensatedSum::new();
        for n in &self.nodes {
            acc.add(n.weight);
        }
        acc.value()
    }

    /// Short identifier of the rule parameters.
    pub fn provenance(&self) -> String {
        let mut s = format!(
            "disc(n={},m={},g={},q={},off={})",
            self.radial_count, self.angular_count, self.grading_exponent, self.origin_grading, self.angular_offset
        );
        if self.patch_count > 0 {
            s.push_str(&format!("+patches({})", self.patch_count));
        }
        s
    }

    pub(crate) fn with_nodes(&self, nodes: Vec<DiscNode>, patch_count: usize) -> Self {
        Self {
            nodes,
            patch_count,
            ..self.clone_meta()
        }
    }

    fn clone_meta(&self) -> Self {
        Self {
            nodes: Vec::new(),
            radial_count: self.radial_count,
            angular_count: self.angular_count,
            grading_exponent: self.grading_exponent,
            origin_grading: self.origin_grading,
            angular_offset: self.angular_offset,
            patch_count: self.patch_count,
        }
    }
}

fn node_error(z: Complex64, value: f64) -> Error {
    Error::Evaluation {
        location: format!("z = {} {:+}i", z.re, z.im),
        value,
    }
}

/// Σ weight·g(node) with compensated summation in node order.
pub fn integrate_disc<G>(rule: &DiscRule, g: G) -> Result<f64>
where
    G: Fn(&DiscNode) -> f64,
{
    let mut acc = CompensatedSum::new();
    for node in rule.nodes() {
        let v = g(node);
        if !v.is_finite() {
            return Err(node_error(node.z, v));
        }
        acc.add(node.weight * v);
    }
    Ok(acc.value())
}

/// Mean of `h` over `angular_count` equispaced points of the unit circle.
pub fn integrate_circle<H>(angular_count: usize, h: H) -> Result<f64>
where
    H: Fn(Complex64) -> f64,
{
    if angular_count < 4 {
        return Err(Error::config(format!(
            "circle rule needs at least 4 nodes, got {angular_count}"
        )));
    }
    let step = 2.0 * PI / angular_count as f64;
    let mut acc = CompensatedSum::new();
    for j in 0..angular_count {
        let xi = Complex64::from_polar(1.0, step * j as f64);
        let v = h(xi);
        if !v.is_finite() {
            return Err(node_error(xi, v));
        }
        acc.add(v);
    }
    Ok(acc.value() / angular_count as f64)
}

/// Nontangential approach region {z : |z - ξ| < α(1 - |z|)}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StolzRegion {
    xi: Complex64,
    aperture: f64,
}

impl StolzRegion {
    pub fn new(xi: Complex64, aperture: f64) -> Result<Self> {
        if (xi.norm() - 1.0).abs() > 1e-14 {
            return Err(Error::domain(format!(
                "Stolz vertex must lie on the circle, |xi| = {}",
                xi.norm()
            )));
        }
        if !(aperture > 1.0) {
            return Err(Error::domain(format!("aperture must exceed 1, got {aperture}")));
        }
        Ok(Self { xi, aperture })
    }

    pub fn xi(&self) -> Complex64 {
        self.xi
    }

    pub fn aperture(&self) -> f64 {
        self.aperture
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.contains_with_distance(z, 1.0 - z.norm())
    }

    pub(crate) fn contains_with_distance(&self, z: Complex64, boundary_distance: f64) -> bool {
        (z - self.xi).norm() < self.aperture * boundary_distance
    }
}

pub fn stolz_contains(region: &StolzRegion, z: Complex64) -> bool {
    region.contains(z)
}

/// Node sum over the nodes of `rule` inside `region`.
pub fn integrate_stolz<G>(rule: &DiscRule, region: &StolzRegion, g: G) -> Result<f64>
where
    G: Fn(&DiscNode) -> f64,
{
    let mut acc = CompensatedSum::new();
    for node in rule.nodes() {
        if !region.contains_with_distance(node.z, node.boundary_distance) {
            continue;
        }
        let v = g(node);
        if !v.is_finite() {
            return Err(node_error(node.z, v));
        }
        acc.add(node.weight * v);
    }
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn default_rule() -> DiscRule {
        make_disc_rule(DEFAULT_RADIAL, DEFAULT_ANGULAR, DEFAULT_GRADING, 0.0).unwrap()
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(make_disc_rule(3, 8, 3.0, 0.0), Err(Error::Config(_))));
        assert!(matches!(make_disc_rule(8, 2, 3.0, 0.0), Err(Error::Config(_))));
        assert!(matches!(make_disc_rule(8, 8, 0.5, 0.0), Err(Error::Config(_))));
    }

    #[test]
    fn nodes_inside_with_positive_weights() {
        let rule = default_rule();
        assert_eq!(rule.len(), 96 * 128);
        for n in rule.nodes() {
            assert!(n.z.norm() < 1.0 && n.weight > 0.0 && n.boundary_distance > 0.0);
        }
        assert!((rule.total_weight() / PI - 1.0).abs() < 1e-12);
    }

    #[test]
    fn radial_moments() {
        let rule = default_rule();
        for k in 0..=8 {
            let v = integrate_disc(&rule, |n| n.z.norm_sqr().powi(k)).unwrap();
            let exact = 2.0 * PI / (2.0 * k as f64 + 2.0);
            assert!((v - exact).abs() < 1e-8 * exact, "k={k}");
        }
        let v = integrate_disc(&rule, |n| n.boundary_distance.powi(2)).unwrap();
        assert!((v - PI / 6.0).abs() < 1e-6);
    }

    #[test]
    fn poisson_type_kernel() {
        let rule = default_rule();
        let w = Complex64::new(0.5, 0.0);
        let v = integrate_disc(&rule, |n| (1.0 - w.conj() * n.z).norm().powi(-4)).unwrap();
        assert!((v - 16.0 * PI / 9.0).abs() < 1e-4);
    }

    #[test]
    fn non_finite_value_names_node() {
        let rule = make_disc_rule(4, 4, 1.0, 0.0).unwrap();
        let err = integrate_disc(&rule, |_| f64::NAN).unwrap_err();
        assert!(matches!(err, Error::Evaluation { ref location, .. } if location.starts_with("z = ")));
    }

    #[test]
    fn circle_means() {
        assert!((integrate_circle(16, |_| 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((integrate_circle(16, |x| x.re * x.re).unwrap() - 0.5).abs() < 1e-15);
        assert!(integrate_circle(16, |x| x.re).unwrap().abs() < 1e-15);
        assert!(integrate_circle(3, |_| 1.0).is_err());
    }

    #[test]
    fn stolz_membership() {
        let one = Complex64::new(1.0, 0.0);
        let r = StolzRegion::new(one, 1.5).unwrap();
        assert!(r.contains(Complex64::new(0.0, 0.0)));
        assert!(r.contains(Complex64::new(0.5, 0.0)));
        assert!(!r.contains(Complex64::new(0.0, 0.5)));
        assert!(StolzRegion::new(one, 1.0).is_err());
        assert!(StolzRegion::new(Complex64::new(0.5, 0.0), 2.0).is_err());
    }

    #[test]
    fn wide_cone_covers_disc() {
        let rule = default_rule();
        let r = StolzRegion::new(Complex64::new(1.0, 0.0), 1e12).unwrap();
        let v = integrate_stolz(&rule, &r, |_| 1.0).unwrap();
        assert!((v - PI).abs() < 1e-9);
    }
}
