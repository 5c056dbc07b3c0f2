use std::f64::consts::PI;

use discnorm::analytic::TaylorFunction;
use discnorm::fs_dual::*;
use discnorm::norms::{bergman_norm_p, bloch_norm, kwon_ast_rhs};
use discnorm::quadrature::{
    integrate_disc, integrate_mu_a, make_disc_rule, BidiscRule, DiscRule, GridConfig, MoebiusPoint,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn coeff_close(a: &TaylorFunction, b: &TaylorFunction, tol: f64) -> bool {
    let (x, y) = (a.coefficients(), b.coefficients());
    let n = x.len().max(y.len());
    let zero = Complex64::new(0.0, 0.0);
    (0..n).all(|k| {
        let u = *x.get(k).unwrap_or(&zero);
        let v = *y.get(k).unwrap_or(&zero);
        (u - v).norm() <= tol * u.norm().max(v.norm()).max(1e-300)
    })
}

fn poly() -> impl Strategy<Value = TaylorFunction> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..10)
        .prop_map(|c| TaylorFunction::new(c.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap())
}

/// Polynomials with F(0) = 0 and a nonzero linear term.
fn vanishing_poly() -> impl Strategy<Value = TaylorFunction> {
    (0.2..1.0f64, prop::collection::vec((-0.5..0.5f64, -0.5..0.5f64), 0..5)).prop_map(|(lead, rest)| {
        let mut c = vec![Complex64::new(0.0, 0.0), Complex64::new(lead, 0.0)];
        c.extend(rest.into_iter().map(|(a, b)| Complex64::new(a, b)));
        TaylorFunction::new(c).unwrap()
    })
}

fn disc_point() -> impl Strategy<Value = Complex64> {
    (0.0..0.99f64, 0.0..(2.0 * PI)).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn small_rule() -> DiscRule {
    make_disc_rule(24, 32, 3.0, 0.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn zeroth_fractional_derivative_is_identity(f in poly()) {
        prop_assert_eq!(f.fractional_derivative(0.0).unwrap(), f);
    }

    #[test]
    fn fractional_derivatives_compose(f in poly(), t in 0.0..3.0f64, s in 0.0..3.0f64) {
        let a = f.fractional_derivative(s).unwrap().fractional_derivative(t).unwrap();
        let b = f.fractional_derivative(t + s).unwrap();
        prop_assert!(coeff_close(&a, &b, 1e-12));
    }

    #[test]
    fn derivatives_are_linear(f in poly(), g in poly(), t in 0.0..2.5f64) {
        let sum = &f + &g;
        let d = &f.derivative() + &g.derivative();
        prop_assert!(coeff_close(&sum.derivative(), &d, 1e-12));
        let dt = &f.fractional_derivative(t).unwrap() + &g.fractional_derivative(t).unwrap();
        prop_assert!(coeff_close(&sum.fractional_derivative(t).unwrap(), &dt, 1e-12));
    }

    #[test]
    fn eval_respects_rotation(f in poly(), z in disc_point(), theta in 0.0..(2.0 * PI)) {
        let lhs = f.rotate(theta).eval(z).unwrap();
        let rhs = f.eval(z * Complex64::from_polar(1.0, theta)).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
    }

    #[test]
    fn grid_aligned_rotation_preserves_integrals(f in poly(), k in 0usize..32) {
        let rule = small_rule();
        let theta = 2.0 * PI * k as f64 / rule.angular_count() as f64;
        let g = f.rotate(theta);
        let a = integrate_disc(&rule, |n| f.eval_unchecked(n.z).norm_sqr()).unwrap();
        let b = integrate_disc(&rule, |n| g.eval_unchecked(n.z).norm_sqr()).unwrap();
        prop_assert!(rel(b, a) < 1e-10);
    }

    #[test]
    fn norm_scaling_laws(f in vanishing_poly(), re in -2.0..2.0f64, im in -2.0..2.0f64, p in 1.1..4.0f64) {
        let lambda = Complex64::new(re, im);
        prop_assume!(lambda.norm() > 1e-3);
        let rule = small_rule();
        let g = f.scale(lambda);
        let m = lambda.norm();
        let b = bergman_norm_p(&g, p, &rule).unwrap().value;
        prop_assert!(rel(b, m.powf(p) * bergman_norm_p(&f, p, &rule).unwrap().value) < 1e-10);
        prop_assert!(rel(bloch_norm(&g, &rule).value, m * bloch_norm(&f, &rule).value) < 1e-10);
        let k = kwon_ast_rhs(&g, p, p / 2.0, &rule).unwrap().value;
        prop_assert!(rel(k, m.powf(p) * kwon_ast_rhs(&f, p, p / 2.0, &rule).unwrap().value) < 1e-10);
    }

    #[test]
    fn s2_homogeneity_and_floor(
        f in vanishing_poly(),
        u in 0.0..3.0f64,
        v in 0.5..4.0f64,
        s in 0.0..1.5f64,
        c in 0.1..10.0f64,
    ) {
        let params = DualParams::new(Theorem::S2Bergman, 3.0, 1.8).unwrap();
        let rule = small_rule();
        let w = WeightSpec::new(Arity::OnePoint, Exponents { u, v, s }, 0.0, 1.0).unwrap();
        let c0 = constraint_s2(&f, &w, &params, &rule).unwrap();
        let d0 = dual_s2(&f, &w, &params, &rule).unwrap();
        let wc = w.with_scale(c);
        prop_assert!(rel(constraint_s2(&f, &wc, &params, &rule).unwrap(), c.powf(-params.alpha_conj) * c0) < 1e-10);
        prop_assert!(rel(dual_s2(&f, &wc, &params, &rule).unwrap(), c.powf(params.alpha) * d0) < 1e-10);

        let grid = GridConfig { radial: 24, angular: 32, ..GridConfig::default() };
        let rules = DualRules::from_grid(&grid).unwrap();
        let ev = normalize_weight(&f, &w, &params, &rules).unwrap();
        prop_assert!(ev.feasible);
        prop_assert!(ev.holder_floor.unwrap() <= ev.reported_dual() * (1.0 + 1e-10));
        let again = normalize_weight(&f, &ev.weight, &params, &rules).unwrap();
        prop_assert!(rel(again.normalization_scale, ev.normalization_scale) < 1e-9);
    }

    #[test]
    fn s1_homogeneity(f in poly(), u in -1.0..1.0f64, v in -0.5..1.0f64, c in 0.1..10.0f64) {
        prop_assume!(!f.is_constant());
        let params = DualParams::hardy(1.0, 1.0, 2.0).unwrap();
        let rule = small_rule();
        let w = WeightSpec::new(Arity::OnePoint, Exponents { u, v, s: 0.0 }, 0.0, 1.0).unwrap();
        let wc = w.with_scale(c);
        let c0 = constraint_s1(&f, &w, &params, &rule, 32).unwrap();
        prop_assert!(rel(constraint_s1(&f, &wc, &params, &rule, 32).unwrap(), c * c0) < 1e-10);
        let d0 = dual_s1(&f, &w, &params, &rule).unwrap();
        prop_assert!(rel(dual_s1(&f, &wc, &params, &rule).unwrap(), d0 / c) < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn mu_a_mass_depends_on_modulus(r in 0.0..0.85f64, t in 0.0..(2.0 * PI)) {
        let rule = BidiscRule::new(48, 64, 3.0).unwrap();
        let a = MoebiusPoint::new(Complex64::new(r, 0.0)).unwrap();
        let b = MoebiusPoint::new(Complex64::from_polar(r, t)).unwrap();
        let ma = integrate_mu_a(&rule, &a, |_| 1.0).unwrap();
        let mb = integrate_mu_a(&rule, &b, |_| 1.0).unwrap();
        prop_assert!(rel(mb, ma) < 1e-3, "{} vs {}", mb, ma);
    }
}
