//! Polynomial root finding by simultaneous Aberth-Ehrlich iteration.

use num_complex::Complex64;

const MAX_ITERATIONS: usize = 500;

/// All complex roots (with multiplicity) of `sum coeffs[k] x^k`.
///
/// Trailing zero coefficients are dropped; leading zero coefficients become
/// roots at the origin. The result is deterministic for a given input.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let top = match coeffs.iter().rposition(|a| *a != zero) {
        Some(k) => k,
        None => return Vec::new(),
    };
    let low = coeffs.iter().position(|a| *a != zero).unwrap_or(0);
    let mut roots = vec![zero; low];
    let poly = &coeffs[low..=top];
    let degree = poly.len() - 1;
    if degree == 0 {
        return roots;
    }
    if degree == 1 {
        roots.push(-poly[0] / poly[1]);
        return roots;
    }

    // Normalize to a monic polynomial.
    let lead = poly[degree];
    let monic: Vec<Complex64> = poly.iter().map(|a| a / lead).collect();

    // Initial guesses on a circle whose radius is the geometric mean of root
    // moduli, rotated off the real axis to avoid symmetric stalls.
    let radius = monic[0].norm().powf(1.0 / degree as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..degree)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / degree as f64 + 0.4;
            Complex64::from_polar(radius, angle)
        })
        .collect();

    for _ in 0..MAX_ITERATIONS {
        let mut largest_step = 0.0_f64;
        for i in 0..degree {
            let (p, dp) = horner_with_derivative(&monic, z[i]);
            if p == zero {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..degree)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d == zero {
                        zero
                    } else {
                        1.0 / d
                    }
                })
                .sum();
            let step = ratio / (1.0 - ratio * repulsion);
            if step.re.is_finite() && step.im.is_finite() {
                z[i] -= step;
                largest_step = largest_step.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if largest_step < 1e-15 {
            break;
        }
    }
    // Polish each root with a couple of Newton steps on the original polynomial.
    for r in z.iter_mut() {
        for _ in 0..2 {
            let (p, dp) = horner_with_derivative(&monic, *r);
            if dp != zero {
                let step = p / dp;
                if step.re.is_finite() && step.im.is_finite() {
                    *r -= step;
                }
            }
        }
    }
    roots.extend(z);
    roots
}

fn horner_with_derivative(coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + a;
    }
    (p, dp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn residual(coeffs: &[Complex64], x: Complex64) -> f64 {
        horner_with_derivative(coeffs, x).0.norm()
    }

    #[test]
    fn quadratic() {
        // (x - 0.5)(x + 0.25i)
        let coeffs = [c(0.0, -0.125), c(-0.5, 0.25), c(1.0, 0.0)];
        let mut roots = polynomial_roots(&coeffs);
        roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((roots[0] - c(0.0, -0.25)).norm() < 1e-14);
        assert!((roots[1] - c(0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn roots_of_unity() {
        let mut coeffs = vec![c(0.0, 0.0); 9];
        coeffs[0] = c(-1.0, 0.0);
        coeffs[8] = c(1.0, 0.0);
        let roots = polynomial_roots(&coeffs);
        assert_eq!(roots.len(), 8);
        for r in &roots {
            assert!((r.norm() - 1.0).abs() < 1e-13);
            assert!(residual(&coeffs, *r) < 1e-12);
        }
    }

    #[test]
    fn zero_roots_and_trailing_zeros() {
        // x^2 (x - 2), padded with zero high coefficients.
        let coeffs = [c(0.0, 0.0), c(0.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)];
        let roots = polynomial_roots(&coeffs);
        assert_eq!(roots.len(), 3);
        assert_eq!(roots.iter().filter(|r| r.norm() == 0.0).count(), 2);
        assert!(roots.iter().any(|r| (r - c(2.0, 0.0)).norm() < 1e-14));
    }

    #[test]
    fn truncated_log_series() {
        let coeffs: Vec<Complex64> = std::iter::once(c(0.0, 0.0))
            .chain((1..=16).map(|n| c(1.0 / n as f64, 0.0)))
            .collect();
        let roots = polynomial_roots(&coeffs);
        assert_eq!(roots.len(), 16);
        for r in &roots {
            assert!(residual(&coeffs, *r) < 1e-12, "residual at {r}");
        }
    }
}
