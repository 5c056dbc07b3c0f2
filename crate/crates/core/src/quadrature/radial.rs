//! Two-ended radial substitution r = I_u(q, γ).
//!
//! I is the regularized incomplete Beta function with integer first
//! parameter, so the map behaves like u^q at the origin and 1 - (1-u)^γ·poly
//! at the rim. q = 1 reduces to r = 1 - (1-u)^γ.

/// Radial map with origin grading `q` and boundary grading `gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialMap {
    pub origin_grading: u32,
    pub gamma: f64,
    inv_beta: f64,
}

impl RadialMap {
    pub fn new(origin_grading: u32, gamma: f64) -> Self {
        let q = origin_grading.max(1);
        // 1 / B(q, γ) = γ (γ+1) ... (γ+q-1) / (q-1)!
        let mut inv_beta = 1.0;
        for j in 0..q {
            inv_beta *= gamma + j as f64;
            if j > 0 {
                inv_beta /= j as f64;
            }
        }
        Self {
            origin_grading: q,
            gamma,
            inv_beta,
        }
    }

    /// Returns (r, 1 - r, dr/du), each without cancellation.
    pub fn eval(&self, u: f64) -> (f64, f64, f64) {
        let q = self.origin_grading as i32;
        let g = self.gamma;
        let d = self.boundary_distance(u);
        let r = if u <= 0.5 {
            // u^q / B · Σ_j (1-γ)_j / j! · u^j / (q + j)
            let mut term = 1.0;
            let mut acc = 1.0 / q as f64;
            let mut j = 0;
            loop {
                term *= (j as f64 + 1.0 - g) / (j as f64 + 1.0) * u;
                j += 1;
                let add = term / (q + j) as f64;
                acc += add;
                if add.abs() <= 1e-18 * acc.abs() || j > 400 {
                    break;
                }
            }
            u.powi(q) * self.inv_beta * acc
        } else {
            1.0 - d
        };
        let jac = self.inv_beta * u.powi(q - 1) * (1.0 - u).powf(g - 1.0);
        (r, d, jac)
    }

    /// 1 - r = (1-u)^γ Σ_{k<q} (γ)_k / k! u^k.
    pub fn boundary_distance(&self, u: f64) -> f64 {
        let g = self.gamma;
        let mut term = 1.0;
        let mut acc = 1.0;
        for k in 1..self.origin_grading {
            term *= (g + k as f64 - 1.0) / k as f64 * u;
            acc += term;
        }
        (1.0 - u).powf(g) * acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_one_is_power_map() {
        let m = RadialMap::new(1, 3.0);
        for u in [0.01, 0.3, 0.5, 0.7, 0.99] {
            let (r, d, j) = m.eval(u);
            let d0 = (1.0 - u).powi(3);
            assert!((d - d0).abs() < 1e-15);
            assert!((r - (1.0 - d0)).abs() < 1e-15);
            assert!((j - 3.0 * (1.0 - u).powi(2)).abs() < 1e-14);
        }
    }

    #[test]
    fn both_branches_agree_and_sum_to_one() {
        let m = RadialMap::new(4, 3.0);
        for u in [0.1, 0.45, 0.5, 0.55, 0.9] {
            let (r, d, _) = m.eval(u);
            assert!((r + d - 1.0).abs() < 1e-15, "u={u}");
        }
        let m = RadialMap::new(4, 2.5);
        let (r, d, _) = m.eval(0.5);
        assert!((r + d - 1.0).abs() < 1e-14);
    }

    #[test]
    fn small_u_keeps_relative_accuracy() {
        let m = RadialMap::new(4, 3.0);
        let u: f64 = 1e-5;
        let (r, _, _) = m.eval(u);
        // leading term u^4 / (4 B(4,3)) = 15 u^4
        assert!((r / (15.0 * u.powi(4)) - 1.0).abs() < 1e-4);
    }

    #[test]
    fn jacobian_matches_finite_difference() {
        let m = RadialMap::new(4, 3.0);
        for u in [0.2, 0.5, 0.8] {
            let h = 1e-6;
            let fd = (m.eval(u + h).0 - m.eval(u - h).0) / (2.0 * h);
            assert!((fd - m.eval(u).2).abs() < 1e-8);
        }
    }
}
