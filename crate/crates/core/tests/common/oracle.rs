//! Anomaly formulas written out by hand in terms of the acceleration
//! Jacobians. Shared by the oracle and acceptance suites.

use wlc_core::generators::levi_civita;
use wlc_core::phasespace::{AccelJacobians, PhasePoint};

pub struct Oracle<'a> {
    pub p: &'a PhasePoint,
    pub j: AccelJacobians,
}

impl Oracle<'_> {
    fn n(&self) -> usize {
        self.p.particles()
    }
    fn x(&self, a: usize, i: usize) -> f64 {
        self.p.x()[a][i]
    }
    fn v(&self, a: usize, i: usize) -> f64 {
        self.p.v()[a][i]
    }
    fn acc(&self, a: usize, i: usize) -> f64 {
        self.j.a[a][i]
    }
    fn dx(&self, a: usize, l: usize, b: usize, i: usize) -> f64 {
        self.j.da_dx[3 * a + l][3 * b + i]
    }
    fn dv(&self, a: usize, l: usize, b: usize, i: usize) -> f64 {
        self.j.da_dv[3 * a + l][3 * b + i]
    }

    /// Σ_b ∂A^a_l / ∂x^b_i
    fn translation(&self, a: usize, i: usize, l: usize) -> f64 {
        (0..self.n()).map(|b| self.dx(a, l, b, i)).sum()
    }

    /// J_i A^a_l - ε_ijl A^a_j
    fn rotation(&self, a: usize, i: usize, l: usize) -> f64 {
        let mut s = 0.0;
        for b in 0..self.n() {
            for j in 0..3 {
                for k in 0..3 {
                    let e = levi_civita(i, j, k);
                    s += e * (self.x(b, j) * self.dx(a, l, b, k) + self.v(b, j) * self.dv(a, l, b, k));
                }
            }
        }
        s - (0..3).map(|j| levi_civita(i, j, l) * self.acc(a, j)).sum::<f64>()
    }

    /// Σ_b ∂A^a_l / ∂v^b_i
    fn velocity_shift(&self, a: usize, i: usize, l: usize) -> f64 {
        (0..self.n()).map(|b| self.dv(a, l, b, i)).sum()
    }

    /// (2v^a_i + x^a_i H - K_i) A^a_l + v^a_l A^a_i
    fn boost(&self, a: usize, i: usize, l: usize) -> f64 {
        let mut s = 2.0 * self.v(a, i) * self.acc(a, l) + self.v(a, l) * self.acc(a, i);
        for b in 0..self.n() {
            for k in 0..3 {
                let delta = if i == k { 1.0 } else { 0.0 };
                s += (self.x(a, i) - self.x(b, i)) * self.v(b, k) * self.dx(a, l, b, k);
                s += (self.x(a, i) * self.acc(b, k) - self.v(b, i) * self.v(b, k) + delta
                    - self.x(b, i) * self.acc(b, k))
                    * self.dv(a, l, b, k);
            }
        }
        s
    }

    /// Expected velocity-direction defect for basis pair (`a`, `b`) of the
    /// full groups, ordered P1 P2 P3 J1 J2 J3 H B1 B2 B3.
    pub fn defect(&self, lorentz: bool, pa: usize, pb: usize) -> Vec<f64> {
        let n = self.n();
        let mut out = vec![0.0; 6 * n];
        for a in 0..n {
            for l in 0..3 {
                out[3 * n + 3 * a + l] = match (pa, pb) {
                    (i @ 0..=2, 6) => self.translation(a, i, l),
                    (i @ 3..=5, 6) => self.rotation(a, i - 3, l),
                    (6, i @ 7..=9) if !lorentz => self.velocity_shift(a, i - 7, l),
                    (6, i @ 7..=9) => self.boost(a, i - 7, l),
                    (i @ 0..=2, j @ 7..=9) if lorentz => self.x(a, j - 7) * self.translation(a, i, l),
                    (i @ 3..=5, j @ 7..=9) if lorentz => self.x(a, j - 7) * self.rotation(a, i - 3, l),
                    (i @ 7..=9, j @ 7..=9) if lorentz => {
                        self.x(a, i - 7) * self.boost(a, j - 7, l) - self.x(a, j - 7) * self.boost(a, i - 7, l)
                    }
                    _ => 0.0,
                };
            }
        }
        out
    }
}
