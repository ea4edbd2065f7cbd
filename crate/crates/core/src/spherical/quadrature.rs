//! Product quadrature on SO(3) for integrands invariant under `M` on both sides.

use crate::lie::CartanVec;
use crate::{Error, Result};
use gauss_quad::GaussLegendre;
use nalgebra::Matrix3;
use num_complex::Complex64;
use std::f64::consts::{PI, SQRT_2};
use std::num::NonZeroUsize;

/// Gauss–Legendre nodes and weights on `[a, b]`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(NonZeroUsize::new(n.max(1)).expect("nonzero"));
    let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
    rule.as_node_weight_pairs().iter().map(|&(x, w)| (m + h * x, h * w)).collect()
}

/// `R_z(a) R_y(b) R_z(c)`.
pub fn euler_zyz(a: f64, b: f64, c: f64) -> Matrix3<f64> {
    let rz = |t: f64| Matrix3::new(t.cos(), -t.sin(), 0.0, t.sin(), t.cos(), 0.0, 0.0, 0.0, 1.0);
    let ry = Matrix3::new(b.cos(), 0.0, b.sin(), 0.0, 1.0, 0.0, -b.sin(), 0.0, b.cos());
    rz(a) * ry * rz(c)
}

/// Squared entries of rows 1 and 3 of a rotation, with its quadrature weight.
#[derive(Clone, Copy, Debug)]
pub struct KNode {
    pub k1: [f64; 3],
    pub k3: [f64; 3],
    pub weight: f64,
}

impl KNode {
    fn of(k: &Matrix3<f64>, weight: f64) -> Self {
        KNode { k1: [0, 1, 2].map(|j| k[(0, j)].powi(2)), k3: [0, 1, 2].map(|j| k[(2, j)].powi(2)), weight }
    }
}

/// ZYZ product rule `k = R_z(a) R_y(b) R_z(c)`: trapezoidal in `a, c ∈ [0, π)` and
/// Gauss–Legendre in `cos b ∈ [0, 1]`. For functions with `f(m k m') = f(k)` this equals
/// the full rule on `[0, 2π) × [−1, 1] × [0, 2π)`.
#[derive(Clone, Debug)]
pub struct So3Grid {
    n_outer: usize,
    n_polar: usize,
    tol: f64,
    nodes: Vec<KNode>,
}

/// Default refusal threshold for the grid-doubling check.
pub const DEFAULT_TOL: f64 = 1e-8;

impl So3Grid {
    pub fn new(n_outer: usize, n_polar: usize) -> Result<Self> {
        if n_outer < 2 || n_polar < 2 {
            return Err(Error::InvalidInput("SO(3) grid needs at least two nodes per angle".into()));
        }
        let polar = gauss_legendre(n_polar, 0.0, 1.0);
        let mut nodes = Vec::with_capacity(n_outer * n_outer * n_polar);
        for ia in 0..n_outer {
            let a = PI * ia as f64 / n_outer as f64;
            for &(x, wx) in &polar {
                let b = x.acos();
                for ic in 0..n_outer {
                    let c = PI * ic as f64 / n_outer as f64;
                    nodes.push(KNode::of(&euler_zyz(a, b, c), wx / (n_outer * n_outer) as f64));
                }
            }
        }
        Ok(So3Grid { n_outer, n_polar, tol: DEFAULT_TOL, nodes })
    }

    /// Equal node counts per angle.
    pub fn square(n: usize) -> Result<Self> {
        Self::new(n, n)
    }

    /// Smallest square grid resolving a phase of the given bandwidth.
    pub fn for_bandwidth(band: f64) -> Self {
        Self::square(nodes_for_bandwidth(band)).expect("at least two nodes")
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn n_outer(&self) -> usize {
        self.n_outer
    }

    pub fn n_polar(&self) -> usize {
        self.n_polar
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[KNode] {
        &self.nodes
    }

    /// Both node counts doubled.
    pub fn refined(&self) -> Self {
        Self::new(2 * self.n_outer, 2 * self.n_polar).expect("refinement of a valid grid").with_tol(self.tol)
    }

    pub fn mass(&self) -> f64 {
        self.nodes.iter().map(|n| n.weight).sum()
    }

    /// `Σ_k w_k f(ℓ₁, ℓ₃, w_k e^{ρ(A)})` over `A = A(k exp H)`, where
    /// `A = (−ℓ₁/2, ℓ₁/2 − ℓ₃/2, ℓ₃/2)`.
    pub fn fold<F: FnMut(f64, f64, f64) -> Complex64>(&self, h: &CartanVec, mut f: F) -> Complex64 {
        let hh = h.h();
        let up = hh.map(|x| (2.0 * x).exp());
        let down = hh.map(|x| (-2.0 * x).exp());
        let mut sum = Complex64::new(0.0, 0.0);
        for n in &self.nodes {
            let d1 = n.k1[0] * down[0] + n.k1[1] * down[1] + n.k1[2] * down[2];
            let d3 = n.k3[0] * up[0] + n.k3[1] * up[1] + n.k3[2] * up[2];
            sum += f(d1.ln(), d3.ln(), n.weight / (d1 * d3).sqrt());
        }
        sum
    }
}

/// Iwasawa `A`-part from the logarithms returned by [`So3Grid::fold`].
pub fn a_from_logs(l1: f64, l3: f64) -> [f64; 3] {
    [-0.5 * l1, 0.5 * (l1 - l3), 0.5 * l3]
}

/// Bandwidth in the Euler angles of `k ↦ e^{(ρ + iμ)(A(k exp H))}` for `|μ| ≤ freq`.
/// The `A`-part moves by `O(e^{α(H)})` per radian near the walls of the Bruhat cells.
pub fn bandwidth(freq: f64, h_norm: f64) -> f64 {
    (freq + 20.0) * 2.0 * (SQRT_2 * h_norm).sinh()
}

/// Nodes per angle for about ten correct digits, calibrated against converged values for
/// `|μ| ≤ 50` and `‖H‖ ≤ 1.3`.
pub fn nodes_for_bandwidth(band: f64) -> usize {
    (0.42 * band).ceil() as usize + 10
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{iwasawa_a, random_cartan};

    /// The full rule over `[0, 2π) × [−1, 1] × [0, 2π)`.
    fn full_rule(n: usize, f: impl Fn(&Matrix3<f64>) -> Complex64) -> Complex64 {
        let polar = gauss_legendre(n, -1.0, 1.0);
        let mut sum = Complex64::new(0.0, 0.0);
        for ia in 0..2 * n {
            for &(x, wx) in &polar {
                for ic in 0..2 * n {
                    let k = euler_zyz(PI * ia as f64 / n as f64, x.acos(), PI * ic as f64 / n as f64);
                    sum += f(&k) * wx / (2.0 * (2 * n * 2 * n) as f64);
                }
            }
        }
        sum
    }

    #[test]
    fn mass_is_one() {
        for (a, b) in [(2, 2), (5, 7), (16, 9)] {
            assert!((So3Grid::new(a, b).unwrap().mass() - 1.0).abs() < 1e-13);
        }
        assert!(So3Grid::new(1, 4).is_err());
    }

    #[test]
    fn euler_angles_give_rotations() {
        let k = euler_zyz(0.3, 1.1, -2.0);
        assert!((k * k.transpose() - Matrix3::identity()).norm() < 1e-14);
        assert!((k.determinant() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn reduced_rule_matches_full_rule() {
        let mut rng = crate::rng::stream(41, "so3-reduced");
        let grid = So3Grid::square(24).unwrap();
        for _ in 0..3 {
            let h = random_cartan(&mut rng, 0.6);
            let mu = [3.0, -1.0, -2.0];
            let phase = |a: [f64; 3]| Complex64::cis(mu[0] * a[0] + mu[1] * a[1] + mu[2] * a[2]);
            let reduced = grid.fold(&h, |l1, l3, w| w * phase(a_from_logs(l1, l3)));
            let full = full_rule(24, |k| {
                let a = iwasawa_a(&(k * h.exp())).h();
                phase(a) * (a[0] - a[2]).exp()
            });
            assert!((reduced - full).norm() < 1e-11, "{reduced} vs {full}");
        }
    }

    #[test]
    fn fold_recovers_iwasawa_a() {
        let mut rng = crate::rng::stream(42, "so3-fold");
        let h = random_cartan(&mut rng, 0.8);
        let grid = So3Grid::square(3).unwrap();
        let mut got = Vec::new();
        grid.fold(&h, |l1, l3, _| {
            got.push(a_from_logs(l1, l3));
            Complex64::new(0.0, 0.0)
        });
        let polar = gauss_legendre(3, 0.0, 1.0);
        let k = euler_zyz(PI / 3.0, polar[1].0.acos(), 2.0 * PI / 3.0);
        let want = iwasawa_a(&(k * h.exp())).h();
        let idx = 3 * 3 + 3 + 2;
        for j in 0..3 {
            assert!((got[idx][j] - want[j]).abs() < 1e-12);
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let s: f64 = gauss_legendre(5, 1.0, 3.0).iter().map(|(x, w)| w * x.powi(7)).sum();
        assert!((s - (3f64.powi(8) - 1.0) / 8.0).abs() < 1e-9);
    }
}
