//! Spherical functions `φ_{tν}(exp H) = ∫_K e^{(ρ + itν)(A(k exp H))} dk`.

use super::quadrature::{bandwidth, nodes_for_bandwidth, So3Grid};
use super::table::ChamberTable;
use super::Estimate;
use crate::lie::{CartanCovec, CartanVec};
use crate::{Error, Result};
use num_complex::Complex64;

/// `∫_K e^{(ρ + iμ)(A(k exp H))} dk` on a fixed grid.
pub fn spherical_raw(grid: &So3Grid, mu: &CartanCovec, h: &CartanVec) -> Complex64 {
    let m = mu.nu();
    let (c1, c3) = (0.5 * (m[1] - m[0]), 0.5 * (m[2] - m[1]));
    grid.fold(h, |l1, l3, w| Complex64::from_polar(w, c1 * l1 + c3 * l3))
}

/// Node count per angle needed for frequency `freq` at `H`.
pub fn required_nodes(freq: f64, h: &CartanVec) -> usize {
    nodes_for_bandwidth(bandwidth(freq, h.norm()))
}

/// `φ_{tν}(exp H)` on `grid` and on its refinement; the refined value is returned with the
/// difference as error estimate. Refuses grids below the resolution rule and values whose
/// two estimates disagree by more than the grid tolerance.
pub fn spherical_fn(t: f64, nu: &CartanCovec, h: &CartanVec, grid: &So3Grid) -> Result<Estimate> {
    let mu = nu.scale(t);
    let need = required_nodes(mu.norm(), h);
    if grid.n_outer() < need || grid.n_polar() < need {
        return Err(Error::Resolution(format!("SO(3) grid {}×{} below the {need} nodes per angle needed at t|ν| = {:.1}", grid.n_outer(), grid.n_polar(), mu.norm())));
    }
    let coarse = spherical_raw(grid, &mu, h);
    let fine = spherical_raw(&grid.refined(), &mu, h);
    let est = Estimate { value: fine, error: (fine - coarse).norm() };
    if est.error > grid.tol() {
        return Err(Error::Resolution(format!("grid doubling changed φ by {:.2e} > {:.1e}", est.error, grid.tol())));
    }
    Ok(est)
}

/// `φ_μ(exp H)` on the smallest admissible grid.
pub fn spherical_auto(mu: &CartanCovec, h: &CartanVec, tol: f64) -> Result<Estimate> {
    let grid = So3Grid::square(required_nodes(mu.norm(), h))?.with_tol(tol);
    spherical_fn(1.0, mu, h, &grid)
}

/// Table of `φ_μ` on the chamber sector of radius `R`. Each point uses the grid of the
/// resolution rule; the doubling check runs on a deterministic subsample of points.
#[derive(Clone, Debug)]
pub struct SphericalTable {
    mu: CartanCovec,
    table: ChamberTable,
    max_error: f64,
}

/// Points per wavelength of the interpolation grid.
pub const TABLE_SPACING: f64 = 0.6;

/// Number of points on which table builders run the grid-doubling check.
pub const TABLE_CHECKS: usize = 12;

impl SphericalTable {
    pub fn build(mu: CartanCovec, radius: f64, tol: f64) -> Result<Self> {
        let spacing = TABLE_SPACING / mu.norm().max(1.0);
        let table = ChamberTable::build(radius, spacing, |h| {
            let grid = So3Grid::square(required_nodes(mu.norm(), h))?;
            Ok(spherical_raw(&grid, &mu, h))
        })?;
        let max_error = check_sample(&table, tol, |h| spherical_auto(&mu, h, f64::INFINITY))?;
        Ok(SphericalTable { mu, table, max_error })
    }

    pub fn mu(&self) -> CartanCovec {
        self.mu
    }

    pub fn radius(&self) -> f64 {
        self.table.radius()
    }

    /// Largest doubling discrepancy seen on the checked points.
    pub fn max_error(&self) -> f64 {
        self.max_error
    }

    pub fn eval(&self, h: &CartanVec) -> Result<Complex64> {
        self.table.eval(h)
    }

    /// `½(T(H) + \overline{T(−w₀H)})`, which keeps `φ(exp(−w₀H)) = \overline{φ(exp H)}`
    /// exact under interpolation.
    pub fn eval_symmetric(&self, h: &CartanVec) -> Result<Complex64> {
        let v = h.h();
        let flipped = CartanVec::project([-v[2], -v[1], -v[0]]);
        Ok(0.5 * (self.table.eval(h)? + self.table.eval(&flipped)?.conj()))
    }

    pub fn table(&self) -> &ChamberTable {
        &self.table
    }
}

/// `sup_H |φ_{tν}(exp H)| Π_{α>0} (1 + t|α(H)|)^{1/2}` over the sample points.
pub fn envelope_sup(t: f64, nu: &CartanCovec, samples: &[CartanVec], tol: f64) -> Result<f64> {
    let mu = nu.scale(t);
    let mut sup = 0.0f64;
    for h in samples {
        let v = spherical_auto(&mu, h, tol)?.value.norm();
        let w: f64 = crate::lie::POSITIVE_ROOTS.iter().map(|a| (1.0 + t * a.eval(h).abs()).sqrt()).product();
        sup = sup.max(v * w);
    }
    Ok(sup)
}

/// Compares stored values against refined estimates on an evenly spaced subsample and
/// refuses the table if any discrepancy exceeds `tol`.
pub(crate) fn check_sample<F>(table: &ChamberTable, tol: f64, refined: F) -> Result<f64>
where
    F: Fn(&CartanVec) -> Result<Estimate>,
{
    let pts: Vec<_> = table.points().collect();
    let stride = (pts.len() / TABLE_CHECKS).max(1);
    let mut worst = 0.0f64;
    for (h, v) in pts.iter().step_by(stride) {
        let e = refined(h)?;
        worst = worst.max((e.value - v).norm().max(e.error));
    }
    if worst > tol {
        return Err(Error::Resolution(format!("table check discrepancy {worst:.2e} exceeds {tol:.1e}")));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{random_cartan, WEYL_GROUP};

    #[test]
    fn value_at_identity_is_one() {
        let grid = So3Grid::square(40).unwrap();
        for t in [1.0, 10.0, 40.0] {
            let nu = CartanCovec::from_coords(0.8, -0.3);
            let e = spherical_fn(t, &nu, &CartanVec::ZERO, &grid).unwrap();
            assert!((e.value - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn rho_shifted_parameter_gives_constant_one() {
        // φ_{iρ} ≡ 1: the exponent (ρ + i·(iρ))(A) vanishes.
        let h = CartanVec::from_coords(0.4, 0.7);
        let grid = So3Grid::square(30).unwrap();
        let rho = crate::lie::rho().nu();
        let (c1, c3) = (0.5 * (rho[1] - rho[0]), 0.5 * (rho[2] - rho[1]));
        let v = grid.fold(&h, |l1, l3, w| Complex64::new(w * (-(c1 * l1 + c3 * l3)).exp(), 0.0));
        assert!((v - 1.0).norm() < 1e-12);
    }

    #[test]
    fn weyl_invariance() {
        let mut rng = crate::rng::stream(45, "spherical-weyl");
        let nu = CartanCovec::from_coords(1.0, 0.4);
        for _ in 0..20 {
            let h = random_cartan(&mut rng, 0.7);
            let base = spherical_auto(&nu.scale(12.0), &h, 1e-9).unwrap().value;
            for w in &WEYL_GROUP[1..] {
                let other = spherical_auto(&nu.act(w).scale(12.0), &h, 1e-9).unwrap().value;
                assert!((other - base).norm() < 1e-6, "{other} vs {base}");
                let moved = spherical_auto(&nu.scale(12.0), &h.act(w), 1e-9).unwrap().value;
                assert!((moved - base).norm() < 1e-6);
            }
        }
    }

    #[test]
    fn trivial_parameter_matches_monte_carlo() {
        // φ_0(exp H) = ∫_K e^{ρ(A)} dk against Iwasawa decompositions of random rotations.
        let h = CartanVec::new([0.3, -0.3, 0.0]).unwrap();
        let v = spherical_auto(&CartanCovec::ZERO, &h, 1e-10).unwrap().value;
        let mut rng = crate::rng::stream(46, "spherical-mc");
        let n = 200_000;
        let mut s = 0.0;
        for _ in 0..n {
            let k = crate::lie::RotationElement::random(&mut rng);
            let a = crate::lie::iwasawa_a(&(k.matrix() * h.exp())).h();
            s += (a[0] - a[2]).exp();
        }
        let mc = s / n as f64;
        assert!((v.re - mc).abs() < 5e-3, "{v} vs {mc}");
        assert!(v.im.abs() < 1e-14);
    }

    #[test]
    fn refuses_coarse_grids() {
        let grid = So3Grid::square(8).unwrap();
        let nu = CartanCovec::from_coords(1.0, 0.0);
        let h = CartanVec::from_coords(0.3, 0.5);
        assert!(matches!(spherical_fn(50.0, &nu, &h, &grid), Err(Error::Resolution(_))));
        let strict = So3Grid::square(required_nodes(50.0, &h)).unwrap().with_tol(0.0);
        assert!(matches!(spherical_fn(50.0, &nu, &h, &strict), Err(Error::Resolution(_))));
    }

    #[test]
    fn symmetric_read_is_conjugation_equivariant() {
        let mu = CartanCovec::from_coords(5.0, 2.0);
        let table = SphericalTable::build(mu, 0.4, 1e-8).unwrap();
        let h = CartanVec::from_coords(0.1, 0.25);
        let v = h.h();
        let flipped = CartanVec::project([-v[2], -v[1], -v[0]]);
        assert!((table.eval_symmetric(&flipped).unwrap() - table.eval_symmetric(&h).unwrap().conj()).norm() < 1e-15);
        let direct = spherical_auto(&mu, &h, 1e-9).unwrap().value;
        assert!((table.eval_symmetric(&h).unwrap() - direct).norm() < 1e-6);
    }

    #[test]
    fn envelope_is_one_at_identity() {
        let nu = CartanCovec::from_coords(0.8, 0.5);
        assert!((envelope_sup(20.0, &nu, &[CartanVec::ZERO], 1e-9).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn table_interpolates_spherical_function() {
        let mu = CartanCovec::from_coords(7.0, 3.0);
        let table = SphericalTable::build(mu, 0.5, 1e-8).unwrap();
        let mut rng = crate::rng::stream(47, "spherical-table");
        for _ in 0..10 {
            let h = random_cartan(&mut rng, 0.5);
            let direct = spherical_auto(&mu, &h, 1e-9).unwrap().value;
            assert!((table.eval(&h).unwrap() - direct).norm() < 1e-6);
        }
    }
}
