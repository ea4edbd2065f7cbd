//! Tables of Weyl-invariant functions on the flat, stored on a Cartesian grid covering the
//! positive chamber and read back by tensor Lagrange interpolation.

use crate::lie::CartanVec;
use crate::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Weights of `N`-point Lagrange interpolation at offset `u ∈ [0, 1)` from node `N/2 − 1`,
/// nodes at the integers `−(N/2 − 1), …, N/2`.
pub fn lagrange_weights<const N: usize>(u: f64) -> [f64; N] {
    let off = (N / 2 - 1) as f64;
    let mut w = [1.0; N];
    for (j, wj) in w.iter_mut().enumerate() {
        let xj = j as f64 - off;
        for k in 0..N {
            if k != j {
                let xk = k as f64 - off;
                *wj *= (u - xk) / (xj - xk);
            }
        }
    }
    w
}

const ORDER: usize = 12;
const HALF: i64 = ORDER as i64 / 2;

/// Distance from `(x, y)` to the closed chamber sector `{x ≥ 0, y ≥ x/√3, x² + y² ≤ R²}`.
fn dist_to_sector(x: f64, y: f64, r: f64) -> f64 {
    let theta = y.atan2(x);
    let rad = x.hypot(y);
    if (PI / 6.0..=PI / 2.0).contains(&theta) {
        return (rad - r).max(0.0);
    }
    let seg = |ux: f64, uy: f64| {
        let s = (x * ux + y * uy).clamp(0.0, r);
        (x - s * ux).hypot(y - s * uy)
    };
    seg((PI / 6.0).cos(), 0.5).min(seg(0.0, 1.0))
}

/// Values of a Weyl-invariant function on the chamber sector of radius `R`, with a margin
/// wide enough for the interpolation stencil.
#[derive(Clone, Debug)]
pub struct ChamberTable {
    radius: f64,
    spacing: f64,
    i_min: i64,
    j_min: i64,
    nx: usize,
    ny: usize,
    values: Vec<Option<Complex64>>,
}

impl ChamberTable {
    /// Tabulates `f` at every grid point within the stencil margin of the sector.
    pub fn build<F>(radius: f64, spacing: f64, f: F) -> Result<Self>
    where
        F: Fn(&CartanVec) -> Result<Complex64> + Sync,
    {
        if !(radius > 0.0 && spacing > 0.0) {
            return Err(Error::InvalidInput("table radius and spacing must be positive".into()));
        }
        let margin = (HALF as f64 + 0.5) * spacing * std::f64::consts::SQRT_2;
        let i_min = -HALF - 1;
        let j_min = -HALF - 1;
        let i_max = ((radius * (PI / 6.0).cos() + margin) / spacing).ceil() as i64;
        let j_max = ((radius + margin) / spacing).ceil() as i64;
        let (nx, ny) = ((i_max - i_min + 1) as usize, (j_max - j_min + 1) as usize);
        let cells: Vec<Option<CartanVec>> = (0..nx * ny)
            .map(|idx| {
                let (x, y) = ((i_min + (idx / ny) as i64) as f64 * spacing, (j_min + (idx % ny) as i64) as f64 * spacing);
                (dist_to_sector(x, y, radius) <= margin).then(|| CartanVec::from_coords(x, y))
            })
            .collect();
        let values = cells.par_iter().map(|c| c.map(|h| f(&h)).transpose()).collect::<Result<Vec<_>>>()?;
        Ok(ChamberTable { radius, spacing, i_min, j_min, nx, ny, values })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Number of stored values.
    pub fn len(&self) -> usize {
        self.values.iter().filter(|v| v.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Stored grid points and values.
    pub fn points(&self) -> impl Iterator<Item = (CartanVec, Complex64)> + '_ {
        self.values.iter().enumerate().filter_map(move |(idx, v)| {
            v.map(|v| {
                let (i, j) = (self.i_min + (idx / self.ny) as i64, self.j_min + (idx % self.ny) as i64);
                (CartanVec::from_coords(i as f64 * self.spacing, j as f64 * self.spacing), v)
            })
        })
    }

    /// Interpolated value at the chamber representative of `H`.
    pub fn eval(&self, h: &CartanVec) -> Result<Complex64> {
        let d = h.dominant();
        if d.norm() > self.radius * (1.0 + 1e-12) {
            return Err(Error::Resolution(format!("point at radius {:.4} lies outside the table radius {:.4}", d.norm(), self.radius)));
        }
        let [x, y] = d.coords();
        let (u, v) = (x / self.spacing, y / self.spacing);
        let (iu, iv) = (u.floor() as i64, v.floor() as i64);
        let wx = lagrange_weights::<ORDER>(u - iu as f64);
        let wy = lagrange_weights::<ORDER>(v - iv as f64);
        let mut s = Complex64::new(0.0, 0.0);
        for (a, wa) in wx.iter().enumerate() {
            let i = iu + a as i64 - (HALF - 1) - self.i_min;
            for (b, wb) in wy.iter().enumerate() {
                let j = iv + b as i64 - (HALF - 1) - self.j_min;
                let val = (i >= 0 && j >= 0 && (i as usize) < self.nx && (j as usize) < self.ny)
                    .then(|| self.values[i as usize * self.ny + j as usize])
                    .flatten()
                    .ok_or_else(|| Error::Resolution("interpolation stencil leaves the table".into()))?;
                s += val * (wa * wb);
            }
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lagrange_reproduces_polynomials() {
        let w = lagrange_weights::<6>(0.37);
        let s: f64 = w.iter().enumerate().map(|(j, wj)| wj * (j as f64 - 2.0).powi(5)).sum();
        assert!((s - 0.37f64.powi(5)).abs() < 1e-12);
        let w = lagrange_weights::<8>(0.0);
        assert!((w[3] - 1.0).abs() < 1e-15 && w.iter().map(|x| x.abs()).sum::<f64>() < 1.0 + 1e-15);
    }

    #[test]
    fn sector_distance() {
        assert_eq!(dist_to_sector(0.1, 0.5, 1.0), 0.0);
        assert!((dist_to_sector(0.0, 2.0, 1.0) - 1.0).abs() < 1e-15);
        assert!((dist_to_sector(-0.3, 0.5, 1.0) - 0.3).abs() < 1e-15);
        assert!((dist_to_sector(0.0, -0.4, 1.0) - 0.4).abs() < 1e-15);
    }

    #[test]
    fn interpolates_invariant_functions() {
        // A Weyl-invariant oscillation: the spherical-like sum of plane waves.
        let nu = crate::lie::CartanCovec::from_coords(9.0, 4.0);
        let f = |h: &CartanVec| crate::lie::WEYL_GROUP.iter().map(|w| Complex64::cis(nu.eval(&h.act(w)))).sum::<Complex64>();
        let table = ChamberTable::build(0.8, 0.6 / 10.0, |h| Ok(f(h))).unwrap();
        let mut rng = crate::rng::stream(43, "table");
        let mut worst = 0.0f64;
        for _ in 0..200 {
            let h = crate::lie::random_cartan(&mut rng, 0.8);
            worst = worst.max((table.eval(&h).unwrap() - f(&h)).norm());
        }
        assert!(worst < 1e-6, "{worst}");
        assert!(table.eval(&CartanVec::from_coords(0.0, 0.9)).is_err());
        assert!(table.points().all(|(h, v)| (v - f(&h)).norm() < 1e-12));
    }
}
