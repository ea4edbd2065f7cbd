//! Mollifier bumps on the flat and on the line, with their Fourier transforms.

use crate::lie::{CartanCovec, CartanVec};
use crate::{Error, Result};
use num_complex::Complex64;
use std::sync::OnceLock;

/// `exp(−1/(1−s²))` for `|s| < 1`, zero otherwise.
pub fn mollifier(s: f64) -> f64 {
    if s.abs() < 1.0 {
        (-1.0 / (1.0 - s * s)).exp()
    } else {
        0.0
    }
}

const FT_STEP: f64 = 0.05;
const FT_MAX: f64 = 800.0;

/// `u(ρ) = ∫_{ℝ²} mollifier(|x|) e^{−iξ·x} dx` at `|ξ| = ρ`, tabulated through the Abel
/// projection `B(x) = ∫ mollifier(√(x²+y²)) dy` and its cosine transform.
fn radial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let (nx, ny) = (2048usize, 512usize);
        let hx = 1.0 / nx as f64;
        let abel: Vec<f64> = (0..=nx)
            .map(|i| {
                let x = i as f64 * hx;
                let ymax = (1.0 - x * x).max(0.0).sqrt();
                let hy = ymax / ny as f64;
                hy * (mollifier(x) + 2.0 * (1..ny).map(|j| mollifier((x * x + (j as f64 * hy).powi(2)).sqrt())).sum::<f64>())
            })
            .collect();
        let n = (FT_MAX / FT_STEP) as usize + 8;
        (0..n)
            .map(|k| {
                let rho = k as f64 * FT_STEP;
                let step = Complex64::cis(rho * hx);
                let mut z = Complex64::new(1.0, 0.0);
                let mut s = 0.5 * abel[0];
                for b in &abel[1..] {
                    z *= step;
                    s += b * z.re;
                }
                2.0 * hx * s
            })
            .collect()
    })
}

/// Six-point Lagrange interpolation of a table with unit spacing at `u ≥ 0`,
/// with the even reflection at the origin.
fn interp_even(table: &[f64], u: f64) -> f64 {
    let i0 = u.floor() as i64;
    let frac = u - i0 as f64;
    let w = super::table::lagrange_weights::<6>(frac);
    let mut s = 0.0;
    for (j, wj) in w.iter().enumerate() {
        let idx = (i0 + j as i64 - 2).unsigned_abs() as usize;
        s += wj * table.get(idx).copied().unwrap_or(0.0);
    }
    s
}

/// `u(ρ)` for the unit-radius profile; zero beyond the tabulated range, where `|u| < 1e−16`.
pub fn unit_radial_transform(rho: f64) -> f64 {
    let rho = rho.abs();
    if rho >= FT_MAX {
        return 0.0;
    }
    interp_even(radial_table(), rho / FT_STEP)
}

/// `∫_{ℝ²} mollifier(|x|) dx`.
pub fn unit_mass() -> f64 {
    radial_table()[0]
}

/// Normalized radial transform `u(ρ)/u(0)`.
pub fn normalized_transform(rho: f64) -> f64 {
    unit_radial_transform(rho) / unit_mass()
}

/// `b(H) = c·mollifier(‖H − H₀‖/r)` with `∫ b = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct BumpFunction {
    center: CartanVec,
    radius: f64,
    scale: f64,
}

impl BumpFunction {
    pub fn new(center: CartanVec, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidInput(format!("bump radius {radius} must be positive")));
        }
        Ok(BumpFunction { center, radius, scale: 1.0 / (radius * radius * unit_mass()) })
    }

    pub fn centered(radius: f64) -> Result<Self> {
        Self::new(CartanVec::ZERO, radius)
    }

    pub fn center(&self) -> CartanVec {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn value(&self, h: &CartanVec) -> f64 {
        self.scale * mollifier(h.sub(&self.center).norm() / self.radius)
    }

    /// `∫ b(H) e^{−iξ(H)} dH`.
    pub fn fourier(&self, xi: &CartanCovec) -> Complex64 {
        Complex64::cis(-xi.eval(&self.center)) * normalized_transform(self.radius * xi.norm())
    }

    /// Sup norms of the radial derivatives of orders 0 to 4, by central differences on a
    /// grid of 4000 steps across the support.
    pub fn smoothness(&self) -> [f64; 5] {
        let n = 4000usize;
        let h = 2.0 * self.radius / n as f64;
        let vals: Vec<f64> = (0..=n + 8).map(|i| self.scale * mollifier(((i as f64 - 4.0) * h - self.radius) / self.radius)).collect();
        let mut out = [0.0; 5];
        let mut d = vals;
        for (k, o) in out.iter_mut().enumerate() {
            *o = d.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            if k < 4 {
                d = d.windows(3).map(|w| (w[2] - w[0]) / (2.0 * h)).collect();
            }
        }
        out
    }
}

/// `b(x) = c·mollifier((x − x₀)/r)` with `∫ b = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bump1d {
    center: f64,
    radius: f64,
    scale: f64,
}

/// `∫ mollifier(x) cos(ρx) dx` by the trapezoidal rule, exact to rounding for a flat-ended integrand.
fn line_transform(rho: f64) -> f64 {
    let n = 512 + 2 * rho.abs().ceil() as usize;
    let h = 2.0 / n as f64;
    h * (1..n).map(|i| {
        let x = -1.0 + i as f64 * h;
        mollifier(x) * (rho * x).cos()
    }).sum::<f64>()
}

impl Bump1d {
    pub fn new(center: f64, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidInput(format!("bump radius {radius} must be positive")));
        }
        Ok(Bump1d { center, radius, scale: 1.0 / (radius * line_transform(0.0)) })
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn support(&self) -> (f64, f64) {
        (self.center - self.radius, self.center + self.radius)
    }

    pub fn value(&self, x: f64) -> f64 {
        self.scale * mollifier((x - self.center) / self.radius)
    }

    /// `∫ b(x) e^{−iξx} dx`.
    pub fn fourier(&self, xi: f64) -> Complex64 {
        Complex64::cis(-xi * self.center) * (line_transform(self.radius * xi) / line_transform(0.0))
    }
}
