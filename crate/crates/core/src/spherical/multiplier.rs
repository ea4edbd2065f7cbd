//! Plancherel density, polar Jacobian and the Paley–Wiener multipliers `h`, `h_t⁰`, `h_t`.

use super::bump::normalized_transform;
use crate::lie::{CartanCovec, CartanVec, WEYL_GROUP};
use crate::{Error, Result};
use std::f64::consts::{PI, SQRT_2};

/// Polar-coordinate constant: `dX = C_POL Π_{α>0} α(H) dH dk` on traceless symmetric
/// matrices with the trace inner product, `dk` a probability measure.
pub const C_POL: f64 = 4.0 * SQRT_2 * PI * PI;

/// Plancherel constant matching [`C_POL`] through the Euclidean limit at high frequency.
pub const C_P: f64 = 8.0 * C_POL / (32.0 * PI * PI * PI * PI * PI);

/// `J(H) = C_POL Π_{α>0} |sinh α(H)|`.
pub fn jacobian(h: &CartanVec) -> f64 {
    let v = h.h();
    C_POL * ((v[0] - v[1]).sinh() * (v[1] - v[2]).sinh() * (v[0] - v[2]).sinh()).abs()
}

/// `|c(μ)|⁻² = C_P Π_{i<j} r tanh(πr)` with `r = (μ_i − μ_j)/2`.
pub fn plancherel_density(mu: &CartanCovec) -> f64 {
    let m = mu.nu();
    let f = |r: f64| r * (PI * r).tanh();
    C_P * f(0.5 * (m[0] - m[1])) * f(0.5 * (m[1] - m[2])) * f(0.5 * (m[0] - m[2]))
}

/// `h(μ) = |b̂(μ)|²/|b̂(0)|²` for the mollifier `b` of radius `R`, its Weyl symmetrization
/// `h_t⁰(μ) = Σ_w h(wμ − tλ)` and optionally its square `h_t = (h_t⁰)²`.
#[derive(Clone, Debug, PartialEq)]
pub struct PaleyWienerMultiplier {
    radius: f64,
    center: CartanCovec,
    squared: bool,
}

impl PaleyWienerMultiplier {
    pub fn new(radius: f64, center: CartanCovec, squared: bool) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidInput(format!("multiplier radius {radius} must be positive")));
        }
        Ok(PaleyWienerMultiplier { radius, center, squared })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn center(&self) -> CartanCovec {
        self.center
    }

    pub fn is_squared(&self) -> bool {
        self.squared
    }

    /// The base profile `h(μ)`.
    pub fn base(&self, mu: &CartanCovec) -> f64 {
        normalized_transform(self.radius * mu.norm()).powi(2)
    }

    /// `h_t⁰(μ)`.
    pub fn symmetrized(&self, mu: &CartanCovec) -> f64 {
        WEYL_GROUP.iter().map(|w| self.base(&mu.act(w).sub(&self.center))).sum()
    }

    /// `h_t(μ)` when squared, `h_t⁰(μ)` otherwise.
    pub fn value(&self, mu: &CartanCovec) -> f64 {
        let s = self.symmetrized(mu);
        if self.squared {
            s * s
        } else {
            s
        }
    }

    /// Radius of the support of the kernel with this transform.
    pub fn kernel_support(&self) -> f64 {
        if self.squared {
            4.0 * self.radius
        } else {
            2.0 * self.radius
        }
    }

    /// `ρ` beyond which the profile (squared when applicable) stays below `rel`.
    pub fn decay_radius(&self, rel: f64) -> f64 {
        let power = if self.squared { 4 } else { 2 };
        let mut last = 0.0;
        let mut u = 0.0;
        while u < 700.0 {
            if normalized_transform(u).abs().powi(power) >= rel {
                last = u;
            }
            u += 0.05;
        }
        (last + 0.05) / self.radius
    }

    /// Frequencies carrying all but a fraction `rel` of the multiplier.
    pub fn bandwidth(&self, rel: f64) -> f64 {
        self.center.norm() + self.decay_radius(rel)
    }
}
