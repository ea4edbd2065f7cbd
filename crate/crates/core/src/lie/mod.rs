//! SL(3,R): the Cartan subspace of traceless diagonal matrices and its dual,
//! roots and root vectors, the Weyl group, and the matrix groups built on them.
//!
//! Conventions. The Killing form is `6 tr(XY)`. Root vectors are
//! `X_α = E_ij / √12` for `α = e_i − e_j`, `i < j`, with `X_{−α} = −X_αᵀ`,
//! so that `⟨X_α, X_{−α}⟩ = −1/2`. The Iwasawa decomposition is
//! `g = n · exp(A(g)) · k` with `n` upper unipotent and `k ∈ SO(3)`.

mod flat;
mod iwasawa;
mod matrix;

pub use flat::*;
pub use iwasawa::*;
pub use matrix::*;

use crate::{Error, Result};
use nalgebra::Matrix3;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub type Mat3 = Matrix3<f64>;

const SQRT2: f64 = std::f64::consts::SQRT_2;
const SQRT6: f64 = 2.449_489_742_783_178;
const SQRT12: f64 = 3.464_101_615_137_754_6;

/// Traceless diagonal matrix `diag(h1, h2, h3)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CartanVec([f64; 3]);

impl CartanVec {
    pub const ZERO: CartanVec = CartanVec([0.0; 3]);

    pub fn new(h: [f64; 3]) -> Result<Self> {
        let scale = 1.0 + h.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if (h[0] + h[1] + h[2]).abs() > 1e-12 * scale {
            return Err(Error::InvalidInput(format!("Cartan vector {h:?} is not traceless")));
        }
        Ok(CartanVec(h))
    }

    /// Removes the trace.
    pub fn project(h: [f64; 3]) -> Self {
        let m = (h[0] + h[1] + h[2]) / 3.0;
        let (a, b) = (h[0] - m, h[1] - m);
        CartanVec([a, b, -(a + b)])
    }

    /// Orthonormal coordinates along `(1,−1,0)/√2` and `(1,1,−2)/√6`.
    pub fn from_coords(x: f64, y: f64) -> Self {
        let s = y / SQRT6;
        let (a, b) = (x / SQRT2 + s, -x / SQRT2 + s);
        CartanVec([a, b, -(a + b)])
    }

    pub fn coords(&self) -> [f64; 2] {
        let h = self.0;
        [(h[0] - h[1]) / SQRT2, (h[0] + h[1] - 2.0 * h[2]) / SQRT6]
    }

    pub fn h(&self) -> [f64; 3] {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Euclidean (trace) inner product.
    pub fn dot(&self, o: &CartanVec) -> f64 {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    pub fn killing(&self, o: &CartanVec) -> f64 {
        6.0 * self.dot(o)
    }

    pub fn scale(&self, s: f64) -> Self {
        CartanVec(self.0.map(|x| x * s))
    }

    pub fn add(&self, o: &CartanVec) -> Self {
        CartanVec([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }

    pub fn sub(&self, o: &CartanVec) -> Self {
        self.add(&o.scale(-1.0))
    }

    pub fn matrix(&self) -> Mat3 {
        Mat3::from_diagonal(&self.0.into())
    }

    pub fn exp(&self) -> Mat3 {
        Mat3::from_diagonal(&self.0.map(f64::exp).into())
    }

    pub fn act(&self, w: &WeylElement) -> Self {
        CartanVec(w.permute(self.0))
    }

    /// Representative in the closed positive chamber `h1 ≥ h2 ≥ h3`.
    pub fn dominant(&self) -> Self {
        let mut h = self.0;
        h.sort_by(|a, b| b.total_cmp(a));
        CartanVec(h)
    }
}

/// Linear functional `H ↦ Σ ν_i h_i` on the Cartan subspace, stored with its trace removed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CartanCovec([f64; 3]);

impl CartanCovec {
    pub const ZERO: CartanCovec = CartanCovec([0.0; 3]);

    pub fn new(nu: [f64; 3]) -> Self {
        let v = CartanVec::project(nu);
        CartanCovec(v.0)
    }

    pub fn from_coords(x: f64, y: f64) -> Self {
        CartanCovec(CartanVec::from_coords(x, y).0)
    }

    pub fn coords(&self) -> [f64; 2] {
        CartanVec(self.0).coords()
    }

    pub fn nu(&self) -> [f64; 3] {
        self.0
    }

    pub fn eval(&self, h: &CartanVec) -> f64 {
        self.0[0] * h.0[0] + self.0[1] * h.0[1] + self.0[2] * h.0[2]
    }

    pub fn norm(&self) -> f64 {
        CartanVec(self.0).norm()
    }

    pub fn scale(&self, s: f64) -> Self {
        CartanCovec(self.0.map(|x| x * s))
    }

    pub fn add(&self, o: &CartanCovec) -> Self {
        CartanCovec([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }

    pub fn sub(&self, o: &CartanCovec) -> Self {
        self.add(&o.scale(-1.0))
    }

    /// The vector `H_ν` with `⟨H_ν, H⟩ = ν(H)` under the Killing form.
    pub fn dual(&self) -> CartanVec {
        CartanVec(self.0.map(|x| x / 6.0))
    }

    pub fn act(&self, w: &WeylElement) -> Self {
        CartanCovec(w.permute(self.0))
    }

    pub fn is_regular(&self, tol: f64) -> bool {
        POSITIVE_ROOTS.iter().all(|r| r.eval_covec(self).abs() > tol)
    }
}

/// Half sum of positive roots, `ρ(H) = h1 − h3`.
pub fn rho() -> CartanCovec {
    CartanCovec([1.0, 0.0, -1.0])
}

/// The root `e_i − e_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Root {
    pub i: usize,
    pub j: usize,
}

pub const POSITIVE_ROOTS: [Root; 3] = [Root { i: 0, j: 1 }, Root { i: 1, j: 2 }, Root { i: 0, j: 2 }];

impl Root {
    pub fn new(i: usize, j: usize) -> Result<Self> {
        if i > 2 || j > 2 || i == j {
            return Err(Error::InvalidInput(format!("no root e_{} - e_{}", i + 1, j + 1)));
        }
        Ok(Root { i, j })
    }

    pub fn is_positive(&self) -> bool {
        self.i < self.j
    }

    pub fn negate(&self) -> Root {
        Root { i: self.j, j: self.i }
    }

    pub fn eval(&self, h: &CartanVec) -> f64 {
        h.0[self.i] - h.0[self.j]
    }

    pub fn eval_covec(&self, nu: &CartanCovec) -> f64 {
        nu.0[self.i] - nu.0[self.j]
    }

    /// `⟨α, ν⟩` through Killing duality, i.e. `α(H_ν)`.
    pub fn pairing(&self, nu: &CartanCovec) -> f64 {
        self.eval(&nu.dual())
    }

    /// The Killing dual `H_α`.
    pub fn coroot(&self) -> CartanVec {
        let mut h = [0.0; 3];
        h[self.i] = 1.0 / 6.0;
        h[self.j] = -1.0 / 6.0;
        CartanVec(h)
    }

    pub fn root_vector(&self) -> Mat3 {
        let mut x = Mat3::zeros();
        x[(self.i, self.j)] = if self.is_positive() { 1.0 } else { -1.0 } / SQRT12;
        x
    }

    /// `K_α = X_α + X_{−α}`, antisymmetric.
    pub fn compact_vector(&self) -> Mat3 {
        self.root_vector() + self.negate().root_vector()
    }
}

/// Permutation `(w·h)_i = h_{σ(i)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeylElement(pub [usize; 3]);

pub const WEYL_GROUP: [WeylElement; 6] = [
    WeylElement([0, 1, 2]),
    WeylElement([1, 0, 2]),
    WeylElement([0, 2, 1]),
    WeylElement([2, 1, 0]),
    WeylElement([1, 2, 0]),
    WeylElement([2, 0, 1]),
];

impl WeylElement {
    pub fn permute(&self, h: [f64; 3]) -> [f64; 3] {
        [h[self.0[0]], h[self.0[1]], h[self.0[2]]]
    }
}

/// Distinct Weyl images of `ν` (up to `1e-12`).
pub fn weyl_orbit(nu: &CartanCovec) -> Vec<CartanCovec> {
    let mut out: Vec<CartanCovec> = Vec::new();
    for w in WEYL_GROUP {
        let x = nu.act(&w);
        if !out.iter().any(|y| x.sub(y).norm() <= 1e-12) {
            out.push(x);
        }
    }
    out
}

pub fn killing(x: &Mat3, y: &Mat3) -> f64 {
    6.0 * (x * y).trace()
}

/// An element of SL(3,R).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupElement(Mat3);

impl GroupElement {
    pub fn new(m: Mat3) -> Result<Self> {
        let d = m.determinant();
        if (d - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidInput(format!("determinant {d} is not 1")));
        }
        Ok(GroupElement(m))
    }

    pub fn identity() -> Self {
        GroupElement(Mat3::identity())
    }

    /// `exp(X)` for traceless `X`.
    pub fn exp_of(x: &Mat3) -> Result<Self> {
        if x.trace().abs() > 1e-12 * (1.0 + x.norm()) {
            return Err(Error::InvalidInput("Lie algebra element is not traceless".into()));
        }
        GroupElement::new(x.exp())
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        GroupElement(self.0.try_inverse().expect("unimodular matrices are invertible"))
    }

    pub fn mul(&self, o: &GroupElement) -> Self {
        GroupElement(self.0 * o.0)
    }
}

/// An element of SO(3).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationElement(Mat3);

impl RotationElement {
    pub fn new(m: Mat3) -> Result<Self> {
        if (m * m.transpose() - Mat3::identity()).norm() > 1e-10 || m.determinant() < 0.0 {
            return Err(Error::InvalidInput("matrix is not a rotation".into()));
        }
        Ok(RotationElement(m))
    }

    pub fn identity() -> Self {
        RotationElement(Mat3::identity())
    }

    /// `exp(X)` for antisymmetric `X`.
    pub fn exp_of(x: &Mat3) -> Result<Self> {
        if (x + x.transpose()).norm() > 1e-12 * (1.0 + x.norm()) {
            return Err(Error::InvalidInput("Lie algebra element is not antisymmetric".into()));
        }
        RotationElement::new(x.exp())
    }

    /// Haar-distributed rotation from a uniformly random unit quaternion.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let (u1, u2, u3): (f64, f64, f64) = (rng.random(), rng.random(), rng.random());
        let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
        let (w, x, y, z) = (a * (2.0 * PI * u2).sin(), a * (2.0 * PI * u2).cos(), b * (2.0 * PI * u3).sin(), b * (2.0 * PI * u3).cos());
        RotationElement(Mat3::new(
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - z * w),
            2.0 * (x * z + y * w),
            2.0 * (x * y + z * w),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - x * w),
            2.0 * (x * z - y * w),
            2.0 * (y * z + x * w),
            1.0 - 2.0 * (x * x + y * y),
        ))
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        RotationElement(self.0.transpose())
    }

    pub fn mul(&self, o: &RotationElement) -> Self {
        RotationElement(self.0 * o.0)
    }

    pub fn as_group(&self) -> GroupElement {
        GroupElement(self.0)
    }

    /// Frobenius distance to the nearest element of `M`.
    pub fn dist_to_m(&self) -> f64 {
        m_elements().iter().map(|m| (self.0 - m).norm()).fold(f64::INFINITY, f64::min)
    }
}

/// The centralizer `M` of the Cartan subspace in SO(3).
pub fn m_elements() -> [Mat3; 4] {
    [
        Mat3::identity(),
        Mat3::from_diagonal(&[1.0, -1.0, -1.0].into()),
        Mat3::from_diagonal(&[-1.0, 1.0, -1.0].into()),
        Mat3::from_diagonal(&[-1.0, -1.0, 1.0].into()),
    ]
}

/// A random traceless matrix with independent uniform entries of size at most `r`.
pub fn random_traceless<R: Rng + ?Sized>(rng: &mut R, r: f64) -> Mat3 {
    let mut x = Mat3::from_fn(|_, _| r * (2.0 * rng.random::<f64>() - 1.0));
    let t = x.trace() / 3.0;
    for i in 0..3 {
        x[(i, i)] -= t;
    }
    x
}

/// A uniformly random Cartan vector in the disc of radius `r`.
pub fn random_cartan<R: Rng + ?Sized>(rng: &mut R, r: f64) -> CartanVec {
    let rad = r * rng.random::<f64>().sqrt();
    let th = 2.0 * PI * rng.random::<f64>();
    CartanVec::from_coords(rad * th.cos(), rad * th.sin())
}
