//! The spherical Hecke algebra of GL(3,Q_p) with respect to GL(3,Z_p).
//!
//! Double cosets `K diag(p^a, p^b, p^c) K` are labelled by `a ≥ b ≥ c`. Left
//! cosets are represented by upper triangular integer matrices with diagonal
//! `p^{e_i}` whose entry `(i, j)` is reduced modulo `p^{e_i}`; negative labels
//! carry a central shift. Haar measure gives `GL(3,Z_p)` mass 1, so `Φ(a,b,c)`
//! has volume equal to its number of left cosets.

mod element;
mod smith;

pub use element::*;
pub use smith::*;

use crate::{Error, Result};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

pub type Rational = Ratio<i64>;

/// Largest prime accepted by the coset enumeration.
pub const MAX_PRIME: u64 = 7;
/// Largest `a − c` accepted by the coset enumeration.
pub const MAX_SPREAD: i64 = 4;

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// `K_p diag(p^a, p^b, p^c) K_p` with `a ≥ b ≥ c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DoubleCosetLabel {
    pub p: u64,
    exps: [i64; 3],
}

impl DoubleCosetLabel {
    /// Exponents are sorted into descending order.
    pub fn new(p: u64, mut exps: [i64; 3]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        exps.sort_by(|a, b| b.cmp(a));
        Ok(DoubleCosetLabel { p, exps })
    }

    pub fn exps(&self) -> [i64; 3] {
        self.exps
    }

    pub fn spread(&self) -> i64 {
        self.exps[0] - self.exps[2]
    }

    pub fn degree(&self) -> i64 {
        self.exps.iter().sum()
    }

    /// Multiplication by the central element `p^k`.
    pub fn shift(&self, k: i64) -> Self {
        DoubleCosetLabel { p: self.p, exps: self.exps.map(|e| e + k) }
    }

    /// The label of the inverse coset.
    pub fn adjoint(&self) -> Self {
        let [a, b, c] = self.exps;
        DoubleCosetLabel { p: self.p, exps: [-c, -b, -a] }
    }

    pub fn check_budget(&self) -> Result<()> {
        if self.p > MAX_PRIME || self.spread() > MAX_SPREAD {
            return Err(Error::Budget(format!(
                "label {:?} at p = {} exceeds the enumeration budget (p ≤ {MAX_PRIME}, a − c ≤ {MAX_SPREAD})",
                self.exps, self.p
            )));
        }
        Ok(())
    }
}

/// `p^shift · m` with `m` upper triangular, diagonal `p^{e_i}`, entry `(i,j)` in `[0, p^{e_i})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetRep {
    pub matrix: [[i64; 3]; 3],
    pub shift: i64,
    pub diag_exps: [i64; 3],
}

impl CosetRep {
    /// Diagonal valuations of `p^shift · m`.
    pub fn valuations(&self) -> [i64; 3] {
        self.diag_exps.map(|e| e + self.shift)
    }

    /// `p^{-ρ(e)}` with `ρ(e) = e₁ − e₃`.
    pub fn rho_weight(&self, p: u64) -> Rational {
        let e = self.valuations();
        pow_rational(p, -(e[0] - e[2]))
    }
}

pub fn pow_rational(p: u64, k: i64) -> Rational {
    let q = (p as i64).pow(k.unsigned_abs() as u32);
    if k >= 0 {
        Rational::from_integer(q)
    } else {
        Rational::new(1, q)
    }
}

/// All left cosets `g K_p` contained in the double coset.
pub fn enumerate_left_cosets(label: &DoubleCosetLabel) -> Result<Vec<CosetRep>> {
    label.check_budget()?;
    let p = label.p as i64;
    let [a, b, c] = label.exps;
    let target = [a - c, b - c, 0];
    let (top, total) = (a - c, a + b - 2 * c);
    let mut out = Vec::new();
    for e1 in 0..=top {
        for e2 in 0..=top {
            let e3 = total - e1 - e2;
            if !(0..=top).contains(&e3) {
                continue;
            }
            let (q1, q2) = (p.pow(e1 as u32), p.pow(e2 as u32));
            for x12 in 0..q1 {
                for x13 in 0..q1 {
                    for x23 in 0..q2 {
                        let m = [[q1, x12, x13], [0, q2, x23], [0, 0, p.pow(e3 as u32)]];
                        if smith_divisors_small(&m, label.p) == Some(target) {
                            out.push(CosetRep { matrix: m, shift: c, diag_exps: [e1, e2, e3] });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Labels that can occur in `Φ(l1) * Φ(l2)`.
fn product_candidates(l1: &DoubleCosetLabel, l2: &DoubleCosetLabel) -> Vec<[i64; 3]> {
    let (hi, lo, sum) = (l1.exps[0] + l2.exps[0], l1.exps[2] + l2.exps[2], l1.degree() + l2.degree());
    let mut out = Vec::new();
    for x in (lo..=hi).rev() {
        for y in (lo..=x).rev() {
            let z = sum - x - y;
            if z <= y && z >= lo {
                out.push([x, y, z]);
            }
        }
    }
    out
}

/// Label of `g⁻¹ · diag(p^C)` for a coset representative `g`.
fn classify(rep: &CosetRep, c: &[i64; 3], p: u64) -> Result<[i64; 3]> {
    let u = rep.matrix.map(|r| r.map(BigInt::from));
    // adj(U) for upper triangular U
    let adj = [
        [&u[1][1] * &u[2][2], -&u[0][1] * &u[2][2], &u[0][1] * &u[1][2] - &u[0][2] * &u[1][1]],
        [BigInt::from(0), &u[0][0] * &u[2][2], -&u[0][0] * &u[1][2]],
        [BigInt::from(0), BigInt::from(0), &u[0][0] * &u[1][1]],
    ];
    let low = c[2];
    let d: Vec<BigInt> = c.iter().map(|&ci| BigInt::from(p).pow((ci - low) as u32)).collect();
    let m: [[BigInt; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| &adj[i][j] * &d[j]));
    let offset = low - rep.shift - rep.diag_exps.iter().sum::<i64>();
    Ok(smith_divisors_big(&m, p)?.map(|e| e + offset))
}

/// Coset tables and basis products for one prime, cached.
pub struct HeckeAlgebra {
    pub p: u64,
    cosets: Mutex<HashMap<[i64; 3], Arc<Vec<CosetRep>>>>,
    products: Mutex<HashMap<([i64; 3], [i64; 3]), Arc<HeckeElement<Rational>>>>,
}

impl HeckeAlgebra {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        Ok(HeckeAlgebra { p, cosets: Mutex::new(HashMap::new()), products: Mutex::new(HashMap::new()) })
    }

    pub fn label(&self, exps: [i64; 3]) -> Result<DoubleCosetLabel> {
        DoubleCosetLabel::new(self.p, exps)
    }

    pub fn basis(&self, exps: [i64; 3]) -> Result<HeckeElement<Rational>> {
        Ok(HeckeElement::basis(&self.label(exps)?))
    }

    pub fn cosets(&self, exps: [i64; 3]) -> Result<Arc<Vec<CosetRep>>> {
        let label = self.label(exps)?;
        if let Some(v) = self.cosets.lock().unwrap().get(&label.exps) {
            return Ok(v.clone());
        }
        let v = Arc::new(enumerate_left_cosets(&label)?);
        self.cosets.lock().unwrap().insert(label.exps, v.clone());
        Ok(v)
    }

    pub fn volume(&self, exps: [i64; 3]) -> Result<usize> {
        Ok(self.cosets(exps)?.len())
    }

    /// `Φ(l1) * Φ(l2)`.
    pub fn basis_product(&self, l1: [i64; 3], l2: [i64; 3]) -> Result<Arc<HeckeElement<Rational>>> {
        let (a, b) = (self.label(l1)?, self.label(l2)?);
        b.check_budget()?;
        if let Some(v) = self.products.lock().unwrap().get(&(a.exps, b.exps)) {
            return Ok(v.clone());
        }
        let reps = self.cosets(a.exps)?;
        let mut out = HeckeElement::zero(self.p);
        for c in product_candidates(&a, &b) {
            let mut n = 0i64;
            for r in reps.iter() {
                if classify(r, &c, self.p)? == b.exps {
                    n += 1;
                }
            }
            out.add_term(c, Rational::from_integer(n));
        }
        let out = Arc::new(out);
        self.products.lock().unwrap().insert((a.exps, b.exps), out.clone());
        Ok(out)
    }

    pub fn convolve<C: Coefficient>(&self, f: &HeckeElement<C>, g: &HeckeElement<C>) -> Result<HeckeElement<C>> {
        if f.prime() != self.p || g.prime() != self.p {
            return Err(Error::InvalidInput("Hecke elements at different primes".into()));
        }
        let mut out = HeckeElement::zero(self.p);
        for (l1, c1) in f.terms() {
            for (l2, c2) in g.terms() {
                let prod = self.basis_product(*l1, *l2)?;
                for (l, n) in prod.terms() {
                    out.add_term(*l, c1.clone() * c2.clone() * C::from_rational(*n));
                }
            }
        }
        Ok(out)
    }

    /// Eigenvalue on the spherical function with trivial Satake parameter.
    pub fn phi0_pairing(&self, f: &HeckeElement<Rational>) -> Result<Rational> {
        let mut total = Rational::from_integer(0);
        for (l, c) in f.terms() {
            let w: Rational = self.cosets(*l)?.iter().map(|r| r.rho_weight(self.p)).sum();
            total += *c * w;
        }
        Ok(total)
    }

    /// Eigenvalue on the unramified representation with Satake parameter `s`.
    pub fn satake_eigenvalue<C: Coefficient>(&self, f: &HeckeElement<C>, s: &SatakeParameter) -> Result<Complex64> {
        let mut total = Complex64::new(0.0, 0.0);
        for (l, c) in f.terms() {
            let mut w = Complex64::new(0.0, 0.0);
            for r in self.cosets(*l)?.iter() {
                let e = r.valuations();
                let rho = r.rho_weight(self.p);
                let weight = *rho.numer() as f64 / *rho.denom() as f64;
                w += s.alpha.powi(e[0] as i32) * s.beta.powi(e[1] as i32) * s.gamma.powi(e[2] as i32) * weight;
            }
            total += c.to_complex() * w;
        }
        Ok(total)
    }
}

/// Unramified unitary Satake parameter `(α, β, γ)`, `αβγ = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SatakeParameter {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
}

impl SatakeParameter {
    pub fn new(alpha: Complex64, beta: Complex64, gamma: Complex64) -> Result<Self> {
        let s = SatakeParameter { alpha, beta, gamma };
        if (alpha * beta * gamma - 1.0).norm() > 1e-12 {
            return Err(Error::InvalidInput("Satake parameter does not have product 1".into()));
        }
        if !s.is_unitary(1e-10) {
            return Err(Error::InvalidInput("Satake parameter is not unitary".into()));
        }
        Ok(s)
    }

    /// From `α, β` with `γ = 1/(αβ)`.
    pub fn from_pair(alpha: Complex64, beta: Complex64) -> Result<Self> {
        SatakeParameter::new(alpha, beta, (alpha * beta).inv())
    }

    pub fn trivial() -> Self {
        let one = Complex64::new(1.0, 0.0);
        SatakeParameter { alpha: one, beta: one, gamma: one }
    }

    /// `{α, β, γ} = {ᾱ⁻¹, β̄⁻¹, γ̄⁻¹}` as multisets.
    pub fn is_unitary(&self, tol: f64) -> bool {
        let a = [self.alpha, self.beta, self.gamma];
        let b = a.map(|z| z.conj().inv());
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        perms.iter().any(|pm| (0..3).all(|i| (a[i] - b[pm[i]]).norm() <= tol))
    }

    pub fn entries(&self) -> [Complex64; 3] {
        [self.alpha, self.beta, self.gamma]
    }
}
