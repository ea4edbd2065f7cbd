//! Exact linear algebra on `M₃(ℚ)`: ranks, the minor polynomial `P`, generated
//! subalgebras, and the nearest point of a conjugated diagonal subalgebra.

use super::{IntMat, CANDIDATE_BUDGET};
use crate::lie::{GroupElement, Mat3};
use crate::{Error, Result};
use nalgebra::{Matrix3, Vector3};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

pub type BigMat = [[BigInt; 3]; 3];

pub fn big(x: &IntMat) -> BigMat {
    x.map(|r| r.map(BigInt::from))
}

pub fn big_identity() -> BigMat {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { BigInt::one() } else { BigInt::zero() }))
}

pub fn big_mul(a: &BigMat, b: &BigMat) -> BigMat {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| &a[i][k] * &b[k][j]).sum()))
}

fn flatten(x: &BigMat) -> Vec<BigInt> {
    x.iter().flatten().cloned().collect()
}

/// Incremental row echelon basis over `ℚ` kept in primitive integer rows.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl EchelonBasis {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis and inserts it if it is independent.
    pub fn insert(&mut self, v: &[BigInt]) -> bool {
        let mut v = v.to_vec();
        for (c, r) in &self.rows {
            if v[*c].is_zero() {
                continue;
            }
            let (a, b) = (r[*c].clone(), v[*c].clone());
            for (x, y) in v.iter_mut().zip(r) {
                *x = &a * &*x - &b * y;
            }
            let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if !g.is_zero() && !g.is_one() {
                v.iter_mut().for_each(|x| *x /= &g);
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            Some(c) => {
                self.rows.push((c, v));
                true
            }
            None => false,
        }
    }
}

pub fn exact_rank(rows: &[Vec<BigInt>]) -> usize {
    let mut b = EchelonBasis::default();
    rows.iter().filter(|r| b.insert(r)).count()
}

fn det_big(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect()).collect();
        let term = &m[0][j] * det_big(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Sum of squares of the 126 maximal minors of the 4×9 coordinate matrix.
pub fn minor_polynomial(ys: &[BigMat; 4]) -> BigInt {
    let rows: Vec<Vec<BigInt>> = ys.iter().map(flatten).collect();
    let mut total = BigInt::zero();
    for a in 0..9 {
        for b in a + 1..9 {
            for c in b + 1..9 {
                for d in c + 1..9 {
                    let sub: Vec<Vec<BigInt>> = rows.iter().map(|r| vec![r[a].clone(), r[b].clone(), r[c].clone(), r[d].clone()]).collect();
                    let m = det_big(&sub);
                    total += &m * &m;
                }
            }
        }
    }
    total
}

pub fn minor_polynomial_int(ys: &[IntMat; 4]) -> BigInt {
    minor_polynomial(&ys.each_ref().map(big))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubalgebraReport {
    /// Dimension of the unital algebra generated.
    pub dim: usize,
    /// Dimension of the span of monomials of positive length.
    pub dim_nonunital: usize,
    /// Independent monomials found, as integer matrices (entries as strings when large).
    pub basis: Vec<Vec<String>>,
    /// Longest monomial length that contributed a new basis element.
    pub max_length: usize,
}

const MAX_MONOMIAL_LENGTH: usize = 9;

/// Span of monomials of length at most 9 (and, if `unital`, the identity).
fn closure(xs: &[BigMat], unital: bool) -> (EchelonBasis, Vec<BigMat>, usize) {
    let mut basis = EchelonBasis::default();
    let mut elems = Vec::new();
    let mut frontier = Vec::new();
    if unital {
        let id = big_identity();
        basis.insert(&flatten(&id));
        elems.push(id);
    }
    for x in xs {
        if basis.insert(&flatten(x)) {
            elems.push(x.clone());
            frontier.push(x.clone());
        }
    }
    let mut max_length = if frontier.is_empty() { 0 } else { 1 };
    for len in 2..=MAX_MONOMIAL_LENGTH {
        let mut next = Vec::new();
        for f in &frontier {
            for x in xs {
                let m = big_mul(f, x);
                if basis.insert(&flatten(&m)) {
                    elems.push(m.clone());
                    next.push(m);
                }
            }
        }
        if next.is_empty() || basis.rank() == 9 {
            if !next.is_empty() {
                max_length = len;
            }
            break;
        }
        max_length = len;
        frontier = next;
    }
    (basis, elems, max_length)
}

/// Dimension of the algebra generated by `xs` via monomials of length at most 9.
pub fn generated_subalgebra(xs: &[BigMat]) -> Result<SubalgebraReport> {
    if xs.len() > 8 {
        return Err(Error::InvalidInput(format!("{} generators exceed 8", xs.len())));
    }
    let (b, elems, max_length) = closure(xs, true);
    let (nb, _, _) = closure(xs, false);
    Ok(SubalgebraReport {
        dim: b.rank(),
        dim_nonunital: nb.rank(),
        basis: elems.iter().map(|m| m.iter().flatten().map(|v| v.to_string()).collect()).collect(),
        max_length,
    })
}

/// Nearest point to `x` in `g Z_A g⁻¹` (conjugated diagonal matrices), by normal equations.
pub fn project_to_conjugated_diagonal(x: &Mat3, g: &GroupElement) -> Result<([f64; 3], f64)> {
    let gi = g.inverse();
    let basis: [Mat3; 3] = std::array::from_fn(|k| {
        let mut e = Mat3::zeros();
        e[(k, k)] = 1.0;
        g.matrix() * e * gi.matrix()
    });
    let gram = Matrix3::from_fn(|i, j| basis[i].dot(&basis[j]));
    let ev = gram.symmetric_eigenvalues();
    let cond = ev.max() / ev.min();
    if !(ev.min() > 0.0) || cond > 1e10 {
        return Err(Error::Decomposition(format!("conjugated diagonal span is degenerate (condition {cond:e})")));
    }
    let rhs = Vector3::from_fn(|i, _| basis[i].dot(x));
    let z = gram.cholesky().ok_or_else(|| Error::Decomposition("Gram matrix not positive definite".into()))?.solve(&rhs);
    let p = basis[0] * z[0] + basis[1] * z[1] + basis[2] * z[2];
    Ok(([z[0], z[1], z[2]], (x - p).norm()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AkshayReport {
    pub x_bound: i64,
    pub epsilon: f64,
    /// Nonzero integer matrices within `ε` of `g Z_A g⁻¹`.
    pub collected: usize,
    /// Dimension of their linear span.
    pub span_dim: usize,
    pub subalgebra: Option<SubalgebraReport>,
    /// Dimension of the generated algebra (9 when the span is already everything).
    pub dim: usize,
    pub quadruples: usize,
    pub truncated: bool,
    pub independent_quadruples: usize,
    /// Smallest nonzero `P` value, as a decimal string.
    pub min_nonzero_p: Option<String>,
    /// Whether every nonzero `P` value is at least 1.
    pub integrality_ok: bool,
}

const MAX_QUADRUPLES: usize = 5000;

/// Collects integer `x` with `‖x‖∞ ≤ X` within `ε` of `g Z_A g⁻¹` and certifies the
/// dimension of what they generate, together with `P` on monomial quadruples.
pub fn akshay_experiment(g: &GroupElement, x_bound: i64, epsilon: f64) -> Result<AkshayReport> {
    let side = (2 * x_bound + 1) as u64;
    let candidates = side.checked_pow(9).unwrap_or(u64::MAX);
    if candidates > CANDIDATE_BUDGET {
        return Err(Error::Budget(format!("X = {x_bound} needs {candidates} candidates")));
    }
    // Orthonormal basis of the subspace, so dist² = ‖x‖² − Σ⟨x, u_k⟩².
    let gi = g.inverse();
    let mut us: Vec<Mat3> = Vec::new();
    for k in 0..3 {
        let mut e = Mat3::zeros();
        e[(k, k)] = 1.0;
        let mut u = g.matrix() * e * gi.matrix();
        for w in &us {
            u -= w * w.dot(&u);
        }
        let n = u.norm();
        if n < 1e-10 {
            return Err(Error::Decomposition("conjugated diagonal span is degenerate".into()));
        }
        us.push(u / n);
    }
    let mut collected: Vec<IntMat> = Vec::new();
    let s = side as i64;
    for idx in 0..candidates as i64 {
        let mut x = [[0i64; 3]; 3];
        let mut r = idx;
        for e in x.iter_mut().flatten().rev() {
            *e = r % s - x_bound;
            r /= s;
        }
        if x == [[0; 3]; 3] {
            continue;
        }
        let m = super::to_mat3(&x);
        let proj: f64 = us.iter().map(|u| u.dot(&m).powi(2)).sum();
        let d2 = (m.norm_squared() - proj).max(0.0);
        if d2.sqrt() <= epsilon {
            collected.push(x);
        }
    }
    let mut span = EchelonBasis::default();
    let gens: Vec<BigMat> = collected.iter().map(big).filter(|b| span.insert(&flatten(b))).collect();
    let (subalgebra, dim) = if gens.len() >= 9 {
        (None, 9)
    } else {
        let r = generated_subalgebra(&gens)?;
        let d = r.dim;
        (Some(r), d)
    };
    let mut monomials: Vec<BigMat> = gens.clone();
    for a in &gens {
        for b in &gens {
            let m = big_mul(a, b);
            if !monomials.contains(&m) {
                monomials.push(m);
            }
        }
    }
    let mut quadruples = 0;
    let mut independent = 0;
    let mut min_p: Option<BigInt> = None;
    let n = monomials.len();
    'outer: for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    if quadruples == MAX_QUADRUPLES {
                        break 'outer;
                    }
                    quadruples += 1;
                    let p = minor_polynomial(&[monomials[i].clone(), monomials[j].clone(), monomials[k].clone(), monomials[l].clone()]);
                    if p.is_positive() {
                        independent += 1;
                        if min_p.as_ref().is_none_or(|m| &p < m) {
                            min_p = Some(p);
                        }
                    }
                }
            }
        }
    }
    let total = if n >= 4 { n * (n - 1) * (n - 2) * (n - 3) / 24 } else { 0 };
    Ok(AkshayReport {
        x_bound,
        epsilon,
        collected: collected.len(),
        span_dim: gens.len(),
        subalgebra,
        dim,
        quadruples,
        truncated: quadruples < total,
        independent_quadruples: independent,
        integrality_ok: min_p.as_ref().is_none_or(|m| *m >= BigInt::one()),
        min_nonzero_p: min_p.map(|m| m.to_string()),
    })
}
