//! Integer matrices in `M₃(ℤ)` near a conjugated flat: the counts `L(g, n, κ)` and
//! `M(g, a, b, c, κ)`, the minor polynomial and generated subalgebras.

mod algebra;

pub use algebra::*;

use crate::hecke::smith_divisors_small;
use crate::lie::{dist_to_ma, logm, GroupElement, Mat3};
use crate::{Error, Result};
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

pub type IntMat = [[i64; 3]; 3];

/// Largest number of candidates an enumeration may visit.
pub const CANDIDATE_BUDGET: u64 = 100_000_000;

pub fn det(x: &IntMat) -> i64 {
    x[0][0] * (x[1][1] * x[2][2] - x[1][2] * x[2][1]) - x[0][1] * (x[1][0] * x[2][2] - x[1][2] * x[2][0])
        + x[0][2] * (x[1][0] * x[2][1] - x[1][1] * x[2][0])
}

pub fn to_mat3(x: &IntMat) -> Mat3 {
    Mat3::from_fn(|i, j| x[i][j] as f64)
}

pub fn content(x: &IntMat) -> i64 {
    x.iter().flatten().fold(0i64, |g, v| g.gcd(v))
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn valuation_u64(mut n: u64, p: u64) -> i64 {
    let mut v = 0;
    while n > 0 && n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LatticePoint {
    pub x: IntMat,
    pub abs_det: u64,
    /// Elementary divisors at each prime dividing the determinant, descending.
    pub smith: BTreeMap<u64, [i64; 3]>,
}

impl LatticePoint {
    pub fn new(x: IntMat) -> Self {
        let d = det(&x).unsigned_abs();
        let smith = if d == 0 {
            BTreeMap::new()
        } else {
            prime_factors(d).into_iter().filter_map(|p| smith_divisors_small(&x, p).map(|s| (p, s))).collect()
        };
        LatticePoint { x, abs_det: d, smith }
    }

    /// `x̄ = sign(det x) · x / |det x|^{1/3}`, of determinant 1.
    pub fn normalized(&self) -> Result<Mat3> {
        let d = det(&self.x);
        if d == 0 {
            return Err(Error::InvalidInput("singular lattice point".into()));
        }
        Ok(to_mat3(&self.x) * (d.signum() as f64 / (d.unsigned_abs() as f64).cbrt()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Target {
    /// `|det x| = n`.
    Norm(u64),
    /// Elementary divisors `(a, b, c)`, primitive.
    Label([u64; 3]),
}

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeQuery {
    pub g: GroupElement,
    pub target: Target,
    pub kappa: f64,
    /// Bound on the entries, `|x_ij| ≤ X`.
    pub x_bound: i64,
}

impl LatticeQuery {
    pub fn new(g: GroupElement, target: Target, kappa: f64, x_bound: i64) -> Result<Self> {
        if !(kappa >= 0.0) {
            return Err(Error::InvalidInput(format!("κ = {kappa} must be nonnegative")));
        }
        if x_bound < 1 {
            return Err(Error::InvalidInput(format!("X = {x_bound} must be at least 1")));
        }
        match target {
            Target::Norm(n) if n == 0 || n > 200 => return Err(Error::InvalidInput(format!("n = {n} outside 1..=200"))),
            Target::Label([a, b, c]) if a == 0 || b == 0 || c == 0 || a.gcd(&b).gcd(&c) != 1 => {
                return Err(Error::InvalidInput(format!("label ({a},{b},{c}) must be positive with gcd 1")))
            }
            Target::Label([a, b, c]) if a * b * c > 200 => return Err(Error::InvalidInput(format!("abc = {} exceeds 200", a * b * c))),
            _ => {}
        }
        Ok(LatticeQuery { g, target, kappa, x_bound })
    }

    pub fn norm(&self) -> u64 {
        match self.target {
            Target::Norm(n) => n,
            Target::Label([a, b, c]) => a * b * c,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub point: LatticePoint,
    pub dist_to_e: f64,
    pub dist_to_ma: f64,
}

impl Witness {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "matrix": self.point.x,
            "det": det(&self.point.x),
            "dist_to_e": self.dist_to_e,
            "dist_to_MA": self.dist_to_ma,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LatticeCount {
    pub count: u64,
    pub witnesses: Vec<Witness>,
    /// Points whose logarithm is undefined; treated as far and excluded.
    pub log_failures: u64,
    /// Points with `|det x| = n` in the box before the distance conditions.
    pub norm_points: u64,
}

/// All `x` with `|x_ij| ≤ X` and `|det x| = n`, in lexicographic order of rows.
/// The third row is solved from the first two.
pub fn enumerate_norm(n: u64, x_bound: i64) -> Result<Vec<IntMat>> {
    let side = (2 * x_bound + 1) as u64;
    let candidates = side.checked_pow(8).unwrap_or(u64::MAX);
    if candidates > CANDIDATE_BUDGET {
        return Err(Error::Budget(format!("X = {x_bound} needs {candidates} candidates")));
    }
    let rows: Vec<[i64; 3]> = (0..side.pow(3))
        .map(|i| {
            let i = i as i64;
            let s = side as i64;
            [i / (s * s) - x_bound, (i / s) % s - x_bound, i % s - x_bound]
        })
        .collect();
    let n = n as i64;
    let out: Vec<Vec<IntMat>> = rows
        .par_iter()
        .map(|r1| {
            let mut found = Vec::new();
            for r2 in &rows {
                let c = [r1[1] * r2[2] - r1[2] * r2[1], r1[2] * r2[0] - r1[0] * r2[2], r1[0] * r2[1] - r1[1] * r2[0]];
                if c == [0, 0, 0] {
                    continue;
                }
                let k = (0..3).max_by_key(|&i| c[i].abs()).unwrap();
                let (i, j) = ((k + 1) % 3, (k + 2) % 3);
                let mut local = Vec::new();
                for u in -x_bound..=x_bound {
                    for v in -x_bound..=x_bound {
                        let rest = c[i] * u + c[j] * v;
                        for target in [n, -n] {
                            let num = target - rest;
                            if num % c[k] != 0 {
                                continue;
                            }
                            let w = num / c[k];
                            if w.abs() <= x_bound {
                                let mut r3 = [0i64; 3];
                                r3[i] = u;
                                r3[j] = v;
                                r3[k] = w;
                                local.push([*r1, *r2, r3]);
                            }
                        }
                    }
                }
                local.sort();
                found.extend(local);
            }
            found
        })
        .collect();
    Ok(out.into_iter().flatten().collect())
}

/// Lower bound for `d(y, MA)`. Writing `y = m e^H z`, the ratios `|y_ij| / |y_ii|` equal
/// `|z_ij| / |z_ii|`, and `‖z − I‖ ≤ e^{‖log z‖} − 1` bounds them by `ε / (1 − ε)`.
pub fn dist_to_ma_lower_bound(y: &Mat3) -> f64 {
    let mut q: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                q = q.max(y[(i, j)].abs() / y[(i, i)].abs());
            }
        }
    }
    if q.is_finite() { (1.0 + q / (1.0 + q)).ln() } else { std::f64::consts::LN_2 }
}

/// Distance data for one point: `None` when a logarithm is undefined, otherwise
/// `(‖log(g⁻¹x̄g)‖, d(g⁻¹x̄g, MA))`, the latter infinite when it cannot be at most `κ`.
fn distances(p: &LatticePoint, g: &GroupElement, kappa: f64) -> Result<Option<(f64, f64)>> {
    let y = g.inverse().matrix() * p.normalized()? * g.matrix();
    // ‖exp(L) − I‖_F ≤ e^{‖L‖_F} − 1, so points this far from I cannot pass.
    if (y - Mat3::identity()).norm() > std::f64::consts::E - 1.0 + 1e-12 {
        return Ok(Some((f64::INFINITY, f64::INFINITY)));
    }
    let Ok(l) = logm(&y) else { return Ok(None) };
    let de = l.norm();
    if de > 1.0 || dist_to_ma_lower_bound(&y) > kappa {
        return Ok(Some((de, f64::INFINITY)));
    }
    Ok(dist_to_ma(&y).ok().map(|dm| (de, dm)))
}

fn count_points(q: &LatticeQuery, points: Vec<IntMat>) -> Result<LatticeCount> {
    let norm_points = points.len() as u64;
    let evaluated: Vec<Result<(LatticePoint, Option<(f64, f64)>)>> = points
        .into_par_iter()
        .map(|x| {
            let p = LatticePoint::new(x);
            let d = distances(&p, &q.g, q.kappa)?;
            Ok((p, d))
        })
        .collect();
    let mut out = LatticeCount { count: 0, witnesses: Vec::new(), log_failures: 0, norm_points };
    for r in evaluated {
        match r? {
            (_, None) => out.log_failures += 1,
            (p, Some((de, dm))) if de <= 1.0 && dm <= q.kappa => {
                out.count += 1;
                out.witnesses.push(Witness { point: p, dist_to_e: de, dist_to_ma: dm });
            }
            _ => {}
        }
    }
    Ok(out)
}

/// `L(g, n, κ)`: `x` with `|det x| = n`, `d(g⁻¹x̄g, e) ≤ 1` and `d(g⁻¹x̄g, MA) ≤ κ`.
pub fn count_l(q: &LatticeQuery) -> Result<LatticeCount> {
    count_points(q, enumerate_norm(q.norm(), q.x_bound)?)
}

/// Primitive `x` whose elementary divisors at every prime match the label.
pub fn matches_label(p: &LatticePoint, label: [u64; 3]) -> bool {
    if content(&p.x).abs() != 1 || p.abs_det != label.iter().product::<u64>() {
        return false;
    }
    p.smith.iter().all(|(&q, s)| {
        let mut v = label.map(|a| valuation_u64(a, q));
        v.sort_by(|a, b| b.cmp(a));
        v == *s
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LabelCount {
    pub count: u64,
    /// `L(g, abc, κ)` from the same enumeration.
    pub count_l: u64,
    pub log_failures: u64,
}

/// `M(g, a, b, c, κ)`, checked against `L(g, abc, κ)` from the same enumeration.
pub fn count_m(q: &LatticeQuery) -> Result<LabelCount> {
    let Target::Label(label) = q.target else {
        return Err(Error::InvalidInput("count_M needs a label query".into()));
    };
    let l = count_l(q)?;
    let count = l.witnesses.iter().filter(|w| matches_label(&w.point, label)).count() as u64;
    if count > l.count {
        return Err(Error::Invariant(format!("M = {count} exceeds L = {}", l.count)));
    }
    Ok(LabelCount { count, count_l: l.count, log_failures: l.log_failures })
}

/// Number of divisors of `n`.
pub fn divisor_count(n: u64) -> u64 {
    (1..=n).filter(|d| n.is_multiple_of(*d)).count() as u64
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthRow {
    pub n: u64,
    pub count: u64,
    pub divisors: u64,
}

/// `n ↦ L(g, n, κ)` for `n ≤ n_max`, and the smallest `c` with `L ≤ c·d(n)²` on the table.
pub fn witness_growth(g: &GroupElement, kappa: f64, x_bound: i64, n_max: u64) -> Result<(Vec<GrowthRow>, f64)> {
    let mut rows = Vec::new();
    let mut c: f64 = 0.0;
    for n in 1..=n_max {
        let q = LatticeQuery::new(*g, Target::Norm(n), kappa, x_bound)?;
        let count = count_l(&q)?.count;
        let d = divisor_count(n);
        c = c.max(count as f64 / (d * d) as f64);
        rows.push(GrowthRow { n, count, divisors: d });
    }
    Ok((rows, c))
}
