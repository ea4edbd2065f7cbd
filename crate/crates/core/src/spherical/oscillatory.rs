//! Oscillatory integrals over one or two copies of the flat, the one-dimensional
//! integration-by-parts model, and log-log slope fits of their decay in `t`.

use super::bump::{normalized_transform, Bump1d, BumpFunction};
use super::function::SphericalTable;
use super::kernel::KernelFunction;
use super::quadrature::{a_from_logs, gauss_legendre};
use super::Estimate;
use crate::lie::{cartan_projection, dist_to_ma, iwasawa_of, sym3_eigenvalues, CartanCovec, CartanVec, GroupElement, Mat3, RotationElement};
use crate::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Fourier radius, in units of the inverse bump radius, beyond which the mollifier
/// transform is below `1e−13`; sets the trapezoidal step of bump-weighted sums.
const ALIAS: f64 = 400.0;

/// The same for line sums, where the transform decays only like `exp(−√(2ρ))`.
const ALIAS_LINE: f64 = 1500.0;

/// The same for the four-dimensional rules, where the transform is below `2e−9`.
const ALIAS_PAIR: f64 = 200.0;

/// Largest `t` accepted by the four-dimensional integrals.
pub const MAX_T: f64 = 64.0;

/// Largest lattice side accepted by a single quadrature.
const MAX_SIDE: usize = 1 << 14;

fn budget(side: usize) -> Result<()> {
    if side > MAX_SIDE {
        return Err(Error::Budget(format!("quadrature lattice of side {side} exceeds {MAX_SIDE}")));
    }
    Ok(())
}

/// Trapezoidal step for a bump of radius `r` carrying phases of bandwidth `freq`.
fn step_for(freq: f64, r: f64) -> f64 {
    2.0 * PI / (freq + ALIAS / r)
}

fn pair_step_for(freq: f64, r: f64) -> f64 {
    2.0 * PI / (freq + ALIAS_PAIR / r)
}

/// Lattice nodes of step `s` through the center of `b` where `b > 0`, as
/// `(H, b(H) s², (i, j))`.
fn bump_nodes(b: &BumpFunction, s: f64) -> Result<Vec<(CartanVec, f64, [i64; 2])>> {
    let m = (b.radius() / s).ceil() as i64;
    budget(2 * m as usize + 1)?;
    let [cx, cy] = b.center().coords();
    let mut out = Vec::new();
    for i in -m..=m {
        for j in -m..=m {
            let h = CartanVec::from_coords(cx + i as f64 * s, cy + j as f64 * s);
            let v = b.value(&h);
            if v > 0.0 {
                out.push((h, v * s * s, [i, j]));
            }
        }
    }
    Ok(out)
}

/// `A(κ exp H)` from the squared first and third rows of `κ`.
fn a_of_rows(k1: &[f64; 3], k3: &[f64; 3], h: &CartanVec) -> [f64; 3] {
    let v = h.h();
    let d1: f64 = (0..3).map(|j| k1[j] * (-2.0 * v[j]).exp()).sum();
    let d3: f64 = (0..3).map(|j| k3[j] * (2.0 * v[j]).exp()).sum();
    a_from_logs(d1.ln(), d3.ln())
}

fn squared_rows(k: &Mat3) -> ([f64; 3], [f64; 3]) {
    ([0, 1, 2].map(|j| k[(0, j)].powi(2)), [0, 1, 2].map(|j| k[(2, j)].powi(2)))
}

fn is_na(g: &Mat3) -> bool {
    let tol = 1e-12 * g.norm();
    g[(1, 0)].abs() <= tol && g[(2, 0)].abs() <= tol && g[(2, 1)].abs() <= tol && (0..3).all(|i| g[(i, i)] > 0.0)
}

fn is_diagonal(g: &Mat3) -> bool {
    let tol = 1e-14 * g.norm();
    (0..3).all(|i| (0..3).all(|j| i == j || g[(i, j)].abs() <= tol)) && (0..3).all(|i| g[(i, i)] > 0.0)
}

/// Rotation by `angle` about `axis`.
pub fn rotation_at_angle(angle: f64, axis: [f64; 3]) -> Result<RotationElement> {
    let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    if !(n > 0.0) {
        return Err(Error::InvalidInput("rotation axis must be nonzero".into()));
    }
    let [x, y, z] = axis.map(|a| a * angle / n);
    RotationElement::exp_of(&Mat3::new(0.0, -z, y, z, 0.0, -x, -y, x, 0.0))
}

/// `exp(sX)` with `s ≥ 0` chosen by bisection so that `dist_to_ma(exp(sX)) = d`.
pub fn element_at_distance(d: f64, x: &Mat3) -> Result<GroupElement> {
    if !(d > 0.0) {
        return Err(Error::InvalidInput(format!("target distance {d} must be positive")));
    }
    let dist = |s: f64| -> Result<f64> { dist_to_ma(GroupElement::exp_of(&(x * s))?.matrix()) };
    let mut hi = d / x.norm().max(1e-300);
    while dist(hi)? < d {
        hi *= 2.0;
        if hi * x.norm() > 10.0 {
            return Err(Error::InvalidInput(format!("distance {d} is not reached along this direction")));
        }
    }
    let mut lo = 0.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if dist(mid)? < d {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    GroupElement::exp_of(&(x * (0.5 * (lo + hi))))
}

/// `∫_𝔞 b(H) exp(−itλ(H) + itν(A(k g exp H))) dH` for `g ∈ NA`, by the trapezoidal rule
/// on a lattice resolving the sampled phase gradient, doubled once.
pub fn oscillatory_aint1(t: f64, lambda: &CartanCovec, nu: &CartanCovec, k: &RotationElement, g: &GroupElement, b: &BumpFunction, tol: f64) -> Result<Estimate> {
    if !is_na(g.matrix()) {
        return Err(Error::InvalidInput("g must be upper triangular with positive diagonal".into()));
    }
    let iw = iwasawa_of(&(k.matrix() * g.matrix()))?;
    let a0 = iw.a.h();
    let (k1, k3) = squared_rows(iw.k.matrix());
    let m = nu.nu();
    let phase = |h: &CartanVec| {
        let a = a_of_rows(&k1, &k3, h);
        t * ((0..3).map(|i| m[i] * (a0[i] + a[i])).sum::<f64>() - lambda.eval(h))
    };
    let r = b.radius();
    let [cx, cy] = b.center().coords();
    let probe = 32;
    let ds = 2.0 * r / probe as f64;
    let mut grad = 0.0f64;
    for i in 0..=probe {
        for j in 0..=probe {
            let h = CartanVec::from_coords(cx - r + i as f64 * ds, cy - r + j as f64 * ds);
            let p = phase(&h);
            let gx = (phase(&CartanVec::from_coords(cx - r + i as f64 * ds + 1e-6, cy - r + j as f64 * ds)) - p) / 1e-6;
            let gy = (phase(&CartanVec::from_coords(cx - r + i as f64 * ds, cy - r + j as f64 * ds + 1e-6)) - p) / 1e-6;
            grad = grad.max(gx.hypot(gy));
        }
    }
    let sum = |s: f64| -> Result<Complex64> { Ok(bump_nodes(b, s)?.iter().map(|(h, w, _)| Complex64::from_polar(*w, phase(h))).sum()) };
    let s = step_for(1.25 * grad + 4.0, r);
    let coarse = sum(s)?;
    let fine = sum(0.5 * s)?;
    let est = Estimate { value: fine, error: (fine - coarse).norm() };
    if est.error > tol {
        return Err(Error::Resolution(format!("aint1 changed by {:.2e} under doubling", est.error)));
    }
    Ok(est)
}

/// Radius containing the Cartan projections of `exp(−H₁) g exp(H₂)` for `H_i ∈ supp(b_i)`.
fn reach(b1: &BumpFunction, b2: &BumpFunction, g: &GroupElement) -> Result<f64> {
    Ok(b1.center().norm() + b1.radius() + b2.center().norm() + b2.radius() + cartan_projection(g.matrix())?.norm())
}

/// `Σ_{H₁, H₂} w₁(H₁) w₂(H₂) f(exp(−H₁) g exp(H₂))` over the two bump lattices.
///
/// For `g ∈ A` the argument is `exp(log a + H₂ − H₁)` and the sum runs over the lattice of
/// differences; otherwise the Cartan coordinates come from the eigenvalues of
/// `E₁ (g e^{2H₂} gᵀ) E₁` with `E₁ = exp(−H₁)`.
fn pair_sum<F>(g: &GroupElement, n1: &[(CartanVec, Complex64, [i64; 2])], s1: f64, n2: &[(CartanVec, Complex64, [i64; 2])], s2: f64, c: [CartanVec; 2], f: &F) -> Result<Complex64>
where
    F: Fn(&CartanVec) -> Result<Complex64> + Sync,
{
    let gm = g.matrix();
    if is_diagonal(gm) {
        let s = s1.min(s2);
        let (p1, p2) = ((s1 / s).round() as i64, (s2 / s).round() as i64);
        if ((s1 / s) - p1 as f64).abs() < 1e-9 && ((s2 / s) - p2 as f64).abs() < 1e-9 {
            let log_a = CartanVec::project([gm[(0, 0)].ln(), gm[(1, 1)].ln(), gm[(2, 2)].ln()]);
            let base = log_a.add(&c[1]).sub(&c[0]);
            let m1 = n1.iter().map(|n| n.2[0].abs().max(n.2[1].abs())).max().unwrap_or(0) * p1;
            let m2 = n2.iter().map(|n| n.2[0].abs().max(n.2[1].abs())).max().unwrap_or(0) * p2;
            let half = m1 + m2;
            let side = (2 * half + 1) as usize;
            budget(side)?;
            let mut corr = vec![Complex64::new(0.0, 0.0); side * side];
            for (_, w1, [i1, j1]) in n1 {
                for (_, w2, [i2, j2]) in n2 {
                    let (di, dj) = (p2 * i2 - p1 * i1 + half, p2 * j2 - p1 * j1 + half);
                    corr[di as usize * side + dj as usize] += w1 * w2;
                }
            }
            let [bx, by] = base.coords();
            let rows: Vec<Complex64> = (0..side)
                .into_par_iter()
                .map(|i| -> Result<Complex64> {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for j in 0..side {
                        let cv = corr[i * side + j];
                        if cv.norm() > 0.0 {
                            let d = CartanVec::from_coords(bx + (i as i64 - half) as f64 * s, by + (j as i64 - half) as f64 * s);
                            acc += cv * f(&d)?;
                        }
                    }
                    Ok(acc)
                })
                .collect::<Result<_>>()?;
            return Ok(rows.iter().sum());
        }
    }
    let rows: Vec<Complex64> = n2
        .par_iter()
        .map(|(h2, w2, _)| -> Result<Complex64> {
            let m = gm * (h2.scale(2.0)).exp() * gm.transpose();
            let mut acc = Complex64::new(0.0, 0.0);
            for (h1, w1, _) in n1 {
                let e = h1.h().map(|x| (-x).exp());
                let mut sm = m;
                for i in 0..3 {
                    for j in 0..3 {
                        sm[(i, j)] *= e[i] * e[j];
                    }
                }
                let ev = sym3_eigenvalues(&sm);
                let h = CartanVec::project(ev.map(|x| 0.5 * x.ln()));
                acc += w1 * f(&h)?;
            }
            Ok(acc * w2)
        })
        .collect::<Result<_>>()?;
    Ok(rows.iter().sum())
}

type Weight<'a> = &'a (dyn Fn(&CartanVec) -> Complex64 + Sync);

/// Four-dimensional trapezoidal rule with steps `s₁, s₂`, checked against the rule with one
/// step doubled, for each copy of the flat separately. The value is the base-grid sum; the
/// error is the sum of the two directional discrepancies, which bounds the coarse error.
#[allow(clippy::too_many_arguments)]
fn pair_quadrature<F>(g: &GroupElement, b1: &BumpFunction, w1: Weight, s1: f64, b2: &BumpFunction, w2: Weight, s2: f64, f: &F, tol: f64) -> Result<Estimate>
where
    F: Fn(&CartanVec) -> Result<Complex64> + Sync,
{
    let nodes = |b: &BumpFunction, w: Weight, s: f64| -> Result<Vec<(CartanVec, Complex64, [i64; 2])>> {
        Ok(bump_nodes(b, s)?.into_iter().map(|(h, bw, ij)| (h, w(&h) * bw, ij)).collect())
    };
    let c = [b1.center(), b2.center()];
    let (a1, a2) = (nodes(b1, w1, s1)?, nodes(b2, w2, s2)?);
    let base = pair_sum(g, &a1, s1, &a2, s2, c, f)?;
    let d1 = pair_sum(g, &nodes(b1, w1, 2.0 * s1)?, 2.0 * s1, &a2, s2, c, f)?;
    let d2 = pair_sum(g, &a1, s1, &nodes(b2, w2, 2.0 * s2)?, 2.0 * s2, c, f)?;
    let est = Estimate { value: base, error: (d1 - base).norm() + (d2 - base).norm() };
    if est.error > tol {
        return Err(Error::Resolution(format!("four-dimensional rule changed by {:.2e} under doubling", est.error)));
    }
    Ok(est)
}

/// `∬ b₁(H₁) b₂(H₂) e^{it(λ₁(H₁) − λ₂(H₂))} φ_{tν}(exp(−H₁) g exp(H₂)) dH₁ dH₂` with
/// `φ_{tν}` read from a table built here.
#[allow(clippy::too_many_arguments)]
pub fn oscillatory_aaint(t: f64, lambda1: &CartanCovec, lambda2: &CartanCovec, nu: &CartanCovec, g: &GroupElement, b1: &BumpFunction, b2: &BumpFunction, tol: f64) -> Result<Estimate> {
    if t > MAX_T {
        return Err(Error::Budget(format!("t = {t} exceeds the cap {MAX_T}")));
    }
    if cartan_projection(g.matrix())?.norm() > 1.0 {
        return Err(Error::InvalidInput("g must lie within distance 1 of the identity".into()));
    }
    let table = SphericalTable::build(nu.scale(t), reach(b1, b2, g)?, 1e-8)?;
    aaint_with_table(&table, t, lambda1, lambda2, g, b1, b2, tol)
}

/// [`oscillatory_aaint`] with a prebuilt table of `φ_{tν}`.
#[allow(clippy::too_many_arguments)]
pub fn aaint_with_table(table: &SphericalTable, t: f64, lambda1: &CartanCovec, lambda2: &CartanCovec, g: &GroupElement, b1: &BumpFunction, b2: &BumpFunction, tol: f64) -> Result<Estimate> {
    if table.radius() < reach(b1, b2, g)? {
        return Err(Error::Resolution("spherical table does not reach the integration domain".into()));
    }
    let freq = table.mu().norm();
    let w1 = |h: &CartanVec| Complex64::cis(t * lambda1.eval(h));
    let w2 = |h: &CartanVec| Complex64::cis(-t * lambda2.eval(h));
    let s1 = pair_step_for(t * lambda1.norm() + freq, b1.radius());
    let s2 = pair_step_for(t * lambda2.norm() + freq, b2.radius());
    pair_quadrature(g, b1, &w1, s1, b2, &w2, s2, &|h| table.eval_symmetric(h), tol)
}

/// A test function `φ(H) = e^{iξ₀(H)} ψ(H)` with `‖φ‖₂ = 1` whose Fourier transform is a
/// multiple of the mollifier bump of radius `β` about `ξ₀`.
#[derive(Clone, Debug, PartialEq)]
pub struct TestFunctionSpec {
    center: CartanCovec,
    beta: f64,
    envelope: BumpFunction,
    amplitude: f64,
}

/// `‖u‖₂` for the normalized unit-radius transform `u(|H|)`.
fn transform_l2() -> f64 {
    let s: f64 = gauss_legendre(2000, 0.0, 200.0).iter().map(|&(r, w)| w * r * normalized_transform(r).powi(2)).sum();
    (2.0 * PI * s).sqrt()
}

impl TestFunctionSpec {
    pub fn new(center: CartanCovec, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidInput(format!("bandwidth {beta} must be positive")));
        }
        let [x, y] = center.coords();
        let envelope = BumpFunction::new(CartanVec::from_coords(x, y), beta)?;
        Ok(TestFunctionSpec { center, beta, envelope, amplitude: beta / transform_l2() })
    }

    /// Centered at `t·wλ` with `1 ≤ β ≤ √t`.
    pub fn at_scale(t: f64, center: CartanCovec, beta: f64) -> Result<Self> {
        if !(1.0..=t.sqrt()).contains(&beta) {
            return Err(Error::InvalidInput(format!("bandwidth {beta} outside [1, √t] for t = {t}")));
        }
        Self::new(center, beta)
    }

    pub fn center(&self) -> CartanCovec {
        self.center
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// The Fourier-side profile.
    pub fn envelope(&self) -> &BumpFunction {
        &self.envelope
    }

    pub fn value(&self, h: &CartanVec) -> Complex64 {
        Complex64::from_polar(self.amplitude * normalized_transform(self.beta * h.norm()), self.center.eval(h))
    }

    /// `φ̂(ξ) = ∫ φ(H) e^{−iξ(H)} dH`.
    pub fn fourier(&self, xi: &CartanCovec) -> f64 {
        let [x, y] = xi.coords();
        (2.0 * PI).powi(2) * self.amplitude * self.envelope.value(&CartanVec::from_coords(x, y))
    }

    /// `‖φ̂‖₁`.
    pub fn fourier_l1(&self) -> f64 {
        (2.0 * PI).powi(2) * self.amplitude
    }
}

/// `I(t, φ, g) = ∬ bφ(H₁) \overline{bφ(H₂)} k(exp(−H₁) g exp(H₂)) dH₁ dH₂`, zero when
/// `g` lies farther than 1 from the identity. The kernel is tabulated over the needed
/// radius unless its table already covers it.
pub fn oscillatory_i(t: f64, phi: &TestFunctionSpec, g: &GroupElement, k: &KernelFunction, b: &BumpFunction, tol: f64) -> Result<Estimate> {
    if t > MAX_T {
        return Err(Error::Budget(format!("t = {t} exceeds the cap {MAX_T}")));
    }
    if cartan_projection(g.matrix())?.norm() > 1.0 {
        return Ok(Estimate { value: Complex64::new(0.0, 0.0), error: 0.0 });
    }
    let radius = reach(b, b, g)?;
    let owned;
    let k = match k.table() {
        Some(tab) if tab.radius() >= radius => k,
        _ => {
            let mut kk = k.clone();
            kk.tabulate(radius)?;
            owned = kk;
            &owned
        }
    };
    let w1 = |h: &CartanVec| phi.value(h);
    let w2 = |h: &CartanVec| phi.value(h).conj();
    let s = pair_step_for(phi.center().norm() + phi.beta() + k.bandwidth(), b.radius());
    pair_quadrature(g, b, &w1, s, b, &w2, s, &|h| k.value(h), tol)
}

/// `∫ b(x/δ) e^{itφ(x)} dx` by the trapezoidal rule, doubled once. Refuses phases with
/// `|φ′| < δ/2` at some lattice point of the support.
pub fn stationary_phase_1d<F, D>(b: &Bump1d, phase: F, dphase: D, t: f64, delta: f64, tol: f64) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidInput(format!("scale {delta} must lie in (0, 1]")));
    }
    let (lo, hi) = b.support();
    let (lo, hi) = (lo * delta, hi * delta);
    let probe = 512;
    let mut slope = 0.0f64;
    for i in 0..=probe {
        let x = lo + (hi - lo) * i as f64 / probe as f64;
        let d = dphase(x).abs();
        if d < 0.5 * delta {
            return Err(Error::InvalidInput(format!("|φ′({x:.4})| = {d:.3e} is below δ/2")));
        }
        slope = slope.max(d);
    }
    let r = b.radius() * delta;
    let sum = |s: f64| -> Result<Complex64> {
        let m = (r / s).ceil() as i64;
        budget(2 * m as usize + 1)?;
        let c = b.center() * delta;
        Ok((-m..=m)
            .map(|i| {
                let x = c + i as f64 * s;
                Complex64::from_polar(b.value(x / delta) * s, t * phase(x))
            })
            .sum())
    };
    let s = 2.0 * PI / (t * slope + 4.0 + ALIAS_LINE / r);
    let coarse = sum(s)?;
    let fine = sum(0.5 * s)?;
    let est = Estimate { value: fine, error: (fine - coarse).norm() };
    if est.error > tol {
        return Err(Error::Resolution(format!("one-dimensional rule changed by {:.2e} under doubling", est.error)));
    }
    Ok(est)
}

/// Least-squares slope of `log |v|` against `log t`.
pub fn fit_slope(ts: &[f64], values: &[f64]) -> Result<f64> {
    if ts.len() != values.len() || ts.len() < 3 {
        return Err(Error::InvalidInput("slope fit needs at least three (t, value) pairs".into()));
    }
    if ts.iter().chain(values).any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::InvalidInput("slope fit needs positive finite data".into()));
    }
    let xs: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return Err(Error::InvalidInput("slope fit needs distinct t values".into()));
    }
    Ok(sxy / sxx)
}

/// A `t`-sweep of an oscillatory integral.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OscillatoryReport {
    pub t: Vec<f64>,
    pub abs_values: Vec<f64>,
    pub errors: Vec<f64>,
    pub slope: f64,
    /// Exponent `p` of the envelope `|v|·t^p`.
    pub envelope_power: f64,
    /// `max/min` of `|v|·t^p` over the sweep.
    pub envelope_ratio: f64,
}

impl OscillatoryReport {
    pub fn new(ts: &[f64], estimates: &[Estimate], envelope_power: f64) -> Result<Self> {
        let abs_values: Vec<f64> = estimates.iter().map(|e| e.value.norm()).collect();
        let slope = fit_slope(ts, &abs_values)?;
        let env: Vec<f64> = ts.iter().zip(&abs_values).map(|(t, v)| v * t.powf(envelope_power)).collect();
        let envelope_ratio = env.iter().cloned().fold(0.0, f64::max) / env.iter().cloned().fold(f64::INFINITY, f64::min);
        Ok(OscillatoryReport { t: ts.to_vec(), abs_values, errors: estimates.iter().map(|e| e.error).collect(), slope, envelope_power, envelope_ratio })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::m_elements;

    fn nu0() -> CartanCovec {
        let v = CartanCovec::new([1.0, 0.35, -1.35]);
        v.scale(1.0 / v.norm())
    }

    #[test]
    fn aint1_baseline_is_the_bump_mass() {
        let b = BumpFunction::new(CartanVec::from_coords(0.05, -0.1), 0.4).unwrap();
        for t in [8.0, 64.0] {
            for m in m_elements() {
                let k = RotationElement::new(m).unwrap();
                let v = oscillatory_aint1(t, &nu0().scale(30.0), &nu0().scale(30.0), &k, &GroupElement::identity(), &b, 1e-10).unwrap();
                assert!((v.value - 1.0).norm() < 1e-8, "{}", v.value);
            }
        }
    }

    #[test]
    fn aint1_is_left_m_invariant() {
        let b = BumpFunction::centered(0.5).unwrap();
        let k = rotation_at_angle(0.4, [0.3, -1.0, 0.5]).unwrap();
        let g = GroupElement::new(Mat3::new(1.2, 0.3, -0.2, 0.0, 0.9, 0.4, 0.0, 0.0, 1.0 / 1.08)).unwrap();
        let lam = nu0().scale(5.0);
        let base = oscillatory_aint1(16.0, &lam, &lam, &k, &g, &b, 1e-9).unwrap().value;
        for m in m_elements() {
            let mk = RotationElement::new(m * k.matrix()).unwrap();
            let v = oscillatory_aint1(16.0, &lam, &lam, &mk, &g, &b, 1e-9).unwrap().value;
            assert!((v - base).norm() < 1e-8);
        }
        assert!(oscillatory_aint1(16.0, &lam, &lam, &k, &GroupElement::new(m_elements()[1]).unwrap(), &b, 1e-9).is_err());
    }

    #[test]
    fn aint1_off_m_matches_direct_iwasawa() {
        // Against the Iwasawa decomposition of k g exp(H) at every node of a fine lattice.
        let b = BumpFunction::centered(0.3).unwrap();
        let k = rotation_at_angle(0.5, [1.0, 0.2, -0.4]).unwrap();
        let g = GroupElement::new(Mat3::new(1.1, 0.2, 0.1, 0.0, 1.0, -0.3, 0.0, 0.0, 1.0 / 1.1)).unwrap();
        let (t, lam, nu) = (10.0, nu0().scale(2.0), nu0().scale(3.0));
        let v = oscillatory_aint1(t, &lam, &nu, &k, &g, &b, 1e-10).unwrap().value;
        let s = 0.004;
        let mut direct = Complex64::new(0.0, 0.0);
        for (h, w, _) in bump_nodes(&b, s).unwrap() {
            let a = crate::lie::iwasawa_a(&(k.matrix() * g.matrix() * h.exp()));
            direct += Complex64::from_polar(w, t * (nu.eval(&a) - lam.eval(&h)));
        }
        assert!((v - direct).norm() < 1e-9, "{v} vs {direct}");
    }

    #[test]
    fn slope_fit_recovers_power_laws() {
        let ts = [8.0, 16.0, 32.0, 64.0];
        let vs: Vec<f64> = ts.iter().map(|t: &f64| 3.0 * t.powf(-2.5)).collect();
        assert!((fit_slope(&ts, &vs).unwrap() + 2.5).abs() < 1e-12);
        assert!(fit_slope(&ts[..2], &vs[..2]).is_err());
        assert!(fit_slope(&ts, &[1.0, 0.0, 1.0, 1.0]).is_err());
        let ests: Vec<Estimate> = vs.iter().map(|v| Estimate { value: Complex64::new(0.0, *v), error: 0.0 }).collect();
        let rep = OscillatoryReport::new(&ts, &ests, 2.5).unwrap();
        assert!((rep.envelope_ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn linear_phase_gives_scaled_fourier_coefficient() {
        let b = Bump1d::new(0.1, 0.8).unwrap();
        for (t, delta) in [(5.0, 1.0), (40.0, 0.3), (400.0, 0.05)] {
            let v = stationary_phase_1d(&b, |x| delta * x, |_| delta, t, delta, 1e-12).unwrap().value;
            let want = b.fourier(-t * delta * delta) * delta;
            assert!((v - want).norm() < 1e-11, "{v} vs {want}");
        }
        assert!(stationary_phase_1d(&b, |x| x * x, |x| 2.0 * x, 10.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn unit_phase_decays_faster_than_cube() {
        let b = Bump1d::new(0.0, 1.0).unwrap();
        let ts = [10.0, 100.0, 1000.0];
        let vs: Vec<f64> = ts.iter().map(|&t| stationary_phase_1d(&b, |x| x, |_| 1.0, t, 1.0, 1e-12).unwrap().value.norm().max(1e-300)).collect();
        assert!(vs[1] < vs[0] * 1e-3 && vs[2] < vs[1] * 1e-3, "{vs:?}");
    }

    #[test]
    fn fixed_t_delta_squared_keeps_value_over_delta() {
        let b = Bump1d::new(0.0, 0.25).unwrap();
        let mut r = Vec::new();
        for t in [16.0, 64.0, 256.0, 1024.0] {
            let d = 1.0 / f64::sqrt(t);
            let v = stationary_phase_1d(&b, |x| d * x + x * x, |x| d + 2.0 * x, t, d, 1e-12).unwrap();
            r.push(v.value.norm() / d);
        }
        let (lo, hi) = (r.iter().cloned().fold(f64::INFINITY, f64::min), r.iter().cloned().fold(0.0, f64::max));
        assert!(hi / lo < 2.0, "{r:?}");
    }

    #[test]
    fn test_function_is_normalized() {
        let phi = TestFunctionSpec::new(CartanCovec::from_coords(3.0, 1.0), 2.0).unwrap();
        let s = 0.04;
        let mut l2 = 0.0;
        for i in -1000..=1000 {
            for j in -1000..=1000 {
                l2 += phi.value(&CartanVec::from_coords(i as f64 * s, j as f64 * s)).norm_sqr() * s * s;
            }
        }
        assert!((l2 - 1.0).abs() < 1e-6, "{l2}");
        assert_eq!(phi.fourier(&CartanCovec::from_coords(3.0, 3.0001)), 0.0);
        assert!(phi.fourier(&CartanCovec::from_coords(3.0, 2.9)) > 0.0);
        assert!(TestFunctionSpec::at_scale(16.0, CartanCovec::ZERO, 5.0).is_err());
    }

    #[test]
    fn element_at_distance_hits_target() {
        let x = Mat3::new(0.0, 1.0, 0.3, -1.0, 0.0, 0.5, -0.3, -0.5, 0.0);
        let g = element_at_distance(0.3, &x).unwrap();
        assert!((dist_to_ma(g.matrix()).unwrap() - 0.3).abs() < 1e-9);
    }

    #[test]
    fn pair_sum_fast_path_matches_general_path() {
        let b1 = BumpFunction::new(CartanVec::from_coords(0.05, 0.0), 0.2).unwrap();
        let b2 = BumpFunction::new(CartanVec::from_coords(-0.02, 0.03), 0.25).unwrap();
        let f = |h: &CartanVec| -> Result<Complex64> {
            let d = h.dominant().coords();
            Ok(Complex64::new((3.0 * d[0]).cos(), d[1] * d[0]))
        };
        let w = |h: &CartanVec, c: f64| Complex64::from_polar(1.0, c * h.coords()[0]);
        let nodes = |b: &BumpFunction, s: f64, c: f64| -> Vec<(CartanVec, Complex64, [i64; 2])> { bump_nodes(b, s).unwrap().into_iter().map(|(h, v, ij)| (h, w(&h, c) * v, ij)).collect() };
        let g = GroupElement::new(Mat3::from_diagonal(&nalgebra::Vector3::new(1.1, 1.0, 1.0 / 1.1))).unwrap();
        let (n1, n2) = (nodes(&b1, 0.02, 2.0), nodes(&b2, 0.01, -1.0));
        let c = [b1.center(), b2.center()];
        let fast = pair_sum(&g, &n1, 0.02, &n2, 0.01, c, &f).unwrap();
        // A tiny off-diagonal entry forces the general path.
        let mut m = *g.matrix();
        m[(0, 1)] = 1e-13;
        let slow = pair_sum(&GroupElement::new(m).unwrap(), &n1, 0.02, &n2, 0.01, c, &f).unwrap();
        assert!((fast - slow).norm() < 1e-9, "{fast} vs {slow}");
    }

    #[test]
    fn aaint_conjugate_symmetry() {
        let (t, nu) = (8.0, nu0());
        let b1 = BumpFunction::centered(0.25).unwrap();
        let b2 = BumpFunction::new(CartanVec::from_coords(0.03, -0.02), 0.2).unwrap();
        let x = Mat3::new(0.0, 1.0, 0.3, -1.0, 0.0, 0.5, -0.3, -0.5, 0.0);
        let g = element_at_distance(0.2, &x).unwrap();
        let (l1, l2) = (nu, nu.add(&CartanCovec::from_coords(0.05, 0.0)));
        let table = SphericalTable::build(nu.scale(t), reach(&b1, &b2, &g).unwrap(), 1e-8).unwrap();
        let a = aaint_with_table(&table, t, &l1, &l2, &g, &b1, &b2, 1e-6).unwrap().value;
        let b = aaint_with_table(&table, t, &l2, &l1, &g.inverse(), &b2, &b1, 1e-6).unwrap().value;
        assert!((a - b.conj()).norm() < 1e-8, "{a} vs {b}");
    }
}
