//! Geometry near the flat `M·exp(𝔞)`: distances, the maps `k ↦ k(kg)`,
//! derivatives of the `A`-projection, and the Kostant-type inequalities.

use super::{iwasawa_a, k_part, killing, logm, m_elements, CartanCovec, CartanVec, GroupElement, Mat3, Root, RotationElement};
use crate::{Error, Result};

/// Nelder–Mead in two variables.
pub(crate) fn nelder_mead2<F: FnMut([f64; 2]) -> f64>(mut f: F, x0: [f64; 2], step: f64, tol: f64, max_iter: usize) -> ([f64; 2], f64) {
    let mut s = [x0, [x0[0] + step, x0[1]], [x0[0], x0[1] + step]];
    let mut v = [f(s[0]), f(s[1]), f(s[2])];
    for _ in 0..max_iter {
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        s = [s[idx[0]], s[idx[1]], s[idx[2]]];
        v = [v[idx[0]], v[idx[1]], v[idx[2]]];
        let size = (0..2).map(|i| (s[1][i] - s[0][i]).abs().max((s[2][i] - s[0][i]).abs())).fold(0.0, f64::max);
        if size < tol {
            break;
        }
        let c = [(s[0][0] + s[1][0]) / 2.0, (s[0][1] + s[1][1]) / 2.0];
        let at = |t: f64| [c[0] + t * (s[2][0] - c[0]), c[1] + t * (s[2][1] - c[1])];
        let xr = at(-1.0);
        let fr = f(xr);
        if fr < v[0] {
            let xe = at(-2.0);
            let fe = f(xe);
            if fe < fr {
                s[2] = xe;
                v[2] = fe;
            } else {
                s[2] = xr;
                v[2] = fr;
            }
        } else if fr < v[1] {
            s[2] = xr;
            v[2] = fr;
        } else {
            let xc = if fr < v[2] { at(-0.5) } else { at(0.5) };
            let fc = f(xc);
            if fc < v[2].min(fr) {
                s[2] = xc;
                v[2] = fc;
            } else {
                for i in 1..3 {
                    s[i] = [(s[i][0] + s[0][0]) / 2.0, (s[i][1] + s[0][1]) / 2.0];
                    v[i] = f(s[i]);
                }
            }
        }
    }
    let best = (0..3).min_by(|&a, &b| v[a].total_cmp(&v[b])).unwrap();
    (s[best], v[best])
}

/// `min_{m ∈ M, H ∈ 𝔞} ‖log(exp(−H) m⁻¹ g)‖`.
///
/// Elements `m` for which the logarithm fails are skipped; if it fails for all four
/// the distance is undefined.
pub fn dist_to_ma(g: &Mat3) -> Result<f64> {
    let mut best: Option<f64> = None;
    for m in m_elements() {
        let y = m.transpose() * g;
        let Ok(l) = logm(&y) else { continue };
        let h0 = CartanVec::project([l[(0, 0)], l[(1, 1)], l[(2, 2)]]);
        let f0 = logm(&(h0.scale(-1.0).exp() * y)).map(|x| x.norm()).unwrap_or(f64::INFINITY);
        let objective = |c: [f64; 2]| {
            let h = CartanVec::from_coords(c[0], c[1]);
            logm(&(h.scale(-1.0).exp() * y)).map(|x| x.norm()).unwrap_or(f64::INFINITY)
        };
        let (_, v) = if f0 < 1e-13 { (h0.coords(), f0) } else { nelder_mead2(objective, h0.coords(), 0.05 * (1.0 + f0), 1e-11, 400) };
        let v = v.min(f0);
        if v.is_finite() {
            best = Some(best.map_or(v, |b: f64| b.min(v)));
        }
    }
    best.ok_or_else(|| Error::LogUndefined("logarithm undefined for every coset m·g".into()))
}

/// `Φ_g(k) = k(kg)`.
pub fn iwasawa_k_map(g: &GroupElement, k: &RotationElement) -> Result<RotationElement> {
    k_part(&(k.matrix() * g.matrix()))
}

/// The inverse of `Φ_g`: the `k₁` with `k₁ g⁻¹ ∈ NA·k₀`.
pub fn iwasawa_k_map_inverse(g: &GroupElement, k0: &RotationElement) -> Result<RotationElement> {
    k_part(&(k0.matrix() * g.inverse().matrix()))
}

/// How far `Φ_g(k) g⁻¹ k⁻¹` is from being upper triangular with positive diagonal.
pub fn k_map_residual(g: &GroupElement, k: &RotationElement, phi: &RotationElement) -> f64 {
    let r = phi.matrix() * g.inverse().matrix() * k.inverse().matrix();
    let lower = (r[(1, 0)].powi(2) + r[(2, 0)].powi(2) + r[(2, 1)].powi(2)).sqrt();
    let neg = (0..3).map(|i| (-r[(i, i)]).max(0.0)).sum::<f64>();
    lower + neg
}

/// `⟨H₁, Ad(k(g)) H₂⟩`, the derivative of `⟨H₁, A(g exp(sH₂))⟩` at `s = 0`.
pub fn a_derivative(g: &GroupElement, h1: &CartanVec, h2: &CartanVec) -> Result<f64> {
    let k = k_part(g.matrix())?;
    let km = k.matrix();
    Ok(killing(&h1.matrix(), &(km * h2.matrix() * km.transpose())))
}

/// Central difference of `⟨H₁, A(g exp(sH₂))⟩` at `s = 0`.
pub fn a_derivative_fd(g: &GroupElement, h1: &CartanVec, h2: &CartanVec, step: f64) -> f64 {
    let f = |s: f64| h1.killing(&iwasawa_a(&(g.matrix() * h2.scale(s).exp())));
    (f(step) - f(-step)) / (2.0 * step)
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct XkpsiReport {
    pub value: f64,
    pub psi: f64,
    /// `δ_{αβ} ⟨α,ν⟩ ψ_S(x) / 2`
    pub with_psi: f64,
    /// `δ_{αβ} ⟨α,ν⟩ / 2`
    pub without_psi: f64,
    pub matches_with_psi: bool,
    pub matches_without_psi: bool,
    /// Disagreement between the step `h` and `h/2` estimates, relative.
    pub step_gap: f64,
    pub unreliable: bool,
}

impl XkpsiReport {
    pub fn matches_exactly_one(&self) -> bool {
        self.matches_with_psi != self.matches_without_psi
    }
}

fn matches(v: f64, c: f64) -> bool {
    (v - c).abs() <= 1e-4 * v.abs().max(c.abs()) + 1e-7
}

/// `X_α K_β ψ(x)` for `ψ(x) = ν(A(x))` and `x = exp(H)`, where `(Y f)(x) = d/ds f(exp(sY)x)`,
/// by nested central differences with Richardson extrapolation.
pub fn xkpsi_check(alpha: Root, beta: Root, nu: &CartanCovec, h: &CartanVec) -> Result<XkpsiReport> {
    if !alpha.is_positive() || !beta.is_positive() {
        return Err(Error::InvalidInput("roots must be positive".into()));
    }
    let x = h.exp();
    let (xa, kb) = (alpha.root_vector(), beta.compact_vector());
    let f = |u: f64, s: f64| nu.eval(&iwasawa_a(&((kb * u).exp() * (xa * s).exp() * x)));
    let mixed = |d: f64| (f(d, d) - f(d, -d) - f(-d, d) + f(-d, -d)) / (4.0 * d * d);
    let step = 1e-3;
    let (d1, d2) = (mixed(step), mixed(step / 2.0));
    let value = (4.0 * d2 - d1) / 3.0;
    let step_gap = (d1 - d2).abs() / value.abs().max(1e-12);
    let psi = nu.eval(h);
    let delta = if alpha == beta { 1.0 } else { 0.0 };
    let base = delta * alpha.pairing(nu) / 2.0;
    let (with_psi, without_psi) = (base * psi, base);
    Ok(XkpsiReport {
        value,
        psi,
        with_psi,
        without_psi,
        matches_with_psi: matches(value, with_psi),
        matches_without_psi: matches(value, without_psi),
        step_gap,
        unreliable: !value.is_finite() || (step_gap > 1e-3 && value.abs() > 1e-6),
    })
}

/// `⟨H_ν, H_ν⟩ − ⟨H_ν, Ad(k) H_ν⟩`, nonnegative with equality exactly on `M` for regular `ν`.
pub fn kostant_gap(nu: &CartanCovec, k: &RotationElement) -> f64 {
    let h = nu.dual().matrix();
    let km = k.matrix();
    killing(&h, &h) - killing(&h, &(km * h * km.transpose()))
}

/// `(⟨H_ν,H_ν⟩ − ⟨H_ν, e^{ad X} H_ν⟩) / ‖X‖²` for antisymmetric `X`.
pub fn hessian_ratio(nu: &CartanCovec, x: &Mat3) -> f64 {
    let h = nu.dual().matrix();
    let e = x.exp();
    (killing(&h, &h) - killing(&h, &(e * h * e.transpose()))) / x.norm_squared()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{random_cartan, random_traceless, POSITIVE_ROOTS};

    #[test]
    fn distance_zero_on_flat() {
        let mut rng = crate::rng::stream(21, "dist");
        for _ in 0..20 {
            let h = random_cartan(&mut rng, 1.0);
            for m in m_elements() {
                let d = dist_to_ma(&(m * h.exp())).unwrap();
                assert!(d <= 1e-8, "{d}");
            }
        }
    }

    #[test]
    fn distance_first_order() {
        for a in POSITIVE_ROOTS {
            for eps in [1e-2, 1e-3] {
                let k = a.compact_vector();
                let d = dist_to_ma(&(k * eps).exp()).unwrap();
                let expected = eps * k.norm();
                assert!((d - expected).abs() <= 0.05 * expected, "{d} {expected}");
            }
        }
    }

    #[test]
    fn distance_left_m_invariant() {
        let mut rng = crate::rng::stream(22, "dist-m");
        for _ in 0..10 {
            let g = random_traceless(&mut rng, 0.4).exp();
            let d = dist_to_ma(&g).unwrap();
            for m in m_elements() {
                assert!((dist_to_ma(&(m * g)).unwrap() - d).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn k_map_fixes_m_on_na() {
        let mut rng = crate::rng::stream(23, "mphi");
        for _ in 0..20 {
            let mut n = random_traceless(&mut rng, 1.0);
            for i in 0..3 {
                for j in 0..=i {
                    n[(i, j)] = 0.0;
                }
            }
            let g = GroupElement::new(n.exp() * random_cartan(&mut rng, 1.0).exp()).unwrap();
            for m in m_elements() {
                let mk = RotationElement::new(m).unwrap();
                let phi = iwasawa_k_map(&g, &mk).unwrap();
                assert!((phi.matrix() - m).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn k_map_inverse_and_residual() {
        let mut rng = crate::rng::stream(24, "phi-inv");
        for _ in 0..100 {
            let g = GroupElement::exp_of(&random_traceless(&mut rng, 0.8)).unwrap();
            let k0 = RotationElement::random(&mut rng);
            let k1 = iwasawa_k_map_inverse(&g, &k0).unwrap();
            let back = iwasawa_k_map(&g, &k1).unwrap();
            assert!((back.matrix() - k0.matrix()).norm() < 1e-8);
            assert!(k_map_residual(&g, &k1, &back) < 1e-9);
        }
        let g = GroupElement::identity();
        let k = RotationElement::random(&mut rng);
        assert!((iwasawa_k_map(&g, &k).unwrap().matrix() - k.matrix()).norm() < 1e-12);
    }

    #[test]
    fn a_derivative_against_difference() {
        let mut rng = crate::rng::stream(25, "adiff");
        for _ in 0..100 {
            let g = GroupElement::exp_of(&random_traceless(&mut rng, 0.8)).unwrap();
            let (h1, h2) = (random_cartan(&mut rng, 1.0), random_cartan(&mut rng, 1.0));
            let a = a_derivative(&g, &h1, &h2).unwrap();
            let fd = a_derivative_fd(&g, &h1, &h2, 1e-5);
            assert!((a - fd).abs() <= 1e-6 * a.abs().max(1.0), "{a} {fd}");
        }
        let (h1, h2) = (random_cartan(&mut rng, 1.0), random_cartan(&mut rng, 1.0));
        let a = a_derivative(&GroupElement::identity(), &h1, &h2).unwrap();
        assert!((a - h1.killing(&h2)).abs() < 1e-14);
    }

    #[test]
    fn xkpsi_off_diagonal_vanishes_and_is_linear() {
        let nu = CartanCovec::new([0.9, 0.1, -1.0]);
        let h = CartanVec::new([0.3, -0.5, 0.2]).unwrap();
        for a in POSITIVE_ROOTS {
            for b in POSITIVE_ROOTS {
                let r = xkpsi_check(a, b, &nu, &h).unwrap();
                if a != b {
                    assert!(r.value.abs() < 1e-5, "{:?}", r);
                } else {
                    let r2 = xkpsi_check(a, b, &nu.scale(2.0), &h).unwrap();
                    assert!((r2.value - 2.0 * r.value).abs() < 1e-7);
                }
            }
        }
    }

    #[test]
    fn kostant_and_hessian_basic() {
        let nu = CartanCovec::new([1.0, 0.2, -1.2]);
        for m in m_elements() {
            assert!(kostant_gap(&nu, &RotationElement::new(m).unwrap()).abs() < 1e-14);
        }
        let x = Root { i: 0, j: 2 }.compact_vector() * 0.01;
        assert!(hessian_ratio(&nu, &x) > 0.0);
    }
}
