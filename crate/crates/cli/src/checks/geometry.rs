//! Checks on `SL(3,R)`: Iwasawa coordinates and derivatives, Kostant and Hessian
//! inequalities, and the `X_α K_β ψ` arbitration.

use crate::report::Record;
use crate::Result;
use flatamp::lie::{
    a_derivative, a_derivative_fd, iwasawa, iwasawa_k_map, kostant_gap, hessian_ratio, m_elements, random_cartan, random_traceless, xkpsi_check,
    CartanCovec, GroupElement, Mat3, RotationElement, POSITIVE_ROOTS,
};
use flatamp::rng;
use rand::Rng;
use serde_json::json;

/// Criterion 7 with the stated sample sizes.
pub fn iwasawa_and_derivatives(seed: u64) -> Result<Record> {
    let mut rng = rng::stream(seed, "geometry.iwasawa");
    let mut reassembly = 0.0f64;
    for _ in 0..1000 {
        let g = GroupElement::exp_of(&random_traceless(&mut rng, 1.0))?;
        reassembly = reassembly.max((iwasawa(&g)?.reassemble() - g.matrix()).norm());
    }
    let mut adiff = 0.0f64;
    for _ in 0..200 {
        let g = GroupElement::exp_of(&random_traceless(&mut rng, 0.8))?;
        let (h1, h2) = (random_cartan(&mut rng, 1.0), random_cartan(&mut rng, 1.0));
        let a = a_derivative(&g, &h1, &h2)?;
        let fd = a_derivative_fd(&g, &h1, &h2, 1e-5);
        adiff = adiff.max((a - fd).abs() / a.abs().max(1.0));
    }
    let mut mphi = 0.0f64;
    for i in 0..50 {
        let mut n = random_traceless(&mut rng, 1.0);
        for r in 0..3 {
            for c in 0..=r {
                n[(r, c)] = 0.0;
            }
        }
        let g = GroupElement::new(n.exp() * random_cartan(&mut rng, 1.0).exp())?;
        let m = m_elements()[i % 4];
        let phi = iwasawa_k_map(&g, &RotationElement::new(m)?)?;
        mphi = mphi.max((phi.matrix() - m).norm());
    }
    let ok = reassembly <= 1e-10 && adiff <= 1e-6 && mphi <= 1e-9;
    let measured = json!({"max_reassembly_error": reassembly, "max_adiff_relative_error": adiff, "max_mphi_error": mphi});
    let thresholds = json!({"max_reassembly_error": 1e-10, "max_adiff_relative_error": 1e-6, "max_mphi_error": 1e-9});
    Ok(Record::new("C7", "Eq. (Iwasawa), Lemma \"Adiff\", Eq. (mphi)", ok, measured, thresholds))
}

/// Regular `ν` in the compact set `0.5 ≤ |ν| ≤ 1.5`, angle at least 10° from every wall.
fn regular_nu<R: Rng>(rng: &mut R) -> CartanCovec {
    let r = rng.random_range(0.5..1.5);
    let a = rng.random_range(40f64.to_radians()..80f64.to_radians());
    CartanCovec::from_coords(r * a.cos(), r * a.sin())
}

fn compact_direction<R: Rng>(rng: &mut R) -> Mat3 {
    let x = random_traceless(rng, 1.0);
    let k = x - x.transpose();
    k / k.norm()
}

/// Criterion 8. Samples are Haar-random `k₀` and `k₀ = m·exp(εX)` with `ε ≤ 1e−7`; the
/// equality test is `gap ≤ 1e−10` exactly for `dist(k₀, M) ≤ 1e−6`.
pub fn kostant_hessian(seed: u64) -> Result<Record> {
    let mut rng = rng::stream(seed, "geometry.kostant");
    let (mut min_gap, mut equal_near, mut near, mut strict_far, mut far, mut band) = (f64::INFINITY, 0, 0, 0, 0, 0);
    for i in 0..10_000 {
        let nu = regular_nu(&mut rng);
        let k = if i % 4 == 0 {
            let eps = [0.0, 1e-9, 1e-8, 1e-7][(i / 4) % 4];
            RotationElement::new(m_elements()[(i / 16) % 4] * (compact_direction(&mut rng) * eps).exp())?
        } else {
            RotationElement::random(&mut rng)
        };
        let gap = kostant_gap(&nu, &k);
        min_gap = min_gap.min(gap);
        let d = k.dist_to_m();
        if d <= 1e-6 {
            near += 1;
            equal_near += (gap.abs() <= 1e-10) as usize;
        } else if d >= 1e-3 {
            far += 1;
            strict_far += (gap > 1e-10) as usize;
        } else {
            band += 1;
        }
    }
    // Hessian ratio against the quadratic form on the basis K_α.
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    let mut within = true;
    for _ in 0..500 {
        let nu = regular_nu(&mut rng);
        let q: Vec<f64> = POSITIVE_ROOTS.iter().map(|a| {
            let k = a.compact_vector();
            hessian_ratio(&nu, &(k * (1e-4 / k.norm())))
        }).collect();
        let (qmin, qmax) = (q.iter().copied().fold(f64::INFINITY, f64::min), q.iter().copied().fold(0.0, f64::max));
        let x = compact_direction(&mut rng) * rng.random_range(1e-3..0.1);
        let r = hessian_ratio(&nu, &x);
        lo = lo.min(r);
        hi = hi.max(r);
        within &= qmin > 0.0 && r >= 0.5 * qmin && r <= 2.0 * qmax;
    }
    let ok = min_gap >= -1e-12 && equal_near == near && strict_far == far && band == 0 && within;
    let measured = json!({
        "samples": 10_000,
        "min_gap": min_gap,
        "near_M": near,
        "near_M_with_equality": equal_near,
        "far_from_M": far,
        "far_with_strict_inequality": strict_far,
        "hessian_samples": 500,
        "hessian_ratio_range": [lo, hi],
        "hessian_within_form_bounds": within,
    });
    let thresholds = json!({"min_gap": -1e-12, "equality_tol": 1e-10, "near_M": "dist ≤ 1e-6", "far_from_M": "dist ≥ 1e-3", "hessian_interval": "[q_min/2, 2 q_max] of the form on K_α"});
    Ok(Record::new("C8", "§6, with equality iff k₀ ∈ M; Eq. (AHess)", ok, measured, thresholds))
}

/// Criterion 12: `α = β`, random regular `ν`, random `H`.
pub fn xkpsi(seed: u64) -> Result<Record> {
    let mut rng = rng::stream(seed, "geometry.xkpsi");
    let (mut exactly_one, mut with_psi, mut without_psi, mut unreliable) = (0, 0, 0, 0);
    for i in 0..50 {
        let a = POSITIVE_ROOTS[i % 3];
        let nu = regular_nu(&mut rng);
        let h = random_cartan(&mut rng, 1.0);
        let r = xkpsi_check(a, a, &nu, &h)?;
        exactly_one += r.matches_exactly_one() as usize;
        with_psi += (r.matches_with_psi && !r.matches_without_psi) as usize;
        without_psi += (r.matches_without_psi && !r.matches_with_psi) as usize;
        unreliable += r.unreliable as usize;
    }
    let winner = if without_psi > with_psi { "without_psi" } else { "with_psi" };
    let measured = json!({
        "samples": 50,
        "matches_exactly_one": exactly_one,
        "matches_with_psi_only": with_psi,
        "matches_without_psi_only": without_psi,
        "unreliable": unreliable,
        "winner": winner,
        "note": if without_psi > with_psi {
            "the finite difference supports δ_{αβ}⟨α,ν⟩/2 without the factor ψ_S(x)"
        } else {
            "the finite difference supports the factor ψ_S(x)"
        },
    });
    Ok(Record::new("C12", "Lemma \"XKpsi\", δ_{αβ} ⟨α, ν⟩ ψ_S(x) /2", exactly_one >= 45, measured, json!({"matches_exactly_one": ">= 45 of 50", "relative_tol": 1e-4})))
}
