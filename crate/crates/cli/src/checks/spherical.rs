//! Spherical function and kernel checks: `φ(e) = 1`, the envelope of `φ_{tν}`, and the
//! sup and off-spectrum behaviour of `p̂_t`.

use super::spread;
use crate::report::Record;
use crate::Result;
use flatamp::lie::{weyl_orbit, CartanCovec, CartanVec};
use flatamp::spherical::{envelope_sup, inverse_hc, phat, spherical_fn, BumpFunction, PaleyWienerMultiplier, So3Grid, SpectralGrid};
use serde_json::{json, Map};
use std::f64::consts::PI;

/// The spectral direction `λ` used throughout the sweeps.
pub fn lambda() -> CartanCovec {
    CartanCovec::from_coords(0.6, 0.8)
}

/// `φ_{tν}(e) = 1` on a base grid and its doubling.
pub fn phi_at_identity(ts: &[f64], tol: f64) -> Result<Record> {
    let h = CartanVec::from_coords(0.0, 0.0);
    let mut worst = 0.0f64;
    for &t in ts {
        for n in [16usize, 32] {
            let grid = So3Grid::square(n)?.with_tol(tol);
            worst = worst.max((spherical_fn(t, &lambda(), &h, &grid)?.value - 1.0).norm());
        }
    }
    Ok(Record::new("spherical.identity", "§6 Proposition \"aintprop2\" proof, φ_{tν} as an integral of plane waves", worst <= 1e-8, json!({"max_error": worst}), json!({"max_error": 1e-8})))
}

/// `grid` radii up to 0.6 times 7 angles across the closed chamber.
pub fn envelope_samples(grid: usize) -> Vec<CartanVec> {
    let mut out = Vec::new();
    for i in 0..grid {
        let r = 0.6 * (i + 1) as f64 / grid as f64;
        for j in 0..7 {
            let a = PI / 6.0 + j as f64 * (PI / 3.0) / 6.0;
            out.push(CartanVec::from_coords(r * a.cos(), r * a.sin()));
        }
    }
    out
}

/// Criterion 9.
pub fn envelope(ts: &[f64], grid: usize, tol: f64) -> Result<Record> {
    let samples = envelope_samples(grid);
    let sups = ts.iter().map(|&t| envelope_sup(t, &lambda(), &samples, tol)).collect::<flatamp::Result<Vec<f64>>>()?;
    let ratio = spread(&sups);
    let measured = json!({"t": ts, "sup": sups, "ratio": ratio, "samples": samples.len()});
    Ok(Record::new("C9", "Eq. (spherical1), ∏ (1 + t|α(H)|)^{−1/2}", ratio < 2.0, measured, json!({"ratio": "< 2"})))
}

/// Radius of `b₂` and of the kernel table.
pub const PHAT_RADIUS: f64 = 0.75;
/// Spacing of the `μ` grid.
pub const MU_SPACING: f64 = 0.5;

fn in_dominant_chamber(mu: &CartanCovec) -> bool {
    let d = mu.dual();
    let (a, b) = (d.dominant().coords(), d.coords());
    (a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12
}

/// Per-`t` sweep of `|p̂_t(μ)|/t^{3/2}` on the dominant chamber (`p̂_t` is Weyl invariant).
struct PhatSweep {
    sup: f64,
    /// `sup` over `dist(μ, W·tλ) ≥ d`.
    off: Vec<f64>,
    /// `sup` over `|μ| ≥ |tλ| + d`, outside the orbit hull.
    outside: Vec<f64>,
    max_error: f64,
}

fn phat_sweep(t: f64, dists: &[f64]) -> Result<PhatSweep> {
    let c = lambda().scale(t);
    let orbit = weyl_orbit(&c);
    let h = PaleyWienerMultiplier::new(1.0, c, true)?;
    let mut k = inverse_hc(&h, &SpectralGrid::for_multiplier(&h))?;
    k.tabulate(PHAT_RADIUS)?;
    let b2 = BumpFunction::centered(PHAT_RADIUS)?;
    let lim = c.norm() + dists.iter().copied().fold(0.0, f64::max);
    let n = (lim / MU_SPACING).ceil() as i64;
    let mus: Vec<CartanCovec> = (-n..=n)
        .flat_map(|i| (-n..=n).map(move |j| CartanCovec::from_coords(i as f64 * MU_SPACING, j as f64 * MU_SPACING)))
        .filter(|m| m.norm() <= lim && in_dominant_chamber(m))
        .collect();
    let vals = phat(&k, &b2, &mus)?;
    let norm = t.powf(1.5);
    let dist = |m: &CartanCovec| orbit.iter().map(|o| o.sub(m).norm()).fold(f64::INFINITY, f64::min);
    let sup_where = |f: &dyn Fn(&CartanCovec) -> bool| mus.iter().zip(&vals).filter(|(m, _)| f(m)).map(|(_, e)| e.value.norm() / norm).fold(0.0, f64::max);
    Ok(PhatSweep {
        sup: sup_where(&|_| true),
        off: dists.iter().map(|&d| sup_where(&|m| dist(m) >= d)).collect(),
        outside: dists.iter().map(|&d| sup_where(&|m| m.norm() >= c.norm() + d)).collect(),
        max_error: vals.iter().map(|e| e.error).fold(0.0, f64::max) / norm,
    })
}

/// Criterion 11. `dists` are the `β`-distances; the decay test compares the first and last.
pub fn phat_bounds(ts: &[f64], dists: &[f64]) -> Result<Record> {
    let mut sups = Vec::new();
    let mut per_t = Map::new();
    let mut decay = true;
    for &t in ts {
        let s = phat_sweep(t, dists)?;
        let (first, last) = (s.off[0], s.off[s.off.len() - 1]);
        decay &= last <= 0.7 * first;
        per_t.insert(
            t.to_string(),
            json!({"sup_over_t_1_5": s.sup, "off_spectrum_sup": s.off, "outside_hull_sup": s.outside, "off_spectrum_ratio": last / first, "max_error": s.max_error}),
        );
        sups.push(s.sup);
    }
    let ratio = spread(&sups);
    let ok = ratio <= 3.0 && decay;
    let measured = json!({"t": ts, "beta_distances": dists, "sup_ratio": ratio, "decay_present": decay, "per_t": per_t, "mu_spacing": MU_SPACING, "b2_radius": PHAT_RADIUS});
    let thresholds = json!({"sup_ratio": 3.0, "off_spectrum_ratio": "≤ 0.7 (30% decrease from the first to the last β-distance)"});
    Ok(Record::new("C11", "§5 lemma, ‖p̂_t‖_∞ ≪ t^{3/2}; Eq. (phat)", ok, measured, thresholds))
}
