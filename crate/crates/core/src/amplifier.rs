//! Per-prime amplifiers `T_p` chosen from Hecke eigenvalues, the expansion of
//! `T_p T_p*`, and the cross-term bookkeeping for `𝒯𝒯*`, `𝒯 = Σ_{p ≤ N} T_p`.

use crate::hecke::{is_prime, HeckeAlgebra, HeckeElement, Rational, SatakeParameter, MAX_PRIME};
use crate::{Error, Result};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

/// Simulated unramified eigensystem: Satake parameters at each prime, and primes to skip.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct HeckeEigensystem {
    pub params: BTreeMap<u64, SatakeParameter>,
    pub excluded: BTreeSet<u64>,
}

impl HeckeEigensystem {
    pub fn constant(primes: impl IntoIterator<Item = u64>, s: SatakeParameter) -> Self {
        HeckeEigensystem { params: primes.into_iter().map(|p| (p, s)).collect(), excluded: BTreeSet::new() }
    }

    pub fn param(&self, p: u64) -> Result<SatakeParameter> {
        if self.excluded.contains(&p) {
            return Err(Error::InvalidInput(format!("prime {p} is excluded")));
        }
        self.params.get(&p).copied().ok_or_else(|| Error::InvalidInput(format!("no Satake parameter at {p}")))
    }

    /// Parses `{"p": [re α, im α, re β, im β], ...}` with `γ = 1/(αβ)`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::InvalidInput("eigensystem must be a JSON object".into()))?;
        let mut params = BTreeMap::new();
        for (k, x) in obj {
            let p: u64 = k.parse().map_err(|_| Error::InvalidInput(format!("bad prime key {k}")))?;
            if !is_prime(p) {
                return Err(Error::InvalidInput(format!("{p} is not prime")));
            }
            let xs: Vec<f64> = serde_json::from_value(x.clone()).map_err(|e| Error::InvalidInput(e.to_string()))?;
            if xs.len() != 4 {
                return Err(Error::InvalidInput(format!("prime {p}: expected [re α, im α, re β, im β]")));
            }
            params.insert(p, SatakeParameter::from_pair(Complex64::new(xs[0], xs[1]), Complex64::new(xs[2], xs[3]))?);
        }
        Ok(HeckeEigensystem { params, excluded: BTreeSet::new() })
    }

    pub fn to_json(&self) -> Value {
        let m: serde_json::Map<String, Value> = self
            .params
            .iter()
            .map(|(p, s)| (p.to_string(), serde_json::json!([s.alpha.re, s.alpha.im, s.beta.re, s.beta.im])))
            .collect();
        Value::Object(m)
    }
}

/// Tempered `(e^{iθ₁}, e^{iθ₂}, e^{−i(θ₁+θ₂)})`.
pub fn tempered(theta1: f64, theta2: f64) -> SatakeParameter {
    SatakeParameter::from_pair(Complex64::from_polar(1.0, theta1), Complex64::from_polar(1.0, theta2)).expect("unit parameters are unitary")
}

/// Complementary series `(e^{iθ} p^σ, e^{iθ} p^{−σ}, e^{−2iθ})`, `0 ≤ σ < 1/2`.
pub fn complementary(theta: f64, sigma: f64, p: u64) -> Result<SatakeParameter> {
    if !(0.0..0.5).contains(&sigma) {
        return Err(Error::InvalidInput(format!("σ = {sigma} outside [0, 1/2)")));
    }
    let r = (p as f64).powf(sigma);
    SatakeParameter::new(Complex64::from_polar(r, theta), Complex64::from_polar(1.0 / r, theta), Complex64::from_polar(1.0, -2.0 * theta))
}

/// Random unitary parameter: tempered or complementary series with equal probability.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, p: u64) -> SatakeParameter {
    if rng.random::<bool>() {
        tempered(2.0 * PI * rng.random::<f64>(), 2.0 * PI * rng.random::<f64>())
    } else {
        complementary(2.0 * PI * rng.random::<f64>(), 0.5 * rng.random::<f64>(), p).expect("σ < 1/2")
    }
}

/// `(α+β+γ, αβ+βγ+γα)`.
fn symmetric_functions(s: &SatakeParameter) -> (Complex64, Complex64) {
    (s.alpha + s.beta + s.gamma, s.alpha * s.beta + s.beta * s.gamma + s.gamma * s.alpha)
}

/// `(a, b)` with `Φ(1,0,0) ↦ a p` and `Φ(2,1,0) ↦ b p²`. Within the enumeration budget these
/// come from coset sums; beyond it from the closed forms `a = e₁` and `b = e₁e₂ − (1 + 1/p + 1/p²)`.
pub fn eigen_pair(alg: Option<&HeckeAlgebra>, sys: &HeckeEigensystem, p: u64) -> Result<(Complex64, Complex64)> {
    let s = sys.param(p)?;
    let pf = p as f64;
    match alg {
        Some(h) if p <= MAX_PRIME => {
            if h.p != p {
                return Err(Error::InvalidInput("algebra at the wrong prime".into()));
            }
            let a = h.satake_eigenvalue(&h.basis([1, 0, 0])?, &s)? / pf;
            let b = h.satake_eigenvalue(&h.basis([2, 1, 0])?, &s)? / (pf * pf);
            Ok((a, b))
        }
        _ => {
            let (e1, e2) = symmetric_functions(&s);
            Ok((e1, e1 * e2 - (1.0 + 1.0 / pf + 1.0 / (pf * pf))))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Branch {
    Linear,
    Quadratic,
}

impl Branch {
    pub fn label(&self) -> [i64; 3] {
        match self {
            Branch::Linear => [1, 0, 0],
            Branch::Quadratic => [2, 1, 0],
        }
    }

    /// Power of `p` in the nominal divisor.
    pub fn degree(&self) -> i32 {
        match self {
            Branch::Linear => 1,
            Branch::Quadratic => 2,
        }
    }
}

/// `T_p = Φ(branch) / divisor` with divisor `a p` or `b p²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmplifierChoice {
    pub p: u64,
    pub branch: Branch,
    pub divisor: Complex64,
}

impl AmplifierChoice {
    pub fn element(&self) -> HeckeElement<Complex64> {
        let mut e = HeckeElement::zero(self.p);
        e.add_term(self.branch.label(), self.divisor.inv());
        e
    }

    /// `|divisor| / p^deg`, which exceeds 1/2 by construction.
    pub fn ratio(&self) -> f64 {
        self.divisor.norm() / (self.p as f64).powi(self.branch.degree())
    }
}

pub fn build_tp(alg: Option<&HeckeAlgebra>, sys: &HeckeEigensystem, p: u64) -> Result<AmplifierChoice> {
    let (a, b) = eigen_pair(alg, sys, p)?;
    let pf = p as f64;
    if a.norm() > 0.5 {
        Ok(AmplifierChoice { p, branch: Branch::Linear, divisor: a * pf })
    } else if b.norm() > 0.5 {
        Ok(AmplifierChoice { p, branch: Branch::Quadratic, divisor: b * pf * pf })
    } else {
        Err(Error::Invariant(format!("both |a| = {} and |b| = {} are at most 1/2 at p = {p}", a.norm(), b.norm())))
    }
}

/// `Φ(L) * Φ(L)*` for the branch label `L`, exact.
pub fn branch_square(alg: &HeckeAlgebra, branch: Branch) -> Result<HeckeElement<Rational>> {
    let f = alg.basis(branch.label())?;
    alg.convolve(&f, &f.adjoint())
}

/// `T_p T_p*` in the `Φ_p` basis.
pub fn expand_tp_tp(alg: &HeckeAlgebra, choice: &AmplifierChoice) -> Result<HeckeElement<Complex64>> {
    let s = branch_square(alg, choice.branch)?;
    let w = 1.0 / choice.divisor.norm_sqr();
    Ok(s.map(|c| Complex64::new(w * *c.numer() as f64 / *c.denom() as f64, 0.0)))
}

/// Which constraint row of the support lemma a label satisfies (0, 1, 2), if any:
/// sum 2 with entries in [−1, 2]; sum 0 with entries in [−2, 2]; sum −2 with entries in [−2, 1].
pub fn support_rows(exps: [i64; 3]) -> Vec<usize> {
    let rows = [(-1, 2, 2), (-2, 2, 0), (-2, 1, -2)];
    let sum: i64 = exps.iter().sum();
    rows.iter()
        .enumerate()
        .filter(|(_, (lo, hi, s))| sum == *s && exps.iter().all(|e| (lo..=hi).contains(&e)))
        .map(|(i, _)| i)
        .collect()
}

/// `2 (11 − p⁻¹ − p⁻²)² p^{c−a}`.
pub fn coefficient_bound(p: u64, exps: [i64; 3]) -> Rational {
    let p = p as i64;
    let base = Rational::from_integer(11) - Rational::new(1, p) - Rational::new(1, p * p);
    Rational::from_integer(2) * base * base * crate::hecke::pow_rational(p as u64, exps[2] - exps[0])
}

/// Smallest admissible `|divisor|` for a branch: `p/2` on the linear branch; on the quadratic
/// branch `|a| ≤ 1/2` and `b = |a|² − (1 + p⁻¹ + p⁻²)` give `|b| p² ≥ (3/4 + p⁻¹ + p⁻²) p²`.
pub fn min_divisor(p: u64, branch: Branch) -> Rational {
    let p = p as i64;
    match branch {
        Branch::Linear => Rational::new(p, 2),
        Branch::Quadratic => Rational::new(3 * p * p + 4 * p + 4, 4),
    }
}

/// Supremum of `|α(L)|` over admissible divisors: `s_L / min_divisor²`.
pub fn worst_case_coefficients(alg: &HeckeAlgebra, branch: Branch) -> Result<HeckeElement<Rational>> {
    let d = min_divisor(alg.p, branch);
    Ok(branch_square(alg, branch)?.scale(&(d * d).recip()))
}

/// `β` in `Φ_p * Φ_p* = Σ β(L) Φ(L)` with `Φ_p = p⁻¹Φ(1,0,0) + p⁻²Φ(2,1,0)`.
pub fn positivity_surrogate(alg: &HeckeAlgebra) -> Result<HeckeElement<Rational>> {
    let p = alg.p as i64;
    let mut phi = alg.basis([1, 0, 0])?.scale(&Rational::new(1, p));
    phi.add_term([2, 1, 0], Rational::new(1, p * p));
    alg.convolve(&phi, &phi.adjoint())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Amplifier {
    pub n: u64,
    pub choices: Vec<AmplifierChoice>,
}

impl Amplifier {
    /// Eigenvalue of `𝒯` on the eigensystem (each `T_p` contributes its own eigenvalue).
    pub fn eigenvalue(&self, sys: &HeckeEigensystem) -> Result<Complex64> {
        let mut total = Complex64::new(0.0, 0.0);
        for c in &self.choices {
            let (a, b) = eigen_pair(None, sys, c.p)?;
            let pf = c.p as f64;
            let ev = match c.branch {
                Branch::Linear => a * pf,
                Branch::Quadratic => b * pf * pf,
            };
            total += ev / c.divisor;
        }
        Ok(total)
    }
}

/// The four families of `T_p T_q*` labels (up to exchanging `p` and `q`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CrossFamily {
    /// `Φ(pq, p, 1) / pq`
    PqP1,
    /// `Φ(p²q, p, 1) / p²q`
    P2qP1,
    /// `Φ(pq², pq, 1) / pq²`
    Pq2Pq1,
    /// `Φ(p²q², pq, 1) / p²q²`
    P2q2Pq1,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LedgerEntry {
    pub p: u64,
    pub q: Option<u64>,
    /// Diagonal entries of the representative, e.g. `(pq, q, 1)`, as rationals `[num, den]`.
    pub label: [[i64; 2]; 3],
    /// Exponents of `p` (and `q`) in the representative.
    pub exps_p: [i64; 3],
    pub exps_q: Option<[i64; 3]>,
    pub coeff: Complex64,
    pub family: Option<CrossFamily>,
    /// Nominal divisor: `pq`, `p²q`, `pq²`, `p²q²` for cross terms.
    pub nominal_divisor: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CrossTermLedger {
    pub entries: Vec<LedgerEntry>,
    /// Primes whose `T_p T_p*` expansion lies beyond the enumeration budget.
    pub unexpanded: Vec<u64>,
}

impl CrossTermLedger {
    /// JSON rows `{p, q, label, coeff}`.
    pub fn to_json_rows(&self) -> Value {
        Value::Array(
            self.entries
                .iter()
                .map(|e| {
                    serde_json::json!({
                        "p": e.p,
                        "q": e.q,
                        "label": e.label,
                        "coeff": {"re": e.coeff.re, "im": e.coeff.im},
                    })
                })
                .collect(),
        )
    }
}

/// Exponents of `T_p` and of `T_p*` normalized by the centre so the smallest is 0.
fn normalized_exps(branch: Branch, adjoint: bool) -> [i64; 3] {
    match (branch, adjoint) {
        (Branch::Linear, false) => [1, 0, 0],
        (Branch::Linear, true) => [1, 1, 0],
        (Branch::Quadratic, _) => [2, 1, 0],
    }
}

/// Identifies the family of `Φ_p(ep) Φ_q(eq)` as `diag(p^{ep_i} q^{eq_i})`.
pub fn classify_cross(ep: [i64; 3], eq: [i64; 3]) -> Option<(CrossFamily, bool)> {
    // Each family as (exponents of the first prime, of the second), aligned as written.
    let families = [
        (CrossFamily::PqP1, [1, 1, 0], [1, 0, 0]),
        (CrossFamily::P2qP1, [2, 1, 0], [1, 0, 0]),
        (CrossFamily::Pq2Pq1, [1, 1, 0], [2, 1, 0]),
        (CrossFamily::P2q2Pq1, [2, 1, 0], [2, 1, 0]),
    ];
    for (f, a, b) in families {
        if ep == a && eq == b {
            return Some((f, false));
        }
        if ep == b && eq == a {
            return Some((f, true));
        }
    }
    None
}

fn family_divisor(f: CrossFamily, p: u64, q: u64, swapped: bool) -> u64 {
    let (x, y) = if swapped { (q, p) } else { (p, q) };
    match f {
        CrossFamily::PqP1 => x * y,
        CrossFamily::P2qP1 => x * x * y,
        CrossFamily::Pq2Pq1 => x * y * y,
        CrossFamily::P2q2Pq1 => x * x * y * y,
    }
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| is_prime(p)).collect()
}

/// `𝒯 = Σ_{p ≤ N} T_p` and the ledger of `𝒯𝒯*`.
pub fn build_amplifier(sys: &HeckeEigensystem, n: u64) -> Result<(Amplifier, CrossTermLedger)> {
    if n > 100 {
        return Err(Error::Budget(format!("N = {n} exceeds 100")));
    }
    let mut choices = Vec::new();
    let mut algebras = BTreeMap::new();
    for p in primes_up_to(n) {
        if sys.excluded.contains(&p) {
            continue;
        }
        let alg = if p <= MAX_PRIME { Some(HeckeAlgebra::new(p)?) } else { None };
        choices.push(build_tp(alg.as_ref(), sys, p)?);
        if let Some(a) = alg {
            algebras.insert(p, a);
        }
    }
    let mut ledger = CrossTermLedger::default();
    for cp in &choices {
        for cq in &choices {
            if cp.p == cq.p {
                continue;
            }
            let (ep, eq) = (normalized_exps(cp.branch, false), normalized_exps(cq.branch, true));
            let (family, swapped) = classify_cross(ep, eq).ok_or_else(|| Error::Invariant(format!("cross term {ep:?} {eq:?} outside the four families")))?;
            let label = std::array::from_fn(|i| [(cp.p as i64).pow(ep[i] as u32) * (cq.p as i64).pow(eq[i] as u32), 1]);
            ledger.entries.push(LedgerEntry {
                p: cp.p,
                q: Some(cq.p),
                label,
                exps_p: ep,
                exps_q: Some(eq),
                coeff: (cp.divisor * cq.divisor.conj()).inv(),
                family: Some(family),
                nominal_divisor: Some(family_divisor(family, cp.p, cq.p, swapped)),
            });
        }
    }
    for c in &choices {
        match algebras.get(&c.p) {
            Some(alg) => {
                for (l, coeff) in expand_tp_tp(alg, c)?.terms() {
                    let label = l.map(|e| if e >= 0 { [(c.p as i64).pow(e as u32), 1] } else { [1, (c.p as i64).pow((-e) as u32)] });
                    ledger.entries.push(LedgerEntry {
                        p: c.p,
                        q: None,
                        label,
                        exps_p: *l,
                        exps_q: None,
                        coeff: *coeff,
                        family: None,
                        nominal_divisor: None,
                    });
                }
            }
            None => ledger.unexpanded.push(c.p),
        }
    }
    Ok((Amplifier { n, choices }, ledger))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn omega() -> SatakeParameter {
        let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        SatakeParameter::new(Complex64::new(1.0, 0.0), w, w.conj()).unwrap()
    }

    #[test]
    fn eigen_pairs_at_special_parameters() {
        for p in [2u64, 3, 5] {
            let h = HeckeAlgebra::new(p).unwrap();
            let pf = p as f64;
            let sys = HeckeEigensystem::constant([p], SatakeParameter::trivial());
            let (a, b) = eigen_pair(Some(&h), &sys, p).unwrap();
            assert!((a - 3.0).norm() < 1e-12);
            assert!((b - (8.0 * pf * pf - pf - 1.0) / (pf * pf)).norm() < 1e-12);
            let sys = HeckeEigensystem::constant([p], omega());
            let (a, b) = eigen_pair(Some(&h), &sys, p).unwrap();
            assert!(a.norm() < 1e-12);
            assert!((b + (pf * pf + pf + 1.0) / (pf * pf)).norm() < 1e-12);
            let (a2, b2) = eigen_pair(None, &sys, p).unwrap();
            assert!((a - a2).norm() < 1e-12 && (b - b2).norm() < 1e-12);
        }
    }

    #[test]
    fn eigenvalue_identity_and_bounds() {
        let mut rng = crate::rng::stream(51, "amp");
        for p in [2u64, 3] {
            let h = HeckeAlgebra::new(p).unwrap();
            let pf = p as f64;
            for _ in 0..200 {
                let s = random_unitary(&mut rng, p);
                let sys = HeckeEigensystem::constant([p], s);
                let (a, b) = eigen_pair(Some(&h), &sys, p).unwrap();
                let c = h.satake_eigenvalue(&h.basis([1, 1, 0]).unwrap(), &s).unwrap() / pf;
                assert!((a * c - b - (pf * pf + pf + 1.0) / (pf * pf)).norm() < 1e-10);
                assert!(a.norm() <= 3.0 * pf.sqrt() + 1e-10);
                let (a2, b2) = eigen_pair(None, &sys, p).unwrap();
                assert!((a - a2).norm() < 1e-10 && (b - b2).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn branch_choice() {
        let h = HeckeAlgebra::new(2).unwrap();
        let sys = HeckeEigensystem::constant([2], SatakeParameter::trivial());
        let c = build_tp(Some(&h), &sys, 2).unwrap();
        assert_eq!(c.branch, Branch::Linear);
        assert!((c.divisor - 6.0).norm() < 1e-12);
        let sys = HeckeEigensystem::constant([2], omega());
        let c = build_tp(Some(&h), &sys, 2).unwrap();
        assert_eq!(c.branch, Branch::Quadratic);
        let ev = h.satake_eigenvalue(&c.element(), &sys.param(2).unwrap()).unwrap();
        assert!((ev - 1.0).norm() < 1e-12);
    }

    #[test]
    fn linear_expansion_at_two() {
        let h = HeckeAlgebra::new(2).unwrap();
        let s = branch_square(&h, Branch::Linear).unwrap();
        assert_eq!(s.labels(), vec![[0, 0, 0], [1, 0, -1]]);
        assert_eq!(s.coefficient([0, 0, 0]), Rational::from_integer(7));
        assert_eq!(s.coefficient([1, 0, -1]), Rational::from_integer(1));
        let c = AmplifierChoice { p: 2, branch: Branch::Linear, divisor: Complex64::new(1.5, 0.5) };
        let e = expand_tp_tp(&h, &c).unwrap();
        let a2 = c.divisor.norm_sqr() / 4.0;
        assert!((e.coefficient([0, 0, 0]) - 7.0 / (a2 * 4.0)).norm() < 1e-12);
    }

    #[test]
    fn support_rows_and_quadratic_range() {
        for p in [2u64, 3] {
            let h = HeckeAlgebra::new(p).unwrap();
            for b in [Branch::Linear, Branch::Quadratic] {
                for l in branch_square(&h, b).unwrap().labels() {
                    assert_eq!(support_rows(l), vec![1], "{l:?}");
                }
            }
        }
        assert_eq!(support_rows([2, 1, -1]), vec![0]);
        assert_eq!(support_rows([1, -1, -2]), vec![2]);
        assert!(support_rows([3, 0, -3]).is_empty());
    }

    #[test]
    fn phi0_of_square_of_surrogate() {
        for p in [2i64, 3, 5] {
            let h = HeckeAlgebra::new(p as u64).unwrap();
            let v = h.phi0_pairing(&positivity_surrogate(&h).unwrap()).unwrap();
            let base = Rational::from_integer(11) - Rational::new(1, p) - Rational::new(1, p * p);
            assert_eq!(v, base * base);
        }
    }

    #[test]
    fn amplifier_counts() {
        let sys = HeckeEigensystem::constant(primes_up_to(10), SatakeParameter::trivial());
        let (amp, _) = build_amplifier(&sys, 10).unwrap();
        assert_eq!(amp.choices.len(), 4);
        assert!((amp.eigenvalue(&sys).unwrap() - 4.0).norm() < 1e-12);
        let (amp, ledger) = build_amplifier(&sys, 1).unwrap();
        assert!(amp.choices.is_empty() && ledger.entries.is_empty());
    }

    #[test]
    fn cross_families_cover_all_branch_pairs() {
        let mut sys = HeckeEigensystem::constant(primes_up_to(10), SatakeParameter::trivial());
        sys.params.insert(3, omega());
        sys.params.insert(7, omega());
        let (amp, ledger) = build_amplifier(&sys, 10).unwrap();
        let branches: Vec<Branch> = amp.choices.iter().map(|c| c.branch).collect();
        assert_eq!(branches, vec![Branch::Linear, Branch::Quadratic, Branch::Linear, Branch::Quadratic]);
        let mut seen = BTreeSet::new();
        for e in ledger.entries.iter().filter(|e| e.q.is_some()) {
            let fam = e.family.unwrap();
            seen.insert(format!("{fam:?}"));
            let bound = 4.0 / e.nominal_divisor.unwrap() as f64;
            assert!(e.coeff.norm() < bound);
        }
        assert_eq!(seen.len(), 4);
    }

    #[test]
    fn surrogate_dominates_worst_case() {
        for p in [2u64, 3, 5] {
            let h = HeckeAlgebra::new(p).unwrap();
            let beta = positivity_surrogate(&h).unwrap();
            assert!(beta.terms().all(|(_, b)| *b >= Rational::from_integer(0)));
            for b in [Branch::Linear, Branch::Quadratic] {
                for (l, a) in worst_case_coefficients(&h, b).unwrap().terms() {
                    assert!(*a <= beta.coefficient(*l) * Rational::from_integer(2), "p={p} {b:?} {l:?}");
                    assert!(*a <= coefficient_bound(p, *l));
                }
            }
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(300))]
        #[test]
        fn prop_dichotomy_and_bounds(t1 in 0.0..2.0 * PI, t2 in 0.0..2.0 * PI, sigma in 0.0..0.4999, comp in proptest::bool::ANY, pi in 0usize..3) {
            let p = [2u64, 3, 5][pi];
            let s = if comp { complementary(t1, sigma, p).unwrap() } else { tempered(t1, t2) };
            let sys = HeckeEigensystem::constant([p], s);
            let (a, b) = eigen_pair(None, &sys, p).unwrap();
            proptest::prop_assert!(a.norm() > 0.5 || b.norm() > 0.5);
            let c = build_tp(None, &sys, p).unwrap();
            let d = min_divisor(p, c.branch);
            proptest::prop_assert!(c.divisor.norm() >= *d.numer() as f64 / *d.denom() as f64 - 1e-12);
        }
    }

    #[test]
    fn eigensystem_json() {
        let sys = HeckeEigensystem::constant([2, 3], tempered(0.3, 1.1));
        let back = HeckeEigensystem::from_json(&sys.to_json()).unwrap();
        for p in [2, 3] {
            assert!((back.param(p).unwrap().gamma - sys.param(p).unwrap().gamma).norm() < 1e-14);
        }
        assert!(HeckeEigensystem::from_json(&serde_json::json!({"4": [1.0, 0.0, 1.0, 0.0]})).is_err());
    }
}
