//! Amplifier checks: the `|a| > 1/2 or |b| > 1/2` dichotomy, normalization, support and
//! coefficient bounds of `T_p T_p*`, and the cross-term ledger.

use super::rat;
use crate::report::Record;
use crate::Result;
use flatamp::amplifier::{
    branch_square, build_amplifier, build_tp, coefficient_bound, eigen_pair, primes_up_to, random_unitary, support_rows, worst_case_coefficients, Branch,
    CrossTermLedger, HeckeEigensystem,
};
use flatamp::hecke::{HeckeAlgebra, Rational, SatakeParameter};
use flatamp::rng;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};
use std::f64::consts::PI;

pub const SAMPLES: usize = 10_000;

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().expect("finite rational")
}

/// Criterion 4 over `samples` seeded unitary parameters per prime.
pub fn dichotomy(primes: &[u64], seed: u64, samples: usize) -> Result<Record> {
    let mut measured = Map::new();
    let mut ok = true;
    for &p in primes {
        let h = HeckeAlgebra::new(p)?;
        let squares = [branch_square(&h, Branch::Linear)?, branch_square(&h, Branch::Quadratic)?];
        let mut labels_ok = true;
        let mut exact_ok = true;
        for b in [Branch::Linear, Branch::Quadratic] {
            for (l, a) in worst_case_coefficients(&h, b)?.terms() {
                labels_ok &= !support_rows(*l).is_empty();
                exact_ok &= *a <= coefficient_bound(p, *l);
            }
        }
        let mut rng = rng::stream(seed, &format!("amplifier.dichotomy.{p}"));
        let (mut min_max_ab, mut max_ev_err, mut max_ratio) = (f64::INFINITY, 0.0f64, 0.0f64);
        let mut counts = [0u64; 2];
        for _ in 0..samples {
            let s = random_unitary(&mut rng, p);
            let sys = HeckeEigensystem::constant([p], s);
            let (a, b) = eigen_pair(Some(&h), &sys, p)?;
            min_max_ab = min_max_ab.min(a.norm().max(b.norm()));
            let c = build_tp(Some(&h), &sys, p)?;
            counts[(c.branch == Branch::Quadratic) as usize] += 1;
            let ev = h.satake_eigenvalue(&c.element(), &s)?;
            max_ev_err = max_ev_err.max((ev - 1.0).norm());
            let sq = &squares[(c.branch == Branch::Quadratic) as usize];
            let w = 1.0 / c.divisor.norm_sqr();
            for (l, coeff) in sq.terms() {
                max_ratio = max_ratio.max(to_f64(coeff) * w / to_f64(&coefficient_bound(p, *l)));
            }
        }
        let pass = min_max_ab > 0.5 && max_ev_err <= 1e-12 && labels_ok && exact_ok && max_ratio <= 1.0;
        ok &= pass;
        measured.insert(
            p.to_string(),
            json!({
                "samples": samples,
                "min_max_abs_a_b": min_max_ab,
                "linear": counts[0],
                "quadratic": counts[1],
                "max_eigenvalue_error": max_ev_err,
                "labels_in_abcbd": labels_ok,
                "worst_case_within_bound_exact": exact_ok,
                "max_coefficient_over_bound": max_ratio,
            }),
        );
    }
    let thresholds = json!({
        "min_max_abs_a_b": "> 1/2",
        "max_eigenvalue_error": 1e-12,
        "coefficient_bound": "2(11 − p⁻¹ − p⁻²)² p^(c−a)",
    });
    Ok(Record::new("C4", "Eq. (Tpdef) and Lemma \"Tpexpand\", Eq. (abcbd)", ok, Value::Object(measured), thresholds))
}

fn omega() -> SatakeParameter {
    let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
    SatakeParameter::new(Complex64::new(1.0, 0.0), w, w.conj()).expect("unitary")
}

/// `(1, ω, ω̄)` has `a = 0`, forcing the quadratic branch.
pub fn forced_quadratic(primes: &[u64]) -> Result<Record> {
    let mut measured = Map::new();
    let mut ok = true;
    for &p in primes {
        let h = HeckeAlgebra::new(p)?;
        let sys = HeckeEigensystem::constant([p], omega());
        let c = build_tp(Some(&h), &sys, p)?;
        let ev = h.satake_eigenvalue(&c.element(), &omega())?;
        let err = (ev - 1.0).norm();
        ok &= c.branch == Branch::Quadratic && err <= 1e-12;
        measured.insert(p.to_string(), json!({"branch": c.branch, "eigenvalue_error": err}));
    }
    Ok(Record::new("amplifier.quadratic", "Eq. (Tpdef)", ok, Value::Object(measured), json!({"branch": "Quadratic", "eigenvalue_error": 1e-12})))
}

/// Seeded eigensystem on the primes up to `n`.
pub fn random_eigensystem(n: u64, seed: u64) -> HeckeEigensystem {
    let mut rng = rng::stream(seed, "amplifier.ledger");
    let primes = primes_up_to(n);
    HeckeEigensystem { params: primes.iter().map(|&p| (p, random_unitary(&mut rng, p))).collect(), excluded: Default::default() }
}

/// Ledger audit: every cross term in one of the four families within its nominal bound,
/// every diagonal label inside Eq. (abcbd). Returns the ledger for output.
pub fn ledger_audit(n: u64, seed: u64) -> Result<(Record, CrossTermLedger)> {
    let sys = random_eigensystem(n, seed);
    let (amp, ledger) = build_amplifier(&sys, n)?;
    let ev = amp.eigenvalue(&sys)?;
    let mut families = Map::new();
    let (mut cross_ok, mut diag_ok, mut within) = (true, true, true);
    for e in &ledger.entries {
        match (e.q, e.family, e.nominal_divisor) {
            (Some(_), Some(f), Some(d)) => {
                let key = format!("{f:?}");
                let n = families.get(&key).and_then(Value::as_u64).unwrap_or(0);
                families.insert(key, json!(n + 1));
                within &= e.coeff.norm() <= 4.0 / d as f64;
            }
            (Some(_), _, _) => cross_ok = false,
            (None, _, _) => diag_ok &= !support_rows(e.exps_p).is_empty(),
        }
    }
    let err = (ev - amp.choices.len() as f64).norm();
    let ok = cross_ok && diag_ok && within && err <= 1e-10;
    let measured = json!({
        "N": n,
        "primes": amp.choices.iter().map(|c| c.p).collect::<Vec<_>>(),
        "branches": amp.choices.iter().map(|c| c.branch).collect::<Vec<_>>(),
        "entries": ledger.entries.len(),
        "families": families,
        "unexpanded": ledger.unexpanded,
        "cross_terms_classified": cross_ok,
        "cross_terms_within_4_over_divisor": within,
        "diagonal_labels_in_abcbd": diag_ok,
        "amplifier_eigenvalue_error": err,
    });
    let thresholds = json!({"families": ["PqP1", "P2qP1", "Pq2Pq1", "P2q2Pq1"], "cross_coefficient": "≤ 4 / nominal divisor", "amplifier_eigenvalue": "number of primes"});
    Ok((Record::new("amplifier.ledger", "§4, 𝒯𝒯* = Σ T_p T_q* + Σ T_p T_p*", ok, measured, thresholds), ledger))
}

/// Exact supremum of `|α(L)|` over admissible divisors, per branch, against the bound.
pub fn worst_case_table(primes: &[u64]) -> Result<Record> {
    let mut measured = Map::new();
    for &p in primes {
        let h = HeckeAlgebra::new(p)?;
        let mut rows = Vec::new();
        for b in [Branch::Linear, Branch::Quadratic] {
            for (l, a) in worst_case_coefficients(&h, b)?.terms() {
                rows.push(json!({"branch": b, "label": l, "sup_alpha": rat(a), "bound": rat(&coefficient_bound(p, *l))}));
            }
        }
        measured.insert(p.to_string(), Value::Array(rows));
    }
    Ok(Record::reported("amplifier.worst_case", "Lemma \"Tpexpand\", α(a,b,c) ≪ p^{c−a}", Value::Object(measured)))
}
