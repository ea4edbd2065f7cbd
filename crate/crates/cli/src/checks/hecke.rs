//! Exact checks in the Hecke algebra.

use super::rat;
use crate::report::Record;
use crate::Result;
use flatamp::hecke::{HeckeAlgebra, Rational};
use flatamp::amplifier::positivity_surrogate;
use serde_json::{json, Map, Value};

fn r(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// `Φ(1,0,0) * Φ(1,1,0) = Φ(2,1,0) + (p²+p+1) Φ(1,1,1)`.
pub fn heckerel(primes: &[u64]) -> Result<Record> {
    let mut measured = Map::new();
    let mut ok = true;
    for &p in primes {
        let h = HeckeAlgebra::new(p)?;
        let prod = h.convolve(&h.basis([1, 0, 0])?, &h.basis([1, 1, 0])?)?;
        let mut want = h.basis([2, 1, 0])?;
        want.add_term([1, 1, 1], r((p * p + p + 1) as i64));
        ok &= prod == want;
        measured.insert(p.to_string(), json!({"product": prod.to_json(), "equal": prod == want}));
    }
    Ok(Record::new("C1", "Lemma \"Heckerel\"", ok, Value::Object(measured), json!({"equality": "exact"})))
}

/// `|K_p(1,0,0)| = p²+p+1` and `|K_p(1,0,−1)| = (p²+p)(p²+p+1)`.
pub fn volumes(primes: &[u64]) -> Result<Record> {
    let mut measured = Map::new();
    let mut thresholds = Map::new();
    let mut ok = true;
    for &p in primes {
        let h = HeckeAlgebra::new(p)?;
        let (v1, v2) = (h.volume([1, 0, 0])? as u64, h.volume([1, 0, -1])? as u64);
        let (w1, w2) = (p * p + p + 1, (p * p + p) * (p * p + p + 1));
        ok &= v1 == w1 && v2 == w2;
        measured.insert(p.to_string(), json!({"K(1,0,0)": v1, "K(1,0,-1)": v2}));
        thresholds.insert(p.to_string(), json!({"K(1,0,0)": w1, "K(1,0,-1)": w2}));
    }
    Ok(Record::new("C2", "Lemma \"Heckerel\" proof, dg_p(K_p(1,0,0)) = p² + p + 1", ok, Value::Object(measured), Value::Object(thresholds)))
}

/// `φ₀` eigenvalues of the basis elements and of `Φ_p * Φ_p*`.
pub fn phi0(primes: &[u64]) -> Result<Record> {
    let mut measured = Map::new();
    let mut thresholds = Map::new();
    let mut ok = true;
    for &p in primes {
        let h = HeckeAlgebra::new(p)?;
        let pi = p as i64;
        let got = [
            h.phi0_pairing(&h.basis([1, 0, 0])?)?,
            h.phi0_pairing(&h.basis([1, 1, 0])?)?,
            h.phi0_pairing(&h.basis([2, 1, 0])?)?,
            h.phi0_pairing(&positivity_surrogate(&h)?)?,
        ];
        let base = r(11) - Rational::new(1, pi) - Rational::new(1, pi * pi);
        let want = [r(3 * pi), r(3 * pi), r(8 * pi * pi - pi - 1), base * base];
        ok &= got == want;
        let names = ["Phi(1,0,0)", "Phi(1,1,0)", "Phi(2,1,0)", "Phi_p*Phi_p^*"];
        let obj = |v: &[Rational; 4]| Value::Object(names.iter().zip(v).map(|(n, x)| (n.to_string(), rat(x))).collect());
        measured.insert(p.to_string(), obj(&got));
        thresholds.insert(p.to_string(), obj(&want));
    }
    Ok(Record::new("C3", "Lemma \"Tpexpand\" proof, (11 − p⁻¹ − p⁻²)² φ₀", ok, Value::Object(measured), Value::Object(thresholds)))
}

/// Associativity on triples and `(fg)* = g* f*` on pairs of small basis elements.
pub fn algebra_identities(primes: &[u64]) -> Result<Record> {
    let labels = [[1, 0, 0], [1, 1, 0], [0, 0, -1], [1, 0, -1]];
    let mut measured = Map::new();
    let mut ok = true;
    for &p in primes {
        let h = HeckeAlgebra::new(p)?;
        let (mut assoc, mut adj, mut total) = (0u32, 0u32, 0u32);
        for a in labels {
            for b in labels {
                let (fa, fb) = (h.basis(a)?, h.basis(b)?);
                let ab = h.convolve(&fa, &fb)?;
                adj += (ab.adjoint() == h.convolve(&fb.adjoint(), &fa.adjoint())?) as u32;
                for c in [[1, 0, 0], [0, 0, -1]] {
                    let fc = h.basis(c)?;
                    assoc += (h.convolve(&ab, &fc)? == h.convolve(&fa, &h.convolve(&fb, &fc)?)?) as u32;
                }
                total += 1;
            }
        }
        ok &= assoc == 2 * total && adj == total;
        measured.insert(p.to_string(), json!({"associative_triples": assoc, "adjoint_pairs": adj, "pairs": total}));
    }
    Ok(Record::new("hecke.identities", "§2.3, φ*(g) = conj φ(g⁻¹)", ok, Value::Object(measured), json!({"equality": "exact"})))
}
