use super::{DoubleCosetLabel, Rational};
use crate::{Error, Result};
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;
use std::fmt::Debug;
use std::ops::{Add, Mul};

/// Coefficient ring of Hecke elements: exact rationals or complex floats.
pub trait Coefficient: Clone + PartialEq + Debug + Zero + One + Add<Output = Self> + Mul<Output = Self> + Send + Sync {
    fn conj(&self) -> Self;
    fn from_rational(r: Rational) -> Self;
    fn to_complex(&self) -> Complex64;
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
}

impl Coefficient for Rational {
    fn conj(&self) -> Self {
        *self
    }
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(*self.numer() as f64 / *self.denom() as f64, 0.0)
    }
    fn to_json(&self) -> Value {
        serde_json::json!({"num": self.numer(), "den": self.denom()})
    }
    fn from_json(v: &Value) -> Result<Self> {
        let get = |k: &str| v.get(k).and_then(Value::as_i64).ok_or_else(|| Error::InvalidInput(format!("rational coefficient needs integer `{k}`")));
        let (n, d) = (get("num")?, get("den")?);
        if d == 0 {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        Ok(Rational::new(n, d))
    }
}

impl Coefficient for Complex64 {
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn from_rational(r: Rational) -> Self {
        r.to_complex()
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn to_json(&self) -> Value {
        serde_json::json!({"re": self.re, "im": self.im})
    }
    fn from_json(v: &Value) -> Result<Self> {
        let get = |k: &str| v.get(k).and_then(Value::as_f64).ok_or_else(|| Error::InvalidInput(format!("complex coefficient needs number `{k}`")));
        Ok(Complex64::new(get("re")?, get("im")?))
    }
}

/// Finite combination `Σ c_L Φ(L)` at a single prime; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct HeckeElement<C = Rational> {
    p: u64,
    terms: BTreeMap<[i64; 3], C>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    prime: u64,
    exps: [i64; 3],
    coeff: Value,
}

impl<C: Coefficient> HeckeElement<C> {
    pub fn zero(p: u64) -> Self {
        HeckeElement { p, terms: BTreeMap::new() }
    }

    pub fn basis(label: &DoubleCosetLabel) -> Self {
        let mut e = Self::zero(label.p);
        e.add_term(label.exps(), C::one());
        e
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i64; 3], &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: [i64; 3]) -> C {
        let mut e = exps;
        e.sort_by(|a, b| b.cmp(a));
        self.terms.get(&e).cloned().unwrap_or_else(C::zero)
    }

    pub fn labels(&self) -> Vec<[i64; 3]> {
        self.terms.keys().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c Φ(exps)`; the exponents are sorted.
    pub fn add_term(&mut self, exps: [i64; 3], c: C) {
        let mut e = exps;
        e.sort_by(|a, b| b.cmp(a));
        let v = self.terms.remove(&e).map_or(c.clone(), |old| old + c);
        if !v.is_zero() {
            self.terms.insert(e, v);
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if o.p != self.p {
            return Err(Error::InvalidInput("Hecke elements at different primes".into()));
        }
        let mut out = self.clone();
        for (l, c) in &o.terms {
            out.add_term(*l, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &C) -> Self {
        let mut out = Self::zero(self.p);
        for (l, c) in &self.terms {
            out.add_term(*l, c.clone() * s.clone());
        }
        out
    }

    /// `f*(g) = conj(f(g⁻¹))`: label `(a,b,c) ↦ (−c,−b,−a)`, coefficients conjugated.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.p);
        for (l, c) in &self.terms {
            out.add_term([-l[2], -l[1], -l[0]], c.conj());
        }
        out
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> HeckeElement<D> {
        let mut out = HeckeElement::zero(self.p);
        for (l, c) in &self.terms {
            out.add_term(*l, f(c));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(l, c)| serde_json::to_value(TermJson { prime: self.p, exps: *l, coeff: c.to_json() }).expect("serializable"))
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let rows: Vec<TermJson> = serde_json::from_value(v.clone()).map_err(|e| Error::InvalidInput(e.to_string()))?;
        let p = rows.first().map(|r| r.prime).ok_or_else(|| Error::InvalidInput("empty Hecke element has no prime".into()))?;
        let mut out = Self::zero(p);
        for r in rows {
            if r.prime != p {
                return Err(Error::InvalidInput("Hecke element mixes primes".into()));
            }
            DoubleCosetLabel::new(p, r.exps)?;
            out.add_term(r.exps, C::from_json(&r.coeff)?);
        }
        Ok(out)
    }
}
