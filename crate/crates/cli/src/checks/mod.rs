//! One function per check. Each returns a [`Record`](crate::report::Record) carrying its
//! source anchor, measured values and thresholds; criteria use ids `C1` to `C12`.

pub mod amplifier;
pub mod geometry;
pub mod hecke;
pub mod lattice;
pub mod oscillatory;
pub mod spherical;

use flatamp::hecke::Rational;
use serde_json::Value;

pub(crate) fn rat(r: &Rational) -> Value {
    Value::String(r.to_string())
}

/// `max / min` of positive values.
pub(crate) fn spread(v: &[f64]) -> f64 {
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    hi / lo
}
