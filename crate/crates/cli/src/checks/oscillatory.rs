//! Oscillatory integral sweeps: `aint1` on and off `M`, `aaint` on and off `MA`, and the
//! on-`MA` envelope of `I`. Every evaluation is also returned as a sweep row.

use super::spherical::lambda;
use super::spread;
use crate::report::Record;
use crate::Result;
use flatamp::lie::{dist_to_ma, CartanCovec, GroupElement, Mat3, RotationElement, m_elements};
use flatamp::spherical::oscillatory::{element_at_distance, rotation_at_angle};
use flatamp::spherical::{fit_slope, inverse_hc, oscillatory_aaint, oscillatory_aint1, oscillatory_i, BumpFunction, Estimate, PaleyWienerMultiplier, SpectralGrid, TestFunctionSpec};
use serde::Serialize;
use serde_json::{json, Value};

/// Spectral scale of the `aint1` sweeps; the decay is only visible once `t|ν|` is large.
pub const AINT1_SCALE: f64 = 300.0;
pub const AINT1_RADIUS: f64 = 0.5;
pub const AINT1_AXIS: [f64; 3] = [1.0, 2.0, 3.0];
pub const AAINT_RADIUS: f64 = 0.3;
/// Largest accepted `error / |value|` for a point used in a fit.
pub const REL_ERROR: f64 = 1e-3;

/// Direction in `𝔨` along which `g` leaves `MA`.
pub fn off_ma_direction() -> Mat3 {
    Mat3::new(0.0, -3.0, 2.0, 3.0, 0.0, -1.0, -2.0, 1.0, 0.0)
}

/// One evaluation, written to the sweep CSV.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub case: String,
    pub t: f64,
    pub beta: f64,
    #[serde(rename = "dist_to_MA")]
    pub dist_to_ma: f64,
    pub abs_value: f64,
    pub est_error: f64,
}

fn row(case: &str, t: f64, beta: f64, dist: f64, e: &Estimate) -> SweepRow {
    SweepRow { case: case.into(), t, beta, dist_to_ma: dist, abs_value: e.value.norm(), est_error: e.error }
}

fn resolved(rows: &[SweepRow]) -> bool {
    rows.iter().all(|r| r.est_error <= REL_ERROR * r.abs_value)
}

fn values(rows: &[SweepRow]) -> Vec<f64> {
    rows.iter().map(|r| r.abs_value).collect()
}

/// (a) `k ∈ M`, `λ = ν`: the integral is `∫b`.
pub fn aint1_baseline(ts: &[f64], tol: f64, rows: &mut Vec<SweepRow>) -> Result<Value> {
    let nu = lambda().scale(AINT1_SCALE);
    let b = BumpFunction::centered(AINT1_RADIUS)?;
    let mass = b.fourier(&CartanCovec::ZERO).re;
    let mut worst = 0.0f64;
    for &t in ts {
        for (i, m) in m_elements().into_iter().enumerate() {
            let e = oscillatory_aint1(t, &nu, &nu, &RotationElement::new(m)?, &GroupElement::identity(), &b, tol)?;
            worst = worst.max((e.value - mass).norm());
            rows.push(row(&format!("aint1_on_M/m{i}"), t, 1.0, 0.0, &e));
        }
    }
    Ok(json!({"pass": worst <= 1e-8, "max_error": worst, "mass": mass, "threshold": 1e-8}))
}

/// (b) `k` at angle `t^{−0.3}` from `M`.
pub fn aint1_off_m(ts: &[f64], rows: &mut Vec<SweepRow>) -> Result<Value> {
    let nu = lambda().scale(AINT1_SCALE);
    let b = BumpFunction::centered(AINT1_RADIUS)?;
    let mut part = Vec::new();
    for &t in ts {
        let k = rotation_at_angle(t.powf(-0.3), AINT1_AXIS)?;
        let e = oscillatory_aint1(t, &nu, &nu, &k, &GroupElement::identity(), &b, f64::INFINITY)?;
        part.push(row("aint1_off_M", t, 1.0, k.dist_to_m(), &e));
    }
    let slope = fit_slope(ts, &values(&part))?;
    let ok = slope <= -2.0 && resolved(&part);
    rows.extend(part.iter().cloned());
    Ok(json!({"pass": ok, "slope": slope, "values": values(&part), "resolved": resolved(&part), "nu_scale": AINT1_SCALE, "threshold": "slope ≤ −2"}))
}

/// (c) `dist_to_MA(g) = t^{−0.3}`.
pub fn aaint_off_ma(ts: &[f64], rows: &mut Vec<SweepRow>) -> Result<Value> {
    let nu = lambda();
    let b = BumpFunction::centered(AAINT_RADIUS)?;
    let mut part = Vec::new();
    for &t in ts {
        let g = element_at_distance(t.powf(-0.3), &off_ma_direction())?;
        let e = oscillatory_aaint(t, &nu, &nu, &nu, &g, &b, &b, f64::INFINITY)?;
        part.push(row("aaint_off_MA", t, 1.0, dist_to_ma(g.matrix())?, &e));
    }
    let slope = fit_slope(ts, &values(&part))?;
    let ok = slope <= -2.0 && resolved(&part);
    rows.extend(part.iter().cloned());
    Ok(json!({"pass": ok, "slope": slope, "values": values(&part), "resolved": resolved(&part), "threshold": "slope ≤ −2"}))
}

/// (d) `g = e`: `|aaint|·t^{3/2}` within a factor 4.
pub fn aaint_on_ma(ts: &[f64], rows: &mut Vec<SweepRow>) -> Result<Value> {
    let nu = lambda();
    let b = BumpFunction::centered(AAINT_RADIUS)?;
    let mut part = Vec::new();
    for &t in ts {
        let e = oscillatory_aaint(t, &nu, &nu, &nu, &GroupElement::identity(), &b, &b, f64::INFINITY)?;
        part.push(row("aaint_on_MA", t, 1.0, 0.0, &e));
    }
    let env: Vec<f64> = part.iter().map(|r| r.abs_value * r.t.powf(1.5)).collect();
    let ratio = spread(&env);
    let ok = ratio <= 4.0 && resolved(&part);
    rows.extend(part.iter().cloned());
    Ok(json!({"pass": ok, "envelope": env, "ratio": ratio, "resolved": resolved(&part), "threshold": "ratio ≤ 4"}))
}

/// `I(t, φ, e)` with `φ` centred at `tλ`, `β = 1`: `|I|` against `t^{±3/2}`.
pub fn i_on_ma(ts: &[f64], rows: &mut Vec<SweepRow>) -> Result<Value> {
    let b = BumpFunction::centered(AAINT_RADIUS)?;
    let mut part = Vec::new();
    for &t in ts {
        let c = lambda().scale(t);
        let h = PaleyWienerMultiplier::new(1.0, c, true)?;
        let k = inverse_hc(&h, &SpectralGrid::for_multiplier(&h))?;
        let phi = TestFunctionSpec::new(c, 1.0)?;
        let e = oscillatory_i(t, &phi, &GroupElement::identity(), &k, &b, f64::INFINITY)?;
        part.push(row("I_on_MA", t, 1.0, 0.0, &e));
    }
    let over: Vec<f64> = part.iter().map(|r| r.abs_value / r.t.powf(1.5)).collect();
    let times: Vec<f64> = part.iter().map(|r| r.abs_value * r.t.powf(1.5)).collect();
    let slope = fit_slope(ts, &values(&part))?;
    rows.extend(part.iter().cloned());
    Ok(json!({"values": values(&part), "slope": slope, "over_t_1_5": over, "over_t_1_5_ratio": spread(&over), "times_t_1_5": times, "times_t_1_5_ratio": spread(&times)}))
}

/// Criterion 10. `ts` is the slope list; the envelope parts use its first three entries.
pub fn decay(ts: &[f64], tol: f64, with_i: bool) -> Result<(Vec<Record>, Vec<SweepRow>)> {
    let mut rows = Vec::new();
    let env_ts = &ts[..3];
    let a = aint1_baseline(ts, tol, &mut rows)?;
    let b = aint1_off_m(ts, &mut rows)?;
    let c = aaint_off_ma(ts, &mut rows)?;
    let d = aaint_on_ma(env_ts, &mut rows)?;
    let ok = [&a, &b, &c, &d].iter().all(|v| v["pass"] == json!(true));
    let measured = json!({"a": a, "b": b, "c": c, "d": d, "t": ts});
    let thresholds = json!({"a": "|aint1 − ∫b| ≤ 1e-8", "b": "slope ≤ −2", "c": "slope ≤ −2", "d": "|aaint|·t^{3/2} within factor 4"});
    let mut out = vec![Record::new("C10", "Propositions \"aintprop1\", \"aaintprop\", \"Ibound\"; Eqs. (aint1), (aaint1)", ok, measured, thresholds)];
    if with_i {
        out.push(Record::reported("oscillatory.I_on_MA", "Eq. (Ibound1), t^{3/2+ε} β^{9/2}", i_on_ma(env_ts, &mut rows)?));
    }
    Ok((out, rows))
}
