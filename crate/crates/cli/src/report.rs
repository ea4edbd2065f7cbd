//! Suite reports: one record per check, serialized deterministically.

use serde::Serialize;
use serde_json::{Map, Value};
use std::time::Duration;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Informational: measured and recorded, no threshold applied.
    Reported,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    pub measured: Value,
    pub thresholds: Value,
}

impl Record {
    pub fn new(id: &str, anchor: &str, pass: bool, measured: Value, thresholds: Value) -> Self {
        let status = if pass { Status::Pass } else { Status::Fail };
        Record { id: id.into(), anchor: anchor.into(), status, measured, thresholds }
    }

    pub fn reported(id: &str, anchor: &str, measured: Value) -> Self {
        Record { id: id.into(), anchor: anchor.into(), status: Status::Reported, measured, thresholds: Value::Object(Map::new()) }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub suite: String,
    pub seed: u64,
    pub records: Vec<Record>,
}

impl SuiteReport {
    pub fn new(suite: &str, seed: u64) -> Self {
        SuiteReport { schema_version: SCHEMA_VERSION, suite: suite.into(), seed, records: Vec::new() }
    }

    pub fn push(&mut self, r: Record) {
        self.records.push(r);
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(Record::passed)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Columns `id, anchor, status, measured, thresholds`; the last two as compact JSON.
    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["id", "anchor", "status", "measured", "thresholds"])?;
        for r in &self.records {
            let status = serde_json::to_value(r.status).expect("status serializes");
            w.write_record([
                r.id.as_str(),
                r.anchor.as_str(),
                status.as_str().unwrap_or_default(),
                &r.measured.to_string(),
                &r.thresholds.to_string(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }
}

/// Wall-clock runtime per record, kept apart from the report so reports stay bit-identical.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Timings {
    pub entries: Vec<(String, f64)>,
}

impl Timings {
    pub fn add(&mut self, id: &str, d: Duration) {
        self.entries.push((id.into(), d.as_secs_f64()));
    }

    pub fn to_json(&self) -> Value {
        Value::Object(self.entries.iter().map(|(k, v)| (k.clone(), Value::from(*v))).collect())
    }
}

fn require<'a>(obj: &'a Map<String, Value>, key: &str, what: &str) -> Result<&'a Value, String> {
    obj.get(key).ok_or_else(|| format!("{what}: missing \"{key}\""))
}

/// Checks a report against the documented schema (docs/report-schema.json).
pub fn validate_report(v: &Value) -> Result<(), String> {
    let obj = v.as_object().ok_or("report must be an object")?;
    for k in obj.keys() {
        if !["schema_version", "suite", "seed", "records"].contains(&k.as_str()) {
            return Err(format!("report: unexpected key \"{k}\""));
        }
    }
    if require(obj, "schema_version", "report")?.as_u64() != Some(SCHEMA_VERSION as u64) {
        return Err("report: schema_version must be 1".into());
    }
    let suite = require(obj, "suite", "report")?.as_str().ok_or("report: suite must be a string")?;
    if !["hecke", "amplifier", "lattice", "spherical", "oscillatory", "report"].contains(&suite) {
        return Err(format!("report: unknown suite \"{suite}\""));
    }
    require(obj, "seed", "report")?.as_u64().ok_or("report: seed must be a nonnegative integer")?;
    let records = require(obj, "records", "report")?.as_array().ok_or("report: records must be an array")?;
    for (i, r) in records.iter().enumerate() {
        let what = format!("records[{i}]");
        let r = r.as_object().ok_or(format!("{what} must be an object"))?;
        if r.len() != 5 {
            return Err(format!("{what}: expected exactly id, anchor, status, measured, thresholds"));
        }
        for key in ["id", "anchor"] {
            let s = require(r, key, &what)?.as_str().ok_or(format!("{what}: {key} must be a string"))?;
            if s.is_empty() {
                return Err(format!("{what}: {key} is empty"));
            }
        }
        let status = require(r, "status", &what)?.as_str().ok_or(format!("{what}: status must be a string"))?;
        if !["pass", "fail", "reported"].contains(&status) {
            return Err(format!("{what}: bad status \"{status}\""));
        }
        for key in ["measured", "thresholds"] {
            if !require(r, key, &what)?.is_object() {
                return Err(format!("{what}: {key} must be an object"));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> SuiteReport {
        let mut s = SuiteReport::new("hecke", 7);
        s.push(Record::new("x", "Lemma \"Heckerel\"", true, json!({"v": 1}), json!({"max": 2})));
        s.push(Record::reported("y", "Eq. (abcbd)", json!({})));
        s
    }

    #[test]
    fn sample_validates() {
        assert_eq!(validate_report(&sample().to_json()), Ok(()));
        assert!(sample().passed());
    }

    #[test]
    fn validator_rejects_broken_reports() {
        let mut v = sample().to_json();
        v["records"][0]["status"] = json!("maybe");
        assert!(validate_report(&v).is_err());
        let mut v = sample().to_json();
        v["records"][1].as_object_mut().unwrap().remove("anchor");
        assert!(validate_report(&v).is_err());
        let mut v = sample().to_json();
        v["extra"] = json!(1);
        assert!(validate_report(&v).is_err());
        assert!(validate_report(&json!([])).is_err());
    }

    #[test]
    fn csv_has_fixed_columns() {
        let csv = sample().to_csv().unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("id,anchor,status,measured,thresholds"));
        assert_eq!(lines.count(), 2);
    }
}
