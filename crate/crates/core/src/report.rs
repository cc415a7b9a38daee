//! Serializable experiment records and the versioned report container.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("report schema version {found} is not supported (expected {SCHEMA_VERSION})")]
    SchemaVersion { found: u32 },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

/// JSON value for a float; non-finite values become strings so that every
/// record survives a round trip.
pub fn num(x: f64) -> Value {
    match serde_json::Number::from_f64(x) {
        Some(n) => Value::Number(n),
        None if x.is_nan() => Value::String("NaN".into()),
        None if x > 0.0 => Value::String("inf".into()),
        None => Value::String("-inf".into()),
    }
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().copied().map(num).collect())
}

/// Inverse of [`num`].
pub fn as_f64(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => match s.as_str() {
            "NaN" => Some(f64::NAN),
            "inf" => Some(f64::INFINITY),
            "-inf" => Some(f64::NEG_INFINITY),
            _ => None,
        },
        _ => None,
    }
}

/// One row of an experiment run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub experiment_id: String,
    pub inputs: BTreeMap<String, Value>,
    pub outputs: BTreeMap<String, Value>,
    pub status: Status,
    pub tolerances: BTreeMap<String, f64>,
    pub wall_time_ms: u64,
}

impl ReportRecord {
    pub fn new(experiment_id: impl Into<String>) -> Self {
        ReportRecord {
            experiment_id: experiment_id.into(),
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
            status: Status::Inconclusive,
            tolerances: BTreeMap::new(),
            wall_time_ms: 0,
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    pub fn output(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.outputs.insert(key.to_string(), value.into());
        self
    }

    pub fn output_f64(&mut self, key: &str, value: f64) -> &mut Self {
        self.outputs.insert(key.to_string(), num(value));
        self
    }

    pub fn get_f64(&self, key: &str) -> Option<f64> {
        self.outputs.get(key).and_then(as_f64)
    }

    /// Records `gap_<name>` with its tolerance.
    pub fn gap(&mut self, name: &str, gap: f64, tol: f64) -> &mut Self {
        self.outputs.insert(format!("gap_{name}"), num(gap));
        self.tolerances.insert(name.to_string(), tol);
        self
    }

    /// `true` when every recorded gap is within its tolerance.
    pub fn gaps_within_tolerance(&self) -> bool {
        self.tolerances.iter().all(|(name, tol)| {
            self.get_f64(&format!("gap_{name}")).is_some_and(|g| g.abs() <= *tol)
        })
    }
}

/// A run's records, append-only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    records: Vec<ReportRecord>,
}

impl Default for Report {
    fn default() -> Self {
        Report { schema_version: SCHEMA_VERSION, records: Vec::new() }
    }
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, record: ReportRecord) {
        self.records.push(record);
    }

    pub fn records(&self) -> &[ReportRecord] {
        &self.records
    }

    pub fn any_fail(&self) -> bool {
        self.records.iter().any(|r| r.status == Status::Fail)
    }

    pub fn to_json(&self) -> Result<String, ReportError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self, ReportError> {
        let r: Report = serde_json::from_str(s)?;
        if r.schema_version != SCHEMA_VERSION {
            return Err(ReportError::SchemaVersion { found: r.schema_version });
        }
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn non_finite_values_round_trip() {
        for x in [f64::NAN, f64::INFINITY, f64::NEG_INFINITY, -0.0, 1e-310] {
            let back = as_f64(&num(x)).unwrap();
            assert!(back.to_bits() == x.to_bits() || (x.is_nan() && back.is_nan()));
        }
    }

    #[test]
    fn gaps_drive_status_check() {
        let mut r = ReportRecord::new("demo");
        r.gap("a", 1e-4, 1e-3);
        assert!(r.gaps_within_tolerance());
        r.gap("b", f64::NAN, 1.0);
        assert!(!r.gaps_within_tolerance());
    }

    #[test]
    fn schema_version_is_checked() {
        let text = r#"{"schema_version": 2, "records": []}"#;
        assert!(matches!(Report::from_json(text), Err(ReportError::SchemaVersion { found: 2 })));
    }

    proptest! {
        #[test]
        fn records_round_trip_bit_identically(
            vals in prop::collection::vec(any::<f64>(), 1..8),
            tol in 1e-12f64..1.0,
            ms in any::<u64>(),
        ) {
            let mut r = ReportRecord::new("prop");
            r.input("alpha", num(vals[0]));
            for (i, v) in vals.iter().enumerate() {
                r.output_f64(&format!("v{i}"), *v);
            }
            r.output("series", nums(&vals));
            r.gap("g", vals[0], tol);
            r.wall_time_ms = ms;
            r.status = Status::Fail;
            let mut rep = Report::new();
            rep.push(r);
            let text = rep.to_json().unwrap();
            let back = Report::from_json(&text).unwrap();
            for (i, v) in vals.iter().enumerate() {
                let got = back.records()[0].get_f64(&format!("v{i}")).unwrap();
                prop_assert!(got.to_bits() == v.to_bits() || (v.is_nan() && got.is_nan()));
            }
            prop_assert_eq!(back.to_json().unwrap(), text);
        }
    }
}
