//! Structured experiment reports and plot-data emission.

use std::collections::BTreeMap;

use matfree::Rational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::LabError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Exactness {
    Exact,
    Sampled,
}

/// A numeric result tagged with how it was obtained.
pub fn measured(value: impl Into<Value>, exactness: Exactness) -> Value {
    json!({ "value": value.into(), "exactness": exactness })
}

pub fn exact(value: impl Into<Value>) -> Value {
    measured(value, Exactness::Exact)
}

pub fn sampled(value: impl Into<Value>) -> Value {
    measured(value, Exactness::Sampled)
}

/// Rationals are written as `"p/q"` strings to stay exact.
pub fn ratio(r: Rational) -> Value {
    Value::String(format!("{}/{}", r.numer(), r.denom()))
}

/// Fixed-column rows for plotting.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Series {
    pub fn new(columns: &[&str]) -> Self {
        Series {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub experiment: String,
    pub params: BTreeMap<String, Value>,
    pub results: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<Series>,
    /// Set when a budget or resource limit stopped the run early; `results`
    /// then holds whatever was finished.
    #[serde(default)]
    pub partial: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub seed: u64,
    pub runtime_ms: u64,
    pub version: String,
}

impl Report {
    pub fn new(experiment: impl Into<String>, seed: u64) -> Self {
        Report {
            experiment: experiment.into(),
            params: BTreeMap::new(),
            results: BTreeMap::new(),
            series: None,
            partial: false,
            error: None,
            seed,
            runtime_ms: 0,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn result(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.results.insert(key.to_string(), value.into());
        self
    }

    /// Pretty JSON with every object's keys sorted.
    pub fn to_json(&self) -> String {
        // serde_json's default map is ordered, so a round trip through
        // `Value` sorts struct fields as well.
        let value = serde_json::to_value(self).expect("report is serializable");
        let mut out = serde_json::to_string_pretty(&value).expect("value is serializable");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self, LabError> {
        Ok(serde_json::from_str(text)?)
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Object(o) if o.contains_key("value") => cell(&o["value"]),
        other => other.to_string(),
    }
}

/// Comma-separated rows of the report's series, header first.
pub fn emit_plot_data(report: &Report) -> Result<String, LabError> {
    let series = report
        .series
        .as_ref()
        .ok_or_else(|| LabError::Config(format!("report for {} has no series", report.experiment)))?;
    let mut out = series.columns.join(",");
    out.push('\n');
    for row in &series.rows {
        out.push_str(&row.iter().map(cell).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    Ok(out)
}
