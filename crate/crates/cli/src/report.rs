//! JSON report documents.

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub tool: ToolInfo,
    /// The scene (or command-line flags) that produced the report.
    pub scene: serde_json::Value,
    pub checks: Vec<CheckEntry>,
    pub soliton: Option<SolitonBlock>,
    pub warnings: Vec<String>,
    pub timing: Timing,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl ToolInfo {
    pub fn current() -> Self {
        ToolInfo {
            name: "yamabe".into(),
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

impl Status {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotApplicable => "not_applicable",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CheckEntry {
    pub name: String,
    pub status: Status,
    pub sup_error: Option<f64>,
    pub tolerance: Option<f64>,
    /// Worst grid point and the value there.
    pub worst: Option<WorstPoint>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub conditions: Vec<ConditionEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct WorstPoint {
    pub point: Vec<f64>,
    pub value: f64,
}

/// One inequality or identity of a multi-part check.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ConditionEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<String>,
    pub name: String,
    pub pass: bool,
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SolitonBlock {
    pub verdict: String,
    pub classification: String,
    pub residual_sup: Option<f64>,
    pub lambda_min: Option<f64>,
    pub lambda_max: Option<f64>,
    /// Set when the verdict is negative: lambda is then only the trace part.
    pub lambda_advisory: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Timing {
    pub seconds: f64,
}

/// JSON has no infinities; non-finite numbers become `null`.
pub fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        let doc: ReportDocument = serde_json::from_str(text)?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(serde::de::Error::custom(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                doc.schema_version
            )));
        }
        Ok(doc)
    }

    /// Every check passed or did not apply.
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    /// The same document with the timing zeroed, for comparisons.
    pub fn without_timing(&self) -> Self {
        ReportDocument {
            timing: Timing { seconds: 0.0 },
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ReportDocument {
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            tool: ToolInfo::current(),
            scene: serde_json::json!({"grid": {"samples": [3, 3]}}),
            checks: vec![CheckEntry {
                name: "soliton".into(),
                status: Status::Pass,
                sup_error: Some(1.25e-15),
                tolerance: Some(1e-7),
                worst: Some(WorstPoint {
                    point: vec![0.1, -0.30000000000000004],
                    value: 1.25e-15,
                }),
                conditions: vec![],
                note: None,
            }],
            soliton: None,
            warnings: vec![],
            timing: Timing { seconds: 0.5 },
        }
    }

    #[test]
    fn round_trip_is_exact() {
        let doc = sample();
        let text = doc.to_json();
        let back = ReportDocument::from_json(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn wrong_schema_version_is_rejected() {
        let text = sample()
            .to_json()
            .replace("\"schema_version\": 1", "\"schema_version\": 2");
        assert!(ReportDocument::from_json(&text).is_err());
    }

    #[test]
    fn status_spelling() {
        assert_eq!(
            serde_json::to_string(&Status::NotApplicable).unwrap(),
            "\"not_applicable\""
        );
        assert_eq!(finite(f64::INFINITY), None);
    }
}
