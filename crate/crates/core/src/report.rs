//! Machine-readable check records, one JSON object per line.

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::scalar::QSqrt2;

/// Rounds to 12 significant digits; negative zero becomes zero.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultEntry {
    pub label: String,
    /// `[p, q, r, s]` for `p/q + (r/s)√2`; absent for float-only values or
    /// when a component overflows 64 bits.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<[i64; 4]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub float: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub label: String,
    pub value: f64,
    pub tol: f64,
}

impl Residual {
    /// Exact checks use tolerance 0, so the comparison is inclusive.
    pub fn passes(&self) -> bool {
        self.value <= self.tol
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub results: Vec<ResultEntry>,
    pub residuals: Vec<Residual>,
    pub pass: bool,
    pub seed: Option<u64>,
}

impl ReportRecord {
    pub fn new(command: impl Into<String>) -> Self {
        ReportRecord {
            command: command.into(),
            inputs: BTreeMap::new(),
            results: Vec::new(),
            residuals: Vec::new(),
            pass: true,
            seed: None,
        }
    }

    pub fn input(mut self, key: &str, value: impl ToString) -> Self {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn exact(&mut self, label: impl Into<String>, x: &QSqrt2) {
        self.results.push(ResultEntry {
            label: label.into(),
            exact: x.to_tuple().ok(),
            float: Some(round12(x.to_f64())),
            text: None,
        });
    }

    pub fn float(&mut self, label: impl Into<String>, x: f64) {
        self.results.push(ResultEntry {
            label: label.into(),
            exact: None,
            float: Some(round12(x)),
            text: None,
        });
    }

    pub fn text(&mut self, label: impl Into<String>, s: impl Into<String>) {
        self.results.push(ResultEntry {
            label: label.into(),
            exact: None,
            float: None,
            text: Some(s.into()),
        });
    }

    pub fn residual(&mut self, label: impl Into<String>, value: f64, tol: f64) {
        let r = Residual {
            label: label.into(),
            value: round12(value),
            tol,
        };
        self.pass &= r.passes();
        self.residuals.push(r);
    }

    /// Records an exact yes/no check as a residual of 0 or 1 with tolerance 0.
    pub fn check(&mut self, label: impl Into<String>, ok: bool) {
        self.residual(label, if ok { 0.0 } else { 1.0 }, 0.0);
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }
}

pub fn write_ndjson<W: Write>(out: &mut W, records: &[ReportRecord]) -> io::Result<()> {
    for r in records {
        writeln!(out, "{}", r.to_line())?;
    }
    Ok(())
}
