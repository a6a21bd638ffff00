//! Machine- and human-readable reports.
//!
//! JSON output is versioned (`"schema": 1`) and byte-deterministic: floats
//! print in fixed 17-significant-digit scientific form (which round-trips
//! `f64` exactly), and non-finite values use the `"+inf"` / `"-inf"` tokens.

use std::fmt::Write as _;
use std::io;

use monorel_core::harness::{Failure, SuiteResult};
use monorel_core::{CheckReport, ExtendedValue, Subspace, Tolerance, Witness};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::file::{canonical_rows, RelationFile};

/// A float that serializes non-finite values as tokens.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JsonReal(pub f64);

impl Serialize for JsonReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            serializer.serialize_f64(self.0)
        } else if self.0 == f64::INFINITY {
            serializer.serialize_str("+inf")
        } else if self.0 == f64::NEG_INFINITY {
            serializer.serialize_str("-inf")
        } else {
            serializer.serialize_str("nan")
        }
    }
}

impl<'de> Deserialize<'de> for JsonReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Token(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Number(v) => Ok(JsonReal(v)),
            Raw::Token(s) => match s.as_str() {
                "+inf" => Ok(JsonReal(f64::INFINITY)),
                "-inf" => Ok(JsonReal(f64::NEG_INFINITY)),
                "nan" => Ok(JsonReal(f64::NAN)),
                other => Err(serde::de::Error::custom(format!(
                    "expected a number or +inf/-inf token, got {other:?}"
                ))),
            },
        }
    }
}

impl From<ExtendedValue> for JsonReal {
    fn from(v: ExtendedValue) -> Self {
        match v {
            ExtendedValue::Finite(x) => JsonReal(x),
            ExtendedValue::PosInf => JsonReal(f64::INFINITY),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToleranceEntry {
    pub rank_rtol: JsonReal,
    pub psd_tol: JsonReal,
    pub atol: JsonReal,
}

impl From<&Tolerance> for ToleranceEntry {
    fn from(t: &Tolerance) -> Self {
        Self {
            rank_rtol: JsonReal(t.rank_rtol),
            psd_tol: JsonReal(t.psd_tol),
            atol: JsonReal(t.atol),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WitnessEntry {
    Vector { vector: Vec<JsonReal> },
    Pair { x: Vec<JsonReal>, xstar: Vec<JsonReal> },
}

impl From<&Witness> for WitnessEntry {
    fn from(w: &Witness) -> Self {
        let reals = |v: &nalgebra::DVector<f64>| v.iter().map(|&x| JsonReal(x)).collect();
        match w {
            Witness::Vector(v) => WitnessEntry::Vector { vector: reals(v) },
            Witness::Pair { x, xstar } => WitnessEntry::Pair {
                x: reals(x),
                xstar: reals(xstar),
            },
        }
    }
}

/// One named result; the `kind` tag keeps round-trips unambiguous.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ResultEntry {
    Number {
        name: String,
        value: JsonReal,
    },
    Text {
        name: String,
        value: String,
    },
    Value {
        name: String,
        value: JsonReal,
    },
    Vector {
        name: String,
        value: Vec<JsonReal>,
    },
    Subspace {
        name: String,
        dim: usize,
        basis_rows: Vec<Vec<JsonReal>>,
    },
    Check {
        name: String,
        verdict: bool,
        margin: JsonReal,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        witness: Option<WitnessEntry>,
        #[serde(skip_serializing_if = "Vec::is_empty", default)]
        subchecks: Vec<ResultEntry>,
    },
    Relation {
        name: String,
        file: RelationFile,
    },
    Suite {
        name: String,
        trials: usize,
        failures: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureEntry {
    pub trial: usize,
    pub seed: u64,
    pub instance: String,
    pub invariant: String,
    pub margin: JsonReal,
}

impl From<&Failure> for FailureEntry {
    fn from(f: &Failure) -> Self {
        Self {
            trial: f.trial,
            seed: f.seed,
            instance: f.instance.clone(),
            invariant: f.invariant.clone(),
            margin: JsonReal(f.margin),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub tolerance: ToleranceEntry,
    pub results: Vec<ResultEntry>,
    pub failures: Vec<FailureEntry>,
}

impl Report {
    pub fn new(command: String, tol: &Tolerance) -> Self {
        Self {
            schema: 1,
            command,
            tolerance: tol.into(),
            results: Vec::new(),
            failures: Vec::new(),
        }
    }

    pub fn number(&mut self, name: &str, value: f64) {
        self.results.push(ResultEntry::Number {
            name: name.into(),
            value: JsonReal(value),
        });
    }

    pub fn text(&mut self, name: &str, value: impl Into<String>) {
        self.results.push(ResultEntry::Text {
            name: name.into(),
            value: value.into(),
        });
    }

    pub fn extended(&mut self, name: &str, value: ExtendedValue) {
        self.results.push(ResultEntry::Value {
            name: name.into(),
            value: value.into(),
        });
    }

    pub fn vector(&mut self, name: &str, v: &nalgebra::DVector<f64>) {
        self.results.push(ResultEntry::Vector {
            name: name.into(),
            value: v.iter().map(|&x| JsonReal(x)).collect(),
        });
    }

    pub fn subspace(&mut self, name: &str, s: &Subspace, tol: &Tolerance) {
        self.results.push(ResultEntry::Subspace {
            name: name.into(),
            dim: s.dim(),
            basis_rows: canonical_rows(s, tol)
                .into_iter()
                .map(|row| row.into_iter().map(JsonReal).collect())
                .collect(),
        });
    }

    pub fn check(&mut self, report: &CheckReport) {
        self.results.push(check_entry(report));
    }

    pub fn relation(&mut self, name: &str, file: RelationFile) {
        self.results.push(ResultEntry::Relation {
            name: name.into(),
            file,
        });
    }

    pub fn suite(&mut self, result: &SuiteResult) {
        self.results.push(ResultEntry::Suite {
            name: result.suite.clone(),
            trials: result.trials,
            failures: result.failures.len(),
        });
        self.failures.extend(result.failures.iter().map(FailureEntry::from));
    }

    /// Deterministic JSON serialization (see module docs).
    pub fn to_json(&self) -> String {
        let mut out = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
        self.serialize(&mut ser).expect("report serialization");
        String::from_utf8(out).expect("json is utf-8")
    }

    #[cfg(test)]
    pub fn parse(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Human-readable rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(
            out,
            "tolerance: rank_rtol={:e} psd_tol={:e} atol={:e}",
            self.tolerance.rank_rtol.0, self.tolerance.psd_tol.0, self.tolerance.atol.0
        );
        for entry in &self.results {
            render_entry(&mut out, entry, 0);
        }
        if !self.failures.is_empty() {
            let _ = writeln!(out, "failures:");
            for f in &self.failures {
                let _ = writeln!(
                    out,
                    "  trial {} seed {} [{}] {} margin {:e}",
                    f.trial, f.seed, f.instance, f.invariant, f.margin.0
                );
            }
        }
        out
    }
}

fn check_entry(report: &CheckReport) -> ResultEntry {
    ResultEntry::Check {
        name: report.predicate.clone(),
        verdict: report.verdict,
        margin: JsonReal(report.margin),
        witness: report.witness.as_ref().map(WitnessEntry::from),
        subchecks: report.subchecks.iter().map(check_entry).collect(),
    }
}

fn fmt_real(v: f64) -> String {
    if v == f64::INFINITY {
        "+inf".to_string()
    } else if v == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{v}")
    }
}

fn render_entry(out: &mut String, entry: &ResultEntry, indent: usize) {
    let pad = "  ".repeat(indent);
    match entry {
        ResultEntry::Number { name, value } => {
            let _ = writeln!(out, "{pad}{name}: {}", fmt_real(value.0));
        }
        ResultEntry::Text { name, value } => {
            let _ = writeln!(out, "{pad}{name}: {value}");
        }
        ResultEntry::Value { name, value } => {
            let _ = writeln!(out, "{pad}{name}: {}", fmt_real(value.0));
        }
        ResultEntry::Vector { name, value } => {
            let coords: Vec<String> = value.iter().map(|v| fmt_real(v.0)).collect();
            let _ = writeln!(out, "{pad}{name}: [{}]", coords.join(", "));
        }
        ResultEntry::Subspace {
            name,
            dim,
            basis_rows,
        } => {
            let _ = writeln!(out, "{pad}{name}: dim {dim}");
            for row in basis_rows {
                let coords: Vec<String> = row.iter().map(|v| fmt_real(v.0)).collect();
                let _ = writeln!(out, "{pad}  [{}]", coords.join(", "));
            }
        }
        ResultEntry::Check {
            name,
            verdict,
            margin,
            subchecks,
            ..
        } => {
            let _ = writeln!(
                out,
                "{pad}{name}: {} (margin {})",
                if *verdict { "true" } else { "false" },
                fmt_real(margin.0)
            );
            for sub in subchecks {
                render_entry(out, sub, indent + 1);
            }
        }
        ResultEntry::Relation { name, file } => {
            let _ = writeln!(out, "{pad}{name}: n={}", file.n);
            if let Some(rows) = &file.matrix {
                let _ = writeln!(out, "{pad}  matrix:");
                for row in rows {
                    let coords: Vec<String> = row.iter().map(|v| fmt_real(*v)).collect();
                    let _ = writeln!(out, "{pad}    [{}]", coords.join(", "));
                }
            }
            if let Some(rows) = &file.graph_basis {
                let _ = writeln!(out, "{pad}  graph_basis:");
                for row in rows {
                    let coords: Vec<String> = row.iter().map(|v| fmt_real(*v)).collect();
                    let _ = writeln!(out, "{pad}    [{}]", coords.join(", "));
                }
            }
        }
        ResultEntry::Suite {
            name,
            trials,
            failures,
        } => {
            let _ = writeln!(
                out,
                "{pad}suite {name}: {trials} trials, {failures} failures{}",
                if *failures == 0 { " -- pass" } else { "" }
            );
        }
    }
}

/// Compact JSON with floats in 17-significant-digit scientific notation.
struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W: io::Write + ?Sized>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trips() {
        let tol = Tolerance::default();
        let mut r = Report::new("info x.json".into(), &tol);
        r.number("n", 2.0);
        r.text("form", "matrix");
        r.extended("value", ExtendedValue::PosInf);
        r.extended("other", ExtendedValue::finite(0.1 + 0.2));
        let s = Subspace::full(2);
        r.subspace("dom", &s, &tol);
        let json = r.to_json();
        let back = Report::parse(&json).unwrap();
        assert_eq!(back, r);
        // And byte-identical re-serialization.
        assert_eq!(back.to_json(), json);
    }

    #[test]
    fn sci_floats_round_trip_exactly() {
        for v in [0.1, 1.0 / 3.0, 1e-300, -2.5e17, f64::MIN_POSITIVE] {
            let s = format!("{v:.16e}");
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, v, "17 significant digits must round-trip");
        }
    }

    #[test]
    fn infinity_tokens() {
        let tol = Tolerance::default();
        let mut r = Report::new("fitz".into(), &tol);
        r.extended("value", ExtendedValue::PosInf);
        let json = r.to_json();
        assert!(json.contains("\"+inf\""));
        assert_eq!(Report::parse(&json).unwrap(), r);
    }
}
