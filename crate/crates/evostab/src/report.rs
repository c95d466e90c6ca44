//! Report records and deterministic serialization.
//!
//! Reports are emitted as JSONL (one JSON object per line) with every float
//! printed as a 17-significant-digit scientific literal, so values round-trip
//! through `f64` exactly and reruns produce byte-identical output. Records
//! must not contain non-finite floats; use markers or optional fields for
//! those regimes.

use crate::error::Error;
use crate::Result;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io;

/// Outcome of one named check inside a suite run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Info,
    Inconclusive,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Info => "info",
            CheckStatus::Inconclusive => "inconclusive",
        };
        f.write_str(s)
    }
}

/// One named check with a human-readable detail line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

impl CheckRecord {
    pub fn new(name: &str, status: CheckStatus, detail: impl Into<String>) -> Self {
        CheckRecord { name: name.to_string(), status, detail: detail.into() }
    }

    pub fn pass_if(name: &str, ok: bool, detail: impl Into<String>) -> Self {
        let status = if ok { CheckStatus::Pass } else { CheckStatus::Fail };
        CheckRecord::new(name, status, detail)
    }

    pub fn info(name: &str, detail: impl Into<String>) -> Self {
        CheckRecord::new(name, CheckStatus::Info, detail)
    }

    pub fn failed(&self) -> bool {
        self.status == CheckStatus::Fail
    }
}

/// JSON formatter that writes floats with 17 significant digits.
struct PreciseFormatter;

impl serde_json::ser::Formatter for PreciseFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        debug_assert!(value.is_finite(), "reports must not contain non-finite floats");
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        debug_assert!(value.is_finite(), "reports must not contain non-finite floats");
        write!(writer, "{value:.8e}")
    }
}

/// Serialize one value as compact JSON with full-precision floats.
pub fn to_string_precise<S: Serialize>(value: &S) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, PreciseFormatter);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::invalid(format!("serialization failed: {e}")))?;
    String::from_utf8(out).map_err(|e| Error::invalid(format!("invalid utf-8 in report: {e}")))
}

/// Serialize records as JSONL (one object per line, trailing newline).
pub fn to_jsonl<S: Serialize>(items: &[S]) -> Result<String> {
    let mut out = String::new();
    for item in items {
        out.push_str(&to_string_precise(item)?);
        out.push('\n');
    }
    Ok(out)
}

/// Render rows as a plain text table with aligned columns.
pub fn render_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let cols = headers.len();
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate().take(cols) {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    let mut push_row = |cells: Vec<&str>| {
        for (i, cell) in cells.iter().enumerate().take(cols) {
            if i > 0 {
                out.push_str("  ");
            }
            out.push_str(cell);
            if i + 1 < cols {
                for _ in cell.len()..widths[i] {
                    out.push(' ');
                }
            }
        }
        out.push('\n');
    };
    push_row(headers.to_vec());
    for row in rows {
        push_row(row.iter().map(String::as_str).collect());
    }
    out
}
