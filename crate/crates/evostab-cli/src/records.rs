//! Report records and document assembly.
//!
//! Every command builds its whole report in memory as a list of records with
//! a stable field order, then writes it in a single shot. Floats are
//! serialized at 17 significant digits, so identical configurations produce
//! byte-identical reports.

use crate::commands::Failure;
use evostab::adapted_norms::Classification;
use evostab::certificates::StabilityCertificate;
use evostab::dynamics::FamilyFile;
use evostab::linalg::VectorNorm;
use evostab::report::{self, CheckStatus};
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// How the assembled document is rendered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    /// one JSON object per line (the canonical machine-readable form)
    #[default]
    Records,
    /// aligned text table derived from the same records
    Table,
}

/// First line of every report: what ran and with which knobs.
#[derive(Serialize)]
pub struct RunRecord {
    pub record: &'static str,
    pub command: &'static str,
    pub family: Option<FamilyFile>,
    /// window length; null when a suite chooses its own window
    pub horizon: Option<usize>,
    pub vector_norm: VectorNorm,
    pub probes: usize,
    pub seed: u64,
}

impl RunRecord {
    pub fn new(
        command: &'static str,
        family: Option<FamilyFile>,
        horizon: Option<usize>,
        vector_norm: VectorNorm,
        probes: usize,
        seed: u64,
    ) -> Self {
        RunRecord { record: "run", command, family, horizon, vector_norm, probes, seed }
    }
}

/// One record per analyzed exponent: the scan verdict, the growth-constant
/// table summary, the probed evolution-map norm against its closed-form
/// ceiling, and the spectral-radius estimate. The `*_half` and
/// `prefix_growth` fields compare the half window against the full one, so
/// horizon convergence can be judged from the report alone.
#[derive(Serialize)]
pub struct AlphaRecord {
    pub record: &'static str,
    pub alpha: f64,
    pub classification: Classification,
    pub uniform: bool,
    pub weighted_sup_ln: f64,
    pub weighted_sup_ln_half: f64,
    pub growth_slope: f64,
    pub edge_attained: bool,
    pub prefix_growth: f64,
    pub tail_certified: usize,
    pub tail_heuristic: usize,
    pub growth_constant_sup_ln: f64,
    pub growth_constant_argmax: usize,
    pub growth_constant_final_ln: f64,
    pub evolution_map_norm: f64,
    pub evolution_map_ceiling: f64,
    pub spectral_radius_estimate: f64,
    pub spectral_radius_heuristic: bool,
}

/// Two-sided inverse-norm bounds at one exponent.
#[derive(Serialize)]
pub struct BoundsRecord {
    pub record: &'static str,
    pub alpha: f64,
    pub horizon: usize,
    pub lower: f64,
    /// null when the row sums diverged on the window
    pub upper: Option<f64>,
    pub divergent: bool,
    pub row_slope: f64,
    pub quality: String,
}

/// A decay certificate embedded in a report.
#[derive(Serialize)]
pub struct CertificateRecord {
    pub record: &'static str,
    pub certificate: StabilityCertificate,
}

/// Window-wide re-check of a certificate.
#[derive(Serialize)]
pub struct VerificationRecord {
    pub record: &'static str,
    pub max_ratio: f64,
    pub worst_m: usize,
    pub worst_n: usize,
    pub horizon: usize,
    pub passes: bool,
}

/// One rung of the factorial/power refinement chain.
#[derive(Serialize)]
pub struct StepChainOut {
    pub record: &'static str,
    pub k: usize,
    pub max_ratio: f64,
    pub worst_m: usize,
    pub worst_n: usize,
}

/// One named check from a worked-example suite.
#[derive(Serialize)]
pub struct CheckOut {
    pub record: &'static str,
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

/// Tally of check statuses; `exit` mirrors the process exit code.
#[derive(Serialize)]
pub struct SummaryRecord {
    pub record: &'static str,
    pub pass: usize,
    pub fail: usize,
    pub info: usize,
    pub inconclusive: usize,
    pub exit: u8,
}

/// Solver output summary.
#[derive(Serialize)]
pub struct SolutionRecord {
    pub record: &'static str,
    pub dimension: usize,
    pub horizon: usize,
    /// max over slots of the norm of `G u + v`
    pub residual: f64,
}

/// A full sequence window embedded in a report.
#[derive(Serialize)]
pub struct WindowRecord {
    pub record: &'static str,
    pub dimension: usize,
    pub values: Vec<Vec<f64>>,
}

/// A failure that still produced a (complete) report document.
#[derive(Serialize)]
pub struct ErrorRecord {
    pub record: &'static str,
    pub exit: u8,
    pub message: String,
}

/// Report under assembly: records are serialized eagerly so a late failure
/// cannot leave a half-written file behind.
pub struct Doc {
    format: OutputFormat,
    lines: Vec<String>,
}

impl Doc {
    pub fn new(format: OutputFormat) -> Self {
        Doc { format, lines: Vec::new() }
    }

    pub fn push<S: Serialize>(&mut self, rec: &S) -> Result<(), Failure> {
        self.lines.push(report::to_string_precise(rec).map_err(Failure::Lib)?);
        Ok(())
    }

    pub fn render(&self) -> Result<String, Failure> {
        match self.format {
            OutputFormat::Records => {
                let mut out = String::new();
                for line in &self.lines {
                    out.push_str(line);
                    out.push('\n');
                }
                Ok(out)
            }
            OutputFormat::Table => self.render_table(),
        }
    }

    /// The table is derived from the serialized records themselves. Floats
    /// are re-rendered with the same 17-significant-digit formatter, which
    /// round-trips exactly, so both formats show identical digits.
    fn render_table(&self) -> Result<String, Failure> {
        let mut rows = Vec::new();
        for line in &self.lines {
            let value: Value = serde_json::from_str(line)
                .map_err(|e| Failure::Config(format!("internal record reparse failed: {e}")))?;
            let Value::Object(fields) = value else {
                return Err(Failure::Config("internal record is not an object".into()));
            };
            let kind = fields
                .get("record")
                .and_then(|v| v.as_str())
                .unwrap_or("record")
                .to_string();
            for (key, val) in &fields {
                if key == "record" {
                    continue;
                }
                rows.push(vec![kind.clone(), key.clone(), flat(val)]);
            }
        }
        Ok(report::render_table(&["record", "field", "value"], &rows))
    }
}

fn flat(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => flat_nested(other),
    }
}

fn flat_nested(v: &Value) -> String {
    match v {
        Value::Null => "null".to_string(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => {
            if n.is_u64() || n.is_i64() {
                n.to_string()
            } else {
                // integer-less numbers came from the precise formatter; the
                // same format reproduces their digits exactly
                format!("{:.16e}", n.as_f64().unwrap_or(f64::NAN))
            }
        }
        Value::String(s) => serde_json::to_string(s).unwrap_or_else(|_| s.clone()),
        Value::Array(items) => {
            let inner: Vec<String> = items.iter().map(flat_nested).collect();
            format!("[{}]", inner.join(","))
        }
        Value::Object(fields) => {
            let inner: Vec<String> = fields
                .iter()
                .map(|(k, val)| format!("{}:{}", serde_json::to_string(k).unwrap(), flat_nested(val)))
                .collect();
            format!("{{{}}}", inner.join(","))
        }
    }
}
