//! Self-contained JSONL scan records and the append/resume writer.

use std::collections::HashSet;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Read, Seek, SeekFrom, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::{advance, hasse_bernstein_unit, ExpansionOutcome, Status};
use crate::json::{int_rows, Int};
use crate::poly::format_rational;

pub const SCHEMA_VERSION: u32 = 1;

/// Digit vectors kept per record unless overridden.
pub const DEFAULT_DIGIT_LIMIT: usize = 500;

/// Inputs of a run, enough to re-run it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum Params {
    Expand {
        poly: String,
        alpha: Vec<String>,
        budget: usize,
    },
    Family {
        n: usize,
        m: usize,
        t: u64,
        c: Vec<u64>,
        budget: usize,
    },
    Nthroot {
        n: u32,
        m: u64,
        budget: usize,
    },
    Conjecture {
        x: u64,
        m: u64,
        budget: usize,
    },
    Analyze {
        poly: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordStatus {
    PurelyPeriodic,
    Periodic,
    Terminated,
    BudgetExhausted,
    /// The root generates a field of lower degree; not attempted.
    Degenerate,
    ResourceLimit,
    Analyzed,
    Error,
}

impl From<Status> for RecordStatus {
    fn from(s: Status) -> Self {
        match s {
            Status::PurelyPeriodic => RecordStatus::PurelyPeriodic,
            Status::Periodic => RecordStatus::Periodic,
            Status::Terminated => RecordStatus::Terminated,
            Status::BudgetExhausted => RecordStatus::BudgetExhausted,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub schema_version: u32,
    #[serde(flatten)]
    pub params: Params,
    pub status: RecordStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l0: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l1: Option<usize>,
    pub steps_used: usize,
    #[serde(default)]
    pub digits: Vec<Vec<Int>>,
    #[serde(default)]
    pub digits_truncated: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit_coeffs: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit_norm: Option<String>,
    /// Overall verdict for verification runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub passed: Option<bool>,
    #[serde(default)]
    pub findings: Vec<String>,
    /// Kind-specific detail (verification checks, root reports).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<serde_json::Value>,
    /// Only filled when timing is requested, so files stay reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

impl ScanRecord {
    pub fn new(params: Params, status: RecordStatus) -> Self {
        ScanRecord {
            schema_version: SCHEMA_VERSION,
            params,
            status,
            l0: None,
            l1: None,
            steps_used: 0,
            digits: Vec::new(),
            digits_truncated: false,
            unit_coeffs: None,
            unit_norm: None,
            passed: None,
            findings: Vec::new(),
            report: None,
            wall_ms: None,
        }
    }

    /// Record of an expansion. For periodic outcomes the unit and its norm
    /// are attached, and replaying one period from `state(l0)` is checked.
    pub fn from_outcome(params: Params, out: &ExpansionOutcome, digit_limit: usize) -> Self {
        let mut r = ScanRecord::new(params, out.status.into());
        r.l0 = out.l0;
        r.l1 = out.l1;
        r.steps_used = out.steps_used;
        r.set_digits(&out.digits, digit_limit);
        if out.status.is_periodic() {
            match hasse_bernstein_unit(out) {
                Ok(u) => {
                    r.unit_coeffs = Some(u.coeffs().iter().map(format_rational).collect());
                    match u.norm() {
                        Ok(nm) => {
                            if nm.numer().magnitude() != nm.denom().magnitude() {
                                r.findings
                                    .push(format!("unit norm {} is not +-1", format_rational(&nm)));
                            }
                            r.unit_norm = Some(format_rational(&nm));
                        }
                        Err(e) => r.findings.push(format!("unit norm failed: {e}")),
                    }
                }
                Err(e) => r.findings.push(format!("unit failed: {e}")),
            }
            let start = &out.period_states[0];
            match advance(start, out.l1.unwrap_or(0)) {
                Ok(s) if s.alphas == start.alphas => {}
                Ok(_) => r
                    .findings
                    .push("replaying the period does not return to state(l0)".into()),
                Err(e) => r.findings.push(format!("replay failed: {e}")),
            }
        }
        r
    }

    pub fn error(params: Params, e: &Error) -> Self {
        let status = match e {
            Error::ResourceLimit { .. } => RecordStatus::ResourceLimit,
            _ => RecordStatus::Error,
        };
        let mut r = ScanRecord::new(params, status);
        r.findings.push(e.to_string());
        r
    }

    pub fn set_digits(&mut self, digits: &[Vec<num_bigint::BigInt>], limit: usize) {
        let keep = digits.len().min(limit);
        self.digits = int_rows(&digits[..keep]);
        self.digits_truncated = keep < digits.len();
    }

    pub fn l0_plus_l1(&self) -> Option<usize> {
        Some(self.l0? + self.l1?)
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }
}

/// What was recovered from an existing output file.
#[derive(Debug, Default)]
pub struct ResumeState {
    pub done: HashSet<Params>,
    pub records: usize,
    /// Line numbers (1-based) that did not parse.
    pub corrupt_lines: Vec<usize>,
    /// Bytes of an unterminated final line that were cut off.
    pub truncated_bytes: u64,
}

/// Scans `path`, drops an unterminated final line, and collects the params
/// already present. Corrupt complete lines are reported and skipped.
pub fn prepare_resume(path: &Path) -> Result<ResumeState> {
    let mut st = ResumeState::default();
    let mut file = match OpenOptions::new().read(true).write(true).open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(st),
        Err(e) => return Err(io_err(path, e)),
    };
    let mut bytes = Vec::new();
    file.read_to_end(&mut bytes).map_err(|e| io_err(path, e))?;
    let keep = bytes.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1);
    if keep < bytes.len() {
        st.truncated_bytes = (bytes.len() - keep) as u64;
        file.set_len(keep as u64).map_err(|e| io_err(path, e))?;
        file.seek(SeekFrom::End(0)).map_err(|e| io_err(path, e))?;
    }
    for (i, line) in BufReader::new(&bytes[..keep]).lines().enumerate() {
        let line = line.map_err(|e| io_err(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<ScanRecord>(&line) {
            Ok(r) => {
                st.records += 1;
                st.done.insert(r.params);
            }
            Err(_) => st.corrupt_lines.push(i + 1),
        }
    }
    Ok(st)
}

/// Reads every parseable record; corrupt lines are skipped.
pub fn read_records(path: &Path) -> Result<(Vec<ScanRecord>, Vec<usize>)> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let mut out = Vec::new();
    let mut corrupt = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| io_err(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str(&line) {
            Ok(r) => out.push(r),
            Err(_) => corrupt.push(i + 1),
        }
    }
    Ok((out, corrupt))
}

/// Append-only JSONL sink; each record is written and flushed as one line.
pub struct JsonlWriter {
    file: File,
}

impl JsonlWriter {
    pub fn append(path: &Path) -> Result<Self> {
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| io_err(path, e))?;
        Ok(JsonlWriter { file })
    }

    pub fn create(path: &Path) -> Result<Self> {
        let file = File::create(path).map_err(|e| io_err(path, e))?;
        Ok(JsonlWriter { file })
    }

    pub fn write(&mut self, r: &ScanRecord) -> Result<()> {
        let mut line = r.to_line();
        line.push('\n');
        self.file
            .write_all(line.as_bytes())
            .and_then(|_| self.file.flush())
            .map_err(|e| Error::Io(e.to_string()))
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}
