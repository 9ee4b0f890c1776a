//! Verification report schema and atomic file output. Reports are pure
//! functions of their inputs: field order is fixed, lists are sorted by
//! construction, and wall-clock time is recorded only on request.

use std::fs;
use std::io;
use std::path::Path;

use serde::Serialize;

/// What a check was run on. Absent parts (a ring-only check, a system-only
/// check) are omitted from the output.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Instance {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub system: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ring: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ideal: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// Enumeration hit a cap; nothing was asserted either way.
    Capped,
    /// A registered exception failed in exactly the registered way.
    ExpectedFail,
}

/// Deterministic work measures, plus wall time when explicitly requested.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Timings {
    /// Group elements enumerated across all closures of the check.
    pub elements: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub lemma_id: String,
    pub instance: Instance,
    pub status: Status,
    pub witnesses: Vec<String>,
    pub timings: Timings,
}

impl LemmaReport {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => 0,
            Status::Fail | Status::ExpectedFail => 1,
            Status::Capped => 3,
        }
    }
}

/// Aggregate counts for a suite run.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteSummary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub expected_fail: usize,
    pub capped: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub profile: String,
    pub summary: SuiteSummary,
    pub entries: Vec<LemmaReport>,
}

impl SuiteReport {
    pub fn new(profile: &str, entries: Vec<LemmaReport>) -> SuiteReport {
        let mut summary = SuiteSummary { total: entries.len(), ..Default::default() };
        for e in &entries {
            match e.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::ExpectedFail => summary.expected_fail += 1,
                Status::Capped => summary.capped += 1,
            }
        }
        SuiteReport { profile: profile.to_string(), summary, entries }
    }

    /// Capped entries are the suite's budget mechanism, not failures: the
    /// run is green unless something genuinely failed.
    pub fn exit_code(&self) -> i32 {
        if self.summary.fail > 0 {
            1
        } else {
            0
        }
    }
}

/// Writes via a temporary file in the same directory plus a rename, so a
/// reader never observes a half-written report.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let file_name = path
        .file_name()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "missing file name"))?;
    let mut tmp_name = file_name.to_os_string();
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = match dir {
        Some(d) => d.join(&tmp_name),
        None => tmp_name.into(),
    };
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)
}

/// Serializes a report (pretty, trailing newline) for files and stdout.
pub fn render_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization");
    s.push('\n');
    s
}

/// Emits to the output path when given, otherwise to stdout.
pub fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> io::Result<()> {
    let body = render_json(value);
    match out {
        Some(p) => write_atomic(p, &body),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}
