use std::collections::HashSet;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, ExitStatus};
use crate::report::{check, qr_cell, read_presentation, Options, Report};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    pub order: Option<usize>,
    pub qr: Option<bool>,
    pub h2: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusEntry {
    pub id: String,
    /// Relative to the corpus file.
    pub path: PathBuf,
    pub expected: Option<Expected>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct CorpusFile {
    #[serde(default)]
    entry: Vec<CorpusEntry>,
}

/// Entries with paths resolved against the corpus file's directory.
pub fn load_corpus(path: &Path) -> Result<Vec<CorpusEntry>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    let file: CorpusFile = toml::from_str(&text)
        .map_err(|e| CliError::Corpus { path: path.to_path_buf(), message: e.to_string() })?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(file.entry.len());
    for mut e in file.entry {
        if !seen.insert(e.id.clone()) {
            return Err(CliError::Corpus {
                path: path.to_path_buf(),
                message: format!("duplicate entry id `{}`", e.id),
            });
        }
        e.path = base.join(&e.path);
        out.push(e);
    }
    Ok(out)
}

/// One CSV line: an (entry, prime) pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusRow {
    pub id: String,
    pub prime: Option<u64>,
    pub order: Option<usize>,
    pub gab: String,
    pub h2: String,
    pub qr: String,
    pub harness: String,
    pub millis: u128,
    /// `ok`, or what went wrong.
    pub check: String,
}

pub const CSV_HEADER: &str = "id,prime,order,gab,h2,qr,harness,millis,check";

impl CorpusRow {
    pub fn to_csv(&self) -> String {
        let opt = |x: Option<String>| x.unwrap_or_default();
        [
            self.id.clone(),
            opt(self.prime.map(|p| p.to_string())),
            opt(self.order.map(|o| o.to_string())),
            self.gab.clone(),
            self.h2.clone(),
            self.qr.clone(),
            self.harness.clone(),
            self.millis.to_string(),
            self.check.clone(),
        ]
        .iter()
        .map(|s| csv_field(s))
        .collect::<Vec<_>>()
        .join(",")
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryOutcome {
    pub id: String,
    pub mismatches: Vec<String>,
    pub report: Option<Report>,
    pub error: Option<String>,
    #[serde(skip)]
    pub status: ExitStatus,
}

fn compare(expected: &Expected, report: &Report) -> Vec<String> {
    let mut out = Vec::new();
    if let Some(o) = expected.order {
        if report.order != Some(o) {
            out.push(format!("order: expected {o}, got {}", show(report.order)));
        }
    }
    if let Some(h) = &expected.h2 {
        let got = report.h2.as_ref().map(|x| x.hopf.to_string());
        if got.as_deref() != Some(h.as_str()) {
            out.push(format!("h2: expected {h}, got {}", show(got)));
        }
    }
    if let Some(qr) = expected.qr {
        for pr in &report.primes {
            let got = pr.qr.as_ref().map(|q| q.verdict.is_qr());
            if got != Some(qr) {
                out.push(format!("qr at p = {}: expected {qr}, got {}", pr.prime, show(got)));
            }
        }
    }
    out
}

fn show<T: ToString>(x: Option<T>) -> String {
    x.map_or_else(|| "nothing".to_string(), |v| v.to_string())
}

fn run_entry(e: &CorpusEntry, opts: &Options) -> EntryOutcome {
    let pres = match read_presentation(&e.path) {
        Ok(p) => p,
        Err(err) => {
            return EntryOutcome {
                id: e.id.clone(),
                mismatches: Vec::new(),
                report: None,
                error: Some(err.to_string()),
                status: err.status(),
            }
        }
    };
    let report = check(&pres, Some(&e.path.to_string_lossy()), opts);
    let mismatches = e.expected.as_ref().map(|x| compare(x, &report)).unwrap_or_default();
    let mut status = report.status;
    if !mismatches.is_empty() {
        status = status.worst(ExitStatus::Violation);
    }
    EntryOutcome { id: e.id.clone(), mismatches, report: Some(report), error: None, status }
}

/// Runs every entry on a pool of `jobs` workers; outcomes keep corpus order.
pub fn run_corpus(entries: &[CorpusEntry], opts: &Options, jobs: usize) -> Vec<EntryOutcome> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    pool.install(|| entries.par_iter().map(|e| run_entry(e, opts)).collect())
}

pub fn overall_status(outcomes: &[EntryOutcome]) -> ExitStatus {
    outcomes.iter().fold(ExitStatus::Ok, |s, o| s.worst(o.status))
}

pub fn rows(outcome: &EntryOutcome) -> Vec<CorpusRow> {
    let check = if let Some(e) = &outcome.error {
        format!("error: {e}")
    } else if !outcome.mismatches.is_empty() {
        format!("mismatch: {}", outcome.mismatches.join("; "))
    } else if let Some(r) = outcome.report.as_ref().filter(|r| r.status != ExitStatus::Ok) {
        match (&r.failed_stage, r.violations.first()) {
            (Some(stage), _) => format!("failed at {stage}"),
            (None, Some(v)) => format!("violation: {v}"),
            (None, None) => "failed".into(),
        }
    } else {
        "ok".into()
    };
    let Some(r) = &outcome.report else {
        return vec![CorpusRow {
            id: outcome.id.clone(),
            prime: None,
            order: None,
            gab: String::new(),
            h2: String::new(),
            qr: "error".into(),
            harness: String::new(),
            millis: 0,
            check,
        }];
    };
    report_rows(&outcome.id, r, &check)
}

pub fn report_rows(id: &str, r: &Report, check: &str) -> Vec<CorpusRow> {
    r.primes
        .iter()
        .map(|pr| CorpusRow {
            id: id.to_string(),
            prime: Some(pr.prime),
            order: r.order,
            gab: r.gab.as_ref().map(|g| g.to_string()).unwrap_or_default(),
            h2: r.h2.as_ref().map(|h| h.hopf.to_string()).unwrap_or_default(),
            qr: qr_cell(pr.qr.as_ref()),
            harness: match (&pr.harness, &pr.qr) {
                (Some(h), _) => h.summary(),
                (None, Some(q)) if !q.verdict.is_qr() => "-".into(),
                _ if r.failed_stage.is_some() => "error".into(),
                _ => "-".into(),
            },
            millis: r.millis,
            check: check.to_string(),
        })
        .collect()
}

#[derive(Serialize)]
pub struct CorpusSummary<'a> {
    pub schema: u32,
    pub entries: usize,
    pub failures: usize,
    pub rows: Vec<CorpusRow>,
    pub outcomes: &'a [EntryOutcome],
}
