use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;

use qrlab::groupring::{dimension_series, jennings_series};
use qrlab::permrec::{harness_lattice, HarnessReport};
use qrlab::relmod::{bar_h2, hopf_h2, qr_check_lattice, QrReport};
use qrlab::{todd_coxeter, AbelianInvariants, Config, Error, Presentation, RelationLattice};

use crate::error::{CliError, ExitStatus};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, Default)]
pub struct Options {
    /// Overrides the primes listed in the presentation when nonempty.
    pub primes: Vec<u64>,
    pub config: Config,
    pub timing: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InputEcho {
    pub path: Option<String>,
    pub name: Option<String>,
    pub note: Option<String>,
    pub presentation: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct H2Report {
    pub hopf: AbelianInvariants,
    /// `None` when the group exceeds the bar-resolution bound.
    pub bar: Option<AbelianInvariants>,
    pub agree: Option<bool>,
    /// `R/[R,F]`.
    pub coinvariants: AbelianInvariants,
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimeReport {
    pub prime: u64,
    pub filtration_agrees: Option<bool>,
    pub qr: Option<QrReport>,
    pub harness: Option<HarnessReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub total_ms: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub version: String,
    pub input: InputEcho,
    pub order: Option<usize>,
    pub gab: Option<AbelianInvariants>,
    pub h2: Option<H2Report>,
    pub primes: Vec<PrimeReport>,
    pub failed_stage: Option<String>,
    pub error: Option<String>,
    pub notes: Vec<String>,
    pub violations: Vec<String>,
    pub timing: Option<Timing>,
    #[serde(skip)]
    pub status: ExitStatus,
    #[serde(skip)]
    pub millis: u128,
}

impl Report {
    fn fail(&mut self, stage: &str, e: Error) {
        self.failed_stage = Some(stage.to_string());
        self.status = self.status.worst(ExitStatus::of_error(&e));
        self.error = Some(e.to_string());
    }

    fn violation(&mut self, what: String) {
        self.violations.push(what);
        self.status = self.status.worst(ExitStatus::Violation);
    }
}

pub fn read_presentation(path: &Path) -> Result<Presentation, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    Ok(qrlab::parse_presentation(&text)?)
}

/// enumerate -> filtration -> lattice -> QR -> H2 -> harness; stops at the
/// first failing stage and keeps what was computed so far.
pub fn check(pres: &Presentation, path: Option<&str>, opts: &Options) -> Report {
    let start = Instant::now();
    let mut report = Report {
        schema: SCHEMA,
        version: env!("CARGO_PKG_VERSION").to_string(),
        input: InputEcho {
            path: path.map(str::to_string),
            name: pres.name().map(str::to_string),
            note: pres.note().map(str::to_string),
            presentation: pres.to_string(),
        },
        order: None,
        gab: None,
        h2: None,
        primes: Vec::new(),
        failed_stage: None,
        error: None,
        notes: Vec::new(),
        violations: Vec::new(),
        timing: None,
        status: ExitStatus::Ok,
        millis: 0,
    };
    let primes = if opts.primes.is_empty() { pres.primes().to_vec() } else { opts.primes.clone() };
    report.primes = primes
        .iter()
        .map(|&prime| PrimeReport { prime, filtration_agrees: None, qr: None, harness: None })
        .collect();
    run_stages(pres, opts, &mut report);
    report.millis = start.elapsed().as_millis();
    if opts.timing {
        report.timing = Some(Timing { total_ms: report.millis });
    }
    report
}

fn run_stages(pres: &Presentation, opts: &Options, report: &mut Report) {
    let cfg = &opts.config;
    let tbl = match todd_coxeter(pres, cfg.max_cosets) {
        Ok(t) => Arc::new(t),
        Err(e) => return report.fail("enumerate", e),
    };
    report.order = Some(tbl.order());
    if let Some(n) = quaternion_label_note(pres, tbl.order()) {
        report.notes.push(n);
    }

    for i in 0..report.primes.len() {
        let p = report.primes[i].prime;
        let agree = dimension_series(&tbl, p).and_then(|d| {
            let j = jennings_series(&tbl, p)?;
            Ok(d.len() == j.len() && d.iter().zip(&j).all(|(a, b)| a.members() == b.members()))
        });
        match agree {
            Ok(a) => {
                report.primes[i].filtration_agrees = Some(a);
                if !a {
                    report.violation(format!("p = {p}: dimension series and Jennings series differ"));
                }
            }
            Err(e) => return report.fail("filtration", e),
        }
    }

    let lat = match RelationLattice::new(pres, Arc::clone(&tbl)) {
        Ok(l) => l,
        Err(e) => return report.fail("lattice", e),
    };

    for i in 0..report.primes.len() {
        let p = report.primes[i].prime;
        match qr_check_lattice(&lat, p, cfg) {
            Ok(q) => {
                if !q.equivalence_holds {
                    report.violation(format!(
                        "p = {p}: level torsion and torsion of R/[R,F] disagree"
                    ));
                }
                if !q.complete {
                    report.notes.push(format!(
                        "p = {p}: levels checked up to {} of {}; verdict covers only those",
                        q.levels.len(),
                        q.n0
                    ));
                }
                report.primes[i].qr = Some(q);
            }
            Err(e) => return report.fail("qr", e),
        }
    }

    let hopf = match hopf_h2(pres, &lat) {
        Ok(h) => h,
        Err(e) => return report.fail("h2", e),
    };
    report.gab = Some(hopf.gab.clone());
    let (bar, agree) = match bar_h2(&tbl, cfg.bar_bound) {
        Ok(b) => {
            let a = b == hopf.h2;
            (Some(b), Some(a))
        }
        Err(Error::OrderBound { .. }) => {
            report.notes.push(format!(
                "bar resolution skipped: order {} exceeds {}",
                tbl.order(),
                cfg.bar_bound
            ));
            (None, None)
        }
        Err(e) => return report.fail("h2", e),
    };
    if agree == Some(false) {
        report.violation(format!(
            "H2 routes disagree: Hopf {} vs bar {}",
            hopf.h2,
            bar.as_ref().unwrap()
        ));
    }
    report.h2 = Some(H2Report { hopf: hopf.h2, bar, agree, coinvariants: hopf.coinvariants });

    for i in 0..report.primes.len() {
        let p = report.primes[i].prime;
        if !report.primes[i].qr.as_ref().is_some_and(|q| q.verdict.is_qr() && q.complete) {
            continue;
        }
        match harness_lattice(&lat, p, cfg) {
            Ok(h) => {
                if h.violations > 0 {
                    report.violation(format!("p = {p}: {} harness violations", h.violations));
                }
                if h.unknowns > 0 {
                    report.notes.push(format!("p = {p}: {} harness levels undecided", h.unknowns));
                }
                report.primes[i].harness = Some(h);
            }
            Err(e) => return report.fail("harness", e),
        }
    }
}

fn quaternion_label_note(pres: &Presentation, order: usize) -> Option<String> {
    let label = format!("{} {}", pres.name().unwrap_or(""), pres.note().unwrap_or(""));
    (label.to_ascii_lowercase().contains("q8") && order != 8).then(|| {
        format!("presentation is associated with the label Q8 but enumerates to order {order}")
    })
}

/// Pretty JSON with object keys sorted.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("reports serialize");
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

pub(crate) fn qr_cell(q: Option<&QrReport>) -> String {
    match q {
        None => "error".into(),
        Some(q) => match q.verdict {
            qrlab::Verdict::Qr => "qr".into(),
            qrlab::Verdict::NotQr { witness_level } => format!("not-qr@{witness_level}"),
        },
    }
}
