use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qrlab::{todd_coxeter, Config};
use qrlab_cli::corpus::{overall_status, report_rows, rows, CorpusSummary, CSV_HEADER};
use qrlab_cli::{check, load_corpus, oracle, read_presentation, run_corpus, to_canonical_json};
use qrlab_cli::{CliError, ExitStatus, Options};

#[derive(Parser)]
#[command(name = "qrlab", version, about = "Quasirationality and Schur multipliers of finite p-group presentations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis of one presentation file.
    Check {
        path: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run every entry of a corpus file and compare against expected results.
    Corpus {
        path: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Raw output of the independent oracles.
    Oracle {
        #[command(subcommand)]
        oracle: OracleCommand,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// H2 from the normalized bar complex.
    BarH2 {
        path: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Dimensions of the augmentation ideal powers over F_p.
    DeltaDims {
        path: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// All subgroups with their conjugacy classes.
    Subgroups {
        path: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Clone)]
struct Common {
    /// Prime to analyse at; repeatable. Defaults to the file's `prime:` list.
    #[arg(long = "prime")]
    primes: Vec<u64>,
    #[arg(long)]
    max_cosets: Option<usize>,
    /// p-adic precision k of the lifted modules.
    #[arg(long)]
    precision: Option<u32>,
    /// Examine exactly this many filtration levels instead of stopping at n0.
    #[arg(long)]
    max_level: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include wall-clock timing in JSON output.
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl Common {
    fn options(&self) -> Options {
        let mut config = Config::default();
        if let Some(m) = self.max_cosets {
            config.max_cosets = m;
        }
        if let Some(k) = self.precision {
            config.precision = k;
        }
        config.max_level = self.max_level;
        Options { primes: self.primes.clone(), config, timing: self.timing }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => {
            std::fs::write(p, text).map_err(|source| CliError::Io { path: p.to_path_buf(), source })
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

fn csv(rows: impl IntoIterator<Item = qrlab_cli::CorpusRow>) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&r.to_csv());
        s.push('\n');
    }
    s
}

fn run(cli: Cli) -> Result<ExitStatus, CliError> {
    match cli.command {
        Command::Check { path, common, format } => {
            let pres = read_presentation(&path)?;
            let opts = common.options();
            let report = check(&pres, Some(&path.to_string_lossy()), &opts);
            let text = match format {
                Format::Json => to_canonical_json(&report),
                Format::Csv => {
                    let id = pres.name().map(str::to_string).unwrap_or_else(|| {
                        path.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned())
                    });
                    let status = if report.status == ExitStatus::Ok { "ok" } else { "failed" };
                    csv(report_rows(&id, &report, status))
                }
            };
            emit(common.out.as_deref(), &text)?;
            for v in &report.violations {
                eprintln!("violation: {v}");
            }
            if let Some(e) = &report.error {
                eprintln!("error: {e}");
            }
            Ok(report.status)
        }
        Command::Corpus { path, common, jobs, format } => {
            let entries = load_corpus(&path)?;
            let opts = common.options();
            let outcomes = run_corpus(&entries, &opts, jobs);
            let all_rows: Vec<_> = outcomes.iter().flat_map(rows).collect();
            let status = overall_status(&outcomes);
            for r in all_rows.iter().filter(|r| r.check != "ok") {
                eprintln!("{}: {}", r.id, r.check);
            }
            let text = match format {
                Format::Csv => csv(all_rows),
                Format::Json => to_canonical_json(&CorpusSummary {
                    schema: qrlab_cli::report::SCHEMA,
                    entries: outcomes.len(),
                    failures: outcomes.iter().filter(|o| o.status != ExitStatus::Ok).count(),
                    rows: all_rows,
                    outcomes: &outcomes,
                }),
            };
            emit(common.out.as_deref(), &text)?;
            Ok(status)
        }
        Command::Oracle { oracle: o } => {
            let (path, common) = match &o {
                OracleCommand::BarH2 { path, common }
                | OracleCommand::DeltaDims { path, common }
                | OracleCommand::Subgroups { path, common } => (path, common),
            };
            let pres = read_presentation(path)?;
            let opts = common.options();
            let tbl = todd_coxeter(&pres, opts.config.max_cosets)?;
            let primes = if opts.primes.is_empty() { pres.primes().to_vec() } else { opts.primes };
            let text = match o {
                OracleCommand::BarH2 { .. } => to_canonical_json(&oracle::bar(&tbl, &opts.config)?),
                OracleCommand::DeltaDims { .. } => {
                    let dims = primes
                        .iter()
                        .map(|&p| oracle::delta_dims(&tbl, p))
                        .collect::<qrlab::Result<Vec<_>>>()?;
                    to_canonical_json(&dims)
                }
                OracleCommand::Subgroups { .. } => {
                    to_canonical_json(&oracle::subgroups(&tbl, &opts.config)?)
                }
            };
            emit(common.out.as_deref(), &text)?;
            Ok(ExitStatus::Ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { ExitStatus::Input.code() } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(s) => ExitCode::from(s.code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.status().code() as u8)
        }
    }
}
