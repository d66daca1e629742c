//! Command-line driver for qrlab: single-presentation reports, the corpus
//! runner and raw oracle output.

pub mod corpus;
pub mod error;
pub mod oracle;
pub mod report;

pub use corpus::{load_corpus, run_corpus, CorpusEntry, CorpusRow, Expected};
pub use error::{CliError, ExitStatus};
pub use report::{check, read_presentation, to_canonical_json, Options, Report};
