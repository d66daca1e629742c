use thiserror::Error;

/// Errors raised by the qrlab pipeline.
///
/// The variants fall into four families that the command-line driver maps to
/// distinct exit codes: input problems, exhausted budgets, violated
/// preconditions and broken internal invariants.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax { line: usize, col: usize, message: String },

    #[error("unknown generator `{name}` at {line}:{col}")]
    UnknownGenerator { name: String, line: usize, col: usize },

    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("relator at {line}:{col} is trivial in the free group")]
    TrivialRelator { line: usize, col: usize },

    #[error("generator index {index} out of range for arity {arity}")]
    GeneratorOutOfRange { index: usize, arity: usize },

    #[error("coset enumeration exceeded {max_cosets} cosets (group may be infinite or too large)")]
    CosetBudget { max_cosets: usize },

    #[error("group of order {order} exceeds the bound {bound} for {operation}")]
    OrderBound { operation: &'static str, order: usize, bound: usize },

    #[error("group of order {order} is not a {p}-group")]
    NotPGroup { order: usize, p: u64 },

    #[error("operands belong to different groups or coefficient rings")]
    GroupMismatch,

    #[error("presentation and group table do not match: {0}")]
    TableMismatch(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("p-torsion present: {0}")]
    Torsion(String),

    #[error("p-adic precision {k} exceeds the supported bound for p = {p}")]
    PrecisionBound { p: u64, k: u32 },

    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// True for errors caused by malformed or unreadable input.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::UnknownGenerator { .. }
                | Error::DuplicateGenerator(_)
                | Error::NotPrime(_)
                | Error::TrivialRelator { .. }
                | Error::GeneratorOutOfRange { .. }
                | Error::NotPGroup { .. }
                | Error::Precondition(_)
                | Error::TableMismatch(_)
        )
    }

    /// True for errors that signal an exhausted computational budget.
    pub fn is_budget_error(&self) -> bool {
        matches!(
            self,
            Error::CosetBudget { .. } | Error::OrderBound { .. } | Error::PrecisionBound { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
