use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
///
/// Variants are grouped by how the CLI maps them onto exit codes: input and
/// parse failures exit with 1, parameter validation failures exit with 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("flag never fires (sensitivity and false positive rate are both zero)")]
    UndefinedFlag,

    #[error("PPV is zero, number needed to detain is infinite")]
    InfiniteNnd,

    #[error("grid must be strictly increasing (violated at index {index})")]
    UnsortedGrid { index: usize },

    #[error("record set is empty")]
    EmptyRecords,

    #[error("cutoff cannot be resolved: {0}")]
    UnresolvableCutoff(String),

    #[error("no {class} in the data; rate is undefined")]
    ZeroDenominator { class: &'static str },

    #[error("analytic LR interval needs all four confusion cells >= 1 (got {tp}/{fp}/{tn}/{fn_}); use the bootstrap method")]
    ZeroCells { tp: u64, fp: u64, tn: u64, fn_: u64 },

    #[error("false positive rate is zero; likelihood ratio is unbounded (perfect specificity)")]
    PerfectSpecificity,

    #[error("input contains a single outcome class")]
    SingleClass,

    #[error("no root of {what} inside the search bracket")]
    NoRoot { what: &'static str },

    #[error("optimizer did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("fitted slope {slope} is not positive; the map does not preserve orientation")]
    NotOrientationPreserving { slope: f64, intercept: f64 },

    #[error("value {value} lies outside the transform domain")]
    DomainViolation { value: f64 },

    #[error("transform is not strictly increasing between {lower} and {upper}")]
    NotStrictlyIncreasing { lower: f64, upper: f64 },

    #[error("length mismatch: {left} scores vs {right} outcomes")]
    LengthMismatch { left: usize, right: usize },

    #[error("records carry no factor columns")]
    MissingFactors,

    #[error("group `{0}` has no negatives")]
    GroupWithoutNegatives(String),

    #[error("need at least two groups, found {0}")]
    TooFewGroups(usize),

    #[error("reference group `{0}` not present")]
    UnknownGroup(String),

    #[error("missing column `{0}`")]
    MissingColumn(String),

    #[error("line {line}: column `{column}`: outcome must be 0 or 1, got `{value}`")]
    NonBinaryOutcome { line: u64, column: String, value: String },

    #[error("line {line}: column `{column}`: cannot parse `{value}`")]
    Parse { line: u64, column: String, value: String },

    #[error("content digest mismatch for {path}: expected {expected}, found {found}")]
    DigestMismatch { path: PathBuf, expected: String, found: String },

    #[error("config: {0}")]
    Config(String),

    #[error("expression: {0}")]
    Expression(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }

    /// Stable process exit code: 1 for input/parse problems, 2 for parameter
    /// validation.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter { .. }
            | Error::UnsortedGrid { .. }
            | Error::UnresolvableCutoff(_)
            | Error::NotOrientationPreserving { .. }
            | Error::NotStrictlyIncreasing { .. }
            | Error::DomainViolation { .. }
            | Error::Expression(_)
            | Error::UnknownGroup(_) => 2,
            _ => 1,
        }
    }
}
