//! Record loading, configuration and rendered reports for the command line
//! tool. Every command returns a [`ReportDocument`]; rendering is a separate,
//! deterministic step.

mod commands;
pub mod config;
mod document;
mod figure;
pub mod format;
mod label;
mod loader;
pub mod tables;

pub use commands::{
    cmd_audit, cmd_bound, cmd_figure_data, cmd_label, cmd_recal_check, cmd_simulate, cmd_tables, AuditSettings,
    DEFAULT_FIGURE_ALPHAS, DEFAULT_PROJECTION_RATES, DEFAULT_SLOPE_KS,
};
pub use document::{Block, Cell, OutputFormat, Provenance, ReportDocument, Section};
pub use figure::{log_grid, wall_figure_data};
pub use label::{render_uncertainty_label, UncertaintyLabel};
pub use loader::{
    file_digest, load_records, parse_records, sha256_hex, ColumnPredicate, CompareOp, LoadedRecords, RecordSchema,
    ScoreKind,
};
