//! Settings for each subcommand, read from a TOML file with one table per
//! subcommand and overridden field by field by command-line flags.
//!
//! ```toml
//! [data]
//! input = "compas-scores-two-years-violent.csv"
//! score-column = "v_decile_score"
//! outcome-column = "two_year_recid"
//!
//! [audit]
//! base-rates = [0.05, 0.03, 0.02]
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use super::loader::{ColumnPredicate, RecordSchema, ScoreKind};
use crate::error::{Error, Result};

/// Seed used when neither flag, config nor environment supplies one.
pub const DEFAULT_SEED: u64 = 0x5eed;
pub const SEED_ENV: &str = "PRECISION_WALL_SEED";

macro_rules! fill_from {
    ($ty:ident { $($field:ident),* $(,)? }) => {
        impl $ty {
            /// Keeps every field set here and takes the rest from `fallback`.
            pub fn or(self, fallback: Self) -> Self {
                $ty { $($field: self.$field.or(fallback.$field)),* }
            }
        }
    };
}

#[derive(Debug, Clone, Default, PartialEq, Args, Deserialize, Serialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct DataArgs {
    /// Delimited input file with a header row.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub score_column: Option<String>,
    #[arg(long)]
    pub outcome_column: Option<String>,
    #[arg(long)]
    pub group_column: Option<String>,
    /// Binary factor: `col`, `col=text`, `col!=text` or `col>N` (repeatable).
    #[arg(long = "factor", value_name = "PREDICATE")]
    pub factors: Option<Vec<String>>,
    /// Precomputed high-risk flag, same predicate syntax as `--factor`.
    #[arg(long, value_name = "PREDICATE")]
    pub flag: Option<String>,
    #[arg(long, value_enum)]
    pub score_kind: Option<ScoreKind>,
    #[arg(long)]
    pub delimiter: Option<char>,
    /// Expected SHA-256 of the input; loading fails on mismatch.
    #[arg(long)]
    pub digest: Option<String>,
}
fill_from!(DataArgs { input, score_column, outcome_column, group_column, factors, flag, score_kind, delimiter, digest });

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DataSettings {
    pub input: PathBuf,
    pub schema: RecordSchema,
    pub digest: Option<String>,
}

impl DataArgs {
    pub fn resolve(self) -> Result<DataSettings> {
        let input = self.input.ok_or_else(|| Error::param("input", "no input file given"))?;
        let delimiter = match self.delimiter.unwrap_or(',') {
            c if c.is_ascii() => c as u8,
            c => return Err(Error::param("delimiter", format!("must be a single ASCII character, got `{c}`"))),
        };
        let schema = RecordSchema {
            score_column: self.score_column.unwrap_or_else(|| "score".into()),
            outcome_column: self.outcome_column.unwrap_or_else(|| "outcome".into()),
            group_column: self.group_column,
            factors: self.factors.unwrap_or_default().iter().map(|f| ColumnPredicate::parse(f)).collect::<Result<_>>()?,
            flag: self.flag.as_deref().map(ColumnPredicate::parse).transpose()?,
            score_kind: self.score_kind.unwrap_or_default(),
            delimiter,
        };
        Ok(DataSettings { input, schema, digest: self.digest.map(|d| d.to_ascii_lowercase()) })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Args, Deserialize, Serialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct BoundArgs {
    /// Target PPV; prints the required likelihood ratio.
    #[arg(long)]
    pub ppv: Option<f64>,
    /// Likelihood ratio; prints the achieved PPV.
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long)]
    pub base_rate: Option<f64>,
}
fill_from!(BoundArgs { ppv, lr, base_rate });

#[derive(Debug, Clone, Default, PartialEq, Args, Deserialize, Serialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct TablesArgs {
    /// Tables to regenerate: any of 1, 2, 4, 6, 7, 8.
    #[arg(long, value_delimiter = ',')]
    pub which: Option<Vec<u8>>,
}
fill_from!(TablesArgs { which });

#[derive(Debug, Clone, Default, PartialEq, Args, Deserialize, Serialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct AuditArgs {
    /// Flag when `score >= THRESHOLD`.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Flag when the decile score is at least DECILE.
    #[arg(long)]
    pub decile: Option<u8>,
    /// Base rates for the projection block.
    #[arg(long = "base-rate", value_delimiter = ',')]
    pub base_rates: Option<Vec<f64>>,
    /// Confidence level.
    #[arg(long)]
    pub level: Option<f64>,
    /// Bootstrap replicates for a second LR interval (0 disables).
    #[arg(long)]
    pub bootstrap: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Reference group for the amplification block.
    #[arg(long)]
    pub reference_group: Option<String>,
}
fill_from!(AuditArgs { threshold, decile, base_rates, level, bootstrap, seed, reference_group });

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    /// Two-group correlated-marker illustration at the derived threshold.
    Table2,
    /// Same, with higher positive-class marker prevalence in group B.
    Variant,
    /// FPR-ratio slope against the KL-rate limit.
    Ldp,
    /// Every threshold for the configured parameters.
    Sweep,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Deserialize, Serialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub scenario: Option<Scenario>,
    /// Number of binary markers.
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub p_pos_a: Option<f64>,
    #[arg(long)]
    pub p_pos_b: Option<f64>,
    #[arg(long)]
    pub p_neg_a: Option<f64>,
    #[arg(long)]
    pub p_neg_b: Option<f64>,
    #[arg(long)]
    pub base_rate: Option<f64>,
    /// Group-A sensitivity used to pick the threshold.
    #[arg(long)]
    pub target_sensitivity: Option<f64>,
    /// Fixed marker-count threshold.
    #[arg(long)]
    pub m: Option<u32>,
    /// Group A negative-class prevalence for the slope scenario.
    #[arg(long)]
    pub pa: Option<f64>,
    #[arg(long)]
    pub pb: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long = "k-list", value_delimiter = ',')]
    pub k_list: Option<Vec<u32>>,
}
fill_from!(SimulateArgs {
    scenario,
    k,
    rho,
    p_pos_a,
    p_pos_b,
    p_neg_a,
    p_neg_b,
    base_rate,
    target_sensitivity,
    m,
    pa,
    pb,
    theta,
    k_list,
});

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum RecalMethod {
    Platt,
    Isotonic,
    /// A user expression in `x`, e.g. `2*x+1`.
    Expr,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Deserialize, Serialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RecalArgs {
    #[arg(long, value_enum)]
    pub method: Option<RecalMethod>,
    /// Expression for `--method expr`.
    #[arg(long)]
    pub expr: Option<String>,
    /// Platt label smoothing.
    #[arg(long)]
    pub smoothing: Option<bool>,
}
fill_from!(RecalArgs { method, expr, smoothing });

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum LabelPreset {
    /// LR 4 at a 3% base rate.
    CurrentInstrument,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Deserialize, Serialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct LabelArgs {
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long)]
    pub base_rate: Option<f64>,
    /// Named values used for any of `--lr`/`--base-rate` left unset.
    #[arg(long, value_enum)]
    pub preset: Option<LabelPreset>,
}
fill_from!(LabelArgs { lr, base_rate, preset });

#[derive(Debug, Clone, Default, PartialEq, Args, Deserialize, Serialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FigureArgs {
    /// PPV targets, one curve each.
    #[arg(long = "alpha", value_delimiter = ',')]
    pub alphas: Option<Vec<f64>>,
    #[arg(long)]
    pub pi_min: Option<f64>,
    #[arg(long)]
    pub pi_max: Option<f64>,
    /// Grid points per curve, before exact anchor points are added.
    #[arg(long)]
    pub points: Option<usize>,
}
fill_from!(FigureArgs { alphas, pi_min, pi_max, points });

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConfigFile {
    #[serde(default)]
    pub data: DataArgs,
    #[serde(default)]
    pub bound: BoundArgs,
    #[serde(default)]
    pub tables: TablesArgs,
    #[serde(default)]
    pub audit: AuditArgs,
    #[serde(default)]
    pub simulate: SimulateArgs,
    #[serde(default)]
    pub recal_check: RecalArgs,
    #[serde(default)]
    pub label: LabelArgs,
    #[serde(default)]
    pub figure_data: FigureArgs,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Reads the file; relative `data.input` paths resolve against the
    /// file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        let mut cfg = Self::parse(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        if let (Some(input), Some(dir)) = (&cfg.data.input, path.parent()) {
            if input.is_relative() {
                cfg.data.input = Some(dir.join(input));
            }
        }
        Ok(cfg)
    }
}

/// Seed precedence: explicit value, then the environment, then the default.
pub fn resolve_seed(explicit: Option<u64>) -> Result<u64> {
    if let Some(s) = explicit {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| Error::param("seed", format!("{SEED_ENV}=`{v}` is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}
