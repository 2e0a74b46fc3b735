use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::estimation::AuditRecord;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ScoreKind {
    #[default]
    Continuous,
    /// Integer scores 1..=10.
    Decile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CompareOp {
    Eq,
    Ne,
    Gt,
    Ge,
    Lt,
    Le,
}

impl CompareOp {
    fn symbol(self) -> &'static str {
        match self {
            CompareOp::Eq => "=",
            CompareOp::Ne => "!=",
            CompareOp::Gt => ">",
            CompareOp::Ge => ">=",
            CompareOp::Lt => "<",
            CompareOp::Le => "<=",
        }
    }
}

/// Binary value derived from one column: `col` (already 0/1), `col=text`,
/// `col!=text`, or a numeric comparison such as `col>0` or `col>=8`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnPredicate {
    pub column: String,
    pub test: Option<(CompareOp, String)>,
}

impl ColumnPredicate {
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let Some(at) = spec.find(['<', '>', '=', '!']) else {
            if spec.is_empty() {
                return Err(Error::Config("empty column predicate".into()));
            }
            return Ok(ColumnPredicate { column: spec.to_string(), test: None });
        };
        let (column, rest) = spec.split_at(at);
        let (op, value) = [
            (">=", CompareOp::Ge),
            ("<=", CompareOp::Le),
            ("!=", CompareOp::Ne),
            ("=", CompareOp::Eq),
            (">", CompareOp::Gt),
            ("<", CompareOp::Lt),
        ]
        .into_iter()
        .find_map(|(sym, op)| rest.strip_prefix(sym).map(|v| (op, v.trim())))
        .ok_or_else(|| Error::Config(format!("cannot parse predicate `{spec}`")))?;
        let column = column.trim();
        if column.is_empty() || value.is_empty() {
            return Err(Error::Config(format!("cannot parse predicate `{spec}`")));
        }
        if !matches!(op, CompareOp::Eq | CompareOp::Ne) && value.parse::<f64>().is_err() {
            return Err(Error::Config(format!("predicate `{spec}` compares against a non-number")));
        }
        Ok(ColumnPredicate { column: column.to_string(), test: Some((op, value.to_string())) })
    }

    fn eval(&self, field: &str, line: u64) -> Result<bool> {
        let field = field.trim();
        let Some((op, value)) = &self.test else {
            return parse_binary(field).ok_or_else(|| Error::NonBinaryOutcome {
                line,
                column: self.column.clone(),
                value: field.to_string(),
            });
        };
        match op {
            CompareOp::Eq => return Ok(field == value),
            CompareOp::Ne => return Ok(field != value),
            _ => {}
        }
        let x: f64 = field.parse().map_err(|_| Error::Parse { line, column: self.column.clone(), value: field.to_string() })?;
        let y: f64 = value.parse().expect("checked at parse time");
        Ok(match op {
            CompareOp::Gt => x > y,
            CompareOp::Ge => x >= y,
            CompareOp::Lt => x < y,
            CompareOp::Le => x <= y,
            CompareOp::Eq | CompareOp::Ne => unreachable!(),
        })
    }
}

impl std::fmt::Display for ColumnPredicate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.test {
            None => f.write_str(&self.column),
            Some((op, v)) => write!(f, "{}{}{}", self.column, op.symbol(), v),
        }
    }
}

fn parse_binary(field: &str) -> Option<bool> {
    match field.to_ascii_lowercase().as_str() {
        "0" | "0.0" | "false" => Some(false),
        "1" | "1.0" | "true" => Some(true),
        _ => None,
    }
}

/// Which columns of a delimited file become record fields.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecordSchema {
    pub score_column: String,
    pub outcome_column: String,
    pub group_column: Option<String>,
    pub factors: Vec<ColumnPredicate>,
    /// Precomputed high-risk flag.
    pub flag: Option<ColumnPredicate>,
    pub score_kind: ScoreKind,
    pub delimiter: u8,
}

impl RecordSchema {
    pub fn new(score_column: impl Into<String>, outcome_column: impl Into<String>) -> Self {
        RecordSchema {
            score_column: score_column.into(),
            outcome_column: outcome_column.into(),
            group_column: None,
            factors: Vec::new(),
            flag: None,
            score_kind: ScoreKind::Continuous,
            delimiter: b',',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedRecords {
    pub path: PathBuf,
    pub records: Vec<AuditRecord>,
    /// Lowercase hex SHA-256 of the file bytes.
    pub digest: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn file_digest(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    Ok(sha256_hex(&bytes))
}

/// Reads `path` under `schema`; any malformed row aborts with its line number.
pub fn load_records(path: &Path, schema: &RecordSchema) -> Result<LoadedRecords> {
    let bytes = fs::read(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    let digest = sha256_hex(&bytes);
    let records = parse_records(&bytes, schema)?;
    Ok(LoadedRecords { path: path.to_path_buf(), records, digest })
}

pub fn parse_records(bytes: &[u8], schema: &RecordSchema) -> Result<Vec<AuditRecord>> {
    let mut reader = csv::ReaderBuilder::new().delimiter(schema.delimiter).from_reader(bytes);
    let headers = reader.headers()?.clone();
    let index = |name: &str| {
        headers.iter().position(|h| h.trim() == name).ok_or_else(|| Error::MissingColumn(name.to_string()))
    };
    let score_ix = index(&schema.score_column)?;
    let outcome_ix = index(&schema.outcome_column)?;
    let group_ix = schema.group_column.as_deref().map(index).transpose()?;
    let factor_ix = schema.factors.iter().map(|f| index(&f.column)).collect::<Result<Vec<_>>>()?;
    let flag_ix = schema.flag.as_ref().map(|f| index(&f.column)).transpose()?;

    let mut records = Vec::new();
    for row in reader.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let field = |i: usize| row.get(i).unwrap_or("").trim();

        let raw_score = field(score_ix);
        let bad_score = || Error::Parse { line, column: schema.score_column.clone(), value: raw_score.to_string() };
        let score: f64 = raw_score.parse().map_err(|_| bad_score())?;
        if !score.is_finite() {
            return Err(bad_score());
        }
        if schema.score_kind == ScoreKind::Decile && !(score.fract() == 0.0 && (1.0..=10.0).contains(&score)) {
            return Err(bad_score());
        }

        let raw_outcome = field(outcome_ix);
        let outcome = parse_binary(raw_outcome).ok_or_else(|| Error::NonBinaryOutcome {
            line,
            column: schema.outcome_column.clone(),
            value: raw_outcome.to_string(),
        })?;

        let mut record = AuditRecord::new(score, outcome);
        if let Some(i) = group_ix {
            record = record.with_group(field(i));
        }
        if !factor_ix.is_empty() {
            let factors = schema
                .factors
                .iter()
                .zip(&factor_ix)
                .map(|(f, &i)| f.eval(field(i), line))
                .collect::<Result<Vec<_>>>()?;
            record = record.with_factors(factors);
        }
        if let (Some(f), Some(i)) = (&schema.flag, flag_ix) {
            record.flag = Some(f.eval(field(i), line)?);
        }
        records.push(record);
    }
    if records.is_empty() {
        return Err(Error::EmptyRecords);
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schema() -> RecordSchema {
        RecordSchema::new("score", "y")
    }

    #[test]
    fn three_rows() {
        let r = parse_records(b"score,y\n1,0\n2.5,1\n3,0\n", &schema()).unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r[1], AuditRecord::new(2.5, true));
    }

    #[test]
    fn missing_outcome_column_is_named() {
        let err = parse_records(b"score,label\n1,0\n", &schema()).unwrap_err();
        assert!(err.to_string().contains("`y`"), "{err}");
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_records(b"score,y\n1,0\n2,yes\n", &schema()).unwrap_err();
        assert!(matches!(err, Error::NonBinaryOutcome { line: 3, .. }), "{err}");
        let err = parse_records(b"score,y\n1,0\n2,1\nabc,1\n", &schema()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err}");
        let decile = RecordSchema { score_kind: ScoreKind::Decile, ..schema() };
        assert!(matches!(parse_records(b"score,y\n11,0\n", &decile), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_records(b"score,y\n", &schema()), Err(Error::EmptyRecords)));
    }

    #[test]
    fn groups_factors_and_flags() {
        let s = RecordSchema {
            group_column: Some("race".into()),
            factors: vec![ColumnPredicate::parse("priors>0").unwrap(), ColumnPredicate::parse("degree=F").unwrap()],
            flag: Some(ColumnPredicate::parse("text=High").unwrap()),
            delimiter: b';',
            ..schema()
        };
        let data = b"score;y;race;priors;degree;text\n9;1;B;3;F;High\n2;0;W;0;M;Low\n";
        let r = parse_records(data, &s).unwrap();
        assert_eq!(r[0].group.as_deref(), Some("B"));
        assert_eq!(r[0].factors, vec![true, true]);
        assert_eq!(r[1].factors, vec![false, false]);
        assert_eq!((r[0].flag, r[1].flag), (Some(true), Some(false)));
    }

    #[test]
    fn predicate_parsing() {
        let p = ColumnPredicate::parse("age < 25").unwrap();
        assert_eq!(p.column, "age");
        assert_eq!(p.test, Some((CompareOp::Lt, "25".into())));
        assert_eq!(ColumnPredicate::parse("x>=8").unwrap().to_string(), "x>=8");
        assert!(ColumnPredicate::parse("x>abc").is_err());
        assert!(ColumnPredicate::parse(">3").is_err());
        assert!(ColumnPredicate::parse("x=").is_err());
    }

    #[test]
    fn digest_is_sha256() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
