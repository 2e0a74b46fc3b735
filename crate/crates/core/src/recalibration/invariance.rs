use serde::Serialize;

use super::{flat_region_report, MonotoneTransform};
use crate::bounds::LikelihoodRatio;
use crate::error::Result;
use crate::estimation::{counts_at, AuditRecord, ConfusionCounts};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatesAtCutoff {
    pub counts: ConfusionCounts,
    pub sensitivity: Option<f64>,
    pub fpr: Option<f64>,
    pub lr: Option<LikelihoodRatio>,
}

impl RatesAtCutoff {
    fn from_counts(counts: ConfusionCounts) -> Self {
        let point = counts.operating_point().ok();
        RatesAtCutoff {
            counts,
            sensitivity: counts.sensitivity().ok(),
            fpr: counts.fpr().ok(),
            lr: point.and_then(|p| p.likelihood_ratio().ok()),
        }
    }
}

/// Where a count mismatch comes from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum MismatchCause {
    /// The cutoff falls inside a pooled block of the step map.
    FlatRegion { lower: f64, upper: f64 },
    /// The cutoff sits between two training breakpoints, where the step map
    /// is constant.
    BetweenBreakpoints { lower: f64, upper: f64 },
    /// Two distinct scores collided after the map in floating point.
    NumericTie,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceRow {
    pub cutoff: f64,
    pub mapped_cutoff: f64,
    pub before: RatesAtCutoff,
    pub after: RatesAtCutoff,
    /// Confusion counts identical as integers.
    pub exact_match: bool,
    pub cause: Option<MismatchCause>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub transform: String,
    pub rows: Vec<InvarianceRow>,
}

impl InvarianceReport {
    pub fn mismatches(&self) -> usize {
        self.rows.iter().filter(|r| !r.exact_match).count()
    }
}

/// Compares confusion counts at each cutoff `c` on the original scale with
/// counts at `f(c)` on the transformed scale.
pub fn lr_invariance_check(records: &[AuditRecord], t: &MonotoneTransform, cutoffs: &[f64]) -> Result<InvarianceReport> {
    let scores: Vec<f64> = records.iter().map(|r| r.score).collect();
    let outcomes: Vec<bool> = records.iter().map(|r| r.outcome).collect();
    let mapped: Vec<f64> = super::apply_transform(t, &scores)?;

    let mut rows = Vec::with_capacity(cutoffs.len());
    for &c in cutoffs {
        let fc = t.eval(c)?;
        let before = counts_at(&scores, &outcomes, c);
        let after = counts_at(&mapped, &outcomes, fc);
        let exact_match = before == after;
        let cause = if exact_match { None } else { Some(attribute(t, c)) };
        rows.push(InvarianceRow {
            cutoff: c,
            mapped_cutoff: fc,
            before: RatesAtCutoff::from_counts(before),
            after: RatesAtCutoff::from_counts(after),
            exact_match,
            cause,
        });
    }
    Ok(InvarianceReport { transform: t.describe(), rows })
}

fn attribute(t: &MonotoneTransform, cutoff: f64) -> MismatchCause {
    let MonotoneTransform::Step(fit) = t else {
        return MismatchCause::NumericTie;
    };
    if let Some(region) = flat_region_report(fit).into_iter().find(|r| r.splits_at(cutoff)) {
        return MismatchCause::FlatRegion { lower: region.lower, upper: region.upper };
    }
    let idx = fit.breakpoints.partition_point(|&b| b < cutoff);
    let lower = fit.breakpoints.get(idx.wrapping_sub(1)).copied().unwrap_or(f64::NEG_INFINITY);
    let upper = fit.breakpoints.get(idx).copied().unwrap_or(f64::INFINITY);
    MismatchCause::BetweenBreakpoints { lower, upper }
}
