//! Operating points, likelihood ratios and their uncertainty, estimated from
//! labeled score/outcome records.

mod auc;
mod binormal;
mod groups;
mod interval;

pub use auc::auc_rank_estimate;
pub use binormal::{binormal_operating_point, BinormalPoint};
pub use groups::{group_amplification, GroupAmplification, GroupRow};
pub use interval::{
    lr_bootstrap, lr_with_ci, operating_point_with_ci, projected_ppv, wilson_interval,
    IntervalEstimate, IntervalMethod, OperatingPointEstimate, DEFAULT_BOOTSTRAP_REPLICATES,
};

use serde::Serialize;

use crate::bounds::{BaseRate, OperatingPoint};
use crate::error::{Error, Result};

/// One individual: score, observed outcome, optional group and binary factors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditRecord {
    pub score: f64,
    pub outcome: bool,
    pub group: Option<String>,
    pub factors: Vec<bool>,
    /// Precomputed flag, used with [`CutoffSpec::FlagColumn`].
    pub flag: Option<bool>,
}

impl AuditRecord {
    pub fn new(score: f64, outcome: bool) -> Self {
        AuditRecord { score, outcome, group: None, factors: Vec::new(), flag: None }
    }

    pub fn with_group(mut self, group: impl Into<String>) -> Self {
        self.group = Some(group.into());
        self
    }

    pub fn with_factors(mut self, factors: Vec<bool>) -> Self {
        self.factors = factors;
        self
    }

    pub fn factor_count(&self) -> usize {
        self.factors.iter().filter(|&&f| f).count()
    }
}

/// How the binary "high risk" flag is derived from a record.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum CutoffSpec {
    /// Flag when `score >= threshold`.
    ScoreAtLeast(f64),
    /// Flag when the decile score (1..=10) is at least the given decile.
    DecileAtLeast(u8),
    /// Use the flag column loaded with the records.
    FlagColumn(String),
}

impl CutoffSpec {
    /// Conventional "high risk" band for decile instruments.
    pub const DEFAULT_DECILE: u8 = 8;

    fn flagger(&self) -> Result<Box<dyn Fn(&AuditRecord) -> Option<bool> + '_>> {
        match *self {
            CutoffSpec::ScoreAtLeast(t) if t.is_finite() => Ok(Box::new(move |r| Some(r.score >= t))),
            CutoffSpec::ScoreAtLeast(t) => Err(Error::UnresolvableCutoff(format!("threshold {t} is not finite"))),
            CutoffSpec::DecileAtLeast(d) if (1..=10).contains(&d) => {
                let t = f64::from(d);
                Ok(Box::new(move |r| Some(r.score >= t)))
            }
            CutoffSpec::DecileAtLeast(d) => Err(Error::UnresolvableCutoff(format!("decile {d} outside 1..=10"))),
            CutoffSpec::FlagColumn(_) => Ok(Box::new(|r| r.flag)),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            CutoffSpec::ScoreAtLeast(t) => format!("score >= {t}"),
            CutoffSpec::DecileAtLeast(d) => format!("decile >= {d}"),
            CutoffSpec::FlagColumn(c) => format!("flag column `{c}`"),
        }
    }
}

/// Two-by-two table of flag against outcome.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn new(tp: u64, fp: u64, tn: u64, fn_: u64) -> Self {
        ConfusionCounts { tp, fp, tn, fn_ }
    }

    pub fn positives(&self) -> u64 {
        self.tp + self.fn_
    }

    pub fn negatives(&self) -> u64 {
        self.fp + self.tn
    }

    pub fn total(&self) -> u64 {
        self.positives() + self.negatives()
    }

    pub fn flagged(&self) -> u64 {
        self.tp + self.fp
    }

    pub fn sensitivity(&self) -> Result<f64> {
        match self.positives() {
            0 => Err(Error::ZeroDenominator { class: "positives" }),
            n => Ok(self.tp as f64 / n as f64),
        }
    }

    pub fn fpr(&self) -> Result<f64> {
        match self.negatives() {
            0 => Err(Error::ZeroDenominator { class: "negatives" }),
            n => Ok(self.fp as f64 / n as f64),
        }
    }

    pub fn operating_point(&self) -> Result<OperatingPoint> {
        OperatingPoint::new(self.sensitivity()?, self.fpr()?)
    }

    /// In-sample base rate.
    pub fn base_rate(&self) -> Result<BaseRate> {
        if self.positives() == 0 || self.negatives() == 0 {
            return Err(Error::SingleClass);
        }
        BaseRate::new(self.positives() as f64 / self.total() as f64)
    }

    /// Counted `tp / (tp + fp)`.
    pub fn ppv(&self) -> Option<f64> {
        (self.flagged() > 0).then(|| self.tp as f64 / self.flagged() as f64)
    }

    fn add(&mut self, flag: bool, outcome: bool) {
        match (flag, outcome) {
            (true, true) => self.tp += 1,
            (true, false) => self.fp += 1,
            (false, false) => self.tn += 1,
            (false, true) => self.fn_ += 1,
        }
    }
}

pub fn confusion_at_cutoff(records: &[AuditRecord], cutoff: &CutoffSpec) -> Result<ConfusionCounts> {
    if records.is_empty() {
        return Err(Error::EmptyRecords);
    }
    let flag = cutoff.flagger()?;
    let mut counts = ConfusionCounts::default();
    for (i, r) in records.iter().enumerate() {
        let f = flag(r).ok_or_else(|| {
            Error::UnresolvableCutoff(format!("record {i} has no value for {}", cutoff.describe()))
        })?;
        counts.add(f, r.outcome);
    }
    Ok(counts)
}

/// Confusion counts for `score >= threshold` over raw slices.
pub(crate) fn counts_at(scores: &[f64], outcomes: &[bool], threshold: f64) -> ConfusionCounts {
    let mut counts = ConfusionCounts::default();
    for (&s, &y) in scores.iter().zip(outcomes) {
        counts.add(s >= threshold, y);
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn recs(pairs: &[(f64, bool)]) -> Vec<AuditRecord> {
        pairs.iter().map(|&(s, y)| AuditRecord::new(s, y)).collect()
    }

    #[test]
    fn hand_counted_four_records() {
        let r = recs(&[(9.0, true), (2.0, false), (8.0, false), (1.0, true)]);
        let c = confusion_at_cutoff(&r, &CutoffSpec::DecileAtLeast(8)).unwrap();
        assert_eq!(c, ConfusionCounts::new(1, 1, 1, 1));
    }

    #[test]
    fn cutoff_above_max_flags_nobody() {
        let r = recs(&[(9.0, true), (2.0, false), (8.0, false)]);
        let c = confusion_at_cutoff(&r, &CutoffSpec::ScoreAtLeast(100.0)).unwrap();
        assert_eq!((c.tp, c.fp), (0, 0));
        assert_eq!(c.total(), 3);
    }

    #[test]
    fn errors() {
        assert!(matches!(confusion_at_cutoff(&[], &CutoffSpec::DecileAtLeast(8)), Err(Error::EmptyRecords)));
        let r = recs(&[(9.0, true)]);
        assert!(confusion_at_cutoff(&r, &CutoffSpec::DecileAtLeast(11)).is_err());
        assert!(confusion_at_cutoff(&r, &CutoffSpec::ScoreAtLeast(f64::NAN)).is_err());
        assert!(confusion_at_cutoff(&r, &CutoffSpec::FlagColumn("f".into())).is_err());
        let mut flagged = AuditRecord::new(1.0, true);
        flagged.flag = Some(true);
        let c = confusion_at_cutoff(&[flagged], &CutoffSpec::FlagColumn("f".into())).unwrap();
        assert_eq!(c.tp, 1);
        assert!(ConfusionCounts::new(0, 1, 1, 0).sensitivity().is_err());
    }

    #[test]
    fn random_set_matches_recount() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let r: Vec<_> = (0..200)
            .map(|_| AuditRecord::new(f64::from(rng.random_range(1u8..=10)), rng.random_bool(0.3)))
            .collect();
        for d in 1..=10u8 {
            let c = confusion_at_cutoff(&r, &CutoffSpec::DecileAtLeast(d)).unwrap();
            let mut oracle = [0u64; 4];
            for x in &r {
                let idx = match (x.score >= f64::from(d), x.outcome) {
                    (true, true) => 0,
                    (true, false) => 1,
                    (false, false) => 2,
                    (false, true) => 3,
                };
                oracle[idx] += 1;
            }
            assert_eq!([c.tp, c.fp, c.tn, c.fn_], oracle);
        }
    }

    proptest! {
        #[test]
        fn counts_partition_and_are_monotone(
            data in prop::collection::vec((0.0f64..10.0, any::<bool>()), 1..120),
            lo in 0.0f64..10.0,
            step in 0.0f64..5.0,
        ) {
            let r = recs(&data);
            let a = confusion_at_cutoff(&r, &CutoffSpec::ScoreAtLeast(lo)).unwrap();
            let b = confusion_at_cutoff(&r, &CutoffSpec::ScoreAtLeast(lo + step)).unwrap();
            prop_assert_eq!(a.total() as usize, r.len());
            prop_assert!(b.tp <= a.tp && b.fp <= a.fp);
        }
    }
}
