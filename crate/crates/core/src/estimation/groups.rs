use std::collections::BTreeMap;

use serde::Serialize;

use super::{confusion_at_cutoff, AuditRecord, CutoffSpec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupRow {
    pub group: String,
    pub members: usize,
    pub negatives: u64,
    /// Mean number of present factors over all members of the group.
    pub mean_factors: f64,
    pub fpr: f64,
    pub factor_ratio: Option<f64>,
    pub fpr_ratio: Option<f64>,
    /// FPR ratio exceeds the factor-count ratio, which exceeds one.
    pub superlinear: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupAmplification {
    pub reference: String,
    pub rows: Vec<GroupRow>,
}

impl GroupAmplification {
    pub fn row(&self, group: &str) -> Option<&GroupRow> {
        self.rows.iter().find(|r| r.group == group)
    }
}

/// Per-group factor burden and false positive rate, relative to `reference`.
pub fn group_amplification(records: &[AuditRecord], cutoff: &CutoffSpec, reference: &str) -> Result<GroupAmplification> {
    if records.is_empty() {
        return Err(Error::EmptyRecords);
    }
    if records.iter().any(|r| r.factors.is_empty()) {
        return Err(Error::MissingFactors);
    }
    let mut by_group: BTreeMap<&str, Vec<AuditRecord>> = BTreeMap::new();
    for r in records {
        let g = r.group.as_deref().ok_or_else(|| Error::param("group", "record without a group label"))?;
        by_group.entry(g).or_default().push(r.clone());
    }
    if by_group.len() < 2 {
        return Err(Error::TooFewGroups(by_group.len()));
    }
    if !by_group.contains_key(reference) {
        return Err(Error::UnknownGroup(reference.to_string()));
    }

    let mut rows = Vec::with_capacity(by_group.len());
    for (group, members) in &by_group {
        let counts = confusion_at_cutoff(members, cutoff)?;
        if counts.negatives() == 0 {
            return Err(Error::GroupWithoutNegatives(group.to_string()));
        }
        let factor_total: usize = members.iter().map(AuditRecord::factor_count).sum();
        rows.push(GroupRow {
            group: group.to_string(),
            members: members.len(),
            negatives: counts.negatives(),
            mean_factors: factor_total as f64 / members.len() as f64,
            fpr: counts.fpr()?,
            factor_ratio: None,
            fpr_ratio: None,
            superlinear: false,
        });
    }

    let (ref_factors, ref_fpr) = rows
        .iter()
        .find(|r| r.group == reference)
        .map(|r| (r.mean_factors, r.fpr))
        .expect("reference checked above");
    for row in &mut rows {
        row.factor_ratio = (ref_factors > 0.0).then(|| row.mean_factors / ref_factors);
        row.fpr_ratio = (ref_fpr > 0.0).then(|| row.fpr / ref_fpr);
        row.superlinear = matches!((row.fpr_ratio, row.factor_ratio), (Some(f), Some(m)) if f > m && m > 1.0);
    }
    Ok(GroupAmplification { reference: reference.to_string(), rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn member(group: &str, score: f64, outcome: bool, factors: &[bool]) -> AuditRecord {
        AuditRecord::new(score, outcome).with_group(group).with_factors(factors.to_vec())
    }

    #[test]
    fn identical_groups_have_unit_ratios() {
        let mut r = Vec::new();
        for g in ["a", "b"] {
            r.push(member(g, 9.0, false, &[true, true]));
            r.push(member(g, 2.0, false, &[false, true]));
            r.push(member(g, 9.0, true, &[true, false]));
        }
        let out = group_amplification(&r, &CutoffSpec::DecileAtLeast(8), "a").unwrap();
        for row in &out.rows {
            assert_eq!(row.factor_ratio, Some(1.0));
            assert_eq!(row.fpr_ratio, Some(1.0));
            assert!(!row.superlinear);
        }
    }

    #[test]
    fn hand_computed_ratios() {
        let r = vec![
            member("w", 9.0, false, &[true, false, false]),
            member("w", 1.0, false, &[false, false, false]),
            member("w", 1.0, false, &[true, false, false]),
            member("w", 1.0, false, &[false, false, false]),
            member("b", 9.0, false, &[true, true, false]),
            member("b", 9.0, false, &[true, false, false]),
            member("b", 9.0, false, &[true, true, false]),
            member("b", 1.0, false, &[false, false, false]),
        ];
        let out = group_amplification(&r, &CutoffSpec::ScoreAtLeast(5.0), "w").unwrap();
        let b = out.row("b").unwrap();
        assert_eq!(b.mean_factors, 5.0 / 4.0);
        assert_eq!(b.fpr, 0.75);
        assert_eq!(b.factor_ratio, Some(2.5));
        assert_eq!(b.fpr_ratio, Some(3.0));
        assert!(b.superlinear);
    }

    #[test]
    fn error_paths() {
        let r = vec![AuditRecord::new(1.0, false).with_group("a"), AuditRecord::new(1.0, false).with_group("b")];
        assert!(matches!(group_amplification(&r, &CutoffSpec::ScoreAtLeast(0.5), "a"), Err(Error::MissingFactors)));
        let r = vec![member("a", 1.0, false, &[true]), member("b", 1.0, true, &[true])];
        assert!(matches!(
            group_amplification(&r, &CutoffSpec::ScoreAtLeast(0.5), "a"),
            Err(Error::GroupWithoutNegatives(_))
        ));
        let r = vec![member("a", 1.0, false, &[true])];
        assert!(matches!(group_amplification(&r, &CutoffSpec::ScoreAtLeast(0.5), "a"), Err(Error::TooFewGroups(1))));
        let r = vec![member("a", 1.0, false, &[true]), member("b", 1.0, false, &[true])];
        assert!(matches!(group_amplification(&r, &CutoffSpec::ScoreAtLeast(0.5), "z"), Err(Error::UnknownGroup(_))));
    }
}
