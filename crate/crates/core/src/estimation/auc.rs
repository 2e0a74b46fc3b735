use super::AuditRecord;
use crate::error::{Error, Result};

/// Mann-Whitney AUC: share of (positive, negative) pairs ordered correctly,
/// ties counted one half.
pub fn auc_rank_estimate(records: &[AuditRecord]) -> Result<f64> {
    let mut sorted: Vec<(f64, bool)> = records.iter().map(|r| (r.score, r.outcome)).collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));

    let positives = sorted.iter().filter(|r| r.1).count() as u128;
    let negatives = sorted.len() as u128 - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::SingleClass);
    }

    // Twice the number of correctly ordered pairs, so ties stay integral.
    let mut doubled: u128 = 0;
    let mut negatives_below: u128 = 0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        let (mut pos, mut neg) = (0u128, 0u128);
        while j < sorted.len() && sorted[j].0 == sorted[i].0 {
            if sorted[j].1 {
                pos += 1;
            } else {
                neg += 1;
            }
            j += 1;
        }
        doubled += pos * (2 * negatives_below + neg);
        negatives_below += neg;
        i = j;
    }
    Ok(doubled as f64 / (2 * positives * negatives) as f64)
}
