use serde::Serialize;

use crate::error::{Error, Result};

/// Nondecreasing step fit from pool-adjacent-violators.
///
/// `breakpoints[i]` is the i-th distinct training score; the fitted value is
/// `levels[i]` from that score up to the next breakpoint. Below the first
/// breakpoint the first level applies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsotonicFit {
    pub breakpoints: Vec<f64>,
    pub levels: Vec<f64>,
    /// Records behind each breakpoint.
    pub weights: Vec<u64>,
    /// Training data held a single outcome class; the fit is constant.
    pub degenerate: bool,
}

/// Maximal run of breakpoints sharing one level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlatRegion {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
}

impl FlatRegion {
    /// Half-open membership `(lower, upper]`: a cutoff at `lower` still
    /// separates the block from everything below it.
    pub fn splits_at(&self, cutoff: f64) -> bool {
        self.lower < cutoff && cutoff <= self.upper
    }
}

impl IsotonicFit {
    pub fn evaluate(&self, x: f64) -> f64 {
        let idx = self.breakpoints.partition_point(|&b| b <= x);
        self.levels[idx.saturating_sub(1)]
    }
}

/// Least-squares nondecreasing fit of outcomes on scores. Tied scores are
/// pooled into one weighted point before fitting.
pub fn fit_isotonic(scores: &[f64], outcomes: &[bool]) -> Result<IsotonicFit> {
    if scores.len() != outcomes.len() {
        return Err(Error::LengthMismatch { left: scores.len(), right: outcomes.len() });
    }
    if scores.is_empty() {
        return Err(Error::EmptyRecords);
    }
    if let Some(&bad) = scores.iter().find(|s| !s.is_finite()) {
        return Err(Error::DomainViolation { value: bad });
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    let mut breakpoints = Vec::new();
    let mut weights: Vec<u64> = Vec::new();
    let mut sums: Vec<f64> = Vec::new();
    for &i in &order {
        let y = if outcomes[i] { 1.0 } else { 0.0 };
        if breakpoints.last() == Some(&scores[i]) {
            *weights.last_mut().unwrap() += 1;
            *sums.last_mut().unwrap() += y;
        } else {
            breakpoints.push(scores[i]);
            weights.push(1);
            sums.push(y);
        }
    }

    // Stack of blocks: (sum, weight, number of breakpoints).
    let mut blocks: Vec<(f64, f64, usize)> = Vec::with_capacity(breakpoints.len());
    for (&sum, &w) in sums.iter().zip(&weights) {
        blocks.push((sum, w as f64, 1));
        while blocks.len() >= 2 {
            let (s2, w2, n2) = blocks[blocks.len() - 1];
            let (s1, w1, n1) = blocks[blocks.len() - 2];
            if s1 / w1 < s2 / w2 {
                break;
            }
            blocks.truncate(blocks.len() - 2);
            blocks.push((s1 + s2, w1 + w2, n1 + n2));
        }
    }
    let levels: Vec<f64> = blocks
        .iter()
        .flat_map(|&(s, w, n)| std::iter::repeat(s / w).take(n))
        .collect();

    let positives = outcomes.iter().filter(|&&y| y).count();
    let degenerate = positives == 0 || positives == outcomes.len();
    Ok(IsotonicFit { breakpoints, levels, weights, degenerate })
}

/// Intervals of the score axis where the fit is constant across two or more
/// distinct training scores. Thresholds strictly inside such an interval do
/// not keep their confusion counts after recalibration.
pub fn flat_region_report(fit: &IsotonicFit) -> Vec<FlatRegion> {
    let mut regions = Vec::new();
    let mut start = 0;
    for i in 1..=fit.levels.len() {
        if i == fit.levels.len() || fit.levels[i] != fit.levels[start] {
            if i - start >= 2 {
                regions.push(FlatRegion {
                    lower: fit.breakpoints[start],
                    upper: fit.breakpoints[i - 1],
                    level: fit.levels[start],
                });
            }
            start = i;
        }
    }
    regions
}
