use serde::Serialize;

use super::pmf::count_pmf;
use super::ThresholdRule;
use crate::error::{Error, Result};

/// Bernoulli KL divergence `D(theta || p)` in nats: the large-deviation rate
/// of the marker mean for i.i.d. markers with prevalence `p`.
pub fn kl_rate(theta: f64, p: f64) -> Result<f64> {
    for (name, v) in [("theta", theta), ("p", p)] {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::param(name, format!("must lie in (0, 1), got {v}")));
        }
    }
    Ok(theta * (theta / p).ln() + (1.0 - theta) * ((1.0 - theta) / (1.0 - p)).ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopePoint {
    pub k: u32,
    pub m: u32,
    /// `(1/k) ln(q_B / q_A)` from exact tails.
    pub slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeReport {
    pub p_a: f64,
    pub p_b: f64,
    pub theta: f64,
    pub points: Vec<SlopePoint>,
    /// `kl_rate(theta, p_a) - kl_rate(theta, p_b)`.
    pub limit: f64,
    /// `|slope - limit| / |limit|` at the largest k; absolute when the limit
    /// is zero.
    pub deviation_at_largest_k: f64,
    /// Distance to the limit shrinks at every step of `k_list`.
    pub monotone_approach: bool,
    /// Set when `p_a < p_b < theta` does not hold.
    pub regime_warning: Option<String>,
}

/// Growth rate of the FPR ratio between two groups of i.i.d. markers under
/// the threshold `m(k) = ceil(k * theta)`.
pub fn fpr_ratio_slope(p_a: f64, p_b: f64, theta: f64, k_list: &[u32]) -> Result<SlopeReport> {
    if k_list.is_empty() {
        return Err(Error::param("k list", "must be nonempty"));
    }
    if let Some(i) = k_list.windows(2).position(|w| w[1] <= w[0]) {
        return Err(Error::UnsortedGrid { index: i + 1 });
    }
    let limit = kl_rate(theta, p_a)? - kl_rate(theta, p_b)?;
    let regime_warning = (!(p_a < p_b && p_b < theta)).then(|| {
        format!("outside the ceiling regime (need p_a < p_b < theta, got {p_a}, {p_b}, {theta}); values are still exact")
    });

    let rule = ThresholdRule::Fraction(theta);
    let mut points = Vec::with_capacity(k_list.len());
    for &k in k_list {
        let m = rule.resolve(k)?;
        let la = count_pmf(k, p_a, 0.0)?.log_upper_tail(m);
        let lb = count_pmf(k, p_b, 0.0)?.log_upper_tail(m);
        points.push(SlopePoint { k, m, slope: (lb - la) / f64::from(k) });
    }
    let distance = |s: f64| if limit == 0.0 { s.abs() } else { ((s - limit) / limit).abs() };
    let deviations: Vec<f64> = points.iter().map(|pt| distance(pt.slope)).collect();
    let monotone_approach = deviations.windows(2).all(|w| w[1] <= w[0]);
    Ok(SlopeReport {
        p_a,
        p_b,
        theta,
        deviation_at_largest_k: *deviations.last().unwrap(),
        points,
        limit,
        monotone_approach,
        regime_warning,
    })
}
