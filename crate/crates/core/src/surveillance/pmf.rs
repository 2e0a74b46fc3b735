use serde::Serialize;
use statrs::function::beta::ln_beta;
use statrs::function::factorial::ln_binomial;

use crate::error::{Error, Result};

/// Distribution of the number of present markers out of `k` exchangeable
/// binary markers with marginal prevalence `p` and pairwise correlation
/// `rho`.
///
/// `rho = 0` is the binomial. For `rho > 0` the markers share a
/// Beta(`p(1-rho)/rho`, `(1-p)(1-rho)/rho`) prevalence, giving the
/// beta-binomial with the requested mean and pairwise correlation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountPmf {
    pub k: u32,
    pub p: f64,
    pub rho: f64,
    log_pmf: Vec<f64>,
}

pub fn count_pmf(k: u32, p: f64, rho: f64) -> Result<CountPmf> {
    if k == 0 {
        return Err(Error::param("k", "need at least one marker"));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::param("marker prevalence", format!("must lie in (0, 1), got {p}")));
    }
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::param("rho", format!("must lie in [0, 1), got {rho}")));
    }
    let n = u64::from(k);
    let log_pmf = if rho == 0.0 {
        let (lp, lq) = (p.ln(), (-p).ln_1p());
        (0..=n).map(|j| ln_binomial(n, j) + j as f64 * lp + (n - j) as f64 * lq).collect()
    } else {
        let scale = (1.0 - rho) / rho;
        let (alpha, beta) = (p * scale, (1.0 - p) * scale);
        let base = ln_beta(alpha, beta);
        (0..=n)
            .map(|j| ln_binomial(n, j) + ln_beta(j as f64 + alpha, (n - j) as f64 + beta) - base)
            .collect()
    };
    Ok(CountPmf { k, p, rho, log_pmf })
}

fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

impl CountPmf {
    pub fn pmf(&self) -> Vec<f64> {
        self.log_pmf.iter().map(|l| l.exp()).collect()
    }

    pub fn log_pmf(&self) -> &[f64] {
        &self.log_pmf
    }

    /// `ln P(count >= m)`; negative infinity for `m > k`.
    pub fn log_upper_tail(&self, m: u32) -> f64 {
        let m = m as usize;
        if m >= self.log_pmf.len() {
            return f64::NEG_INFINITY;
        }
        log_sum_exp(&self.log_pmf[m..])
    }

    /// `P(count >= m)`, summed directly.
    pub fn upper_tail(&self, m: u32) -> f64 {
        let m = m as usize;
        if m >= self.log_pmf.len() {
            return 0.0;
        }
        self.log_pmf[m..].iter().map(|l| l.exp()).sum::<f64>().min(1.0)
    }

    pub fn mean(&self) -> f64 {
        self.pmf().iter().enumerate().map(|(j, p)| j as f64 * p).sum()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.pmf().iter().enumerate().map(|(j, p)| (j as f64 - mean).powi(2) * p).sum()
    }
}
