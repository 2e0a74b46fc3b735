use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use super::ConfusionCounts;
use crate::bounds::{ppv_from_lr, BaseRate};
use crate::error::{Error, Result};

pub const DEFAULT_BOOTSTRAP_REPLICATES: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntervalMethod {
    Wilson,
    LogNormal,
    Bootstrap,
    MonotoneMap,
}

impl IntervalMethod {
    pub fn name(self) -> &'static str {
        match self {
            IntervalMethod::Wilson => "wilson",
            IntervalMethod::LogNormal => "log-normal",
            IntervalMethod::Bootstrap => "bootstrap-percentile",
            IntervalMethod::MonotoneMap => "monotone-map",
        }
    }
}

/// Point estimate with a two-sided interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntervalEstimate {
    pub point: f64,
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    pub method: IntervalMethod,
}

impl IntervalEstimate {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lower <= v && v <= self.upper
    }
}

/// Sensitivity and false positive rate, each with its interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatingPointEstimate {
    pub sensitivity: IntervalEstimate,
    pub fpr: IntervalEstimate,
}

fn check_level(level: f64) -> Result<()> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(Error::param("confidence level", format!("must lie in (0, 1), got {level}")))
    }
}

fn two_sided_z(level: f64) -> f64 {
    Normal::standard().inverse_cdf(1.0 - (1.0 - level) / 2.0)
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64, level: f64) -> Result<IntervalEstimate> {
    check_level(level)?;
    if trials == 0 {
        return Err(Error::param("trials", "must be >= 1"));
    }
    if successes > trials {
        return Err(Error::param("successes", "cannot exceed trials"));
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z = two_sided_z(level);
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    Ok(IntervalEstimate {
        point: p,
        lower: (centre - half).max(0.0).min(p),
        upper: (centre + half).min(1.0).max(p),
        level,
        method: IntervalMethod::Wilson,
    })
}

pub fn operating_point_with_ci(counts: &ConfusionCounts, level: f64) -> Result<OperatingPointEstimate> {
    if counts.positives() == 0 {
        return Err(Error::ZeroDenominator { class: "positives" });
    }
    if counts.negatives() == 0 {
        return Err(Error::ZeroDenominator { class: "negatives" });
    }
    Ok(OperatingPointEstimate {
        sensitivity: wilson_interval(counts.tp, counts.positives(), level)?,
        fpr: wilson_interval(counts.fp, counts.negatives(), level)?,
    })
}

/// Likelihood ratio with a normal-approximation interval on the log scale.
pub fn lr_with_ci(counts: &ConfusionCounts, level: f64) -> Result<IntervalEstimate> {
    check_level(level)?;
    let ConfusionCounts { tp, fp, tn, fn_ } = *counts;
    if tp == 0 || fp == 0 || tn == 0 || fn_ == 0 {
        return Err(Error::ZeroCells { tp, fp, tn, fn_ });
    }
    let n1 = counts.positives() as f64;
    let n0 = counts.negatives() as f64;
    let s = tp as f64 / n1;
    let q = fp as f64 / n0;
    let point = s / q;
    let se = ((1.0 - s) / (s * n1) + (1.0 - q) / (q * n0)).sqrt();
    let z = two_sided_z(level);
    Ok(IntervalEstimate {
        point,
        lower: (point.ln() - z * se).exp(),
        upper: (point.ln() + z * se).exp(),
        level,
        method: IntervalMethod::LogNormal,
    })
}

/// Stratified percentile bootstrap for the likelihood ratio.
///
/// Replicate `i` draws from its own ChaCha stream `i` under `seed`, so the
/// result does not depend on how replicates are scheduled across threads.
/// Replicates with no false positives contribute an infinite ratio.
pub fn lr_bootstrap(counts: &ConfusionCounts, level: f64, replicates: usize, seed: u64) -> Result<IntervalEstimate> {
    check_level(level)?;
    if replicates == 0 {
        return Err(Error::param("replicates", "must be >= 1"));
    }
    let n1 = counts.positives();
    let n0 = counts.negatives();
    if n1 == 0 {
        return Err(Error::ZeroDenominator { class: "positives" });
    }
    if n0 == 0 {
        return Err(Error::ZeroDenominator { class: "negatives" });
    }
    if counts.fp == 0 {
        return Err(Error::PerfectSpecificity);
    }
    let s = counts.tp as f64 / n1 as f64;
    let q = counts.fp as f64 / n0 as f64;
    let pos = Binomial::new(n1, s).map_err(|e| Error::param("sensitivity", e.to_string()))?;
    let neg = Binomial::new(n0, q).map_err(|e| Error::param("false positive rate", e.to_string()))?;

    let mut draws: Vec<f64> = (0..replicates as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let tp = pos.sample(&mut rng) as f64;
            let fp = neg.sample(&mut rng) as f64;
            if fp == 0.0 {
                f64::INFINITY
            } else {
                (tp / n1 as f64) / (fp / n0 as f64)
            }
        })
        .collect();
    draws.sort_by(f64::total_cmp);

    let tail = (1.0 - level) / 2.0;
    let rank = |p: f64| {
        let idx = (p * replicates as f64).ceil() as usize;
        draws[idx.clamp(1, replicates) - 1]
    };
    let point = s / q;
    // Percentile bounds are widened to contain the point estimate.
    Ok(IntervalEstimate {
        point,
        lower: rank(tail).min(point),
        upper: rank(1.0 - tail).max(point),
        level,
        method: IntervalMethod::Bootstrap,
    })
}

/// Maps an LR interval through [`ppv_from_lr`]; monotone, so endpoints map to
/// endpoints.
pub fn projected_ppv(lr_est: &IntervalEstimate, pi: BaseRate) -> Result<IntervalEstimate> {
    if !(lr_est.point > 0.0) {
        return Err(Error::param("likelihood ratio", "point estimate must be > 0"));
    }
    let map = |lr: f64| if lr.is_infinite() { Ok(1.0) } else { ppv_from_lr(lr.max(0.0), pi) };
    Ok(IntervalEstimate {
        point: map(lr_est.point)?,
        lower: map(lr_est.lower)?,
        upper: map(lr_est.upper)?,
        level: lr_est.level,
        method: IntervalMethod::MonotoneMap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    /// Wilson bounds written out longhand, with z for 95% pinned.
    fn wilson_oracle(x: f64, n: f64) -> (f64, f64) {
        let z = 1.959_963_984_540_054_f64;
        let p = x / n;
        let a = p + z * z / (2.0 * n);
        let b = z * ((p * (1.0 - p) + z * z / (4.0 * n)) / n).sqrt();
        let c = 1.0 + z * z / n;
        ((a - b) / c, (a + b) / c)
    }

    #[test]
    fn wilson_matches_longhand_formula() {
        let counts = ConfusionCounts::new(8, 3, 97, 12);
        let est = operating_point_with_ci(&counts, 0.95).unwrap();
        let (lo, hi) = wilson_oracle(8.0, 20.0);
        assert!((est.sensitivity.lower - lo).abs() < 1e-12);
        assert!((est.sensitivity.upper - hi).abs() < 1e-12);
        let (lo, hi) = wilson_oracle(3.0, 100.0);
        assert!((est.fpr.lower - lo).abs() < 1e-12);
        assert!((est.fpr.upper - hi).abs() < 1e-12);
        assert_eq!(est.sensitivity.point, 0.4);
    }

    #[test]
    fn symmetric_at_one_half() {
        let est = wilson_interval(50, 100, 0.95).unwrap();
        assert_eq!(est.point, 0.5);
        assert!(((est.upper - 0.5) - (0.5 - est.lower)).abs() < 1e-12);
    }

    #[test]
    fn zero_denominators() {
        assert!(operating_point_with_ci(&ConfusionCounts::new(0, 3, 4, 0), 0.95).is_err());
        assert!(operating_point_with_ci(&ConfusionCounts::new(2, 0, 0, 1), 0.95).is_err());
        assert!(wilson_interval(1, 2, 1.0).is_err());
    }

    #[test]
    fn lr_point_and_zero_cells() {
        let est = lr_with_ci(&ConfusionCounts::new(10, 30, 30, 10), 0.95).unwrap();
        assert!((est.point - 1.0).abs() < 1e-15);
        assert!(est.contains(1.0));
        assert!(matches!(
            lr_with_ci(&ConfusionCounts::new(10, 0, 30, 10), 0.95),
            Err(Error::ZeroCells { .. })
        ));
        let boot = lr_bootstrap(&ConfusionCounts::new(10, 3, 30, 0), 0.95, 500, 3).unwrap();
        assert!(boot.lower <= boot.point && boot.point <= boot.upper);
        assert!(matches!(
            lr_bootstrap(&ConfusionCounts::new(10, 0, 30, 4), 0.95, 500, 3),
            Err(Error::PerfectSpecificity)
        ));
    }

    #[test]
    fn bootstrap_is_seed_deterministic() {
        let c = ConfusionCounts::new(20, 15, 140, 25);
        let a = lr_bootstrap(&c, 0.95, 3000, 42).unwrap();
        let b = lr_bootstrap(&c, 0.95, 3000, 42).unwrap();
        assert_eq!(a.lower.to_bits(), b.lower.to_bits());
        assert_eq!(a.upper.to_bits(), b.upper.to_bits());
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c1 = pool.install(|| lr_bootstrap(&c, 0.95, 3000, 42).unwrap());
        assert_eq!(a, c1);
    }

    #[test]
    fn analytic_and_bootstrap_intervals_overlap() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let cases = 60;
        let mut overlapping = 0;
        for case in 0..cases {
            let tp = rng.random_range(3u64..40);
            let fn_ = rng.random_range(3u64..60);
            let fp = rng.random_range(3u64..40);
            let tn = rng.random_range(20u64..300);
            let c = ConfusionCounts::new(tp, fp, tn, fn_);
            let analytic = lr_with_ci(&c, 0.95).unwrap();
            let boot = lr_bootstrap(&c, 0.95, 100_000, case).unwrap();
            if analytic.lower <= boot.upper && boot.lower <= analytic.upper {
                overlapping += 1;
            }
        }
        assert!(overlapping as f64 >= 0.9 * cases as f64, "{overlapping}/{cases}");
    }

    #[test]
    fn projected_ppv_maps_endpoints() {
        let pi = BaseRate::new(0.173).unwrap();
        let lr = IntervalEstimate { point: 4.3, lower: 3.1, upper: 5.8, level: 0.95, method: IntervalMethod::LogNormal };
        let ppv = projected_ppv(&lr, pi).unwrap();
        assert!((ppv.lower - 0.41).abs() <= 0.03);
        assert!((ppv.upper - 0.53).abs() <= 0.03);
        let pi = BaseRate::new(0.03).unwrap();
        let at3 = projected_ppv(&lr, pi).unwrap();
        assert!((at3.point - 0.12).abs() <= 0.005);
        let flat = IntervalEstimate { point: 4.0, lower: 4.0, upper: 4.0, level: 0.95, method: IntervalMethod::LogNormal };
        let p = projected_ppv(&flat, pi).unwrap();
        assert!(p.lower == p.point && p.point == p.upper);
    }

    proptest! {
        #[test]
        fn point_inside_interval_and_width_shrinks(x in 1u64..50, extra in 1u64..200) {
            let n = x + extra;
            let a = wilson_interval(x, n, 0.95).unwrap();
            let b = wilson_interval(4 * x, 4 * n, 0.95).unwrap();
            prop_assert!(a.contains(a.point));
            prop_assert!(b.width() < a.width());
            prop_assert!(b.width() > 0.35 * a.width() && b.width() < 0.65 * a.width());
        }

        #[test]
        fn wider_lr_interval_never_narrows_ppv(p in 0.01f64..0.9, lo in 0.5f64..3.0, hi in 3.0f64..9.0, pad in 0.0f64..1.0) {
            let pi = BaseRate::new(p).unwrap();
            let mk = |l: f64, u: f64| IntervalEstimate { point: 3.0, lower: l, upper: u, level: 0.95, method: IntervalMethod::LogNormal };
            let narrow = projected_ppv(&mk(lo, hi), pi).unwrap();
            let wide = projected_ppv(&mk(lo - pad * 0.4, hi + pad), pi).unwrap();
            prop_assert!(wide.width() >= narrow.width());
        }
    }
}
