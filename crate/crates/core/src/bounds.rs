//! Closed-form precision algebra for binary flags.
//!
//! Everything here follows from Bayes' theorem written in odds form: the
//! posterior odds of a flagged case are the prior odds `pi / (1 - pi)` times
//! the flag's likelihood ratio `s / q`. From that single identity come the
//! achieved PPV at a base rate, the likelihood ratio required to reach a
//! target PPV, and the number of flagged people detained per true positive.
//!
//! All computation is unrounded. Rounding for display lives in
//! [`crate::report::format`].

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Prevalence of the positive outcome, strictly inside (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct BaseRate(f64);

impl BaseRate {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 && value < 1.0 {
            Ok(BaseRate(value))
        } else {
            Err(Error::param("base rate", format!("must lie in (0, 1), got {value}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Prior odds `pi / (1 - pi)`.
    pub fn prior_odds(self) -> f64 {
        self.0 / (1.0 - self.0)
    }
}

impl fmt::Display for BaseRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Sensitivity and false positive rate of a flag at one cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatingPoint {
    pub sensitivity: f64,
    pub fpr: f64,
}

/// Likelihood ratio of an operating point.
///
/// A flag with zero false positives has no finite ratio; it is carried as
/// [`LikelihoodRatio::PerfectSpecificity`] so that reports never print an
/// infinite number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum LikelihoodRatio {
    Finite(f64),
    PerfectSpecificity,
}

impl LikelihoodRatio {
    pub fn finite(self) -> Option<f64> {
        match self {
            LikelihoodRatio::Finite(v) => Some(v),
            LikelihoodRatio::PerfectSpecificity => None,
        }
    }

    /// Ordering where perfect specificity dominates every finite ratio.
    pub fn max(self, other: Self) -> Self {
        match (self, other) {
            (LikelihoodRatio::Finite(a), LikelihoodRatio::Finite(b)) => {
                LikelihoodRatio::Finite(a.max(b))
            }
            _ => LikelihoodRatio::PerfectSpecificity,
        }
    }
}

impl OperatingPoint {
    pub fn new(sensitivity: f64, fpr: f64) -> Result<Self> {
        check_probability("sensitivity", sensitivity)?;
        check_probability("false positive rate", fpr)?;
        Ok(OperatingPoint { sensitivity, fpr })
    }

    /// `s / q`. Zero when the flag never fires on positives, undefined when it
    /// never fires at all.
    pub fn likelihood_ratio(&self) -> Result<LikelihoodRatio> {
        match (self.sensitivity, self.fpr) {
            (s, q) if s == 0.0 && q == 0.0 => Err(Error::UndefinedFlag),
            (_, q) if q == 0.0 => Ok(LikelihoodRatio::PerfectSpecificity),
            (s, q) => Ok(LikelihoodRatio::Finite(s / q)),
        }
    }
}

/// Likelihood ratio, PPV and number needed to detain at one base rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrecisionSummary {
    pub lr: LikelihoodRatio,
    pub ppv: f64,
    pub base_rate: BaseRate,
}

impl PrecisionSummary {
    pub fn from_lr(lr: f64, pi: BaseRate) -> Result<Self> {
        let ppv = ppv_from_lr(lr, pi)?;
        Ok(PrecisionSummary { lr: LikelihoodRatio::Finite(lr), ppv, base_rate: pi })
    }

    pub fn from_point(point: OperatingPoint, pi: BaseRate) -> Result<Self> {
        let lr = point.likelihood_ratio()?;
        let ppv = ppv_from_rates(point, pi)?;
        Ok(PrecisionSummary { lr, ppv, base_rate: pi })
    }

    /// `1 / ppv`; `None` when the PPV is zero.
    pub fn nnd(&self) -> Option<f64> {
        nnd_from_ppv(self.ppv).ok()
    }

    pub fn band(&self) -> BenchmarkBand {
        benchmark_compare(self.ppv)
    }
}

fn check_probability(name: &'static str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::param(name, format!("must lie in [0, 1], got {v}")))
    }
}

fn check_open_probability(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::param(name, format!("must lie in (0, 1), got {v}")))
    }
}

/// PPV of a flag with likelihood ratio `lr` at base rate `pi`.
pub fn ppv_from_lr(lr: f64, pi: BaseRate) -> Result<f64> {
    if !(lr >= 0.0) || lr.is_infinite() {
        return Err(Error::param("likelihood ratio", format!("must be finite and >= 0, got {lr}")));
    }
    let posterior_odds = lr * pi.prior_odds();
    Ok(posterior_odds / (1.0 + posterior_odds))
}

/// PPV from sensitivity and false positive rate directly.
///
/// Returns 1 for a flag with zero false positive rate and positive
/// sensitivity.
pub fn ppv_from_rates(point: OperatingPoint, pi: BaseRate) -> Result<f64> {
    let OperatingPoint { sensitivity: s, fpr: q } = point;
    if s == 0.0 && q == 0.0 {
        return Err(Error::UndefinedFlag);
    }
    let p = pi.value();
    let true_flags = s * p;
    Ok(true_flags / (true_flags + q * (1.0 - p)))
}

/// Smallest likelihood ratio whose PPV at `pi` reaches `alpha`.
pub fn required_lr(alpha: f64, pi: BaseRate) -> Result<f64> {
    check_open_probability("target PPV", alpha)?;
    Ok(alpha / (1.0 - alpha) / pi.prior_odds())
}

/// Number needed to detain: flagged people per true positive.
pub fn nnd_from_ppv(ppv: f64) -> Result<f64> {
    if ppv == 0.0 {
        return Err(Error::InfiniteNnd);
    }
    check_probability("PPV", ppv)?;
    Ok(1.0 / ppv)
}

/// Analogical evidentiary bands used to read a PPV.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchmarkBand {
    BelowPreponderance,
    Preponderance,
    ClearAndConvincing,
    BeyondReasonableDoubt,
}

impl BenchmarkBand {
    pub const ALL: [BenchmarkBand; 4] = [
        BenchmarkBand::BelowPreponderance,
        BenchmarkBand::Preponderance,
        BenchmarkBand::ClearAndConvincing,
        BenchmarkBand::BeyondReasonableDoubt,
    ];

    /// Closed lower bound of the band.
    pub fn lower_bound(self) -> f64 {
        match self {
            BenchmarkBand::BelowPreponderance => 0.0,
            BenchmarkBand::Preponderance => 0.50,
            BenchmarkBand::ClearAndConvincing => 0.75,
            BenchmarkBand::BeyondReasonableDoubt => 0.95,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BenchmarkBand::BelowPreponderance => "below-preponderance",
            BenchmarkBand::Preponderance => "preponderance",
            BenchmarkBand::ClearAndConvincing => "clear-and-convincing",
            BenchmarkBand::BeyondReasonableDoubt => "beyond-reasonable-doubt",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BenchmarkBand::BelowPreponderance => "Below preponderance",
            BenchmarkBand::Preponderance => "Preponderance (\"more likely than not\")",
            BenchmarkBand::ClearAndConvincing => "Clear and convincing evidence",
            BenchmarkBand::BeyondReasonableDoubt => "Beyond reasonable doubt",
        }
    }
}

impl fmt::Display for BenchmarkBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Band containing `ppv`; boundary values belong to the higher band.
pub fn benchmark_compare(ppv: f64) -> BenchmarkBand {
    BenchmarkBand::ALL
        .into_iter()
        .rev()
        .find(|b| ppv >= b.lower_bound())
        .unwrap_or(BenchmarkBand::BelowPreponderance)
}

/// Required likelihood ratios over a base-rate by target-PPV grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RequiredLrGrid {
    pub base_rates: Vec<BaseRate>,
    pub targets: Vec<f64>,
    /// `cells[i][j]` is the requirement at `base_rates[i]`, `targets[j]`.
    pub cells: Vec<Vec<f64>>,
}

pub fn required_lr_table(pis: &[BaseRate], alphas: &[f64]) -> Result<RequiredLrGrid> {
    if pis.is_empty() || alphas.is_empty() {
        return Err(Error::param("grid", "base rates and targets must be nonempty"));
    }
    let cells = pis
        .iter()
        .map(|&pi| alphas.iter().map(|&a| required_lr(a, pi)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(RequiredLrGrid { base_rates: pis.to_vec(), targets: alphas.to_vec(), cells })
}

/// PPV and NND of one likelihood ratio projected over several base rates.
pub fn projection_table(lr: f64, pis: &[BaseRate]) -> Result<Vec<PrecisionSummary>> {
    if !(lr > 0.0) {
        return Err(Error::param("likelihood ratio", format!("must be > 0, got {lr}")));
    }
    pis.iter().map(|&pi| PrecisionSummary::from_lr(lr, pi)).collect()
}

/// `(pi, required LR)` pairs along one iso-PPV curve.
pub fn wall_curve(alpha: f64, pi_grid: &[BaseRate]) -> Result<Vec<(f64, f64)>> {
    if let Some(index) = pi_grid.windows(2).position(|w| w[1].value() <= w[0].value()) {
        return Err(Error::UnsortedGrid { index: index + 1 });
    }
    pi_grid.iter().map(|&pi| Ok((pi.value(), required_lr(alpha, pi)?))).collect()
}

/// The same identities in exact rational arithmetic.
pub mod exact {
    use num_rational::Ratio;

    use crate::error::{Error, Result};

    pub type Rational = Ratio<i128>;

    fn open_unit(name: &'static str, v: Rational) -> Result<()> {
        if v > Rational::from_integer(0) && v < Rational::from_integer(1) {
            Ok(())
        } else {
            Err(Error::param(name, format!("must lie in (0, 1), got {v}")))
        }
    }

    pub fn required_lr(alpha: Rational, pi: Rational) -> Result<Rational> {
        open_unit("target PPV", alpha)?;
        open_unit("base rate", pi)?;
        let one = Rational::from_integer(1);
        Ok(alpha / (one - alpha) * ((one - pi) / pi))
    }

    pub fn ppv_from_lr(lr: Rational, pi: Rational) -> Result<Rational> {
        open_unit("base rate", pi)?;
        if lr < Rational::from_integer(0) {
            return Err(Error::param("likelihood ratio", "must be >= 0"));
        }
        let one = Rational::from_integer(1);
        let odds = lr * (pi / (one - pi));
        Ok(odds / (one + odds))
    }

    pub fn ppv_from_rates(s: Rational, q: Rational, pi: Rational) -> Result<Rational> {
        let zero = Rational::from_integer(0);
        if s == zero && q == zero {
            return Err(Error::UndefinedFlag);
        }
        let one = Rational::from_integer(1);
        let true_flags = s * pi;
        Ok(true_flags / (true_flags + q * (one - pi)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pi(v: f64) -> BaseRate {
        BaseRate::new(v).unwrap()
    }

    #[test]
    fn base_rate_rejects_closed_endpoints() {
        for v in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(BaseRate::new(v).is_err(), "{v}");
        }
    }

    #[test]
    fn ppv_examples() {
        assert!((ppv_from_lr(4.3, pi(0.173)).unwrap() - 0.47).abs() <= 0.005);
        assert!((ppv_from_lr(4.0, pi(0.03)).unwrap() - 0.11).abs() <= 0.005);
        for p in [0.001, 0.03, 0.5, 0.97] {
            assert!((ppv_from_lr(1.0, pi(p)).unwrap() - p).abs() < 1e-15);
        }
        assert!(ppv_from_lr(-1.0, pi(0.1)).is_err());
    }

    #[test]
    fn ppv_from_rates_examples() {
        let v = ppv_from_rates(OperatingPoint::new(0.396, 0.092).unwrap(), pi(0.173)).unwrap();
        assert!((v - 0.47).abs() <= 0.005);
        let v = ppv_from_rates(OperatingPoint::new(0.624, 0.011).unwrap(), pi(0.03)).unwrap();
        assert!((v - 0.64).abs() <= 0.01);
        let v = ppv_from_rates(OperatingPoint::new(0.3, 0.3).unwrap(), pi(0.07)).unwrap();
        assert!((v - 0.07).abs() < 1e-15);
        assert!(matches!(
            ppv_from_rates(OperatingPoint::new(0.0, 0.0).unwrap(), pi(0.1)),
            Err(Error::UndefinedFlag)
        ));
    }

    #[test]
    fn degenerate_operating_points() {
        let perfect = OperatingPoint::new(0.4, 0.0).unwrap();
        assert_eq!(perfect.likelihood_ratio().unwrap(), LikelihoodRatio::PerfectSpecificity);
        assert_eq!(ppv_from_rates(perfect, pi(0.02)).unwrap(), 1.0);
        let useless = OperatingPoint::new(0.0, 0.2).unwrap();
        assert_eq!(useless.likelihood_ratio().unwrap(), LikelihoodRatio::Finite(0.0));
        assert!(OperatingPoint::new(0.0, 0.0).unwrap().likelihood_ratio().is_err());
        assert!(OperatingPoint::new(1.2, 0.0).is_err());
    }

    #[test]
    fn required_lr_examples() {
        assert!((required_lr(0.5, pi(0.01)).unwrap() - 99.0).abs() < 1e-12);
        assert!((required_lr(0.5, pi(0.03)).unwrap() - 32.333_333_333_333).abs() < 1e-9);
        assert!((required_lr(0.5, pi(0.06)).unwrap() - 15.666_666_666_667).abs() < 1e-9);
        assert!((required_lr(0.5, pi(0.5)).unwrap() - 1.0).abs() < 1e-15);
        assert!((required_lr(0.9, pi(0.02)).unwrap() - 441.0).abs() < 1e-9);
        assert!(required_lr(1.0, pi(0.5)).is_err());
        assert!(required_lr(0.0, pi(0.5)).is_err());
    }

    #[test]
    fn nnd_examples() {
        assert!((nnd_from_ppv(0.11).unwrap() - 9.0909).abs() < 1e-4);
        assert_eq!(nnd_from_ppv(1.0).unwrap(), 1.0);
        assert!((nnd_from_ppv(0.18).unwrap() - 5.5556).abs() < 1e-4);
        assert!(matches!(nnd_from_ppv(0.0), Err(Error::InfiniteNnd)));
    }

    #[test]
    fn bands() {
        assert_eq!(benchmark_compare(0.11), BenchmarkBand::BelowPreponderance);
        assert_eq!(benchmark_compare(0.50), BenchmarkBand::Preponderance);
        assert_eq!(benchmark_compare(0.75), BenchmarkBand::ClearAndConvincing);
        assert_eq!(benchmark_compare(0.95), BenchmarkBand::BeyondReasonableDoubt);
        assert_eq!(benchmark_compare(0.96), BenchmarkBand::BeyondReasonableDoubt);
        assert_eq!(benchmark_compare(0.0), BenchmarkBand::BelowPreponderance);
    }

    #[test]
    fn projection_rows() {
        let rows = projection_table(1.0, &[pi(0.2), pi(0.05)]).unwrap();
        assert!((rows[0].ppv - 0.2).abs() < 1e-15);
        assert!((rows[1].ppv - 0.05).abs() < 1e-15);
        assert!(projection_table(0.0, &[pi(0.2)]).is_err());
    }

    #[test]
    fn wall_curve_rejects_unsorted() {
        let grid = [pi(0.01), pi(0.03), pi(0.02)];
        assert!(matches!(wall_curve(0.5, &grid), Err(Error::UnsortedGrid { index: 2 })));
        let grid = [pi(0.01), pi(0.03)];
        let curve = wall_curve(0.75, &grid).unwrap();
        assert!((curve[1].1 - 97.0).abs() < 0.5);
    }

    #[test]
    fn exact_required_lr_at_one_percent() {
        use exact::Rational;
        let v = exact::required_lr(Rational::new(1, 2), Rational::new(1, 100)).unwrap();
        assert_eq!(v, Rational::from_integer(99));
        let back = exact::ppv_from_lr(v, Rational::new(1, 100)).unwrap();
        assert_eq!(back, Rational::new(1, 2));
    }

    proptest! {
        #[test]
        fn round_trip_within_8_ulps(alpha in 1e-6f64..(1.0 - 1e-6), p in 1e-6f64..(1.0 - 1e-6)) {
            let pi = BaseRate::new(p).unwrap();
            let back = ppv_from_lr(required_lr(alpha, pi).unwrap(), pi).unwrap();
            prop_assert!((back - alpha).abs() <= 8.0 * f64::EPSILON * alpha.max(f64::MIN_POSITIVE));
        }

        #[test]
        fn ppv_monotone(lr in 0.01f64..1e3, bump in 1e-6f64..10.0, p in 0.001f64..0.99, dp in 1e-4f64..0.009) {
            let pi = BaseRate::new(p).unwrap();
            prop_assert!(ppv_from_lr(lr + bump, pi).unwrap() > ppv_from_lr(lr, pi).unwrap());
            let pi2 = BaseRate::new(p + dp).unwrap();
            prop_assert!(ppv_from_lr(lr, pi2).unwrap() > ppv_from_lr(lr, pi).unwrap());
        }

        #[test]
        fn nnd_times_ppv_is_one(lr in 0.01f64..1e3, p in 0.001f64..0.99) {
            let ppv = ppv_from_lr(lr, BaseRate::new(p).unwrap()).unwrap();
            prop_assert!((nnd_from_ppv(ppv).unwrap() * ppv - 1.0).abs() <= 2.0 * f64::EPSILON);
        }

        #[test]
        fn grid_symmetry(alpha in 0.001f64..0.999, p in 0.001f64..0.999) {
            let a = required_lr(alpha, BaseRate::new(p).unwrap()).unwrap();
            let b = required_lr(1.0 - alpha, BaseRate::new(1.0 - p).unwrap()).unwrap();
            prop_assert!((a * b - 1.0).abs() < 1e-12);
        }
    }
}
