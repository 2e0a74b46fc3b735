//! Monotone recalibration maps and the likelihood-ratio invariance check.
//!
//! A strictly increasing map `f` satisfies `score >= c` exactly when
//! `f(score) >= f(c)`, so every threshold keeps its confusion counts and
//! therefore its sensitivity, FPR and likelihood ratio. Nondecreasing step
//! maps such as isotonic regression keep this only for thresholds that do not
//! fall inside a flat region; [`lr_invariance_check`] reports which.

mod expr;
mod invariance;
mod isotonic;
mod platt;

pub use expr::ScoreExpression;
pub use invariance::{lr_invariance_check, InvarianceReport, InvarianceRow, MismatchCause, RatesAtCutoff};
pub use isotonic::{fit_isotonic, flat_region_report, FlatRegion, IsotonicFit};
pub use platt::{fit_platt, FitStatus, PlattFit, PlattOptions};

use crate::error::{Error, Result};

/// Closed-form strictly increasing maps.
#[derive(Debug, Clone, PartialEq)]
pub enum ClosedForm {
    /// `slope * x + intercept`, `slope > 0`.
    Affine { slope: f64, intercept: f64 },
    Exp,
    /// Platt map `1 / (1 + exp(-(slope * x + intercept)))`.
    Logistic { slope: f64, intercept: f64 },
    Expression(ScoreExpression),
}

#[derive(Debug, Clone, PartialEq)]
pub enum MonotoneTransform {
    StrictlyIncreasing(ClosedForm),
    Step(IsotonicFit),
}

impl MonotoneTransform {
    pub fn affine(slope: f64, intercept: f64) -> Result<Self> {
        if !(slope > 0.0) || !intercept.is_finite() || !slope.is_finite() {
            return Err(Error::param("slope", format!("affine map needs finite slope > 0, got {slope}")));
        }
        Ok(MonotoneTransform::StrictlyIncreasing(ClosedForm::Affine { slope, intercept }))
    }

    pub fn platt(fit: &PlattFit) -> Self {
        MonotoneTransform::StrictlyIncreasing(ClosedForm::Logistic { slope: fit.slope, intercept: fit.intercept })
    }

    pub fn expression(source: &str) -> Result<Self> {
        Ok(MonotoneTransform::StrictlyIncreasing(ClosedForm::Expression(ScoreExpression::parse(source)?)))
    }

    pub fn is_strict(&self) -> bool {
        matches!(self, MonotoneTransform::StrictlyIncreasing(_))
    }

    pub fn describe(&self) -> String {
        match self {
            MonotoneTransform::StrictlyIncreasing(ClosedForm::Affine { slope, intercept }) => {
                format!("affine {slope}*x + {intercept}")
            }
            MonotoneTransform::StrictlyIncreasing(ClosedForm::Exp) => "exp(x)".into(),
            MonotoneTransform::StrictlyIncreasing(ClosedForm::Logistic { slope, intercept }) => {
                format!("platt sigmoid({slope}*x + {intercept})")
            }
            MonotoneTransform::StrictlyIncreasing(ClosedForm::Expression(e)) => format!("expr {}", e.source()),
            MonotoneTransform::Step(fit) => format!("isotonic step ({} breakpoints)", fit.breakpoints.len()),
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::DomainViolation { value: x });
        }
        let y = match self {
            MonotoneTransform::StrictlyIncreasing(ClosedForm::Affine { slope, intercept }) => slope * x + intercept,
            MonotoneTransform::StrictlyIncreasing(ClosedForm::Exp) => x.exp(),
            MonotoneTransform::StrictlyIncreasing(ClosedForm::Logistic { slope, intercept }) => {
                platt::sigmoid(slope * x + intercept)
            }
            MonotoneTransform::StrictlyIncreasing(ClosedForm::Expression(e)) => return e.eval(x),
            MonotoneTransform::Step(fit) => fit.evaluate(x),
        };
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::DomainViolation { value: x })
        }
    }

    /// Confirms the map is strictly increasing across the sorted distinct
    /// values of `scores`, as evaluated in floating point.
    pub fn verify_strictly_increasing(&self, scores: &[f64]) -> Result<()> {
        let mut distinct: Vec<f64> = scores.to_vec();
        distinct.sort_by(f64::total_cmp);
        distinct.dedup();
        let mapped = apply_transform(self, &distinct)?;
        for (i, w) in mapped.windows(2).enumerate() {
            if !(w[0] < w[1]) {
                return Err(Error::NotStrictlyIncreasing { lower: distinct[i], upper: distinct[i + 1] });
            }
        }
        Ok(())
    }
}

pub fn apply_transform(t: &MonotoneTransform, scores: &[f64]) -> Result<Vec<f64>> {
    scores.iter().map(|&x| t.eval(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn affine_example() {
        let t = MonotoneTransform::affine(2.0, 1.0).unwrap();
        assert_eq!(apply_transform(&t, &[1.0, 2.0, 3.0]).unwrap(), vec![3.0, 5.0, 7.0]);
        assert!(MonotoneTransform::affine(0.0, 1.0).is_err());
    }

    #[test]
    fn step_is_flat_inside_block() {
        let fit = fit_isotonic(&[1.0, 2.0, 3.0, 4.0], &[false, true, false, true]).unwrap();
        let region = flat_region_report(&fit)[0];
        let t = MonotoneTransform::Step(fit);
        let inside = apply_transform(&t, &[region.lower, 0.5 * (region.lower + region.upper), region.upper]).unwrap();
        assert!(inside.windows(2).all(|w| w[0] == w[1]));
        assert!(t.verify_strictly_increasing(&[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn domain_violations() {
        let t = MonotoneTransform::StrictlyIncreasing(ClosedForm::Exp);
        assert!(apply_transform(&t, &[1000.0]).is_err());
        assert!(apply_transform(&t, &[f64::NAN]).is_err());
        let t = MonotoneTransform::expression("sqrt(x)").unwrap();
        assert!(apply_transform(&t, &[-4.0]).is_err());
        let t = MonotoneTransform::expression("x*x").unwrap();
        assert!(t.verify_strictly_increasing(&[-1.0, 0.0, 1.0]).is_err());
    }

    proptest! {
        #[test]
        fn sort_order_preserved(scores in prop::collection::vec(-20.0f64..20.0, 1000)) {
            let t = MonotoneTransform::StrictlyIncreasing(ClosedForm::Exp);
            let mapped = apply_transform(&t, &scores).unwrap();
            let mut a: Vec<usize> = (0..scores.len()).collect();
            let mut b = a.clone();
            a.sort_by(|&i, &j| scores[i].total_cmp(&scores[j]).then(i.cmp(&j)));
            b.sort_by(|&i, &j| mapped[i].total_cmp(&mapped[j]).then(i.cmp(&j)));
            prop_assert_eq!(a, b);
        }
    }
}
