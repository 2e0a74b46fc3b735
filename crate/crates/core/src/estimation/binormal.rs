use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::bounds::{BaseRate, OperatingPoint, PrecisionSummary};
use crate::error::{Error, Result};

/// Operating point implied by an AUC under the equal-variance binormal model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BinormalPoint {
    /// Class separation `d' = sqrt(2) * inverse_normal_cdf(auc)`.
    pub separation: f64,
    /// Cutoff on the negative-class standard normal scale.
    pub cutoff: f64,
    pub point: OperatingPoint,
    pub summary: PrecisionSummary,
}

const BRACKET: (f64, f64) = (-40.0, 40.0);

/// Solves for the cutoff at which a fraction `flag_fraction` of the whole
/// population is flagged, then reads off sensitivity, FPR, LR and PPV.
pub fn binormal_operating_point(auc: f64, flag_fraction: f64, pi: BaseRate) -> Result<BinormalPoint> {
    if !(auc > 0.5 && auc < 1.0) {
        return Err(Error::param("AUC", format!("must lie in (0.5, 1), got {auc}")));
    }
    if !(flag_fraction > 0.0 && flag_fraction < 1.0) {
        return Err(Error::param("flag fraction", format!("must lie in (0, 1), got {flag_fraction}")));
    }
    let normal = Normal::standard();
    let separation = std::f64::consts::SQRT_2 * normal.inverse_cdf(auc);
    let p = pi.value();
    let excess = |t: f64| p * normal.sf(t - separation) + (1.0 - p) * normal.sf(t) - flag_fraction;

    // Flag rate is decreasing in the cutoff.
    let (mut lo, mut hi) = BRACKET;
    if !(excess(lo) > 0.0 && excess(hi) < 0.0) {
        return Err(Error::NoRoot { what: "flag-rate equation" });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    let cutoff = 0.5 * (lo + hi);
    let point = OperatingPoint::new(normal.sf(cutoff - separation), normal.sf(cutoff))?;
    let summary = PrecisionSummary::from_point(point, pi)?;
    Ok(BinormalPoint { separation, cutoff, point, summary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pi(v: f64) -> BaseRate {
        BaseRate::new(v).unwrap()
    }

    #[test]
    fn near_no_signal_limit() {
        let b = binormal_operating_point(0.5 + 1e-9, 0.2, pi(0.1)).unwrap();
        let lr = b.summary.lr.finite().unwrap();
        assert!((lr - 1.0).abs() < 1e-6);
        assert!((b.summary.ppv - 0.1).abs() < 1e-6);
    }

    #[test]
    fn flag_rate_is_hit() {
        let b = binormal_operating_point(0.7, 0.2, pi(0.3)).unwrap();
        let rate = 0.3 * b.point.sensitivity + 0.7 * b.point.fpr;
        assert!((rate - 0.2).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(binormal_operating_point(0.5, 0.2, pi(0.3)).is_err());
        assert!(binormal_operating_point(0.7, 1.0, pi(0.3)).is_err());
    }

    proptest! {
        #[test]
        fn lr_above_one_and_ppv_increasing(auc in 0.55f64..0.95, f in 0.05f64..0.6, p in 0.01f64..0.8, dp in 0.01f64..0.1) {
            let a = binormal_operating_point(auc, f, pi(p)).unwrap();
            let b = binormal_operating_point(auc, f, pi((p + dp).min(0.95))).unwrap();
            prop_assert!(a.summary.lr.finite().unwrap() > 1.0);
            prop_assert!(b.summary.ppv > a.summary.ppv);
        }
    }
}
