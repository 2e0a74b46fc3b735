//! Count-threshold classifiers over binary risk markers in two groups.
//!
//! Each group's negatives carry markers at their own prevalence while
//! positives share one prevalence. A flag fires when at least `m` of `k`
//! markers are present. Everything is computed by exact summation over the
//! count distribution; nothing is sampled.

mod ceiling;
mod ldp;
mod pmf;

pub use ceiling::{
    ceiling_sweep, classifier_rates, table2_scenario, variant_of, variant_scenario, CeilingReport, CeilingRow,
    CeilingScenario, ClassRates, RegimeCheck, Table2Params, Table2Result, VariantResult, VARIANT_P_POS_B,
};
pub use ldp::{fpr_ratio_slope, kl_rate, SlopePoint, SlopeReport};
pub use pmf::{count_pmf, CountPmf};

use serde::Serialize;

use crate::error::{Error, Result};

/// Marker-generation parameters for one group.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroupFeatureModel {
    pub k: u32,
    /// Marker prevalence among positives.
    pub p_pos: f64,
    /// Marker prevalence among negatives.
    pub p_neg: f64,
    /// Pairwise correlation of markers within a class.
    pub rho: f64,
}

impl GroupFeatureModel {
    pub fn new(k: u32, p_pos: f64, p_neg: f64, rho: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::param("k", "need at least one marker"));
        }
        for (name, v) in [("p_pos", p_pos), ("p_neg", p_neg)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::param(name, format!("must lie in (0, 1), got {v}")));
            }
        }
        if !(0.0..1.0).contains(&rho) {
            return Err(Error::param("rho", format!("must lie in [0, 1), got {rho}")));
        }
        Ok(GroupFeatureModel { k, p_pos, p_neg, rho })
    }
}

/// Flag threshold on the marker count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum ThresholdRule {
    Count(u32),
    /// `m(k) = ceil(k * theta)`.
    Fraction(f64),
}

impl ThresholdRule {
    /// Resolves to a count in `1..=k + 1`; `k + 1` never fires.
    pub fn resolve(self, k: u32) -> Result<u32> {
        match self {
            ThresholdRule::Count(m) if (1..=k + 1).contains(&m) => Ok(m),
            ThresholdRule::Count(m) => Err(Error::param("m", format!("must lie in 1..={}, got {m}", k + 1))),
            ThresholdRule::Fraction(theta) if theta > 0.0 && theta < 1.0 => {
                // Guard against k * theta landing one ulp above an integer.
                let m = (f64::from(k) * theta - 1e-9).ceil().max(1.0);
                Ok(m as u32)
            }
            ThresholdRule::Fraction(theta) => Err(Error::param("theta", format!("must lie in (0, 1), got {theta}"))),
        }
    }
}
