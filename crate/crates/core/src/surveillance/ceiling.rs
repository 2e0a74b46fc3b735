use serde::Serialize;

use super::pmf::count_pmf;
use super::{GroupFeatureModel, ThresholdRule};
use crate::bounds::{nnd_from_ppv, ppv_from_rates, BaseRate, LikelihoodRatio, OperatingPoint};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassRates {
    pub m: u32,
    pub sensitivity: f64,
    pub fpr: f64,
}

/// Exact sensitivity and FPR of the count-threshold flag in each group.
pub fn classifier_rates(groups: &[GroupFeatureModel], rule: ThresholdRule) -> Result<Vec<ClassRates>> {
    let Some(first) = groups.first() else {
        return Err(Error::param("groups", "need at least one group model"));
    };
    if groups.iter().any(|g| g.k != first.k) {
        return Err(Error::param("k", "all group models must use the same number of markers"));
    }
    let m = rule.resolve(first.k)?;
    groups
        .iter()
        .map(|g| {
            Ok(ClassRates {
                m,
                sensitivity: count_pmf(g.k, g.p_pos, g.rho)?.upper_tail(m),
                fpr: count_pmf(g.k, g.p_neg, g.rho)?.upper_tail(m),
            })
        })
        .collect()
}

/// Two groups, A (less policed) and B (more policed), at one base rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CeilingScenario {
    pub group_a: GroupFeatureModel,
    pub group_b: GroupFeatureModel,
    pub base_rate: BaseRate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CeilingRow {
    pub m: u32,
    pub s_a: f64,
    pub s_b: f64,
    pub q_a: f64,
    pub q_b: f64,
    pub lr_a: LikelihoodRatio,
    pub lr_b: LikelihoodRatio,
    pub ppv_a: f64,
    pub ppv_b: f64,
    pub nnd_a: Option<f64>,
    pub nnd_b: Option<f64>,
    /// `m / k` exceeds both negative-class prevalences.
    pub above_negative_prevalence: bool,
}

impl CeilingRow {
    /// Group B has strictly higher FPR and strictly lower LR, and its PPV is
    /// not higher. PPV is compared weakly because both round to 1.0 once the
    /// FPRs are tiny.
    pub fn ceiling_holds(&self) -> bool {
        let lr = |l: LikelihoodRatio| l.finite().unwrap_or(f64::INFINITY);
        self.q_b > self.q_a && lr(self.lr_a) > lr(self.lr_b) && self.ppv_a >= self.ppv_b
    }
}

/// Which of the ceiling's regime assumptions the scenario satisfies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeCheck {
    pub equal_positive_models: bool,
    pub ordered_negative_prevalence: bool,
    pub notes: Vec<String>,
}

impl RegimeCheck {
    pub fn holds(&self) -> bool {
        self.equal_positive_models && self.ordered_negative_prevalence
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CeilingReport {
    pub scenario: CeilingScenario,
    pub rows: Vec<CeilingRow>,
    pub sup_lr_a: LikelihoodRatio,
    pub sup_lr_b: LikelihoodRatio,
    pub regime: RegimeCheck,
}

impl CeilingReport {
    pub fn row(&self, m: u32) -> Option<&CeilingRow> {
        self.rows.iter().find(|r| r.m == m)
    }

    /// Thresholds at which the directional ceiling fails.
    pub fn directional_violations(&self) -> Vec<u32> {
        self.rows.iter().filter(|r| !r.ceiling_holds()).map(|r| r.m).collect()
    }
}

fn regime_check(s: &CeilingScenario) -> RegimeCheck {
    let (a, b) = (s.group_a, s.group_b);
    let equal_positive_models = a.p_pos == b.p_pos && a.rho == b.rho;
    let ordered_negative_prevalence = a.p_neg < b.p_neg;
    let mut notes = Vec::new();
    if !equal_positive_models {
        notes.push(format!(
            "positive-class models differ (p_pos {} vs {}); sensitivity is group-specific",
            a.p_pos, b.p_pos
        ));
    }
    if !ordered_negative_prevalence {
        notes.push(format!("negative prevalence not ordered (p_neg {} vs {})", a.p_neg, b.p_neg));
    }
    if a.rho > 0.0 {
        notes.push(format!("markers correlated (rho = {}); beta-binomial counts", a.rho));
    }
    RegimeCheck { equal_positive_models, ordered_negative_prevalence, notes }
}

/// Evaluates every threshold `m = 1..=k` for both groups.
pub fn ceiling_sweep(scenario: &CeilingScenario) -> Result<CeilingReport> {
    let (a, b) = (scenario.group_a, scenario.group_b);
    if a.k != b.k {
        return Err(Error::param("k", "both groups must use the same number of markers"));
    }
    let k = a.k;
    let pos_a = count_pmf(k, a.p_pos, a.rho)?;
    let pos_b = count_pmf(k, b.p_pos, b.rho)?;
    let neg_a = count_pmf(k, a.p_neg, a.rho)?;
    let neg_b = count_pmf(k, b.p_neg, b.rho)?;
    let pi = scenario.base_rate;

    let mut rows = Vec::with_capacity(k as usize);
    for m in 1..=k {
        let (s_a, s_b, q_a, q_b) = (pos_a.upper_tail(m), pos_b.upper_tail(m), neg_a.upper_tail(m), neg_b.upper_tail(m));
        let point_a = OperatingPoint::new(s_a, q_a)?;
        let point_b = OperatingPoint::new(s_b, q_b)?;
        let ppv_a = ppv_from_rates(point_a, pi)?;
        let ppv_b = ppv_from_rates(point_b, pi)?;
        rows.push(CeilingRow {
            m,
            s_a,
            s_b,
            q_a,
            q_b,
            lr_a: point_a.likelihood_ratio()?,
            lr_b: point_b.likelihood_ratio()?,
            ppv_a,
            ppv_b,
            nnd_a: nnd_from_ppv(ppv_a).ok(),
            nnd_b: nnd_from_ppv(ppv_b).ok(),
            above_negative_prevalence: f64::from(m) / f64::from(k) > a.p_neg.max(b.p_neg),
        });
    }
    let sup = |f: fn(&CeilingRow) -> LikelihoodRatio| {
        rows.iter().map(f).fold(LikelihoodRatio::Finite(0.0), LikelihoodRatio::max)
    };
    Ok(CeilingReport {
        scenario: *scenario,
        sup_lr_a: sup(|r| r.lr_a),
        sup_lr_b: sup(|r| r.lr_b),
        rows,
        regime: regime_check(scenario),
    })
}

/// Parameters of the two-group correlated-marker illustration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Table2Params {
    pub k: u32,
    pub rho: f64,
    pub p_pos_a: f64,
    pub p_pos_b: f64,
    pub p_neg_a: f64,
    pub p_neg_b: f64,
    pub base_rate: f64,
    /// Threshold is the `m` whose group-A sensitivity is nearest this value.
    pub target_sensitivity: f64,
    /// Fixes `m` instead of deriving it.
    pub threshold: Option<u32>,
}

impl Default for Table2Params {
    fn default() -> Self {
        Table2Params {
            k: 10,
            rho: 0.2,
            p_pos_a: 0.68,
            p_pos_b: 0.68,
            p_neg_a: 0.15,
            p_neg_b: 0.35,
            base_rate: 0.03,
            target_sensitivity: 0.624,
            threshold: None,
        }
    }
}

impl Table2Params {
    pub fn scenario(&self) -> Result<CeilingScenario> {
        Ok(CeilingScenario {
            group_a: GroupFeatureModel::new(self.k, self.p_pos_a, self.p_neg_a, self.rho)?,
            group_b: GroupFeatureModel::new(self.k, self.p_pos_b, self.p_neg_b, self.rho)?,
            base_rate: BaseRate::new(self.base_rate)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table2Result {
    pub params: Table2Params,
    pub selected_m: u32,
    pub selected: CeilingRow,
    pub report: CeilingReport,
}

pub fn table2_scenario(params: &Table2Params) -> Result<Table2Result> {
    let report = ceiling_sweep(&params.scenario()?)?;
    let selected_m = match params.threshold {
        Some(m) => ThresholdRule::Count(m).resolve(params.k)?.min(params.k),
        None => report
            .rows
            .iter()
            .min_by(|x, y| {
                (x.s_a - params.target_sensitivity)
                    .abs()
                    .total_cmp(&(y.s_a - params.target_sensitivity).abs())
            })
            .map(|r| r.m)
            .expect("k >= 1"),
    };
    let selected = *report.row(selected_m).expect("m within 1..=k");
    Ok(Table2Result { params: *params, selected_m, selected, report })
}

/// Baseline illustration against the variant where group B positives carry
/// markers more often.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariantResult {
    pub baseline: Table2Result,
    pub variant: Table2Result,
    pub lr_gap_baseline: f64,
    pub lr_gap_variant: f64,
    pub ppv_gap_baseline: f64,
    pub ppv_gap_variant: f64,
    /// Group B still has strictly lower LR and PPV in the variant.
    pub direction_preserved: bool,
}

pub const VARIANT_P_POS_B: f64 = 0.75;

fn gaps(row: &CeilingRow) -> (f64, f64) {
    let lr = |l: LikelihoodRatio| l.finite().unwrap_or(f64::INFINITY);
    (lr(row.lr_a) / lr(row.lr_b), row.ppv_a / row.ppv_b)
}

pub fn variant_scenario() -> Result<VariantResult> {
    variant_of(&Table2Params::default(), VARIANT_P_POS_B)
}

/// Runs `base` and the same scenario with `p_pos_b` replaced, at the
/// baseline's threshold.
pub fn variant_of(base: &Table2Params, p_pos_b: f64) -> Result<VariantResult> {
    let baseline = table2_scenario(base)?;
    let variant = table2_scenario(&Table2Params { p_pos_b, threshold: Some(baseline.selected_m), ..*base })?;
    let (lr_gap_baseline, ppv_gap_baseline) = gaps(&baseline.selected);
    let (lr_gap_variant, ppv_gap_variant) = gaps(&variant.selected);
    let direction_preserved = lr_gap_variant > 1.0 && ppv_gap_variant > 1.0;
    Ok(VariantResult { baseline, variant, lr_gap_baseline, lr_gap_variant, ppv_gap_baseline, ppv_gap_variant, direction_preserved })
}
