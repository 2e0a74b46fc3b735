use std::collections::BTreeSet;

use serde::Serialize;

use super::config::{
    resolve_seed, AuditArgs, BoundArgs, DataSettings, FigureArgs, LabelArgs, LabelPreset, RecalArgs, RecalMethod,
    Scenario, SimulateArgs, TablesArgs,
};
use super::document::{Cell, Provenance, ReportDocument, Section};
use super::figure::wall_figure_data;
use super::format;
use super::label::render_uncertainty_label;
use super::loader::{load_records, LoadedRecords, ScoreKind};
use super::tables::{self, ceiling_table, sweep_table, TABLE_IDS};
use crate::bounds::{exact, nnd_from_ppv, required_lr, BaseRate, PrecisionSummary};
use crate::error::{Error, Result};
use crate::estimation::{
    auc_rank_estimate, confusion_at_cutoff, group_amplification, lr_bootstrap, lr_with_ci, operating_point_with_ci,
    projected_ppv, CutoffSpec, IntervalEstimate,
};
use crate::recalibration::{
    fit_isotonic, fit_platt, flat_region_report, lr_invariance_check, MismatchCause, MonotoneTransform, PlattOptions,
};
use crate::surveillance::{fpr_ratio_slope, table2_scenario, variant_of, Table2Params, VARIANT_P_POS_B};

fn pct_cell(p: f64) -> Cell {
    Cell::num(format::pct1(p), p)
}

fn pair(name: &str, value: Cell) -> Vec<Cell> {
    vec![Cell::text(name), value]
}

fn base_rate(name: &'static str, v: Option<f64>) -> Result<BaseRate> {
    BaseRate::new(v.ok_or_else(|| Error::param(name, "required"))?)
}

pub fn cmd_bound(args: &BoundArgs) -> Result<ReportDocument> {
    let pi = base_rate("base-rate", args.base_rate)?;
    let mut doc = ReportDocument::new(Provenance::new(args));
    let mut s = Section::table("Precision bound", &["Metric", "Value"]).row(pair("Base rate", Cell::num(format::pct_short(pi.value()), pi.value())));
    match (args.ppv, args.lr) {
        (Some(alpha), None) => {
            let lr = required_lr(alpha, pi)?;
            s.push_row(pair("Target PPV", Cell::num(format::pct_short(alpha), alpha)));
            s.push_row(pair("Required LR", Cell::num(format::lr(lr), lr)));
            let ratio = |v: f64| exact::Rational::approximate_float(v).ok_or_else(|| Error::param("ppv", "not representable"));
            if let Ok(q) = exact::required_lr(ratio(alpha)?, ratio(pi.value())?) {
                s.push_row(pair("Required LR (exact)", Cell::text(q.to_string())));
            }
            let nnd = nnd_from_ppv(alpha)?;
            s.push_row(pair("NND at target", Cell::num(format::nnd(Some(nnd)), nnd)));
            s.push_row(pair("Benchmark band at target", Cell::text(crate::bounds::benchmark_compare(alpha).name())));
        }
        (None, Some(lr)) => {
            let summary = PrecisionSummary::from_lr(lr, pi)?;
            s.push_row(pair("LR", Cell::num(format::trim(lr, 3), lr)));
            s.push_row(pair("PPV", Cell::num(format::pct(summary.ppv), summary.ppv)));
            s.push_row(pair("NND", summary.nnd().map_or(Cell::text("inf"), |n| Cell::num(format::nnd(Some(n)), n))));
            s.push_row(pair("Benchmark band", Cell::text(summary.band().name())));
        }
        _ => return Err(Error::param("ppv/lr", "give exactly one of --ppv and --lr")),
    }
    doc.push(s);
    Ok(doc)
}

pub fn cmd_tables(args: &TablesArgs) -> Result<ReportDocument> {
    let which: Vec<u8> = match &args.which {
        Some(w) if !w.is_empty() => w.iter().copied().collect::<BTreeSet<_>>().into_iter().collect(),
        _ => TABLE_IDS.to_vec(),
    };
    let mut doc = ReportDocument::new(Provenance::new(&TablesArgs { which: Some(which.clone()) }));
    for id in which {
        for s in tables::table(id)? {
            doc.push(s);
        }
    }
    Ok(doc)
}

fn load_verified(data: &DataSettings) -> Result<LoadedRecords> {
    let loaded = load_records(&data.input, &data.schema)?;
    if let Some(expected) = &data.digest {
        if *expected != loaded.digest {
            return Err(Error::DigestMismatch { path: data.input.clone(), expected: expected.clone(), found: loaded.digest });
        }
    }
    Ok(loaded)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditSettings {
    pub cutoff: CutoffSpec,
    pub base_rates: Vec<f64>,
    pub level: f64,
    pub bootstrap: usize,
    pub seed: Option<u64>,
    pub reference_group: Option<String>,
}

pub const DEFAULT_PROJECTION_RATES: [f64; 3] = [0.05, 0.03, 0.02];

impl AuditSettings {
    pub fn resolve(data: &DataSettings, args: &AuditArgs) -> Result<Self> {
        let cutoff = match (args.threshold, args.decile, &data.schema.flag) {
            (Some(t), _, _) => CutoffSpec::ScoreAtLeast(t),
            (None, Some(d), _) => CutoffSpec::DecileAtLeast(d),
            (None, None, Some(flag)) => CutoffSpec::FlagColumn(flag.to_string()),
            (None, None, None) if data.schema.score_kind == ScoreKind::Decile => {
                CutoffSpec::DecileAtLeast(CutoffSpec::DEFAULT_DECILE)
            }
            _ => return Err(Error::param("cutoff", "give --threshold, --decile or a --flag column")),
        };
        let bootstrap = args.bootstrap.unwrap_or(0);
        Ok(AuditSettings {
            cutoff,
            base_rates: args.base_rates.clone().unwrap_or_else(|| DEFAULT_PROJECTION_RATES.to_vec()),
            level: args.level.unwrap_or(0.95),
            bootstrap,
            seed: if bootstrap > 0 { Some(resolve_seed(args.seed)?) } else { None },
            reference_group: args.reference_group.clone(),
        })
    }
}

fn interval_row(name: &str, e: &IntervalEstimate, fmt: fn(f64) -> String) -> Vec<Cell> {
    vec![
        Cell::text(name),
        Cell::num(fmt(e.point), e.point),
        Cell::num(fmt(e.lower), e.lower),
        Cell::num(fmt(e.upper), e.upper),
        Cell::text(e.method.name()),
    ]
}

pub fn cmd_audit(data: &DataSettings, args: &AuditArgs) -> Result<ReportDocument> {
    #[derive(Serialize)]
    struct Echo<'a> {
        data: &'a DataSettings,
        audit: &'a AuditSettings,
    }
    let settings = AuditSettings::resolve(data, args)?;
    let loaded = load_verified(data)?;
    let records = &loaded.records;
    let counts = confusion_at_cutoff(records, &settings.cutoff)?;
    let level = settings.level;

    let mut provenance = Provenance::new(&Echo { data, audit: &settings });
    provenance.input_digest = Some(loaded.digest.clone());
    provenance.seed = settings.seed;
    let mut doc = ReportDocument::new(provenance);

    let in_sample = counts.base_rate()?;
    let mut s = Section::table("Records", &["Metric", "Value"])
        .row(pair("Records", Cell::num(records.len().to_string(), records.len() as f64)))
        .row(pair("Positives", Cell::num(counts.positives().to_string(), counts.positives() as f64)))
        .row(pair("Negatives", Cell::num(counts.negatives().to_string(), counts.negatives() as f64)))
        .row(pair("Flagged", Cell::num(counts.flagged().to_string(), counts.flagged() as f64)))
        .row(pair("Base rate", pct_cell(in_sample.value())))
        .row(pair("Cutoff", Cell::text(settings.cutoff.describe())))
        .row(pair("Confusion (TP/FP/TN/FN)", Cell::text(format!("{}/{}/{}/{}", counts.tp, counts.fp, counts.tn, counts.fn_))));
    if let Ok(auc) = auc_rank_estimate(records) {
        s.push_row(pair("AUC (rank)", Cell::num(format::fixed(auc, 3), auc)));
    }
    doc.push(s);

    let point = operating_point_with_ci(&counts, level)?;
    let mut op = Section::table(
        format!("Operating point ({} intervals)", format::pct_short(level)),
        &["Metric", "Estimate", "Lower", "Upper", "Method"],
    )
    .row(interval_row("Sensitivity", &point.sensitivity, format::pct1))
    .row(interval_row("False positive rate", &point.fpr, format::pct1));
    let lr_est = match lr_with_ci(&counts, level) {
        Ok(e) => {
            op.push_row(interval_row("Likelihood ratio", &e, format::lr));
            Some(e)
        }
        Err(e @ (Error::ZeroCells { .. } | Error::PerfectSpecificity | Error::ZeroDenominator { .. })) => {
            op = op.note(format!("no analytic LR interval: {e}"));
            None
        }
        Err(e) => return Err(e),
    };
    if let Some(seed) = settings.seed {
        let b = lr_bootstrap(&counts, level, settings.bootstrap, seed)?;
        op.push_row(interval_row("Likelihood ratio", &b, format::lr));
        op = op.note(format!("bootstrap: {} replicates, seed {seed}", settings.bootstrap));
    }
    if let Some(e) = &lr_est {
        op.push_row(interval_row(&format!("PPV at base rate {}", format::pct1(in_sample.value())), &projected_ppv(e, in_sample)?, format::pct));
    }
    if let Some(ppv) = counts.ppv() {
        op.push_row(vec![Cell::text("PPV, counted"), Cell::num(format::pct(ppv), ppv), Cell::text(""), Cell::text(""), Cell::text("TP/(TP+FP)")]);
    }
    doc.push(op);

    if let Some(e) = &lr_est {
        let mut proj = Section::table("Projected PPV and NND", &["Base rate", "PPV", "Lower", "Upper", "NND"]);
        for &v in &settings.base_rates {
            let pi = BaseRate::new(v)?;
            let p = projected_ppv(e, pi)?;
            let nnd = nnd_from_ppv(p.point).ok();
            proj.push_row(vec![
                Cell::num(format::pct_short(v), v),
                Cell::num(format::pct(p.point), p.point),
                Cell::num(format::pct(p.lower), p.lower),
                Cell::num(format::pct(p.upper), p.upper),
                nnd.map_or(Cell::text("inf"), |n| Cell::num(format::nnd(Some(n)), n)),
            ]);
        }
        doc.push(proj.note(format!("LR {} projected; interval endpoints mapped through the PPV formula", format::lr(e.point))));
    }

    if data.schema.group_column.is_some() && !data.schema.factors.is_empty() {
        let reference = match &settings.reference_group {
            Some(g) => g.clone(),
            None => records.iter().filter_map(|r| r.group.clone()).min().ok_or(Error::EmptyRecords)?,
        };
        let amp = group_amplification(records, &settings.cutoff, &reference)?;
        let ratio = |v: Option<f64>| v.map_or(Cell::text("-"), |r| Cell::num(format!("{}x", format::fixed(r, 1)), r));
        let mut g = Section::table(
            "FPR amplification by group",
            &["Group", "Members", "Negatives", "Mean factors", "FPR", "Factor ratio", "FPR ratio", "Superlinear"],
        );
        for r in &amp.rows {
            g.push_row(vec![
                Cell::text(&r.group),
                Cell::num(r.members.to_string(), r.members as f64),
                Cell::num(r.negatives.to_string(), r.negatives as f64),
                Cell::num(format::fixed(r.mean_factors, 2), r.mean_factors),
                pct_cell(r.fpr),
                ratio(r.factor_ratio),
                ratio(r.fpr_ratio),
                Cell::text(if r.superlinear { "yes" } else { "no" }),
            ]);
        }
        let factors: Vec<String> = data.schema.factors.iter().map(|f| f.to_string()).collect();
        doc.push(g.note(format!("reference group `{reference}`; factors: {}", factors.join(", "))));
    }
    Ok(doc)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct SimulateSettings {
    scenario: Scenario,
    #[serde(skip_serializing_if = "Option::is_none")]
    params: Option<Table2Params>,
    #[serde(skip_serializing_if = "Option::is_none")]
    variant_p_pos_b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    slope: Option<(f64, f64, f64, Vec<u32>)>,
}

pub const DEFAULT_SLOPE_KS: [u32; 4] = [50, 100, 200, 400];

fn table2_params(args: &SimulateArgs) -> Table2Params {
    let d = Table2Params::default();
    Table2Params {
        k: args.k.unwrap_or(d.k),
        rho: args.rho.unwrap_or(d.rho),
        p_pos_a: args.p_pos_a.unwrap_or(d.p_pos_a),
        p_pos_b: args.p_pos_b.unwrap_or(args.p_pos_a.unwrap_or(d.p_pos_b)),
        p_neg_a: args.p_neg_a.unwrap_or(d.p_neg_a),
        p_neg_b: args.p_neg_b.unwrap_or(d.p_neg_b),
        base_rate: args.base_rate.unwrap_or(d.base_rate),
        target_sensitivity: args.target_sensitivity.unwrap_or(d.target_sensitivity),
        threshold: args.m,
    }
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<ReportDocument> {
    let scenario = args.scenario.unwrap_or(Scenario::Table2);
    let mut settings = SimulateSettings { scenario, params: None, variant_p_pos_b: None, slope: None };
    let mut sections = Vec::new();
    match scenario {
        Scenario::Table2 | Scenario::Sweep => {
            let params = table2_params(args);
            let r = table2_scenario(&params)?;
            if scenario == Scenario::Table2 {
                sections.push(ceiling_table(&r));
            }
            sections.push(sweep_table(&r));
            settings.params = Some(params);
        }
        Scenario::Variant => {
            let base = Table2Params { p_pos_b: args.p_pos_a.unwrap_or(Table2Params::default().p_pos_a), ..table2_params(args) };
            let p_pos_b = args.p_pos_b.unwrap_or(VARIANT_P_POS_B);
            let v = variant_of(&base, p_pos_b)?;
            let mut s = Section::table("Variant: positive-class prevalence in group B", &["Metric", "Baseline", "Variant"]);
            let (b, w) = (&v.baseline.selected, &v.variant.selected);
            let lr = |l: crate::bounds::LikelihoodRatio| l.finite().unwrap_or(f64::INFINITY);
            let rows: [(&str, f64, f64, fn(f64) -> String); 9] = [
                ("Positive-class prevalence B", base.p_pos_b, p_pos_b, format::pct),
                ("Sensitivity B", b.s_b, w.s_b, format::pct1),
                ("False positive rate B", b.q_b, w.q_b, format::pct1),
                ("LR A", lr(b.lr_a), lr(w.lr_a), format::lr),
                ("LR B", lr(b.lr_b), lr(w.lr_b), format::lr),
                ("LR gap (A/B)", v.lr_gap_baseline, v.lr_gap_variant, |x| format!("{}x", format::fixed(x, 1))),
                ("PPV A", b.ppv_a, w.ppv_a, format::pct),
                ("PPV B", b.ppv_b, w.ppv_b, format::pct),
                ("PPV gap (A/B)", v.ppv_gap_baseline, v.ppv_gap_variant, |x| format!("{}x", format::fixed(x, 1))),
            ];
            for (name, x, y, f) in rows {
                s.push_row(vec![Cell::text(name), Cell::num(f(x), x), Cell::num(f(y), y)]);
            }
            s = s.note(format!("threshold m = {} from the baseline", v.baseline.selected_m)).note(if v.direction_preserved {
                "directional ceiling preserved: group B keeps strictly lower LR and PPV"
            } else {
                "directional ceiling reversed in the variant"
            });
            sections.push(s);
            settings.params = Some(base);
            settings.variant_p_pos_b = Some(p_pos_b);
        }
        Scenario::Ldp => {
            let (pa, pb, theta) = (args.pa.unwrap_or(0.15), args.pb.unwrap_or(0.35), args.theta.unwrap_or(0.5));
            let ks = args.k_list.clone().unwrap_or_else(|| DEFAULT_SLOPE_KS.to_vec());
            let r = fpr_ratio_slope(pa, pb, theta, &ks)?;
            let mut s = Section::table("FPR ratio growth rate", &["k", "m", "slope", "limit", "relative deviation"]);
            for p in &r.points {
                let dev = ((p.slope - r.limit) / r.limit).abs();
                s.push_row(vec![
                    Cell::num(p.k.to_string(), f64::from(p.k)),
                    Cell::num(p.m.to_string(), f64::from(p.m)),
                    Cell::num(format::fixed(p.slope, 6), p.slope),
                    Cell::num(format::fixed(r.limit, 6), r.limit),
                    Cell::num(format::pct1(dev), dev),
                ]);
            }
            s = s.note(format!("limit = kl_rate({theta}, {pa}) - kl_rate({theta}, {pb})")).note(if r.monotone_approach {
                "deviation shrinks at every step"
            } else {
                "deviation does not shrink monotonically"
            });
            if let Some(w) = &r.regime_warning {
                s = s.note(w.clone());
            }
            sections.push(s);
            settings.slope = Some((pa, pb, theta, ks));
        }
    }
    let mut doc = ReportDocument::new(Provenance::new(&settings));
    for s in sections {
        doc.push(s);
    }
    Ok(doc)
}

pub fn cmd_recal_check(data: &DataSettings, args: &RecalArgs) -> Result<ReportDocument> {
    #[derive(Serialize)]
    struct Echo<'a> {
        data: &'a DataSettings,
        method: RecalMethod,
        expr: Option<&'a str>,
        smoothing: bool,
    }
    let method = args.method.unwrap_or(RecalMethod::Platt);
    let smoothing = args.smoothing.unwrap_or(true);
    let loaded = load_verified(data)?;
    let records = &loaded.records;
    let scores: Vec<f64> = records.iter().map(|r| r.score).collect();
    let outcomes: Vec<bool> = records.iter().map(|r| r.outcome).collect();
    let mut cutoffs = scores.clone();
    cutoffs.sort_by(f64::total_cmp);
    cutoffs.dedup();

    let mut fit_section = Section::table("Fitted map", &["Parameter", "Value"]);
    let transform = match method {
        RecalMethod::Platt => {
            let fit = fit_platt(&scores, &outcomes, &PlattOptions { label_smoothing: smoothing, ..PlattOptions::default() })?;
            fit_section.push_row(pair("Slope", Cell::num(format::fixed(fit.slope, 6), fit.slope)));
            fit_section.push_row(pair("Intercept", Cell::num(format::fixed(fit.intercept, 6), fit.intercept)));
            fit_section.push_row(pair("Iterations", Cell::num(fit.iterations.to_string(), fit.iterations as f64)));
            fit_section.push_row(pair("Status", Cell::text(format!("{:?}", fit.status).to_lowercase())));
            MonotoneTransform::platt(&fit)
        }
        RecalMethod::Isotonic => {
            let fit = fit_isotonic(&scores, &outcomes)?;
            fit_section.push_row(pair("Breakpoints", Cell::num(fit.breakpoints.len().to_string(), fit.breakpoints.len() as f64)));
            let distinct: BTreeSet<u64> = fit.levels.iter().map(|l| l.to_bits()).collect();
            fit_section.push_row(pair("Distinct levels", Cell::num(distinct.len().to_string(), distinct.len() as f64)));
            MonotoneTransform::Step(fit)
        }
        RecalMethod::Expr => {
            let src = args.expr.as_deref().ok_or_else(|| Error::param("expr", "--method expr needs --expr"))?;
            let t = MonotoneTransform::expression(src)?;
            t.verify_strictly_increasing(&cutoffs)?;
            fit_section.push_row(pair("Expression", Cell::text(src)));
            t
        }
    };

    let report = lr_invariance_check(records, &transform, &cutoffs)?;
    let mut provenance = Provenance::new(&Echo { data, method, expr: args.expr.as_deref(), smoothing });
    provenance.input_digest = Some(loaded.digest.clone());
    let mut doc = ReportDocument::new(provenance);
    doc.push(fit_section.note(report.transform.clone()));

    let mismatches = report.mismatches();
    let mut summary = Section::table("Threshold invariance", &["Metric", "Value"])
        .row(pair("Cutoffs checked", Cell::num(report.rows.len().to_string(), report.rows.len() as f64)))
        .row(pair("Mismatches", Cell::num(mismatches.to_string(), mismatches as f64)));
    summary = summary.note(if transform.is_strict() {
        "strictly increasing map: every cutoff keeps its confusion counts"
    } else {
        "step map: cutoffs inside pooled blocks may change counts"
    });
    doc.push(summary);

    if mismatches > 0 {
        let mut m = Section::table("Mismatched cutoffs", &["Cutoff", "Mapped", "TP/FP before", "TP/FP after", "Cause"]);
        for row in report.rows.iter().filter(|r| !r.exact_match) {
            let cause = match row.cause {
                Some(MismatchCause::FlatRegion { lower, upper }) => format!("flat region ({lower}, {upper}]"),
                Some(MismatchCause::BetweenBreakpoints { lower, upper }) => format!("between breakpoints {lower} and {upper}"),
                Some(MismatchCause::NumericTie) => "numeric tie".to_string(),
                None => String::new(),
            };
            m.push_row(vec![
                Cell::num(format::exact(row.cutoff), row.cutoff),
                Cell::num(format::exact(row.mapped_cutoff), row.mapped_cutoff),
                Cell::text(format!("{}/{}", row.before.counts.tp, row.before.counts.fp)),
                Cell::text(format!("{}/{}", row.after.counts.tp, row.after.counts.fp)),
                Cell::text(cause),
            ]);
        }
        doc.push(m);
    }
    if let MonotoneTransform::Step(fit) = &transform {
        let regions = flat_region_report(fit);
        let mut f = Section::table("Flat regions", &["Lower", "Upper", "Level"]);
        for r in &regions {
            f.push_row(vec![
                Cell::num(format::exact(r.lower), r.lower),
                Cell::num(format::exact(r.upper), r.upper),
                Cell::num(format::fixed(r.level, 6), r.level),
            ]);
        }
        doc.push(f.note("cutoffs in (lower, upper] merge scores that the original scale separates"));
    }
    Ok(doc)
}

pub fn cmd_label(args: &LabelArgs) -> Result<ReportDocument> {
    let preset = args.preset.map(|p| match p {
        LabelPreset::CurrentInstrument => (4.0, 0.03),
    });
    let lr = args.lr.or(preset.map(|p| p.0)).ok_or_else(|| Error::param("lr", "give --lr or --preset"))?;
    let pi = base_rate("base-rate", args.base_rate.or(preset.map(|p| p.1)))?;
    let label = render_uncertainty_label(lr, pi)?;
    let mut doc = ReportDocument::new(Provenance::new(&LabelArgs { lr: Some(lr), base_rate: Some(pi.value()), preset: args.preset }));
    doc.push(Section::text("Uncertainty label", label.lines.clone()));
    doc.push(
        Section::table("Label values", &["Metric", "Value"])
            .row(pair("PPV", Cell::num(format::pct(label.ppv), label.ppv)))
            .row(pair("1 in N", Cell::text(label.one_in.clone())))
            .row(pair("Detained per prevented offense", Cell::text(label.detained.clone())))
            .row(pair("Benchmark band", Cell::text(label.band.name()))),
    );
    Ok(doc)
}

pub const DEFAULT_FIGURE_ALPHAS: [f64; 4] = [0.25, 0.5, 0.75, 0.9];

pub fn cmd_figure_data(args: &FigureArgs) -> Result<ReportDocument> {
    let effective = FigureArgs {
        alphas: Some(args.alphas.clone().unwrap_or_else(|| DEFAULT_FIGURE_ALPHAS.to_vec())),
        pi_min: Some(args.pi_min.unwrap_or(0.005)),
        pi_max: Some(args.pi_max.unwrap_or(0.5)),
        points: Some(args.points.unwrap_or(60)),
    };
    let s = wall_figure_data(
        effective.alphas.as_deref().unwrap(),
        effective.pi_min.unwrap(),
        effective.pi_max.unwrap(),
        effective.points.unwrap(),
    )?;
    let mut doc = ReportDocument::new(Provenance::new(&effective));
    doc.push(s);
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn value(doc: &ReportDocument, section: &str, key: &str) -> String {
        doc.section(section).unwrap().lookup(key, "Value").unwrap().display.clone()
    }

    #[test]
    fn bound_examples() {
        let d = cmd_bound(&BoundArgs { ppv: Some(0.5), base_rate: Some(0.01), lr: None }).unwrap();
        assert_eq!(value(&d, "Precision bound", "Required LR"), "99");
        assert_eq!(value(&d, "Precision bound", "Required LR (exact)"), "99");
        let d = cmd_bound(&BoundArgs { lr: Some(4.0), base_rate: Some(0.03), ppv: None }).unwrap();
        assert_eq!(value(&d, "Precision bound", "PPV"), "11%");
        assert_eq!(value(&d, "Precision bound", "Benchmark band"), "below-preponderance");
        let d = cmd_bound(&BoundArgs { lr: Some(1.0), base_rate: Some(0.3), ppv: None }).unwrap();
        assert_eq!(value(&d, "Precision bound", "PPV"), "30%");
    }

    #[test]
    fn bound_needs_exactly_one_input() {
        for args in [
            BoundArgs { lr: Some(4.0), ppv: Some(0.5), base_rate: Some(0.1) },
            BoundArgs { lr: None, ppv: None, base_rate: Some(0.1) },
            BoundArgs { lr: Some(4.0), ppv: None, base_rate: None },
        ] {
            assert_eq!(cmd_bound(&args).unwrap_err().exit_code(), 2);
        }
    }

    #[test]
    fn label_preset_and_override() {
        let d = cmd_label(&LabelArgs { preset: Some(LabelPreset::CurrentInstrument), ..Default::default() }).unwrap();
        assert_eq!(value(&d, "Label values", "1 in N"), "9");
        let d = cmd_label(&LabelArgs { preset: Some(LabelPreset::CurrentInstrument), base_rate: Some(0.5), lr: Some(1.0) }).unwrap();
        assert_eq!(value(&d, "Label values", "1 in N"), "2");
        assert!(cmd_label(&LabelArgs::default()).is_err());
    }

    #[test]
    fn ldp_scenario_reports_limit() {
        let d = cmd_simulate(&SimulateArgs { scenario: Some(Scenario::Ldp), ..Default::default() }).unwrap();
        let s = d.section("FPR ratio growth rate").unwrap();
        assert_eq!(s.rows().len(), 4);
        assert!((s.rows()[0][3].value.unwrap() - 0.2895).abs() < 1e-4);
    }

    #[test]
    fn tables_dedup_and_order() {
        let d = cmd_tables(&TablesArgs { which: Some(vec![7, 1, 7]) }).unwrap();
        assert_eq!(d.sections.len(), 2);
        assert_eq!(d.provenance.config["which"], serde_json::json!([1, 7]));
    }
}
