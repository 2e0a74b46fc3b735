//! Reference tables, each regenerated from its input parameters.

use super::document::{Cell, Section};
use super::format;
use crate::bounds::{projection_table, required_lr_table, BaseRate, BenchmarkBand, LikelihoodRatio};
use crate::error::{Error, Result};
use crate::estimation::binormal_operating_point;
use crate::surveillance::{table2_scenario, Table2Params, Table2Result};

/// Likelihood ratios reported for validated pretrial instruments.
pub const INSTRUMENT_LR_BAND: (f64, f64) = (2.0, 6.0);
/// Broward County violent-recidivism base rate and the estimated COMPAS LR.
pub const COMPAS_POINT: (f64, f64) = (0.173, 4.3);

pub const TABLE_IDS: [u8; 6] = [1, 2, 4, 6, 7, 8];

fn rates(values: &[f64]) -> Result<Vec<BaseRate>> {
    values.iter().map(|&v| BaseRate::new(v)).collect()
}

fn lr_cell(lr: LikelihoodRatio) -> Cell {
    match lr.finite() {
        Some(v) => Cell::num(format::lr(v), v),
        None => Cell::text("perfect-specificity"),
    }
}

pub fn table(id: u8) -> Result<Vec<Section>> {
    match id {
        1 => Ok(vec![required_lr_grid()?]),
        2 => Ok(vec![ceiling_table(&table2_scenario(&Table2Params::default())?)]),
        4 => Ok(vec![projected_table(COMPAS_POINT.1, &[COMPAS_POINT.0, 0.05, 0.03, 0.02])?]),
        6 => Ok(vec![nnd_table(4.0, &[0.05, 0.03, 0.02, 0.01])?]),
        7 => Ok(vec![benchmark_table(4.0, &[0.05, 0.03, 0.02])?]),
        8 => Ok(vec![auc_table(0.70, 0.20, &[0.50, 0.10, 0.03])?]),
        _ => Err(Error::param("which", format!("no table {id}; choose from 1, 2, 4, 6, 7, 8"))),
    }
}

/// Required LR over base rates (rows) and PPV targets (columns).
pub fn required_lr_grid() -> Result<Section> {
    let targets = [0.25, 0.50, 0.75, 0.90];
    let grid = required_lr_table(&rates(&[0.10, 0.05, 0.03, 0.02, 0.01])?, &targets)?;
    let headers: Vec<String> =
        std::iter::once("Base rate".to_string()).chain(targets.iter().map(|&t| format::pct(t))).collect();
    let headers: Vec<&str> = headers.iter().map(String::as_str).collect();
    let mut s = Section::table("Required LR for target PPV", &headers);
    for (pi, row) in grid.base_rates.iter().zip(&grid.cells) {
        let mut cells = vec![Cell::num(format::pct_short(pi.value()), pi.value())];
        cells.extend(row.iter().map(|&v| Cell::num(format::lr(v), v)));
        s.push_row(cells);
    }
    let beyond = grid.cells.iter().flatten().filter(|&&v| v > INSTRUMENT_LR_BAND.1).count();
    Ok(s.note(format!(
        "{beyond} of {} cells exceed the LR range of current instruments ({}-{})",
        grid.cells.len() * targets.len(),
        INSTRUMENT_LR_BAND.0,
        INSTRUMENT_LR_BAND.1
    )))
}

/// Two-group ceiling block at the selected threshold.
pub fn ceiling_table(r: &Table2Result) -> Section {
    let row = &r.selected;
    let p = &r.params;
    let mut s = Section::table("Surveillance ceiling", &["Metric", "Group A", "Group B"]);
    let pair = |a: f64, b: f64, f: fn(f64) -> String| vec![Cell::num(f(a), a), Cell::num(f(b), b)];
    let mut push = |name: &str, cells: Vec<Cell>| {
        let mut v = vec![Cell::text(name)];
        v.extend(cells);
        s.push_row(v);
    };
    push("Negative-class prevalence", pair(p.p_neg_a, p.p_neg_b, format::pct));
    push("Positive-class prevalence", pair(p.p_pos_a, p.p_pos_b, format::pct));
    push("False positive rate", pair(row.q_a, row.q_b, format::pct1));
    push("Sensitivity", pair(row.s_a, row.s_b, format::pct1));
    push("Likelihood ratio", vec![lr_cell(row.lr_a), lr_cell(row.lr_b)]);
    push(&format!("Projected PPV (base rate {})", format::pct_short(p.base_rate)), pair(row.ppv_a, row.ppv_b, format::pct));
    let nnd = |v: Option<f64>| v.map_or(Cell::text("inf"), |n| Cell::num(format::nnd(Some(n)), n));
    push("NND", vec![nnd(row.nnd_a), nnd(row.nnd_b)]);

    let mut s = s.note(format!(
        "k = {}, rho = {}, threshold m = {} markers (group-A sensitivity nearest {})",
        p.k,
        p.rho,
        r.selected_m,
        format::pct1(p.target_sensitivity)
    ));
    let violations = r.report.directional_violations();
    s = s.note(if violations.is_empty() {
        format!("directional ceiling holds at every threshold m = 1..={}", p.k)
    } else {
        format!("directional ceiling fails at m = {violations:?}")
    });
    for n in &r.report.regime.notes {
        s = s.note(n.clone());
    }
    s
}

/// Every threshold of a ceiling sweep.
pub fn sweep_table(r: &Table2Result) -> Section {
    let mut s = Section::table(
        "Threshold sweep",
        &["m", "s_A", "s_B", "q_A", "q_B", "LR_A", "LR_B", "PPV_A", "PPV_B", "NND_A", "NND_B", "ceiling"],
    );
    for row in &r.report.rows {
        let nnd = |v: Option<f64>| v.map_or(Cell::text("inf"), |n| Cell::num(format::nnd(Some(n)), n));
        s.push_row(vec![
            Cell::num(row.m.to_string(), f64::from(row.m)),
            Cell::num(format::pct1(row.s_a), row.s_a),
            Cell::num(format::pct1(row.s_b), row.s_b),
            Cell::num(format::pct1(row.q_a), row.q_a),
            Cell::num(format::pct1(row.q_b), row.q_b),
            lr_cell(row.lr_a),
            lr_cell(row.lr_b),
            Cell::num(format::pct(row.ppv_a), row.ppv_a),
            Cell::num(format::pct(row.ppv_b), row.ppv_b),
            nnd(row.nnd_a),
            nnd(row.nnd_b),
            Cell::text(if row.ceiling_holds() { "holds" } else { "fails" }),
        ]);
    }
    s
}

/// PPV and NND of one LR projected to several base rates.
pub fn projected_table(lr: f64, base_rates: &[f64]) -> Result<Section> {
    let mut s = Section::table(format!("Projected PPV and NND at LR {}", format::trim(lr, 2)), &["Base rate", "Projected PPV", "NND"]);
    for p in projection_table(lr, &rates(base_rates)?)? {
        let pi = p.base_rate.value();
        s.push_row(vec![
            Cell::num(format::pct_short(pi), pi),
            Cell::num(format::pct(p.ppv), p.ppv),
            p.nnd().map_or(Cell::text("inf"), |n| Cell::num(format::nnd(Some(n)), n)),
        ]);
    }
    Ok(s.note("NND = 1/PPV, from the unrounded PPV"))
}

pub fn nnd_table(lr: f64, base_rates: &[f64]) -> Result<Section> {
    let mut s = Section::table(format!("NND at LR {}", format::trim(lr, 2)), &["Base rate", "LR", "PPV", "NND"]);
    for p in projection_table(lr, &rates(base_rates)?)? {
        let pi = p.base_rate.value();
        s.push_row(vec![
            Cell::num(format::pct_short(pi), pi),
            Cell::num(format::trim(lr, 2), lr),
            Cell::num(format::pct(p.ppv), p.ppv),
            p.nnd().map_or(Cell::text("inf"), |n| Cell::num(format::nnd(Some(n)), n)),
        ]);
    }
    Ok(s.note("NND = 1/PPV, from the unrounded PPV"))
}

/// Evidentiary bands next to the PPV a given LR achieves.
pub fn benchmark_table(lr: f64, base_rates: &[f64]) -> Result<Section> {
    let mut s = Section::table("Evidentiary benchmarks and achieved PPV", &["Standard", "Probability"]);
    for band in BenchmarkBand::ALL.into_iter().rev().filter(|b| b.lower_bound() > 0.0) {
        let b = band.lower_bound();
        s.push_row(vec![Cell::text(band.label()), Cell::num(format!("> {}", format::pct(b)), b)]);
    }
    for p in projection_table(lr, &rates(base_rates)?)? {
        s.push_row(vec![
            Cell::text(format!("Achieved: base rate {}, LR {}", format::pct_short(p.base_rate.value()), format::trim(lr, 2))),
            Cell::num(format::pct(p.ppv), p.ppv),
        ]);
    }
    Ok(s.note("benchmarks are analogies for evidentiary confidence, not legal requirements"))
}

/// PPV of one AUC at several base rates under the equal-variance binormal
/// model, flagging a fixed fraction of the population.
pub fn auc_table(auc: f64, flag_fraction: f64, base_rates: &[f64]) -> Result<Section> {
    let mut s = Section::table(
        format!("Same AUC, different base rates (AUC {})", format::trim(auc, 3)),
        &["AUC", "Base rate", "Sensitivity", "FPR", "LR", "PPV"],
    );
    for pi in rates(base_rates)? {
        let b = binormal_operating_point(auc, flag_fraction, pi)?;
        let (sens, fpr) = (b.point.sensitivity, b.point.fpr);
        s.push_row(vec![
            Cell::num(format::trim(auc, 3), auc),
            Cell::num(format::pct_short(pi.value()), pi.value()),
            Cell::num(format::pct1(sens), sens),
            Cell::num(format::pct1(fpr), fpr),
            lr_cell(b.summary.lr),
            Cell::num(format::pct(b.summary.ppv), b.summary.ppv),
        ]);
    }
    Ok(s.note(format!(
        "equal-variance binormal scores, d' = sqrt(2) * inverse_normal_cdf(AUC); cutoff flags {} of the population",
        format::pct(flag_fraction)
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn column(s: &Section, j: usize) -> Vec<String> {
        s.rows().iter().map(|r| r[j].display.clone()).collect()
    }

    #[test]
    fn required_grid_shape_and_anchor() {
        let s = required_lr_grid().unwrap();
        assert_eq!(s.rows().len(), 5);
        assert_eq!(s.lookup("1%", "50%").unwrap().display, "99");
        assert_eq!(s.lookup("10%", "25%").unwrap().display, "3.0");
    }

    #[test]
    fn every_table_renders() {
        for id in TABLE_IDS {
            assert!(!table(id).unwrap().is_empty());
        }
        assert_eq!(table(3).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn nnd_rows_match_reciprocal() {
        let s = nnd_table(4.0, &[0.05, 0.03]).unwrap();
        for r in s.rows() {
            let (ppv, nnd) = (r[2].value.unwrap(), r[3].value.unwrap());
            assert!((ppv * nnd - 1.0).abs() < 1e-12);
        }
        assert_eq!(column(&s, 2), ["17%", "11%"]);
    }

    #[test]
    fn benchmarks_descend() {
        let s = benchmark_table(4.0, &[0.05]).unwrap();
        assert_eq!(column(&s, 1), ["> 95%", "> 75%", "> 50%", "17%"]);
    }
}
