use super::document::{Cell, Section};
use super::format;
use super::tables::{COMPAS_POINT, INSTRUMENT_LR_BAND};
use crate::bounds::{wall_curve, BaseRate};
use crate::error::{Error, Result};

/// Base rates always present in the grid when inside the range.
const ANCHORS: [f64; 1] = [0.01];

/// Log-spaced base rates from `lo` to `hi` inclusive, plus the anchors.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && lo < hi && hi < 1.0) {
        return Err(Error::param("base-rate range", format!("need 0 < min < max < 1, got [{lo}, {hi}]")));
    }
    if points < 2 {
        return Err(Error::param("points", format!("need at least 2, got {points}")));
    }
    let (a, b) = (lo.ln(), hi.ln());
    let step = (b - a) / (points - 1) as f64;
    let anchors: Vec<f64> = ANCHORS.iter().copied().filter(|x| (lo..=hi).contains(x)).collect();
    let mut grid: Vec<f64> = (0..points)
        .map(|i| match i {
            0 => lo,
            i if i == points - 1 => hi,
            // Twelve significant digits keep the printed grid free of float noise.
            i => format!("{:.11e}", (a + step * i as f64).exp()).parse().expect("formatted float"),
        })
        .filter(|x| anchors.iter().all(|y| (x - y).abs() > 1e-9 * y))
        .collect();
    grid.extend(anchors);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    Ok(grid)
}

/// Iso-PPV curves of required LR against base rate, followed by annotation
/// rows for the instrument LR band and the COMPAS estimate.
pub fn wall_figure_data(alphas: &[f64], lo: f64, hi: f64, points: usize) -> Result<Section> {
    if alphas.is_empty() {
        return Err(Error::param("alpha", "need at least one PPV target"));
    }
    let grid: Vec<BaseRate> = log_grid(lo, hi, points)?.into_iter().map(BaseRate::new).collect::<Result<_>>()?;
    let mut s = Section::table("Likelihood ratio wall", &["kind", "label", "alpha", "base_rate", "lr"]);
    for &alpha in alphas {
        for (pi, lr) in wall_curve(alpha, &grid)? {
            s.push_row(vec![
                Cell::text("curve"),
                Cell::text(format!("ppv-{}", format::pct_short(alpha))),
                Cell::num(format::exact(alpha), alpha),
                Cell::num(format::exact(pi), pi),
                Cell::num(format::trim(lr, 6), lr),
            ]);
        }
    }
    let (band_lo, band_hi) = INSTRUMENT_LR_BAND;
    for (label, lr) in [("instrument-band-lower", band_lo), ("instrument-band-upper", band_hi)] {
        s.push_row(vec![Cell::text("band"), Cell::text(label), Cell::text(""), Cell::text(""), Cell::num(format::exact(lr), lr)]);
    }
    let (pi, lr) = COMPAS_POINT;
    s.push_row(vec![
        Cell::text("point"),
        Cell::text("compas"),
        Cell::text(""),
        Cell::num(format::exact(pi), pi),
        Cell::num(format::exact(lr), lr),
    ]);
    Ok(s)
}
