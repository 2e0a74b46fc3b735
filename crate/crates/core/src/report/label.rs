use serde::Serialize;

use super::format;
use crate::bounds::{benchmark_compare, ppv_from_lr, BaseRate, BenchmarkBand};
use crate::error::{Error, Result};

/// Plain-language statement of how often a high-risk flag is right.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UncertaintyLabel {
    pub lr: f64,
    pub base_rate: f64,
    pub ppv: f64,
    /// PPV as the integer percent shown in the text.
    pub ppv_percent: u32,
    /// The `N` of "1 in N".
    pub one_in: String,
    /// Flagged people detained per prevented offense, as shown.
    pub detained: String,
    pub band: BenchmarkBand,
    pub lines: Vec<String>,
}

impl UncertaintyLabel {
    pub fn text(&self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }
}

fn benchmark_sentence(ppv: f64, shown: &str) -> String {
    let quoted = |b: BenchmarkBand| match b {
        BenchmarkBand::Preponderance => "a \"more likely than not\" benchmark (>50%)",
        BenchmarkBand::ClearAndConvincing => "a \"clear and convincing\" benchmark (>75%)",
        BenchmarkBand::BeyondReasonableDoubt => "a \"beyond reasonable doubt\" benchmark (>95%)",
        BenchmarkBand::BelowPreponderance => unreachable!(),
    };
    match benchmark_compare(ppv) {
        BenchmarkBand::BelowPreponderance => {
            let how = if ppv < 0.4 { "well below" } else { "below" };
            format!("This confidence level ({shown}) is {how} {}.", quoted(BenchmarkBand::Preponderance))
        }
        BenchmarkBand::BeyondReasonableDoubt => {
            format!("This confidence level ({shown}) meets {}.", quoted(BenchmarkBand::BeyondReasonableDoubt))
        }
        band => {
            let next = BenchmarkBand::ALL[BenchmarkBand::ALL.iter().position(|&b| b == band).unwrap() + 1];
            format!("This confidence level ({shown}) meets {} but is below {}.", quoted(band), quoted(next))
        }
    }
}

/// Fills the label for a flag with likelihood ratio `lr` at base rate `pi`.
///
/// PPV is shown as an integer percent. The "1 in N" and detain counts are
/// derived from that displayed percent so the sentences agree with each
/// other: `N` is rounded to an integer when at least 2 (one decimal below),
/// and the detain count is cut to one decimal with a trailing `.0` dropped.
/// A PPV that displays as 0% falls back to the unrounded value.
pub fn render_uncertainty_label(lr: f64, pi: BaseRate) -> Result<UncertaintyLabel> {
    if !(lr > 0.0) || !lr.is_finite() {
        return Err(Error::param("likelihood ratio", format!("must be finite and > 0, got {lr}")));
    }
    let ppv = ppv_from_lr(lr, pi)?;
    let ppv_percent = (ppv * 100.0).round() as u32;
    let (nnd, shown) = if ppv_percent == 0 {
        (1.0 / ppv, "<1%".to_string())
    } else {
        (100.0 / f64::from(ppv_percent), format!("{ppv_percent}%"))
    };
    let one_in = if nnd >= 2.0 { format::fixed(nnd, 0) } else { format::fixed(nnd, 1) };
    let detained = format::trim(((nnd * 10.0) + 1e-9).floor() / 10.0, 1);

    let lines = vec![
        "STATISTICAL CONTEXT".to_string(),
        "This \"High Violence Risk\" flag does NOT mean the defendant will be violent.".to_string(),
        format!(
            "At current instrument performance (LR = {}, base rate = {}):",
            format::trim(lr, 2),
            format::pct_short(pi.value())
        ),
        format!("  - This flag is correct approximately 1 in {one_in} times ({shown} PPV)."),
        format!("  - To prevent one violent offense, {detained} flagged defendants would be detained."),
        format!("  - {}", benchmark_sentence(ppv, &shown)),
    ];
    Ok(UncertaintyLabel {
        lr,
        base_rate: pi.value(),
        ppv,
        ppv_percent,
        one_in,
        detained,
        band: benchmark_compare(ppv),
        lines,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label(lr: f64, pi: f64) -> UncertaintyLabel {
        render_uncertainty_label(lr, BaseRate::new(pi).unwrap()).unwrap()
    }

    #[test]
    fn current_instrument_label() {
        let l = label(4.0, 0.03);
        let t = l.text();
        assert!(t.contains("1 in 9 times (11% PPV)"), "{t}");
        assert!(t.contains("prevent one violent offense, 9 flagged"), "{t}");
        assert!(t.contains("(11%) is well below a \"more likely than not\" benchmark (>50%)"), "{t}");
    }

    #[test]
    fn rounding_cases() {
        let l = label(1.0, 0.5);
        assert!(l.text().contains("1 in 2 times (50% PPV)"));
        assert_eq!(l.band, BenchmarkBand::Preponderance);
        let l = label(4.3, 0.05);
        assert!(l.text().contains("1 in 6 times (18% PPV)"), "{}", l.text());
        assert_eq!(l.detained, "5.5");
        let l = label(1000.0, 0.5);
        assert_eq!(l.one_in, "1.0");
        assert!(l.text().contains("meets a \"beyond reasonable doubt\""));
        let l = label(0.1, 0.01);
        assert!(l.text().contains("(<1% PPV)"), "{}", l.text());
        assert!(render_uncertainty_label(0.0, BaseRate::new(0.1).unwrap()).is_err());
    }

    #[test]
    fn middle_bands_name_the_next_standard() {
        let t = label(4.0, 0.3).text();
        assert!(t.contains("meets a \"more likely than not\" benchmark (>50%) but is below a \"clear and convincing\""), "{t}");
    }
}
