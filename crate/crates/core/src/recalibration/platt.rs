use serde::Serialize;

use crate::error::{Error, Result};

/// Slopes at or below this are treated as not orientation-preserving.
const MIN_SLOPE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlattOptions {
    /// Replace hard 0/1 targets with `(n+ + 1) / (n+ + 2)` and `1 / (n- + 2)`.
    pub label_smoothing: bool,
    pub max_iterations: usize,
    pub tolerance: f64,
}

impl Default for PlattOptions {
    fn default() -> Self {
        PlattOptions { label_smoothing: true, max_iterations: 10_000, tolerance: 1e-10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitStatus {
    Converged,
    /// Classes are perfectly separated and no finite maximizer exists; the
    /// returned parameters are the last iterate.
    Separated,
}

/// `P(y = 1 | score) = 1 / (1 + exp(-(slope * score + intercept)))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlattFit {
    pub slope: f64,
    pub intercept: f64,
    pub iterations: usize,
    pub status: FitStatus,
}

impl PlattFit {
    pub fn converged(&self) -> bool {
        self.status == FitStatus::Converged
    }

    pub fn evaluate(&self, score: f64) -> f64 {
        sigmoid(self.slope * score + self.intercept)
    }
}

pub(crate) fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + exp(z))` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

fn separated(scores: &[f64], outcomes: &[bool]) -> bool {
    let max_neg = scores.iter().zip(outcomes).filter(|(_, &y)| !y).map(|(s, _)| *s).fold(f64::NEG_INFINITY, f64::max);
    let min_pos = scores.iter().zip(outcomes).filter(|(_, &y)| y).map(|(s, _)| *s).fold(f64::INFINITY, f64::min);
    max_neg < min_pos
}

/// Maximum-likelihood logistic fit of outcomes on scores by Newton's method
/// with backtracking line search.
///
/// Starts from slope 1 and the intercept that centres the scores on the
/// logit of the target mean.
pub fn fit_platt(scores: &[f64], outcomes: &[bool], options: &PlattOptions) -> Result<PlattFit> {
    if scores.len() != outcomes.len() {
        return Err(Error::LengthMismatch { left: scores.len(), right: outcomes.len() });
    }
    if let Some(&bad) = scores.iter().find(|s| !s.is_finite()) {
        return Err(Error::DomainViolation { value: bad });
    }
    let n_pos = outcomes.iter().filter(|&&y| y).count();
    let n_neg = outcomes.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::SingleClass);
    }

    let (hi, lo) = if options.label_smoothing {
        ((n_pos as f64 + 1.0) / (n_pos as f64 + 2.0), 1.0 / (n_neg as f64 + 2.0))
    } else {
        (1.0, 0.0)
    };
    let targets: Vec<f64> = outcomes.iter().map(|&y| if y { hi } else { lo }).collect();
    let diverges = !options.label_smoothing && separated(scores, outcomes);

    let objective = |a: f64, b: f64| -> f64 {
        scores.iter().zip(&targets).map(|(&x, &t)| {
            let z = a * x + b;
            softplus(z) - t * z
        }).sum()
    };

    let mean_score = scores.iter().sum::<f64>() / scores.len() as f64;
    let mean_target = targets.iter().sum::<f64>() / targets.len() as f64;
    let mut a = 1.0;
    let mut b = (mean_target / (1.0 - mean_target)).ln() - mean_score;
    let mut f = objective(a, b);

    for iteration in 1..=options.max_iterations {
        let (mut ga, mut gb, mut haa, mut hab, mut hbb) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (&x, &t) in scores.iter().zip(&targets) {
            let p = sigmoid(a * x + b);
            let r = p - t;
            let w = p * (1.0 - p);
            ga += r * x;
            gb += r;
            haa += w * x * x;
            hab += w * x;
            hbb += w;
        }
        if !diverges && ga.abs().max(gb.abs()) < options.tolerance {
            return finish(a, b, iteration - 1, FitStatus::Converged);
        }
        // Small ridge keeps the Hessian invertible near saturation.
        haa += 1e-12;
        hbb += 1e-12;
        let det = haa * hbb - hab * hab;
        if !(det > 0.0) || !det.is_finite() {
            return if diverges {
                finish(a, b, iteration - 1, FitStatus::Separated)
            } else {
                Err(Error::NonConvergence { iterations: iteration - 1 })
            };
        }
        let da = -(hbb * ga - hab * gb) / det;
        let db = -(haa * gb - hab * ga) / det;
        let slope_dir = ga * da + gb * db;

        let mut step = 1.0;
        let accepted = loop {
            let (na, nb) = (a + step * da, b + step * db);
            let nf = objective(na, nb);
            if nf <= f + 1e-4 * step * slope_dir {
                break Some((na, nb, nf));
            }
            step *= 0.5;
            if step < 1e-10 {
                break None;
            }
        };
        let Some((na, nb, nf)) = accepted else {
            return if diverges {
                finish(a, b, iteration, FitStatus::Separated)
            } else if ga.abs().max(gb.abs()) < options.tolerance.sqrt() {
                // Line search stalls at the floating-point floor of the objective.
                finish(a, b, iteration, FitStatus::Converged)
            } else {
                Err(Error::NonConvergence { iterations: iteration })
            };
        };
        let moved = (na - a).abs().max((nb - b).abs());
        a = na;
        b = nb;
        f = nf;
        if !diverges && moved < options.tolerance * (1.0 + a.abs().max(b.abs())) {
            return finish(a, b, iteration, FitStatus::Converged);
        }
    }
    if diverges {
        finish(a, b, options.max_iterations, FitStatus::Separated)
    } else {
        Err(Error::NonConvergence { iterations: options.max_iterations })
    }
}

fn finish(slope: f64, intercept: f64, iterations: usize, status: FitStatus) -> Result<PlattFit> {
    if !(slope > MIN_SLOPE) {
        return Err(Error::NotOrientationPreserving { slope, intercept });
    }
    Ok(PlattFit { slope, intercept, iterations, status })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn log_likelihood(scores: &[f64], targets: &[f64], a: f64, b: f64) -> f64 {
        scores.iter().zip(targets).map(|(&x, &t)| {
            let p = 1.0 / (1.0 + (-(a * x + b)).exp());
            t * p.ln() + (1.0 - t) * (1.0 - p).ln()
        }).sum()
    }

    #[test]
    fn recovers_synthetic_parameters_against_grid_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let scores: Vec<f64> = (0..500).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let outcomes: Vec<bool> = scores.iter().map(|&x| rng.random_bool(sigmoid(2.0 * x - 1.0))).collect();
        let options = PlattOptions::default();
        let fit = fit_platt(&scores, &outcomes, &options).unwrap();
        assert!(fit.converged());

        let n_pos = outcomes.iter().filter(|&&y| y).count() as f64;
        let n_neg = outcomes.len() as f64 - n_pos;
        let targets: Vec<f64> = outcomes.iter().map(|&y| if y { (n_pos + 1.0) / (n_pos + 2.0) } else { 1.0 / (n_neg + 2.0) }).collect();
        let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
        for i in 0..=200 {
            for j in 0..=200 {
                let a = i as f64 * 0.02;
                let b = -3.0 + j as f64 * 0.02;
                let ll = log_likelihood(&scores, &targets, a, b);
                if ll > best.0 {
                    best = (ll, a, b);
                }
            }
        }
        assert!((fit.slope - best.1).abs() <= 0.2, "{} vs {}", fit.slope, best.1);
        assert!((fit.intercept - best.2).abs() <= 0.2, "{} vs {}", fit.intercept, best.2);
        assert!((fit.slope - 2.0).abs() <= 0.5 && (fit.intercept + 1.0).abs() <= 0.5);
    }

    #[test]
    fn separated_data_without_smoothing_reports_separation() {
        let scores: Vec<f64> = (0..20).map(f64::from).collect();
        let outcomes: Vec<bool> = scores.iter().map(|&s| s >= 10.0).collect();
        let options = PlattOptions { label_smoothing: false, ..PlattOptions::default() };
        let fit = fit_platt(&scores, &outcomes, &options).unwrap();
        assert_eq!(fit.status, FitStatus::Separated);
        assert!(fit.slope > 10.0);

        let smoothed = fit_platt(&scores, &outcomes, &PlattOptions::default()).unwrap();
        assert!(smoothed.converged());
        assert!(smoothed.slope < fit.slope);
    }

    #[test]
    fn uninformative_scores_are_rejected() {
        // Every score carries one positive and one negative.
        let scores: Vec<f64> = (0..10).flat_map(|i| [f64::from(i), f64::from(i)]).collect();
        let outcomes: Vec<bool> = (0..20).map(|i| i % 2 == 0).collect();
        let err = fit_platt(&scores, &outcomes, &PlattOptions::default()).unwrap_err();
        assert!(matches!(err, Error::NotOrientationPreserving { .. }), "{err:?}");
    }

    #[test]
    fn deterministic() {
        let scores = [1.0, 2.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let outcomes = [false, false, true, false, true, true, false];
        let a = fit_platt(&scores, &outcomes, &PlattOptions::default()).unwrap();
        let b = fit_platt(&scores, &outcomes, &PlattOptions::default()).unwrap();
        assert_eq!(a.slope.to_bits(), b.slope.to_bits());
        assert_eq!(a.intercept.to_bits(), b.intercept.to_bits());
    }

    #[test]
    fn single_class_and_length_errors() {
        assert!(matches!(fit_platt(&[1.0, 2.0], &[true, true], &PlattOptions::default()), Err(Error::SingleClass)));
        assert!(matches!(fit_platt(&[1.0], &[true, false], &PlattOptions::default()), Err(Error::LengthMismatch { .. })));
    }
}
