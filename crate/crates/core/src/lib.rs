//! Structural precision limits for rare-event binary classifiers.
//!
//! * [`bounds`]: PPV, required likelihood ratio and number needed to detain
//!   as closed-form functions of the base rate.
//! * [`estimation`]: operating points, likelihood ratios and intervals from
//!   labeled records; binormal AUC conversion; per-group FPR amplification.
//! * [`recalibration`]: Platt and isotonic recalibration and the check that
//!   strictly increasing maps leave every threshold's confusion counts
//!   unchanged.
//! * [`surveillance`]: exact count-threshold classifiers over exchangeable
//!   binary markers, KL rate functions and per-group LR/PPV ceilings.
//! * [`report`]: record loading, configuration and the rendered reports
//!   behind the `precision-wall` command line tool.

pub mod bounds;
pub mod error;
pub mod estimation;
pub mod recalibration;
pub mod report;
pub mod surveillance;

pub use error::{Error, Result};
