//! C ABI over the precision-wall library.
//!
//! Every fallible function returns a [`PwStatus`] and writes its result
//! through an out pointer. On failure the message is kept per thread and can
//! be read with [`pw_last_error`]. Records and ceiling reports are opaque
//! handles owned by the caller and released with their `_free` function.
//! Panics never cross the boundary; they surface as `PW_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use precision_wall::bounds::{self, BaseRate, BenchmarkBand, OperatingPoint};
use precision_wall::estimation::{confusion_at_cutoff, lr_with_ci, AuditRecord, CutoffSpec};
use precision_wall::report::{load_records, render_uncertainty_label, RecordSchema};
use precision_wall::surveillance::{ceiling_sweep, CeilingReport, CeilingScenario, GroupFeatureModel};
use precision_wall::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PwStatus {
    Ok = 0,
    NullPointer = 1,
    /// A parameter is outside its domain.
    InvalidParameter = 2,
    /// Input data could not be read or parsed.
    InputError = 3,
    /// The quantity is mathematically undefined or unbounded for these inputs.
    Undefined = 4,
    /// A string argument is not valid UTF-8.
    InvalidUtf8 = 5,
    IndexOutOfRange = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PwBand {
    BelowPreponderance = 0,
    Preponderance = 1,
    ClearAndConvincing = 2,
    BeyondReasonableDoubt = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PwConfusion {
    pub true_pos: u64,
    pub false_pos: u64,
    pub true_neg: u64,
    pub false_neg: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PwInterval {
    pub point: f64,
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
}

/// One threshold of a ceiling sweep. An unbounded likelihood ratio is
/// reported as positive infinity.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PwCeilingRow {
    pub m: u32,
    pub sensitivity_a: f64,
    pub sensitivity_b: f64,
    pub fpr_a: f64,
    pub fpr_b: f64,
    pub lr_a: f64,
    pub lr_b: f64,
    pub ppv_a: f64,
    pub ppv_b: f64,
}

/// Opaque set of labeled records.
pub struct PwRecords {
    records: Vec<AuditRecord>,
}

/// Opaque ceiling sweep result.
pub struct PwCeilingReport {
    report: CeilingReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(PwStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::UndefinedFlag | Error::InfiniteNnd | Error::PerfectSpecificity | Error::ZeroDenominator { .. } => {
                PwStatus::Undefined
            }
            ref e if e.exit_code() == 2 => PwStatus::InvalidParameter,
            _ => PwStatus::InputError,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nuls replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> PwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PwStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".to_string());
            PwStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(PwStatus::NullPointer, format!("`{what}` is null"))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(PwStatus::InvalidUtf8, format!("`{what}` is not valid UTF-8")))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the most recent failure on the calling thread, or null.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pw_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Smallest likelihood ratio that reaches PPV `alpha` at `base_rate`.
///
/// # Safety
/// `out` must be null or point to writable memory for one `double`.
#[no_mangle]
pub unsafe extern "C" fn pw_required_lr(alpha: f64, base_rate: f64, out: *mut f64) -> PwStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = bounds::required_lr(alpha, BaseRate::new(base_rate)?)?;
        Ok(())
    })
}

/// PPV of a flag with likelihood ratio `lr` at `base_rate`.
///
/// # Safety
/// `out` must be null or point to writable memory for one `double`.
#[no_mangle]
pub unsafe extern "C" fn pw_ppv_from_lr(lr: f64, base_rate: f64, out: *mut f64) -> PwStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = bounds::ppv_from_lr(lr, BaseRate::new(base_rate)?)?;
        Ok(())
    })
}

/// PPV from sensitivity and false positive rate.
///
/// # Safety
/// `out` must be null or point to writable memory for one `double`.
#[no_mangle]
pub unsafe extern "C" fn pw_ppv_from_rates(sensitivity: f64, fpr: f64, base_rate: f64, out: *mut f64) -> PwStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = bounds::ppv_from_rates(OperatingPoint::new(sensitivity, fpr)?, BaseRate::new(base_rate)?)?;
        Ok(())
    })
}

/// Number needed to detain, `1 / ppv`.
///
/// # Safety
/// `out` must be null or point to writable memory for one `double`.
#[no_mangle]
pub unsafe extern "C" fn pw_nnd_from_ppv(ppv: f64, out: *mut f64) -> PwStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = bounds::nnd_from_ppv(ppv)?;
        Ok(())
    })
}

/// Evidentiary band containing `ppv`.
///
/// # Safety
/// `out` must be null or point to writable memory for one `PwBand`.
#[no_mangle]
pub unsafe extern "C" fn pw_benchmark_band(ppv: f64, out: *mut PwBand) -> PwStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        if !(0.0..=1.0).contains(&ppv) {
            return Err(Failure(PwStatus::InvalidParameter, format!("PPV must lie in [0, 1], got {ppv}")));
        }
        *out = match bounds::benchmark_compare(ppv) {
            BenchmarkBand::BelowPreponderance => PwBand::BelowPreponderance,
            BenchmarkBand::Preponderance => PwBand::Preponderance,
            BenchmarkBand::ClearAndConvincing => PwBand::ClearAndConvincing,
            BenchmarkBand::BeyondReasonableDoubt => PwBand::BeyondReasonableDoubt,
        };
        Ok(())
    })
}

/// Empty record set. Release with [`pw_records_free`].
#[no_mangle]
pub extern "C" fn pw_records_new() -> *mut PwRecords {
    Box::into_raw(Box::new(PwRecords { records: Vec::new() }))
}

/// Appends one record.
///
/// # Safety
/// `records` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn pw_records_push(records: *mut PwRecords, score: f64, outcome: bool) -> PwStatus {
    guard(|| {
        let h = out_ref(records, "records")?;
        if !score.is_finite() {
            return Err(Failure(PwStatus::InvalidParameter, format!("score must be finite, got {score}")));
        }
        h.records.push(AuditRecord::new(score, outcome));
        Ok(())
    })
}

/// Loads a comma-separated file with a header row, reading the named score
/// and 0/1 outcome columns. On success `*out` receives a new handle.
///
/// # Safety
/// String arguments must be null or NUL-terminated; `out` must be null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn pw_records_load(
    path: *const c_char,
    score_column: *const c_char,
    outcome_column: *const c_char,
    out: *mut *mut PwRecords,
) -> PwStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let schema = RecordSchema::new(str_arg(score_column, "score_column")?, str_arg(outcome_column, "outcome_column")?);
        let loaded = load_records(Path::new(str_arg(path, "path")?), &schema)?;
        *out = Box::into_raw(Box::new(PwRecords { records: loaded.records }));
        Ok(())
    })
}

/// # Safety
/// `records` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn pw_records_len(records: *const PwRecords, out: *mut usize) -> PwStatus {
    guard(|| {
        let h = records.as_ref().ok_or_else(|| null("records"))?;
        *out_ref(out, "out")? = h.records.len();
        Ok(())
    })
}

/// Releases a record set. Null is ignored.
///
/// # Safety
/// `records` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pw_records_free(records: *mut PwRecords) {
    if !records.is_null() {
        drop(Box::from_raw(records));
    }
}

/// Confusion counts of the flag `score >= threshold`.
///
/// # Safety
/// `records` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn pw_confusion_at(records: *const PwRecords, threshold: f64, out: *mut PwConfusion) -> PwStatus {
    guard(|| {
        let h = records.as_ref().ok_or_else(|| null("records"))?;
        let out = out_ref(out, "out")?;
        let c = confusion_at_cutoff(&h.records, &CutoffSpec::ScoreAtLeast(threshold))?;
        *out = PwConfusion { true_pos: c.tp, false_pos: c.fp, true_neg: c.tn, false_neg: c.fn_ };
        Ok(())
    })
}

/// Likelihood ratio of `score >= threshold` with a log-normal interval at
/// confidence `level`.
///
/// # Safety
/// `records` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn pw_lr_interval(
    records: *const PwRecords,
    threshold: f64,
    level: f64,
    out: *mut PwInterval,
) -> PwStatus {
    guard(|| {
        let h = records.as_ref().ok_or_else(|| null("records"))?;
        let out = out_ref(out, "out")?;
        let c = confusion_at_cutoff(&h.records, &CutoffSpec::ScoreAtLeast(threshold))?;
        let e = lr_with_ci(&c, level)?;
        *out = PwInterval { point: e.point, lower: e.lower, upper: e.upper, level: e.level };
        Ok(())
    })
}

/// Sweeps every count threshold for two groups sharing `k`, `p_pos` and
/// `rho` but with negative-class marker prevalences `p_neg_a` and `p_neg_b`.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn pw_ceiling_sweep(
    k: u32,
    p_pos: f64,
    p_neg_a: f64,
    p_neg_b: f64,
    rho: f64,
    base_rate: f64,
    out: *mut *mut PwCeilingReport,
) -> PwStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let scenario = CeilingScenario {
            group_a: GroupFeatureModel::new(k, p_pos, p_neg_a, rho)?,
            group_b: GroupFeatureModel::new(k, p_pos, p_neg_b, rho)?,
            base_rate: BaseRate::new(base_rate)?,
        };
        *out = Box::into_raw(Box::new(PwCeilingReport { report: ceiling_sweep(&scenario)? }));
        Ok(())
    })
}

/// # Safety
/// `report` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn pw_ceiling_len(report: *const PwCeilingReport, out: *mut usize) -> PwStatus {
    guard(|| {
        let h = report.as_ref().ok_or_else(|| null("report"))?;
        *out_ref(out, "out")? = h.report.rows.len();
        Ok(())
    })
}

/// Row `index` (threshold `m = index + 1`).
///
/// # Safety
/// `report` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn pw_ceiling_row(report: *const PwCeilingReport, index: usize, out: *mut PwCeilingRow) -> PwStatus {
    guard(|| {
        let h = report.as_ref().ok_or_else(|| null("report"))?;
        let out = out_ref(out, "out")?;
        let r = h.report.rows.get(index).ok_or_else(|| {
            Failure(PwStatus::IndexOutOfRange, format!("row {index} of {}", h.report.rows.len()))
        })?;
        let lr = |l: bounds::LikelihoodRatio| l.finite().unwrap_or(f64::INFINITY);
        *out = PwCeilingRow {
            m: r.m,
            sensitivity_a: r.s_a,
            sensitivity_b: r.s_b,
            fpr_a: r.q_a,
            fpr_b: r.q_b,
            lr_a: lr(r.lr_a),
            lr_b: lr(r.lr_b),
            ppv_a: r.ppv_a,
            ppv_b: r.ppv_b,
        };
        Ok(())
    })
}

/// Releases a ceiling report. Null is ignored.
///
/// # Safety
/// `report` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pw_ceiling_free(report: *mut PwCeilingReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Plain-language uncertainty label. On success `*out` receives a string
/// to be released with [`pw_string_free`].
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn pw_uncertainty_label(lr: f64, base_rate: f64, out: *mut *mut c_char) -> PwStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let label = render_uncertainty_label(lr, BaseRate::new(base_rate)?)?;
        *out = CString::new(label.text()).expect("label has no NUL").into_raw();
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
