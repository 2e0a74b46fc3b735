use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use precision_wall_ffi::*;

fn last_error() -> String {
    let p = pw_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

#[test]
fn scalar_bounds() {
    let mut v = 0.0;
    unsafe {
        assert_eq!(pw_required_lr(0.5, 0.01, &mut v), PwStatus::Ok);
        assert!((v - 99.0).abs() < 1e-9);
        assert_eq!(pw_ppv_from_lr(4.0, 0.03, &mut v), PwStatus::Ok);
        // Posterior odds 4 * 3/97.
        assert!((v - 12.0 / 109.0).abs() < 1e-15);
        assert_eq!(pw_ppv_from_rates(0.4, 0.1, 0.5, &mut v), PwStatus::Ok);
        assert!((v - 0.8).abs() < 1e-15);
        assert_eq!(pw_nnd_from_ppv(0.25, &mut v), PwStatus::Ok);
        assert_eq!(v, 4.0);
        let mut band = PwBand::BelowPreponderance;
        assert_eq!(pw_benchmark_band(0.75, &mut band), PwStatus::Ok);
        assert_eq!(band, PwBand::ClearAndConvincing);
    }
}

#[test]
fn errors_map_to_status_and_message() {
    let mut v = 0.0;
    unsafe {
        assert_eq!(pw_required_lr(1.5, 0.1, &mut v), PwStatus::InvalidParameter);
        assert!(last_error().contains("target PPV"), "{}", last_error());
        assert_eq!(pw_nnd_from_ppv(0.0, &mut v), PwStatus::Undefined);
        assert_eq!(pw_ppv_from_rates(0.0, 0.0, 0.1, &mut v), PwStatus::Undefined);
        assert_eq!(pw_required_lr(0.5, 0.1, ptr::null_mut()), PwStatus::NullPointer);
        assert_eq!(pw_records_len(ptr::null(), ptr::null_mut()), PwStatus::NullPointer);
        let mut h = ptr::null_mut();
        let bad = [0xffu8, 0];
        assert_eq!(pw_records_load(bad.as_ptr().cast(), c"s".as_ptr(), c"y".as_ptr(), &mut h), PwStatus::InvalidUtf8);
        assert!(h.is_null());
        let missing = CString::new("/nonexistent/file.csv").unwrap();
        assert_eq!(pw_records_load(missing.as_ptr(), c"s".as_ptr(), c"y".as_ptr(), &mut h), PwStatus::InputError);
    }
}

#[test]
fn records_handle_round_trip() {
    unsafe {
        let h = pw_records_new();
        // Score 1..=8; positives at 5, 6, 7, 8 and 3.
        for s in 1..=8 {
            assert_eq!(pw_records_push(h, f64::from(s), s >= 5 || s == 3), PwStatus::Ok);
        }
        assert_eq!(pw_records_push(h, f64::NAN, true), PwStatus::InvalidParameter);
        let mut n = 0;
        assert_eq!(pw_records_len(h, &mut n), PwStatus::Ok);
        assert_eq!(n, 8);
        let mut c = PwConfusion::default();
        assert_eq!(pw_confusion_at(h, 4.0, &mut c), PwStatus::Ok);
        assert_eq!(c, PwConfusion { true_pos: 4, false_pos: 1, true_neg: 2, false_neg: 1 });
        let mut i = PwInterval::default();
        assert_eq!(pw_lr_interval(h, 4.0, 0.95, &mut i), PwStatus::Ok);
        // s = 4/5, q = 1/3.
        assert!((i.point - 2.4).abs() < 1e-12);
        assert!(i.lower < i.point && i.point < i.upper);
        pw_records_free(h);
        pw_records_free(ptr::null_mut());
    }
}

#[test]
fn load_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    std::fs::write(&path, "score,y\n0.2,0\n0.9,1\n0.7,0\n").unwrap();
    let p = CString::new(path.to_str().unwrap()).unwrap();
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(pw_records_load(p.as_ptr(), c"score".as_ptr(), c"y".as_ptr(), &mut h), PwStatus::Ok);
        let mut n = 0;
        pw_records_len(h, &mut n);
        assert_eq!(n, 3);
        pw_records_free(h);
        assert_eq!(pw_records_load(p.as_ptr(), c"score".as_ptr(), c"label".as_ptr(), &mut h), PwStatus::InputError);
        assert!(last_error().contains("label"));
    }
}

#[test]
fn ceiling_handle() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(pw_ceiling_sweep(10, 0.68, 0.15, 0.35, 0.0, 0.03, &mut h), PwStatus::Ok);
        let mut n = 0;
        assert_eq!(pw_ceiling_len(h, &mut n), PwStatus::Ok);
        assert_eq!(n, 10);
        let mut row = PwCeilingRow::default();
        for i in 0..n {
            assert_eq!(pw_ceiling_row(h, i, &mut row), PwStatus::Ok);
            assert_eq!(row.m as usize, i + 1);
            assert!(row.fpr_b > row.fpr_a && row.lr_a > row.lr_b);
        }
        assert_eq!(pw_ceiling_row(h, n, &mut row), PwStatus::IndexOutOfRange);
        pw_ceiling_free(h);
        assert_eq!(pw_ceiling_sweep(10, 0.68, 0.15, 0.35, 1.0, 0.03, &mut h), PwStatus::InvalidParameter);
    }
}

#[test]
fn label_string_ownership() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(pw_uncertainty_label(4.0, 0.03, &mut s), PwStatus::Ok);
        let text = CStr::from_ptr(s).to_str().unwrap().to_string();
        pw_string_free(s);
        assert!(text.contains("1 in 9") && text.contains("11% PPV"), "{text}");
    }
    let v = unsafe { CStr::from_ptr(pw_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_is_valid_c() {
    let header = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/precision_wall.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["pw_required_lr", "pw_records_free", "pw_ceiling_row", "pw_string_free", "PW_STATUS_OK", "PwRecords"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let Ok(status) = Command::new("cc").args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"]).arg(&header).status() else {
        eprintln!("no C compiler; syntax check skipped");
        return;
    };
    assert!(status.success());
}
