//! C ABI over `graphmfd-core`.
//!
//! Manifests and reports are opaque handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call
//! returns a [`GmStatus`]; on failure a description is available from
//! [`gm_last_error_message`] on the same thread until the next call.
//! Strings returned through out-parameters are owned by the caller and
//! released with [`gm_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use graphmfd::decision::{decide, AnalysisReport, DecideOptions};
use graphmfd::io::manifest::load_manifest;
use graphmfd::io::report::ReportJson;
use graphmfd::GraphManifoldData;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GmStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Input text was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Malformed JSON, charge or schema.
    Parse = 3,
    /// Well-formed but invalid graph manifold data.
    Validation = 4,
    Analysis = 5,
    /// A panic was caught at the boundary; out-parameters are not written.
    Panic = 6,
}

/// Signature of `H_M`: positive, zero and negative eigenvalue counts.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GmInertia {
    pub n_plus: usize,
    pub n_zero: usize,
    pub n_minus: usize,
}

/// A validated manifest in reduced form.
pub struct GmManifest {
    data: GraphManifoldData,
}

/// The analysis of one manifest.
pub struct GmReport {
    data: GraphManifoldData,
    report: AnalysisReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn guard(f: impl FnOnce() -> GmStatus) -> GmStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let what = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            set_error(format!("panic: {what}"));
            GmStatus::Panic
        }
    }
}

fn parse_status(code: &str) -> GmStatus {
    match code {
        "BAD_JSON" | "BAD_RATIONAL" | "SCHEMA" | "MIXED_FORM" | "UNSUPPORTED_SCHEMA" => GmStatus::Parse,
        _ => GmStatus::Validation,
    }
}

/// Parses and validates a manifest (reduced or gluing form).
///
/// # Safety
/// `json` must be null or a NUL-terminated string; `out` must be null or
/// valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn gm_manifest_from_json(json: *const c_char, out: *mut *mut GmManifest) -> GmStatus {
    guard(|| {
        if json.is_null() || out.is_null() {
            set_error("null argument");
            return GmStatus::NullPointer;
        }
        let text = match CStr::from_ptr(json).to_str() {
            Ok(t) => t,
            Err(e) => {
                set_error(e.to_string());
                return GmStatus::InvalidUtf8;
            }
        };
        match load_manifest(text) {
            Ok(data) => {
                *out = Box::into_raw(Box::new(GmManifest { data }));
                GmStatus::Ok
            }
            Err(e) => {
                set_error(e.to_json().to_string());
                parse_status(e.code)
            }
        }
    })
}

/// # Safety
/// `m` must be null or a handle from [`gm_manifest_from_json`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gm_manifest_free(m: *mut GmManifest) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Decides both verdicts. With `certify`, a strict certificate is searched
/// for when `H_M` has a negative eigenvalue, using at most `max_iters`
/// exact linear programs.
///
/// # Safety
/// `m` must be a live manifest handle or null; `out` must be null or valid
/// for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn gm_analyze(
    m: *const GmManifest,
    certify: bool,
    max_iters: u32,
    out: *mut *mut GmReport,
) -> GmStatus {
    guard(|| {
        let (Some(m), false) = (m.as_ref(), out.is_null()) else {
            set_error("null argument");
            return GmStatus::NullPointer;
        };
        let opts = DecideOptions {
            certify,
            max_iters: max_iters as usize,
        };
        match decide(&m.data, &opts) {
            Ok(report) => {
                *out = Box::into_raw(Box::new(GmReport {
                    data: m.data.clone(),
                    report,
                }));
                GmStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                GmStatus::Analysis
            }
        }
    })
}

/// # Safety
/// `r` must be null or a handle from [`gm_analyze`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gm_report_free(r: *mut GmReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

unsafe fn read_report<T>(r: *const GmReport, out: *mut T, f: impl FnOnce(&GmReport) -> T) -> GmStatus {
    guard(|| match r.as_ref() {
        Some(r) if !out.is_null() => {
            out.write(f(r));
            GmStatus::Ok
        }
        _ => {
            set_error("null argument");
            GmStatus::NullPointer
        }
    })
}

/// # Safety
/// `r` must be a live report handle; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn gm_report_verdict_npc(r: *const GmReport, out: *mut bool) -> GmStatus {
    read_report(r, out, |r| r.report.verdict_npc)
}

/// # Safety
/// `r` must be a live report handle; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn gm_report_verdict_vf(r: *const GmReport, out: *mut bool) -> GmStatus {
    read_report(r, out, |r| r.report.verdict_vf)
}

/// # Safety
/// `r` must be a live report handle; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn gm_report_inertia(r: *const GmReport, out: *mut GmInertia) -> GmStatus {
    read_report(r, out, |r| {
        let i = r.report.inertia;
        GmInertia {
            n_plus: i.n_plus,
            n_zero: i.n_zero,
            n_minus: i.n_minus,
        }
    })
}

/// The full report as JSON, in the same layout the command-line tool uses
/// for its `report` field. Release with [`gm_string_free`].
///
/// # Safety
/// `r` must be a live report handle; `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn gm_report_to_json(r: *const GmReport, out: *mut *mut c_char) -> GmStatus {
    read_report(r, out, |r| {
        let json = ReportJson::new(&r.data, &r.report).to_json();
        CString::new(json).expect("JSON has no NUL").into_raw()
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn gm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn gm_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}
