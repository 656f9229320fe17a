//! C ABI over `quadcap`.
//!
//! Every entry point returns a [`QcStatus`]; results come back through out
//! pointers. Objects are opaque handles released with their `_free`
//! function. On failure, [`qc_last_error`] returns a message for the calling
//! thread until the next call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use quadcap::biquad::{BiquadField, RelativeExtension};
use quadcap::capitulation::{assemble_report, CapitulationReport};
use quadcap::cli::verify;
use quadcap::quadfield::{Bounds, QuadraticField};
use quadcap::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    BoundExceeded = 4,
    Inconsistency = 5,
    Io = 6,
    Panic = 7,
}

/// `K/F` with its Σ.
pub struct QcExtension {
    inner: RelativeExtension,
}

/// A computed capitulation report.
pub struct QcReport {
    inner: CapitulationReport,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> QcStatus {
    match e {
        Error::Domain(_) | Error::Shape(_) | Error::Unsupported(_) => QcStatus::Domain,
        Error::BoundExceeded { .. } | Error::Precision(_) => QcStatus::BoundExceeded,
        Error::Inconsistency(_) => QcStatus::Inconsistency,
        Error::Io(_) | Error::Json(_) => QcStatus::Io,
    }
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (QcStatus, String)>) -> QcStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QcStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(msg);
            QcStatus::Panic
        }
    }
}

fn lib(e: Error) -> (QcStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (QcStatus, String) {
    (QcStatus::NullPointer, format!("{what} is null"))
}

/// Message of the last failure on this thread, or null. Borrowed; valid
/// until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn qc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn qc_version() -> *const c_char {
    static V: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(c) => c,
        Err(_) => panic!("version string"),
    };
    V.as_ptr()
}

/// Class number of `Q(√m)`.
///
/// # Safety
/// `out` must be null or point to writable memory for a `u64`.
#[no_mangle]
pub unsafe extern "C" fn qc_class_number(m: i64, out: *mut u64) -> QcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let field = QuadraticField::new(m).map_err(lib)?;
        *out = field.class_group().order();
        Ok(())
    })
}

/// `K = Q(√f, √adjoin)` over `F = Q(√f)`, with Σ above `primes[0..n]`,
/// plus the primes ramified in `K/F` when `add_ramified` is set.
///
/// # Safety
/// `primes` must be null with `n == 0` or point to `n` readable `u64`s;
/// `out` must point to writable memory for a pointer.
#[no_mangle]
pub unsafe extern "C" fn qc_extension_new(
    f: i64,
    adjoin: i64,
    primes: *const u64,
    n: usize,
    add_ramified: bool,
    out: *mut *mut QcExtension,
) -> QcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        if primes.is_null() && n > 0 {
            return Err(null("primes"));
        }
        let mut ps: Vec<u64> = if n == 0 { Vec::new() } else { std::slice::from_raw_parts(primes, n).to_vec() };
        let k = BiquadField::new(adjoin, f).map_err(lib)?;
        let idx = k
            .subfield_index(f)
            .ok_or((QcStatus::InvalidArgument, format!("Q(√{f}) is not a subfield")))?;
        if add_ramified {
            ps.extend(RelativeExtension::ramified(&k, idx));
        }
        let e = RelativeExtension::with_bounds(k, idx, &ps, Bounds::default()).map_err(lib)?;
        *out = Box::into_raw(Box::new(QcExtension { inner: e }));
        Ok(())
    })
}

/// # Safety
/// `ext` must be null or a handle from [`qc_extension_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qc_extension_free(ext: *mut QcExtension) {
    if !ext.is_null() {
        drop(Box::from_raw(ext));
    }
}

/// Computes the capitulation report. A report whose routes disagree is
/// still returned; check [`qc_report_consistent`].
///
/// # Safety
/// `ext` must be a live handle; `out` must point to writable memory for a
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn qc_capitulation_report(ext: *const QcExtension, out: *mut *mut QcReport) -> QcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let e = ext.as_ref().ok_or_else(|| null("ext"))?;
        let r = assemble_report(&e.inner).map_err(lib)?;
        let json = CString::new(quadcap::cli::canonical(&serde_json::to_value(&r).map_err(|e| lib(e.into()))?))
            .map_err(|e| (QcStatus::Io, e.to_string()))?;
        *out = Box::into_raw(Box::new(QcReport { inner: r, json }));
        Ok(())
    })
}

/// `|Ker j|`.
///
/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qc_report_ker_j_order(report: *const QcReport, out: *mut u64) -> QcStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = r.inner.ker_j_order();
        Ok(())
    })
}

/// Whether all routes agree and the four-term sequence is exact.
///
/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qc_report_consistent(report: *const QcReport, out: *mut bool) -> QcStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = r.inner.consistent;
        Ok(())
    })
}

/// Canonical JSON of the report, borrowed from the handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qc_report_json(report: *const QcReport) -> *const c_char {
    report.as_ref().map_or(ptr::null(), |r| r.json.as_ptr())
}

/// # Safety
/// `report` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qc_report_free(report: *mut QcReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Runs the four-term sequence suite; writes the number of exact trials.
///
/// # Safety
/// `exact` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qc_verify_cool(trials: u64, max_order: u64, seed: u64, exact: *mut u64) -> QcStatus {
    guard(|| {
        if exact.is_null() {
            return Err(null("exact"));
        }
        let v = verify::cool(trials, max_order, seed).map_err(lib)?;
        *exact = v["exact"].as_u64().unwrap_or(0);
        Ok(())
    })
}
