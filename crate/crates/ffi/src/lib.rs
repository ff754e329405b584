//! C ABI for the trigsum evaluator.
//!
//! Conventions: every function returns a `TrigsumStatus`; results come back
//! through out-pointers. Handles are opaque and must be released with their
//! matching `_free` function. On any non-OK status, a human-readable message
//! is available from `trigsum_last_error_message` until the next call on the
//! same thread.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use trigsum::closed_forms;
use trigsum::dsl::{self, PointClass, SeriesSpec};
use trigsum::laplace::{self, RenderFormat};
use trigsum::oracle::{self, OracleConfig};
use trigsum::quadrature::{self, QuadConfig, QuadError};

/// Status codes returned by every API function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrigsumStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Input text was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Input text does not match the series grammar.
    ParseError = 3,
    /// The expression parses but is not a supported series shape.
    Unsupported = 4,
    /// The evaluation point is outside the series' validity interval.
    OutOfDomain = 5,
    /// A numeric backend could not reach its accuracy target.
    NoConvergence = 6,
    /// The requested quantity is not defined for this series (for example a
    /// closed form that is not tabulated).
    NotAvailable = 7,
    /// Internal error (should not happen; indicates a bug).
    Internal = 8,
}

/// Opaque handle for a parsed, classified series.
pub struct TrigsumSeries {
    spec: SeriesSpec,
    text: String,
}

/// Result of a quadrature evaluation.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct TrigsumEvalResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evals: u64,
    /// 1 if the requested tolerance was met, 0 otherwise.
    pub converged: c_int,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Message for the most recent non-OK status on this thread, or null.
/// The pointer is owned by the library and valid until the next API call
/// on the same thread. Do not free it.
#[no_mangle]
pub extern "C" fn trigsum_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

fn guard<F: FnOnce() -> TrigsumStatus>(f: F) -> TrigsumStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            TrigsumStatus::Internal
        }
    }
}

/// Parse and classify a series. On success writes a heap handle to `out`;
/// release it with `trigsum_series_free`.
///
/// # Safety
/// `text` must point to a NUL-terminated string; `out` must be a valid
/// pointer to writable memory.
#[no_mangle]
pub unsafe extern "C" fn trigsum_series_parse(
    text: *const c_char,
    out: *mut *mut TrigsumSeries,
) -> TrigsumStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            set_error("null pointer argument");
            return TrigsumStatus::NullPointer;
        }
        let s = match unsafe { CStr::from_ptr(text) }.to_str() {
            Ok(s) => s,
            Err(_) => {
                set_error("input is not valid UTF-8");
                return TrigsumStatus::InvalidUtf8;
            }
        };
        let expr = match dsl::parse(s) {
            Ok(e) => e,
            Err(e) => {
                set_error(e.to_string());
                return TrigsumStatus::ParseError;
            }
        };
        let spec = match dsl::classify(&expr) {
            Ok(spec) => spec,
            Err(e) => {
                set_error(e.to_string());
                return TrigsumStatus::Unsupported;
            }
        };
        let handle = Box::new(TrigsumSeries { spec, text: s.to_string() });
        unsafe { out.write(Box::into_raw(handle)) };
        clear_error();
        TrigsumStatus::Ok
    })
}

/// Release a handle from `trigsum_series_parse`. Null is a no-op.
///
/// # Safety
/// `series` must be null or a pointer previously returned by
/// `trigsum_series_parse` that has not yet been freed.
#[no_mangle]
pub unsafe extern "C" fn trigsum_series_free(series: *mut TrigsumSeries) {
    if !series.is_null() {
        drop(unsafe { Box::from_raw(series) });
    }
}

unsafe fn series_ref<'a>(series: *const TrigsumSeries) -> Option<&'a TrigsumSeries> {
    unsafe { series.as_ref() }
}

/// Classify `x` against the series' validity interval:
/// writes 0 (in domain), 1 (on boundary), or 2 (out of domain) to `out`.
///
/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trigsum_validate_point(
    series: *const TrigsumSeries,
    x: f64,
    out: *mut c_int,
) -> TrigsumStatus {
    guard(|| {
        let (Some(s), false) = (unsafe { series_ref(series) }, out.is_null()) else {
            set_error("null pointer argument");
            return TrigsumStatus::NullPointer;
        };
        let code = match dsl::validate_point(&s.spec, x) {
            PointClass::InDomain => 0,
            PointClass::OnBoundary => 1,
            PointClass::OutOfDomain => 2,
        };
        unsafe { out.write(code) };
        clear_error();
        TrigsumStatus::Ok
    })
}

/// Evaluate the series at `x` through its integral representation.
///
/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trigsum_eval(
    series: *const TrigsumSeries,
    x: f64,
    out: *mut TrigsumEvalResult,
) -> TrigsumStatus {
    guard(|| {
        let (Some(s), false) = (unsafe { series_ref(series) }, out.is_null()) else {
            set_error("null pointer argument");
            return TrigsumStatus::NullPointer;
        };
        let rep = match laplace::build_integral_rep(&s.spec, x) {
            Ok(rep) => rep,
            Err(e) => {
                set_error(e.to_string());
                return TrigsumStatus::OutOfDomain;
            }
        };
        match quadrature::integrate(&rep, &QuadConfig::default()) {
            Ok(q) => {
                unsafe {
                    out.write(TrigsumEvalResult {
                        value: q.value,
                        error_estimate: q.error_estimate,
                        evals: q.evals,
                        converged: q.converged as c_int,
                    })
                };
                clear_error();
                TrigsumStatus::Ok
            }
            Err(QuadError::NoConvergence(best)) => {
                unsafe {
                    out.write(TrigsumEvalResult {
                        value: best.value,
                        error_estimate: best.error_estimate,
                        evals: best.evals,
                        converged: 0,
                    })
                };
                set_error("quadrature budget exhausted; best estimate returned");
                TrigsumStatus::NoConvergence
            }
            Err(e) => {
                set_error(e.to_string());
                TrigsumStatus::Internal
            }
        }
    })
}

/// Exact tabulated value at `x`, when this series has one.
/// Returns `NotAvailable` for series without a tabulated identity.
///
/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trigsum_closed_form(
    series: *const TrigsumSeries,
    x: f64,
    out: *mut f64,
) -> TrigsumStatus {
    guard(|| {
        let (Some(s), false) = (unsafe { series_ref(series) }, out.is_null()) else {
            set_error("null pointer argument");
            return TrigsumStatus::NullPointer;
        };
        match closed_forms::closed_form(&s.spec, x) {
            Ok(Some(v)) => {
                unsafe { out.write(v) };
                clear_error();
                TrigsumStatus::Ok
            }
            Ok(None) => {
                set_error(format!("no tabulated identity for {}", s.text));
                TrigsumStatus::NotAvailable
            }
            Err(e) => {
                set_error(e.to_string());
                TrigsumStatus::OutOfDomain
            }
        }
    })
}

/// Independent summation estimate at `x`; writes the value and its error
/// bound.
///
/// # Safety
/// `series` must be a live handle; `out_value` and `out_bound` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn trigsum_oracle(
    series: *const TrigsumSeries,
    x: f64,
    out_value: *mut f64,
    out_bound: *mut f64,
) -> TrigsumStatus {
    guard(|| {
        let (Some(s), false, false) =
            (unsafe { series_ref(series) }, out_value.is_null(), out_bound.is_null())
        else {
            set_error("null pointer argument");
            return TrigsumStatus::NullPointer;
        };
        match oracle::estimate(&s.spec, x, &OracleConfig::default()) {
            Ok(est) => {
                unsafe {
                    out_value.write(est.value);
                    out_bound.write(est.error_bound);
                }
                clear_error();
                TrigsumStatus::Ok
            }
            Err(oracle::OracleError::OutOfDomain { .. }) => {
                set_error("x is outside the validity interval");
                TrigsumStatus::OutOfDomain
            }
            Err(e) => {
                set_error(e.to_string());
                TrigsumStatus::NoConvergence
            }
        }
    })
}

/// Render the integral-representation derivation as a newline-joined string.
/// `format`: 0 for plain text, 1 for LaTeX. The string is heap-allocated;
/// release it with `trigsum_string_free`.
///
/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trigsum_rewrite(
    series: *const TrigsumSeries,
    format: c_int,
    out: *mut *mut c_char,
) -> TrigsumStatus {
    guard(|| {
        let (Some(s), false) = (unsafe { series_ref(series) }, out.is_null()) else {
            set_error("null pointer argument");
            return TrigsumStatus::NullPointer;
        };
        let fmt = match format {
            0 => RenderFormat::Ascii,
            1 => RenderFormat::Latex,
            _ => {
                set_error(format!("unknown format code {format}"));
                return TrigsumStatus::NotAvailable;
            }
        };
        let text = laplace::render_derivation(&s.spec, fmt).join("\n");
        match CString::new(text) {
            Ok(c) => {
                unsafe { out.write(c.into_raw()) };
                clear_error();
                TrigsumStatus::Ok
            }
            Err(_) => {
                set_error("rendered text contained a NUL byte");
                TrigsumStatus::Internal
            }
        }
    })
}

/// Release a string returned by `trigsum_rewrite`. Null is a no-op.
///
/// # Safety
/// `s` must be null or a pointer previously returned by this library that
/// has not yet been freed.
#[no_mangle]
pub unsafe extern "C" fn trigsum_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
