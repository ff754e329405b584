//! Exercises the C ABI through the same raw-pointer calls a C client makes.

use std::ffi::{c_int, CStr, CString};
use std::f64::consts::PI;
use std::ptr;

use trigsum_ffi::*;

fn parse(text: &str) -> *mut TrigsumSeries {
    let c = CString::new(text).unwrap();
    let mut handle: *mut TrigsumSeries = ptr::null_mut();
    let status = unsafe { trigsum_series_parse(c.as_ptr(), &mut handle) };
    assert_eq!(status, TrigsumStatus::Ok);
    assert!(!handle.is_null());
    handle
}

fn last_error() -> String {
    let p = trigsum_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

#[test]
fn parse_eval_closed_form_and_free() {
    let h = parse("sum(n=1..inf, sin(n*x)/n)");
    let x = 1.0;

    let mut res = TrigsumEvalResult { value: 0.0, error_estimate: 0.0, evals: 0, converged: 0 };
    assert_eq!(unsafe { trigsum_eval(h, x, &mut res) }, TrigsumStatus::Ok);
    assert_eq!(res.converged, 1);

    let mut closed = 0.0;
    assert_eq!(unsafe { trigsum_closed_form(h, x, &mut closed) }, TrigsumStatus::Ok);
    assert!((closed - (PI - x) / 2.0).abs() < 1e-15);
    assert!((res.value - closed).abs() < 1e-9);

    let mut ov = 0.0;
    let mut ob = 0.0;
    assert_eq!(unsafe { trigsum_oracle(h, x, &mut ov, &mut ob) }, TrigsumStatus::Ok);
    assert!((ov - closed).abs() < 1e-5);
    assert!(ob > 0.0);

    unsafe { trigsum_series_free(h) };
}

#[test]
fn parse_rejects_bad_input_with_message() {
    let c = CString::new("sum(n=1..inf, cos(n*x)/n!)").unwrap();
    let mut handle: *mut TrigsumSeries = ptr::null_mut();
    let status = unsafe { trigsum_series_parse(c.as_ptr(), &mut handle) };
    assert_eq!(status, TrigsumStatus::ParseError);
    assert!(handle.is_null());
    assert!(!last_error().is_empty());
}

#[test]
fn unsupported_series_reports_unsupported() {
    let c = CString::new("sum(n=1..inf, sin(n*x)/n^9)").unwrap();
    let mut handle: *mut TrigsumSeries = ptr::null_mut();
    let status = unsafe { trigsum_series_parse(c.as_ptr(), &mut handle) };
    assert_eq!(status, TrigsumStatus::Unsupported);
}

#[test]
fn null_pointers_are_rejected_not_crashed() {
    let mut handle: *mut TrigsumSeries = ptr::null_mut();
    assert_eq!(
        unsafe { trigsum_series_parse(ptr::null(), &mut handle) },
        TrigsumStatus::NullPointer
    );
    let mut res = TrigsumEvalResult { value: 0.0, error_estimate: 0.0, evals: 0, converged: 0 };
    assert_eq!(unsafe { trigsum_eval(ptr::null(), 1.0, &mut res) }, TrigsumStatus::NullPointer);
    unsafe { trigsum_series_free(ptr::null_mut()) };
    unsafe { trigsum_string_free(ptr::null_mut()) };
}

#[test]
fn out_of_domain_eval_is_an_error_status() {
    let h = parse("sum(n=1..inf, cos(n*x)/n)");
    let mut res = TrigsumEvalResult { value: 0.0, error_estimate: 0.0, evals: 0, converged: 0 };
    assert_eq!(unsafe { trigsum_eval(h, 0.0, &mut res) }, TrigsumStatus::OutOfDomain);
    assert!(last_error().contains("0"));
    unsafe { trigsum_series_free(h) };
}

#[test]
fn validate_point_codes() {
    let h = parse("sum(n=1..inf, cos(n*x)/n^2)");
    let mut code: c_int = -1;
    assert_eq!(unsafe { trigsum_validate_point(h, 1.0, &mut code) }, TrigsumStatus::Ok);
    assert_eq!(code, 0);
    assert_eq!(unsafe { trigsum_validate_point(h, 0.0, &mut code) }, TrigsumStatus::Ok);
    assert_eq!(code, 1);
    assert_eq!(unsafe { trigsum_validate_point(h, -1.0, &mut code) }, TrigsumStatus::Ok);
    assert_eq!(code, 2);
    unsafe { trigsum_series_free(h) };
}

#[test]
fn rewrite_returns_owned_string() {
    let h = parse("sum(n=1..inf, cos(n*x)/n)");
    let mut s: *mut std::ffi::c_char = ptr::null_mut();
    assert_eq!(unsafe { trigsum_rewrite(h, 0, &mut s) }, TrigsumStatus::Ok);
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    assert!(text.contains("du"));
    assert_eq!(text.lines().count(), 3);
    unsafe { trigsum_string_free(s) };

    assert_eq!(unsafe { trigsum_rewrite(h, 1, &mut s) }, TrigsumStatus::Ok);
    let latex = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    assert!(latex.contains("\\int"));
    unsafe { trigsum_string_free(s) };

    assert_eq!(unsafe { trigsum_rewrite(h, 7, &mut s) }, TrigsumStatus::NotAvailable);
    unsafe { trigsum_series_free(h) };
}

#[test]
fn closed_form_not_available_for_untabulated_power() {
    let h = parse("sum(n=1..inf, sin(n*x)/n^3)");
    let mut v = 0.0;
    assert_eq!(unsafe { trigsum_closed_form(h, 1.0, &mut v) }, TrigsumStatus::NotAvailable);
    unsafe { trigsum_series_free(h) };
}
