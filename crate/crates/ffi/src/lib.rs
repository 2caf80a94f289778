//! C ABI over `finclear_core`.
//!
//! Networks and reports are opaque handles created by `finclear_*` calls and
//! released with the matching `*_free`. Every fallible call returns a
//! [`FinclearStatus`]; on failure `finclear_last_error` describes the cause.
//! Strings returned through `char **` are owned by the caller and released
//! with `finclear_string_free`.

use finclear_core::circuit::PureCircuit;
use finclear_core::cli::{clearing_json, ClearingJson};
use finclear_core::compile::{compile_instance, merge_central_debtor};
use finclear_core::covered::solve_covered_central;
use finclear_core::fixed_point::{default_damping, run_polished};
use finclear_core::io::{network_from_json, network_to_json, rates_from_csv, rates_to_csv, VarMap};
use finclear_core::mblp::solve_exhaustive;
use finclear_core::params::{optimal_params, params_from_delta};
use finclear_core::rational::{parse_rational, to_f64};
use finclear_core::{ClearingReport, Error, FinancialNetwork};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FinclearStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Input = 3,
    Property = 4,
    Degenerate = 5,
    Size = 6,
    Io = 7,
    Panic = 8,
}

/// A financial network, with the variable map of a compiled circuit if any.
pub struct FinclearNetwork {
    net: FinancialNetwork,
    varmap: Option<VarMap>,
}

/// A verified clearing vector.
pub struct FinclearReport {
    report: ClearingReport,
    json: ClearingJson,
    csv: String,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(e: &Error) -> FinclearStatus {
    match e {
        Error::Input(_) => FinclearStatus::Input,
        Error::Property(_) => FinclearStatus::Property,
        Error::Degenerate(_) => FinclearStatus::Degenerate,
        Error::Size(_) => FinclearStatus::Size,
        Error::Io(_) => FinclearStatus::Io,
    }
}

enum Failure {
    Status(FinclearStatus, String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> FinclearStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => FinclearStatus::Ok,
        Ok(Err(Failure::Status(status, message))) => {
            set_last_error(&message);
            status
        }
        Ok(Err(Failure::Core(e))) => {
            set_last_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_last_error("internal panic");
            FinclearStatus::Panic
        }
    }
}

unsafe fn text<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err(Failure::Status(FinclearStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| Failure::Status(FinclearStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, Failure> {
    ptr.as_ref().ok_or_else(|| Failure::Status(FinclearStatus::NullPointer, format!("{what} is null")))
}

fn check_out<T>(out: *mut T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Status(FinclearStatus::NullPointer, "output pointer is null".into()));
    }
    Ok(())
}

unsafe fn give_string(out: *mut *mut c_char, s: String) {
    *out = CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut());
}

unsafe fn give_report(out: *mut *mut FinclearReport, command: &str, net: &FinancialNetwork, report: ClearingReport) {
    let json = clearing_json(command, net, &report);
    let csv = rates_to_csv(net, &report.rates, true);
    *out = Box::into_raw(Box::new(FinclearReport { report, json, csv }));
}

/// Message for the last failed call on this thread. Valid until the next
/// failing call on the same thread; never null.
#[no_mangle]
pub extern "C" fn finclear_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn finclear_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a network JSON document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn finclear_network_from_json(
    json: *const c_char,
    out: *mut *mut FinclearNetwork,
) -> FinclearStatus {
    guard(|| {
        check_out(out)?;
        let (net, varmap) = network_from_json(text(json, "json")?)?;
        *out = Box::into_raw(Box::new(FinclearNetwork { net, varmap }));
        Ok(())
    })
}

/// Compiles a Pure-Circuit text at gap `delta` (`p/q` or decimal; null for
/// 2/13), optionally merging all CDS debtors into one central debtor.
///
/// # Safety
/// `circuit` and a non-null `delta` must be NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn finclear_compile_circuit(
    circuit: *const c_char,
    delta: *const c_char,
    merge: bool,
    out: *mut *mut FinclearNetwork,
) -> FinclearStatus {
    guard(|| {
        check_out(out)?;
        let params = if delta.is_null() {
            optimal_params()
        } else {
            params_from_delta(&parse_rational(text(delta, "delta")?)?)?
        };
        let (mut net, varmap) = compile_instance(&PureCircuit::parse(text(circuit, "circuit")?)?, &params)?;
        if merge {
            net = merge_central_debtor(&net)?;
        }
        *out = Box::into_raw(Box::new(FinclearNetwork { net, varmap: Some(varmap) }));
        Ok(())
    })
}

/// Releases a network. Null is ignored.
///
/// # Safety
/// `net` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn finclear_network_free(net: *mut FinclearNetwork) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// Number of banks, or 0 for null.
///
/// # Safety
/// `net` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn finclear_network_bank_count(net: *const FinclearNetwork) -> usize {
    net.as_ref().map_or(0, |n| n.net.len())
}

/// Canonical JSON of the network.
///
/// # Safety
/// `net` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn finclear_network_to_json(
    net: *const FinclearNetwork,
    out: *mut *mut c_char,
) -> FinclearStatus {
    guard(|| {
        check_out(out)?;
        let n = handle(net, "network")?;
        give_string(out, network_to_json(&n.net, n.varmap.as_ref()));
        Ok(())
    })
}

/// Exact clearing of a covered network whose CDS debtors are fully capitalized.
///
/// # Safety
/// `net` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn finclear_solve_covered(
    net: *const FinclearNetwork,
    out: *mut *mut FinclearReport,
) -> FinclearStatus {
    guard(|| {
        check_out(out)?;
        let n = handle(net, "network")?;
        let solution = solve_covered_central(&n.net)?;
        give_report(out, "solve-covered", &n.net, solution.report);
        Ok(())
    })
}

/// Exact clearing of a central-CDS-debtor network by exhaustive search.
///
/// # Safety
/// `net` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn finclear_solve_mblp(
    net: *const FinclearNetwork,
    out: *mut *mut FinclearReport,
) -> FinclearStatus {
    guard(|| {
        check_out(out)?;
        let n = handle(net, "network")?;
        let solution = solve_exhaustive(&n.net, None)?;
        give_report(out, "solve-mblp", &n.net, solution.report);
        Ok(())
    })
}

/// Damped iteration from all ones with the default damping, then Newton
/// polish if `eps` is missed. The report records whether `eps` was reached.
///
/// # Safety
/// `net` must be a live handle, `eps` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn finclear_solve_iterate(
    net: *const FinclearNetwork,
    eps: *const c_char,
    max_iter: usize,
    out: *mut *mut FinclearReport,
) -> FinclearStatus {
    guard(|| {
        check_out(out)?;
        let n = handle(net, "network")?;
        let eps = parse_rational(text(eps, "eps")?)?;
        let outcome = run_polished(&n.net, None, &default_damping(&n.net), max_iter, &eps)?;
        give_report(out, "solve-iterate", &n.net, outcome.report);
        Ok(())
    })
}

/// Checks a `bank,rate` CSV against the weak `eps`-approximate clearing condition.
///
/// # Safety
/// `net` must be a live handle, `rates_csv` and `eps` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn finclear_verify(
    net: *const FinclearNetwork,
    rates_csv: *const c_char,
    eps: *const c_char,
    out: *mut *mut FinclearReport,
) -> FinclearStatus {
    guard(|| {
        check_out(out)?;
        let n = handle(net, "network")?;
        let rates = rates_from_csv(&n.net, text(rates_csv, "rates")?)?;
        let report = n.net.verify_crrv(&rates, &parse_rational(text(eps, "eps")?)?)?;
        give_report(out, "verify", &n.net, report);
        Ok(())
    })
}

/// Releases a report. Null is ignored.
///
/// # Safety
/// `report` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn finclear_report_free(report: *mut FinclearReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Whether the rates meet the clearing condition at the report's tolerance.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn finclear_report_passed(report: *const FinclearReport) -> bool {
    report.as_ref().is_some_and(|r| r.report.passed)
}

/// Largest residual `|r_i - f_i(r)|`, or NaN for null.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn finclear_report_max_residual(report: *const FinclearReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| to_f64(&r.report.max_residual))
}

/// Number of rates in the report, or 0 for null.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn finclear_report_len(report: *const FinclearReport) -> usize {
    report.as_ref().map_or(0, |r| r.report.rates.len())
}

/// Rate of bank `index` (banks in lexicographic order), or NaN when out of range.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn finclear_report_rate(report: *const FinclearReport, index: usize) -> f64 {
    report.as_ref().and_then(|r| r.report.rates.get(index)).map_or(f64::NAN, to_f64)
}

/// Rates as `bank,rate,decimal` CSV with exact `p/q` rates.
///
/// # Safety
/// `report` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn finclear_report_rates_csv(
    report: *const FinclearReport,
    out: *mut *mut c_char,
) -> FinclearStatus {
    guard(|| {
        check_out(out)?;
        give_string(out, handle(report, "report")?.csv.clone());
        Ok(())
    })
}

/// The report in the CLI's JSON schema.
///
/// # Safety
/// `report` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn finclear_report_to_json(
    report: *const FinclearReport,
    out: *mut *mut c_char,
) -> FinclearStatus {
    guard(|| {
        check_out(out)?;
        let r = handle(report, "report")?;
        give_string(out, serde_json::to_string_pretty(&r.json).expect("report serializes"));
        Ok(())
    })
}
