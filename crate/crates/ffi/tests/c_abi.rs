use finclear_ffi::*;
use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

const SAMPLE_CIRCUIT: &str = "NOT u v\nOR v w y\nPURIFY v u w\n";

fn take_string(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { finclear_string_free(s) };
    text
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(finclear_last_error()) }.to_str().unwrap().to_string()
}

fn network(json: &str) -> *mut FinclearNetwork {
    let json = CString::new(json).unwrap();
    let mut net = ptr::null_mut();
    assert_eq!(unsafe { finclear_network_from_json(json.as_ptr(), &mut net) }, FinclearStatus::Ok);
    net
}

const TWO_BANKS: &str = r#"{
  "banks": [{"id": "A", "external_assets": "1/2"}, {"id": "B", "external_assets": 0}],
  "debt": [{"debtor": "A", "creditor": "B", "notional": 1}]
}"#;

#[test]
fn solve_covered_through_handles() {
    let net = network(TWO_BANKS);
    assert_eq!(unsafe { finclear_network_bank_count(net) }, 2);
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { finclear_solve_covered(net, &mut report) }, FinclearStatus::Ok);
    unsafe {
        assert!(finclear_report_passed(report));
        assert_eq!(finclear_report_len(report), 2);
        assert_eq!(finclear_report_rate(report, 0), 0.5);
        assert_eq!(finclear_report_max_residual(report), 0.0);
        assert!(finclear_report_rate(report, 9).is_nan());
    }
    let mut csv = ptr::null_mut();
    assert_eq!(unsafe { finclear_report_rates_csv(report, &mut csv) }, FinclearStatus::Ok);
    assert_eq!(take_string(csv), "bank,rate,decimal\nA,1/2,0.5\nB,1,1\n");
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { finclear_report_to_json(report, &mut json) }, FinclearStatus::Ok);
    assert!(take_string(json).contains("\"passed\": true"));
    unsafe {
        finclear_report_free(report);
        finclear_network_free(net);
    }
}

#[test]
fn verify_and_iterate() {
    let net = network(TWO_BANKS);
    let rates = CString::new("bank,rate\nA,1/2\nB,1\n").unwrap();
    let eps = CString::new("0").unwrap();
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { finclear_verify(net, rates.as_ptr(), eps.as_ptr(), &mut report) }, FinclearStatus::Ok);
    assert!(unsafe { finclear_report_passed(report) });
    unsafe { finclear_report_free(report) };
    let eps = CString::new("1e-9").unwrap();
    assert_eq!(unsafe { finclear_solve_iterate(net, eps.as_ptr(), 1000, &mut report) }, FinclearStatus::Ok);
    assert!(unsafe { finclear_report_passed(report) });
    unsafe {
        finclear_report_free(report);
        finclear_network_free(net);
    }
}

#[test]
fn errors_map_to_status_codes() {
    let bad = CString::new("{ nope").unwrap();
    let mut net = ptr::null_mut();
    assert_eq!(unsafe { finclear_network_from_json(bad.as_ptr(), &mut net) }, FinclearStatus::Input);
    assert!(net.is_null());
    assert!(last_error().contains("network JSON"));
    assert_eq!(unsafe { finclear_network_from_json(ptr::null(), &mut net) }, FinclearStatus::NullPointer);
    let good = CString::new(TWO_BANKS).unwrap();
    assert_eq!(unsafe { finclear_network_from_json(good.as_ptr(), ptr::null_mut()) }, FinclearStatus::NullPointer);
    let invalid = [0xffu8 as c_char, 0];
    assert_eq!(unsafe { finclear_network_from_json(invalid.as_ptr(), &mut net) }, FinclearStatus::InvalidUtf8);
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { finclear_solve_mblp(ptr::null(), &mut report) }, FinclearStatus::NullPointer);
    unsafe {
        finclear_network_free(ptr::null_mut());
        finclear_report_free(ptr::null_mut());
        finclear_string_free(ptr::null_mut());
    }
}

#[test]
fn compiled_circuit_needs_central_debtor_for_mblp() {
    let circuit = CString::new(SAMPLE_CIRCUIT).unwrap();
    let mut net = ptr::null_mut();
    assert_eq!(unsafe { finclear_compile_circuit(circuit.as_ptr(), ptr::null(), false, &mut net) }, FinclearStatus::Ok);
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { finclear_solve_mblp(net, &mut report) }, FinclearStatus::Property);
    assert!(last_error().contains("several CDS debtors"));
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { finclear_network_to_json(net, &mut json) }, FinclearStatus::Ok);
    assert!(take_string(json).contains("\"varmap\""));
    unsafe { finclear_network_free(net) };
    let delta = CString::new("1/2").unwrap();
    assert_eq!(
        unsafe { finclear_compile_circuit(circuit.as_ptr(), delta.as_ptr(), false, &mut net) },
        FinclearStatus::Input
    );
}

#[test]
fn header_compiles_as_c() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include/finclear.h");
    let text = std::fs::read_to_string(&header).expect("build script writes the header");
    for name in
        ["finclear_network_from_json", "finclear_solve_covered", "finclear_report_free", "FINCLEAR_STATUS_PROPERTY"]
    {
        assert!(text.contains(name), "{name} missing from header");
    }
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping compile check");
        return;
    }
    let tmp = tempfile::tempdir().unwrap();
    let source = tmp.path().join("use.c");
    std::fs::write(
        &source,
        r#"#include "finclear.h"
int run(const char *json) {
    FinclearNetwork *net = NULL;
    FinclearReport *report = NULL;
    if (finclear_network_from_json(json, &net) != FINCLEAR_STATUS_OK) return 1;
    FinclearStatus s = finclear_solve_covered(net, &report);
    int ok = s == FINCLEAR_STATUS_OK && finclear_report_passed(report);
    finclear_report_free(report);
    finclear_network_free(net);
    return ok ? 0 : 2;
}
"#,
    )
    .unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-c"])
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&source)
        .arg("-o")
        .arg(tmp.path().join("use.o"))
        .status()
        .unwrap();
    assert!(status.success());
}
