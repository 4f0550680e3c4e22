use std::ffi::{CStr, CString};
use std::ptr;

use mscheme_ffi::*;

const P1: &str = include_str!("../../../docs/fixtures/projective_line.msch");

fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { msch_string_free(s) };
    out
}

fn last_error() -> String {
    let p = msch_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn parse(text: &str) -> (MschStatus, *mut MschDocument) {
    let c = CString::new(text).unwrap();
    let mut doc = ptr::null_mut();
    let st = unsafe { msch_document_parse(c.as_ptr(), &mut doc) };
    (st, doc)
}

fn run(doc: *const MschDocument, suite: &str, timing: bool) -> (MschStatus, String, i32) {
    let suite = CString::new(suite).unwrap();
    let mut json = ptr::null_mut();
    let mut exit = -1;
    let st = unsafe { msch_run_suite(doc, suite.as_ptr(), 7, false, timing, &mut json, &mut exit) };
    let json = if st == MschStatus::Ok { take(json) } else { String::new() };
    (st, json, exit)
}

#[test]
fn projective_line_passes_through_the_abi() {
    let (st, doc) = parse(P1);
    assert_eq!(st, MschStatus::Ok);
    let mut n = 0;
    assert_eq!(unsafe { msch_document_len(doc, &mut n) }, MschStatus::Ok);
    assert!(n > 0);
    let (st, a, exit) = run(doc, "all", false);
    assert_eq!(st, MschStatus::Ok);
    assert_eq!(exit, 0);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["summary"]["fail"], 0);
    assert!(v.get("timing").is_none());
    let (_, b, _) = run(doc, "all", false);
    assert_eq!(a, b);
    let (_, c, _) = run(doc, "all", true);
    assert!(serde_json::from_str::<serde_json::Value>(&c).unwrap().get("timing").is_some());
    unsafe { msch_document_free(doc) };
}

#[test]
fn canonical_text_reparses() {
    let (_, doc) = parse(P1);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { msch_document_to_text(doc, &mut s) }, MschStatus::Ok);
    let text = take(s);
    let (st, doc2) = parse(&text);
    assert_eq!(st, MschStatus::Ok);
    let mut s2 = ptr::null_mut();
    unsafe { msch_document_to_text(doc2, &mut s2) };
    assert_eq!(take(s2), text);
    unsafe {
        msch_document_free(doc);
        msch_document_free(doc2);
    }
}

#[test]
fn error_codes() {
    let (st, doc) = parse("ring R = poly x\nmonoid M = ring S\n");
    assert_eq!(st, MschStatus::UnresolvedReference);
    assert!(doc.is_null());
    assert!(last_error().contains('S'));

    assert_eq!(parse("ring R = poly\n").0, MschStatus::ParseError);
    assert_eq!(parse("version 9\n").0, MschStatus::VersionMismatch);
    assert_eq!(parse("ring R = poly x\nring R = poly y\n").0, MschStatus::InvalidDefinition);

    let (st, doc) = parse("");
    assert_eq!(st, MschStatus::Ok);
    let (st, _, _) = run(doc, "bogus", false);
    assert_eq!(st, MschStatus::UnknownSuite);
    let (st, json, exit) = run(doc, "all", false);
    assert_eq!((st, exit), (MschStatus::Ok, 0));
    assert_eq!(serde_json::from_str::<serde_json::Value>(&json).unwrap()["checks"].as_array().unwrap().len(), 0);
    unsafe { msch_document_free(doc) };

    let mut out = ptr::null_mut();
    assert_eq!(unsafe { msch_document_parse(ptr::null(), &mut out) }, MschStatus::NullPointer);
    let bad = [0xffu8, 0];
    assert_eq!(unsafe { msch_document_parse(bad.as_ptr().cast(), &mut out) }, MschStatus::InvalidUtf8);
    unsafe { msch_document_free(ptr::null_mut()) };
    unsafe { msch_string_free(ptr::null_mut()) };
}

#[test]
fn polynomials() {
    let c = |s: &str| CString::new(s).unwrap();
    let (a, b, x) = (c("x^3 - x"), c("2*x^2 - 2"), c("x"));
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { msch_poly_gcd(a.as_ptr(), b.as_ptr(), x.as_ptr(), &mut out) }, MschStatus::Ok);
    let g = take(out);
    let (st, doc) = parse(&format!("ring R = quotient x by {g}\nring S = quotient x by x^2 - 1\n"));
    assert_eq!(st, MschStatus::Ok, "{g}");
    unsafe { msch_document_free(doc) };

    let p = c("2*x^4 - 2");
    assert_eq!(unsafe { msch_poly_factor(p.as_ptr(), x.as_ptr(), 12, &mut out) }, MschStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["lead"], "2");
    let fs = v["factors"].as_array().unwrap();
    assert_eq!(fs.len(), 3);
    assert!(fs.iter().all(|f| f["multiplicity"] == 1));

    let y = c("y");
    assert_eq!(unsafe { msch_poly_factor(p.as_ptr(), y.as_ptr(), 12, &mut out) }, MschStatus::InvalidDefinition);
    let bad = c("x +");
    assert_eq!(unsafe { msch_poly_factor(bad.as_ptr(), x.as_ptr(), 12, &mut out) }, MschStatus::ParseError);
}

#[test]
fn header_matches_exports() {
    let h = include_str!("../include/mscheme.h");
    for f in [
        "msch_document_parse",
        "msch_document_len",
        "msch_document_to_text",
        "msch_document_free",
        "msch_run_suite",
        "msch_poly_gcd",
        "msch_poly_factor",
        "msch_string_free",
        "msch_last_error_message",
        "msch_version",
        "MSCH_STATUS_UNRESOLVED_REFERENCE",
        "typedef struct MschDocument MschDocument",
    ] {
        assert!(h.contains(f), "{f} missing from header");
    }
    let v = unsafe { CStr::from_ptr(msch_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = std::process::Command::new("cc").arg("--version").output() else {
        eprintln!("no C compiler, skipping");
        return;
    };
    assert!(cc.status.success());
    let dir = env!("CARGO_MANIFEST_DIR");
    let st = std::process::Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(format!("{dir}/include"))
        .arg(format!("{dir}/examples/smoke.c"))
        .status()
        .unwrap();
    assert!(st.success());
}
