//! C ABI for the checker.
//!
//! Documents are opaque handles. Every function returns an [`MschStatus`]. On
//! failure [`msch_last_error_message`] describes the error for the calling
//! thread. Strings handed out by this library must be released with
//! [`msch_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mscheme::cli::{eval, parse_expr, run_suite, Definitions, DocError, ResolveOptions, Suite, SuiteOptions};
use mscheme::fpcat::ExplicitRing;
use mscheme::kernel::{factor, Poly};
use mscheme::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MschStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    UnresolvedReference = 4,
    VersionMismatch = 5,
    InvalidDefinition = 6,
    UnknownSuite = 7,
    DegreeBound = 8,
    Unsupported = 9,
    Internal = 10,
}

/// A parsed and resolved definition document.
pub struct MschDocument {
    defs: Definitions,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: MschStatus, msg: impl Into<String>) -> MschStatus {
    set_error(msg);
    status
}

fn doc_status(e: &DocError) -> MschStatus {
    match e {
        DocError::Parse { .. } => MschStatus::ParseError,
        DocError::UnresolvedReference { .. } => MschStatus::UnresolvedReference,
        DocError::VersionMismatch { .. } => MschStatus::VersionMismatch,
        DocError::Invalid { .. } => MschStatus::InvalidDefinition,
    }
}

fn core_status(e: &Error) -> MschStatus {
    match e {
        Error::DegreeBoundExceeded { .. } => MschStatus::DegreeBound,
        Error::UnsupportedRing(_) => MschStatus::Unsupported,
        _ => MschStatus::Internal,
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, MschStatus> {
    if p.is_null() {
        return Err(fail(MschStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(MschStatus::InvalidUtf8, "argument is not UTF-8"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> MschStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            MschStatus::Ok
        }
        Err(_) => fail(MschStatus::Internal, "output contains a nul byte"),
    }
}

/// Runs `f`, turning panics into `Internal`.
fn guard(f: impl FnOnce() -> MschStatus) -> MschStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(MschStatus::Internal, "internal panic"),
    }
}

fn poly_arg(text: &str, var: &str) -> Result<Poly, MschStatus> {
    let e = parse_expr(text).map_err(|e| fail(doc_status(&e), e.to_string()))?;
    match eval(&e, &ExplicitRing::poly(var)) {
        Ok(p) => Ok(p.as_p().clone()),
        Err(e) => Err(fail(doc_status(&e), e.to_string())),
    }
}

/// Parses and resolves a definition document; `*out` receives the handle.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn msch_document_parse(text: *const c_char, out: *mut *mut MschDocument) -> MschStatus {
    guard(|| {
        if out.is_null() {
            return fail(MschStatus::NullPointer, "null output pointer");
        }
        *out = ptr::null_mut();
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match Definitions::parse(text, &ResolveOptions::default()) {
            Ok(defs) => {
                *out = Box::into_raw(Box::new(MschDocument { defs }));
                MschStatus::Ok
            }
            Err(e) => fail(doc_status(&e), e.to_string()),
        }
    })
}

/// Number of top-level declarations in the document.
///
/// # Safety
/// `doc` must come from [`msch_document_parse`] and not be freed.
#[no_mangle]
pub unsafe extern "C" fn msch_document_len(doc: *const MschDocument, out: *mut usize) -> MschStatus {
    if doc.is_null() || out.is_null() {
        return fail(MschStatus::NullPointer, "null argument");
    }
    *out = (*doc).defs.document.items.len();
    MschStatus::Ok
}

/// Canonical text of the document.
///
/// # Safety
/// `doc` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn msch_document_to_text(doc: *const MschDocument, out: *mut *mut c_char) -> MschStatus {
    if doc.is_null() || out.is_null() {
        return fail(MschStatus::NullPointer, "null argument");
    }
    write_string(out, (*doc).defs.document.to_text())
}

/// # Safety
/// `doc` must be null or a handle from [`msch_document_parse`], freed once.
#[no_mangle]
pub unsafe extern "C" fn msch_document_free(doc: *mut MschDocument) {
    if !doc.is_null() {
        drop(Box::from_raw(doc));
    }
}

/// Runs a suite and writes the JSON report to `*out_json`. With
/// `include_timing` false the report is byte-for-byte reproducible.
/// `*out_exit` receives the command line exit code (0, 1 or 3).
///
/// # Safety
/// `doc` must be a live handle; `suite` a nul-terminated string; the output
/// pointers valid.
#[no_mangle]
pub unsafe extern "C" fn msch_run_suite(
    doc: *const MschDocument,
    suite: *const c_char,
    seed: u64,
    strict: bool,
    include_timing: bool,
    out_json: *mut *mut c_char,
    out_exit: *mut i32,
) -> MschStatus {
    guard(|| {
        if doc.is_null() || out_json.is_null() || out_exit.is_null() {
            return fail(MschStatus::NullPointer, "null argument");
        }
        let name = match read_str(suite) {
            Ok(s) => s,
            Err(s) => return s,
        };
        let suite: Suite = match name.parse() {
            Ok(s) => s,
            Err(e) => return fail(MschStatus::UnknownSuite, format!("{e}")),
        };
        let opts = SuiteOptions { seed, ..SuiteOptions::default() };
        let report = run_suite(&(*doc).defs, suite, &opts);
        *out_exit = report.exit_code(strict);
        write_string(out_json, if include_timing { report.to_json() } else { report.body_json() })
    })
}

/// `gcd(a, b)` (monic) of two polynomials in `var`, as text.
///
/// # Safety
/// All string arguments must be nul-terminated; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn msch_poly_gcd(
    a: *const c_char,
    b: *const c_char,
    var: *const c_char,
    out: *mut *mut c_char,
) -> MschStatus {
    guard(|| {
        if out.is_null() {
            return fail(MschStatus::NullPointer, "null output pointer");
        }
        let (a, b, var) = match (read_str(a), read_str(b), read_str(var)) {
            (Ok(a), Ok(b), Ok(v)) => (a, b, v),
            (Err(s), _, _) | (_, Err(s), _) | (_, _, Err(s)) => return s,
        };
        match (poly_arg(a, var), poly_arg(b, var)) {
            (Ok(p), Ok(q)) => write_string(out, Poly::gcd(&p, &q).display(var)),
            (Err(s), _) | (_, Err(s)) => s,
        }
    })
}

/// Factorization over `Q` as JSON:
/// `{"lead": "c", "factors": [{"factor": "...", "multiplicity": k}, ...]}`.
///
/// # Safety
/// String arguments must be nul-terminated; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn msch_poly_factor(
    p: *const c_char,
    var: *const c_char,
    degree_bound: usize,
    out: *mut *mut c_char,
) -> MschStatus {
    guard(|| {
        if out.is_null() {
            return fail(MschStatus::NullPointer, "null output pointer");
        }
        let (p, var) = match (read_str(p), read_str(var)) {
            (Ok(p), Ok(v)) => (p, v),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let p = match poly_arg(p, var) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match factor(&p, degree_bound) {
            Ok(f) => {
                let factors: Vec<serde_json::Value> = f
                    .factors
                    .iter()
                    .map(|(g, k)| serde_json::json!({ "factor": g.display(var), "multiplicity": k }))
                    .collect();
                let v = serde_json::json!({ "lead": f.lead.to_string(), "factors": factors });
                write_string(out, v.to_string())
            }
            Err(e) => fail(core_status(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn msch_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, or null. Valid until the next
/// call into the library from the same thread.
#[no_mangle]
pub extern "C" fn msch_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, static.
#[no_mangle]
pub extern "C" fn msch_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
