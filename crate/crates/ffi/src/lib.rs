//! C ABI over `cmdyn`.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free`. Every fallible call returns a
//! [`CmdynStatus`]; on failure `cmdyn_last_error` describes what went wrong
//! on the calling thread. Strings handed out by the library must be
//! released with `cmdyn_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cmdyn::cm::class_poly;
use cmdyn::dynamics::Cache;
use cmdyn::factor::{factor_with_seed, Factorization};
use cmdyn::pipeline::{self, PipelineError};
use cmdyn::poly::IntPoly;
use cmdyn::quadforms::class_number;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmdynStatus {
    Ok = 0,
    /// The computation ran but one of its checks failed.
    VerificationFailed = 1,
    InvalidArgument = 2,
    Internal = 3,
    NullPointer = 4,
    OutOfRange = 5,
    Panic = 6,
}

/// An integer polynomial in one variable.
pub struct CmdynPoly(IntPoly);

/// A complete factorization over the integers.
pub struct CmdynFactorization(Factorization);

/// The outcome of a pipeline command: a verdict plus a JSON document.
pub struct CmdynReport {
    ok: bool,
    json: CString,
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

fn fail(status: CmdynStatus, msg: impl Into<String>) -> CmdynStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> CmdynStatus) -> CmdynStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(CmdynStatus::Panic, msg)
        }
    }
}

fn pipeline_status(e: PipelineError) -> CmdynStatus {
    let status = match e {
        PipelineError::OutOfRange(_) => CmdynStatus::OutOfRange,
        _ => CmdynStatus::Internal,
    };
    fail(status, e.to_string())
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, CmdynStatus> {
    if s.is_null() {
        return Err(fail(CmdynStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(CmdynStatus::InvalidArgument, "string is not UTF-8"))
}

fn hand_out(s: String, out: *mut *mut c_char) -> CmdynStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            CmdynStatus::Ok
        }
        Err(_) => fail(CmdynStatus::Internal, "interior NUL in output"),
    }
}

macro_rules! nonnull {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            return fail(CmdynStatus::NullPointer, concat!(stringify!($p), " is null"));
        })+
    };
}

/// Message for the most recent failure on this thread, or NULL. The
/// pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn cmdyn_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cmdyn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `x^2 - 1` style text or the JSON form `{"var":"x","coeffs":[..]}`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cmdyn_poly_parse(text: *const c_char, out: *mut *mut CmdynPoly) -> CmdynStatus {
    guard(|| {
        nonnull!(out);
        let t = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match pipeline::parse_poly(t) {
            Ok(p) => {
                *out = Box::into_raw(Box::new(CmdynPoly(p)));
                CmdynStatus::Ok
            }
            Err(e) => fail(CmdynStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// # Safety
/// `p` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cmdyn_poly_free(p: *mut CmdynPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Degree, or -1 for the zero polynomial and for NULL.
///
/// # Safety
/// `p` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cmdyn_poly_degree(p: *const CmdynPoly) -> i64 {
    match p.as_ref() {
        Some(p) if !p.0.is_zero() => p.0.deg() as i64,
        _ => -1,
    }
}

/// Coefficient of `x^i` in decimal.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cmdyn_poly_coeff(p: *const CmdynPoly, i: usize, out: *mut *mut c_char) -> CmdynStatus {
    guard(|| {
        nonnull!(p, out);
        hand_out((*p).0.coeff(i).to_string(), out)
    })
}

/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cmdyn_poly_to_string(p: *const CmdynPoly, out: *mut *mut c_char) -> CmdynStatus {
    guard(|| {
        nonnull!(p, out);
        hand_out((*p).0.to_string(), out)
    })
}

/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cmdyn_poly_to_json(p: *const CmdynPoly, out: *mut *mut c_char) -> CmdynStatus {
    guard(|| {
        nonnull!(p, out);
        hand_out((*p).0.to_json_string(), out)
    })
}

/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cmdyn_factor(
    p: *const CmdynPoly,
    seed: u64,
    out: *mut *mut CmdynFactorization,
) -> CmdynStatus {
    guard(|| {
        nonnull!(p, out);
        let f = factor_with_seed(&(*p).0, seed);
        *out = Box::into_raw(Box::new(CmdynFactorization(f)));
        CmdynStatus::Ok
    })
}

/// # Safety
/// `f` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cmdyn_factorization_free(f: *mut CmdynFactorization) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Number of distinct irreducible factors; 0 for NULL.
///
/// # Safety
/// `f` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cmdyn_factorization_len(f: *const CmdynFactorization) -> usize {
    f.as_ref().map_or(0, |f| f.0.factors.len())
}

/// Copies out factor `i` and its multiplicity. The returned polynomial is
/// a new handle.
///
/// # Safety
/// `f` must be a live handle; `poly` and `mult` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cmdyn_factorization_get(
    f: *const CmdynFactorization,
    i: usize,
    poly: *mut *mut CmdynPoly,
    mult: *mut u32,
) -> CmdynStatus {
    guard(|| {
        nonnull!(f, poly, mult);
        let f = &*f;
        match f.0.factors.get(i) {
            Some((p, m)) => {
                *poly = Box::into_raw(Box::new(CmdynPoly(p.clone())));
                *mult = *m;
                CmdynStatus::Ok
            }
            None => fail(CmdynStatus::OutOfRange, format!("factor index {i} out of range")),
        }
    })
}

/// Class number of the order of discriminant `-d`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cmdyn_class_number(d: u64, out: *mut u64) -> CmdynStatus {
    guard(|| {
        nonnull!(out);
        match class_number(d) {
            Ok((h, _)) => {
                *out = h;
                CmdynStatus::Ok
            }
            Err(e) => fail(CmdynStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Class equation `H_{-d}` from complex multiplication.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cmdyn_class_poly(d: u64, out: *mut *mut CmdynPoly) -> CmdynStatus {
    guard(|| {
        nonnull!(out);
        match class_poly(d) {
            Ok(p) => {
                *out = Box::into_raw(Box::new(CmdynPoly(p)));
                CmdynStatus::Ok
            }
            Err(e) => fail(CmdynStatus::InvalidArgument, e.to_string()),
        }
    })
}

unsafe fn open_cache(dir: *const c_char) -> Result<Cache, CmdynStatus> {
    if dir.is_null() {
        return Ok(Cache::none());
    }
    let d = read_str(dir)?;
    Cache::open(d).map_err(|e| fail(CmdynStatus::Internal, e.to_string()))
}

fn emit<T: serde::Serialize>(ok: bool, report: &T, out: *mut *mut CmdynReport) -> CmdynStatus {
    let json = match serde_json::to_string(report).map(CString::new) {
        Ok(Ok(j)) => j,
        _ => return fail(CmdynStatus::Internal, "report serialization failed"),
    };
    unsafe { *out = Box::into_raw(Box::new(CmdynReport { ok, json })) };
    if ok {
        CmdynStatus::Ok
    } else {
        fail(CmdynStatus::VerificationFailed, "verification failed; see report")
    }
}

/// Factors `P_n` and labels its factors. `cache_dir` may be NULL. A report
/// is produced even when the status is `VerificationFailed`.
///
/// # Safety
/// `cache_dir` must be NULL or a NUL-terminated string; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn cmdyn_pn(
    n: u32,
    cache_dir: *const c_char,
    seed: u64,
    force: bool,
    out: *mut *mut CmdynReport,
) -> CmdynStatus {
    guard(|| {
        nonnull!(out);
        let cache = match open_cache(cache_dir) {
            Ok(c) => c,
            Err(s) => return s,
        };
        match pipeline::cmd_pn(n, &cache, seed, force) {
            Ok(r) => emit(r.ok(), &r, out),
            Err(e) => pipeline_status(e),
        }
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cmdyn_deuring(max_n: u32, out: *mut *mut CmdynReport) -> CmdynStatus {
    guard(|| {
        nonnull!(out);
        match pipeline::cmd_deuring(max_n) {
            Ok(rows) => emit(rows.iter().all(|r| r.ok), &rows, out),
            Err(e) => pipeline_status(e),
        }
    })
}

/// # Safety
/// `cache_dir` must be NULL or a NUL-terminated string; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn cmdyn_padic_verify(
    d: u64,
    prec: u32,
    cache_dir: *const c_char,
    seed: u64,
    out: *mut *mut CmdynReport,
) -> CmdynStatus {
    guard(|| {
        nonnull!(out);
        let cache = match open_cache(cache_dir) {
            Ok(c) => c,
            Err(s) => return s,
        };
        match pipeline::cmd_padic_verify(d, prec, &cache, seed) {
            Ok(r) => emit(r.ok(), &r, out),
            Err(e) => pipeline_status(e),
        }
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cmdyn_lambda_identity(terms: usize, seed: u64, out: *mut *mut CmdynReport) -> CmdynStatus {
    guard(|| {
        nonnull!(out);
        match pipeline::cmd_lambda_identity(terms, seed) {
            Ok(r) => emit(r.ok(), &r, out),
            Err(e) => pipeline_status(e),
        }
    })
}

/// # Safety
/// `r` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cmdyn_report_ok(r: *const CmdynReport) -> bool {
    r.as_ref().is_some_and(|r| r.ok)
}

/// Borrowed JSON text of the report, valid until the report is freed.
///
/// # Safety
/// `r` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cmdyn_report_json(r: *const CmdynReport) -> *const c_char {
    r.as_ref().map_or(ptr::null(), |r| r.json.as_ptr())
}

/// # Safety
/// `r` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cmdyn_report_free(r: *mut CmdynReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}
