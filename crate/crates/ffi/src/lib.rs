//! C interface to `ballmap`.
//!
//! Maps and decisions are opaque handles owned by the caller and released with the matching
//! `*_free` function. Strings returned through out-parameters are NUL-terminated UTF-8 and are
//! released with [`ballmap_string_free`]. Every function returns a [`BallmapStatus`]; on failure
//! [`ballmap_last_error`] describes the error on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ballmap::cli_io::commands::decision_json;
use ballmap::cli_io::{CliError, MapFile};
use ballmap::criterion::{decide_polynomial_equivalence, Decision, SearchConfig};
use ballmap::gallery::{self, FixtureParams};
use ballmap::hermitian::check_proper;
use ballmap::ratmap::RationalMap;

/// Result of every call; values match the command-line exit codes where they overlap.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BallmapStatus {
    Ok = 0,
    /// The decision procedure did not settle the question.
    Unknown = 1,
    ParseError = 2,
    ConstraintViolation = 3,
    VerificationFailed = 4,
    NullPointer = 5,
    InvalidUtf8 = 6,
    InternalError = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BallmapVerdict {
    Equivalent = 0,
    NotEquivalent = 1,
    Undecided = 2,
}

/// A validated rational map.
pub struct BallmapMap {
    file: MapFile,
    map: RationalMap,
}

/// The outcome of [`ballmap_decide`].
pub struct BallmapDecision {
    verdict: BallmapVerdict,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: BallmapStatus, msg: impl Into<String>) -> BallmapStatus {
    set_error(msg);
    status
}

fn from_cli(e: CliError) -> BallmapStatus {
    let status = match e {
        CliError::Parse(_) => BallmapStatus::ParseError,
        CliError::Constraint(_) => BallmapStatus::ConstraintViolation,
        CliError::Verification(_) => BallmapStatus::VerificationFailed,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> BallmapStatus) -> BallmapStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| p.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "panic".into());
        fail(BallmapStatus::InternalError, msg)
    })
}

unsafe fn input<'a>(s: *const c_char) -> Result<&'a str, BallmapStatus> {
    if s.is_null() {
        return Err(fail(BallmapStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s).to_str().map_err(|e| fail(BallmapStatus::InvalidUtf8, e.to_string()))
}

fn output(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior NUL").into_raw()
}

macro_rules! non_null {
    ($($p:expr),+) => {
        if $($p.is_null())||+ {
            return fail(BallmapStatus::NullPointer, "null pointer argument");
        }
    };
}

/// Message for the last failed call on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn ballmap_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ballmap_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and validates a map file given as JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ballmap_map_from_json(
    json: *const c_char,
    seed: u64,
    out: *mut *mut BallmapMap,
) -> BallmapStatus {
    guard(|| {
        non_null!(out);
        *out = ptr::null_mut();
        let text = match input(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let file = match MapFile::from_json(text) {
            Ok(f) => f,
            Err(e) => return from_cli(e),
        };
        match file.to_map(seed) {
            Ok(map) => {
                *out = Box::into_raw(Box::new(BallmapMap { file, map }));
                BallmapStatus::Ok
            }
            Err(e) => from_cli(e),
        }
    })
}

/// Releases a map. Null is ignored.
///
/// # Safety
/// `map` must come from [`ballmap_map_from_json`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ballmap_map_free(map: *mut BallmapMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Source dimension `n`, target dimension `N` and degree.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ballmap_map_info(
    map: *const BallmapMap,
    n: *mut usize,
    big_n: *mut usize,
    degree: *mut u32,
) -> BallmapStatus {
    guard(|| {
        non_null!(map, n, big_n, degree);
        let f = &(*map).map;
        *n = f.n();
        *big_n = f.big_n();
        *degree = f.degree();
        BallmapStatus::Ok
    })
}

/// The map re-serialized as a map file.
///
/// # Safety
/// `map` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ballmap_map_to_json(map: *const BallmapMap, out: *mut *mut c_char) -> BallmapStatus {
    guard(|| {
        non_null!(map, out);
        let m = &*map;
        *out = output(MapFile::from_map(&m.map, Some(m.file.variables.clone())).to_json());
        BallmapStatus::Ok
    })
}

/// Writes whether the map is proper; `VerificationFailed` is not used for an improper map.
///
/// # Safety
/// `map` and `proper` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ballmap_check_proper(map: *const BallmapMap, seed: u64, proper: *mut bool) -> BallmapStatus {
    guard(|| {
        non_null!(map, proper);
        *proper = check_proper(&(*map).map, 32, seed).is_proper();
        BallmapStatus::Ok
    })
}

/// Runs the equivalence decision. An improper map is a constraint violation.
///
/// # Safety
/// `map` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ballmap_decide(
    map: *const BallmapMap,
    budget: usize,
    seed: u64,
    out: *mut *mut BallmapDecision,
) -> BallmapStatus {
    guard(|| {
        non_null!(map, out);
        *out = ptr::null_mut();
        let m = &*map;
        let cfg = SearchConfig { budget, seed, ..SearchConfig::default() };
        let d = match decide_polynomial_equivalence(&m.map, &cfg) {
            Ok(d) => d,
            Err(e) => return fail(BallmapStatus::ConstraintViolation, e.to_string()),
        };
        let verdict = match d {
            Decision::Equivalent { .. } => BallmapVerdict::Equivalent,
            Decision::NotEquivalent { .. } => BallmapVerdict::NotEquivalent,
            Decision::Unknown { .. } => BallmapVerdict::Undecided,
        };
        let (label, payload) = decision_json(&m.file.variables, &m.map, &d);
        let body = serde_json::json!({ "verdict": label, "payload": payload }).to_string();
        *out = Box::into_raw(Box::new(BallmapDecision { verdict, json: CString::new(body).expect("json has no NUL") }));
        if verdict == BallmapVerdict::Undecided {
            set_error("undecided");
            BallmapStatus::Unknown
        } else {
            BallmapStatus::Ok
        }
    })
}

/// # Safety
/// `d` and `verdict` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ballmap_decision_verdict(
    d: *const BallmapDecision,
    verdict: *mut BallmapVerdict,
) -> BallmapStatus {
    guard(|| {
        non_null!(d, verdict);
        *verdict = (*d).verdict;
        BallmapStatus::Ok
    })
}

/// Witness or certificate as JSON; the pointer is owned by the decision.
///
/// # Safety
/// `d` must be a valid decision.
#[no_mangle]
pub unsafe extern "C" fn ballmap_decision_json(d: *const BallmapDecision) -> *const c_char {
    if d.is_null() {
        return ptr::null();
    }
    (*d).json.as_ptr()
}

/// Releases a decision. Null is ignored.
///
/// # Safety
/// `d` must come from [`ballmap_decide`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ballmap_decision_free(d: *mut BallmapDecision) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Runs a named example with default parameters and writes its report as JSON. A failing check
/// yields `VerificationFailed` with the report still written.
///
/// # Safety
/// `id` must be a NUL-terminated string and `report` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ballmap_verify_example(id: *const c_char, report: *mut *mut c_char) -> BallmapStatus {
    guard(|| {
        non_null!(report);
        *report = ptr::null_mut();
        let id = match input(id) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match gallery::verify_example(id, &FixtureParams::default(), &SearchConfig::default()) {
            Ok(r) => {
                *report = output(serde_json::to_string(&r).expect("report serializes"));
                if r.passed {
                    BallmapStatus::Ok
                } else {
                    fail(BallmapStatus::VerificationFailed, format!("example {id} has failing checks"))
                }
            }
            Err(gallery::GalleryError::UnknownId(s)) => {
                fail(BallmapStatus::ParseError, format!("unknown example {s:?}"))
            }
            Err(e) => fail(BallmapStatus::ConstraintViolation, e.to_string()),
        }
    })
}
