//! C ABI for the ilsgraph library.
//!
//! Conventions: instances are opaque handles created from JSON and released
//! with the matching `_free` function; results come back as allocated JSON
//! strings released with [`ilsg_string_free`]; every function returns an
//! [`IlsgStatus`], and a human-readable message for the most recent failure
//! on the calling thread is available from [`ilsg_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ilsgraph::canonical::{canonical_path, match_canonical};
use ilsgraph::error::Error;
use ilsgraph::graph::is_connected;
use ilsgraph::io::{analyze, matrix_from_json, rhs_from_json};
use ilsgraph::matrix::{CoeffMatrix, DomainBound, Point, RhsVector};
use ilsgraph::witness::{analytic_witness, decide_universal, search_witness};

/// Status codes, aligned with the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IlsgStatus {
    /// Success.
    Ok = 0,
    /// Internal invariant failure; indicates a library bug.
    Defect = 1,
    /// The request exceeds an enumeration or search guard.
    Capability = 2,
    /// Malformed input: bad JSON, bad dimensions, or a null pointer.
    InvalidInput = 3,
}

/// Witness construction strategy.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IlsgWitnessMethod {
    /// Analytic construction first, complete search as fallback.
    Auto = 0,
    /// Analytic construction only; yields null when it does not apply.
    Analytic = 1,
    /// Complete right-hand-side scan.
    Search = 2,
}

/// Opaque coefficient matrix handle.
pub struct IlsgMatrix {
    inner: CoeffMatrix,
}

/// Opaque right-hand-side vector handle.
pub struct IlsgRhs {
    inner: RhsVector,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn record_error(status: IlsgStatus, message: &str) -> IlsgStatus {
    let stored = CString::new(message.replace('\0', " "))
        .unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(stored));
    status
}

fn record(error: Error) -> IlsgStatus {
    let status = match error {
        Error::Input(_) => IlsgStatus::InvalidInput,
        Error::Capability(_) => IlsgStatus::Capability,
        Error::Defect(_) => IlsgStatus::Defect,
    };
    record_error(status, &error.to_string())
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn guarded(body: impl FnOnce() -> IlsgStatus) -> IlsgStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => record_error(IlsgStatus::Defect, "panic across the C boundary"),
    }
}

unsafe fn required_str<'a>(pointer: *const c_char, what: &str) -> Result<&'a str, IlsgStatus> {
    if pointer.is_null() {
        return Err(record_error(
            IlsgStatus::InvalidInput,
            &format!("{what} pointer is null"),
        ));
    }
    CStr::from_ptr(pointer)
        .to_str()
        .map_err(|_| record_error(IlsgStatus::InvalidInput, &format!("{what} is not UTF-8")))
}

fn emit_json<T: serde::Serialize>(value: &T, out_json: *mut *mut c_char) -> IlsgStatus {
    if out_json.is_null() {
        return record_error(IlsgStatus::InvalidInput, "output pointer is null");
    }
    let text = match serde_json::to_string(value) {
        Ok(text) => text,
        Err(e) => return record_error(IlsgStatus::Defect, &format!("serialization failed: {e}")),
    };
    match CString::new(text) {
        Ok(string) => {
            unsafe { *out_json = string.into_raw() };
            clear_error();
            IlsgStatus::Ok
        }
        Err(_) => record_error(IlsgStatus::Defect, "serialized JSON contained NUL"),
    }
}

unsafe fn matrix_ref<'a>(handle: *const IlsgMatrix) -> Result<&'a CoeffMatrix, IlsgStatus> {
    if handle.is_null() {
        return Err(record_error(
            IlsgStatus::InvalidInput,
            "matrix handle is null",
        ));
    }
    Ok(&(*handle).inner)
}

unsafe fn rhs_ref<'a>(handle: *const IlsgRhs) -> Result<&'a RhsVector, IlsgStatus> {
    if handle.is_null() {
        return Err(record_error(IlsgStatus::InvalidInput, "rhs handle is null"));
    }
    Ok(&(*handle).inner)
}

fn bound(d: u32) -> Result<DomainBound, IlsgStatus> {
    DomainBound::new(d).map_err(record)
}

/// Parse a coefficient matrix from its JSON document. On success `*out`
/// owns a new handle; release it with [`ilsg_matrix_free`].
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ilsg_matrix_from_json(
    json: *const c_char,
    out: *mut *mut IlsgMatrix,
) -> IlsgStatus {
    guarded(|| {
        if out.is_null() {
            return record_error(IlsgStatus::InvalidInput, "output pointer is null");
        }
        let text = match required_str(json, "matrix JSON") {
            Ok(text) => text,
            Err(status) => return status,
        };
        match matrix_from_json(text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(IlsgMatrix { inner }));
                clear_error();
                IlsgStatus::Ok
            }
            Err(e) => record(e),
        }
    })
}

/// Release a matrix handle. Null is accepted and ignored.
///
/// # Safety
/// `matrix` must be null or a pointer returned by [`ilsg_matrix_from_json`]
/// that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn ilsg_matrix_free(matrix: *mut IlsgMatrix) {
    if !matrix.is_null() {
        drop(Box::from_raw(matrix));
    }
}

/// Parse a right-hand-side vector from its JSON document.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ilsg_rhs_from_json(
    json: *const c_char,
    out: *mut *mut IlsgRhs,
) -> IlsgStatus {
    guarded(|| {
        if out.is_null() {
            return record_error(IlsgStatus::InvalidInput, "output pointer is null");
        }
        let text = match required_str(json, "vector JSON") {
            Ok(text) => text,
            Err(status) => return status,
        };
        match rhs_from_json(text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(IlsgRhs { inner }));
                clear_error();
                IlsgStatus::Ok
            }
            Err(e) => record(e),
        }
    })
}

/// Release a vector handle. Null is accepted and ignored.
///
/// # Safety
/// `rhs` must be null or a pointer returned by [`ilsg_rhs_from_json`] that
/// has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn ilsg_rhs_free(rhs: *mut IlsgRhs) {
    if !rhs.is_null() {
        drop(Box::from_raw(rhs));
    }
}

/// Sign-structure report (sign pattern, greedy reduction, elimination
/// ordering, minimal forbidden pattern) as JSON.
///
/// # Safety
/// `matrix` must be a live handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ilsg_analyze(
    matrix: *const IlsgMatrix,
    out_json: *mut *mut c_char,
) -> IlsgStatus {
    guarded(|| {
        let a = match matrix_ref(matrix) {
            Ok(a) => a,
            Err(status) => return status,
        };
        match analyze(a) {
            Ok(report) => emit_json(&report, out_json),
            Err(e) => record(e),
        }
    })
}

/// Connectivity report of the instance `(A, b, d)` as JSON.
///
/// # Safety
/// `matrix` and `rhs` must be live handles and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ilsg_check(
    matrix: *const IlsgMatrix,
    rhs: *const IlsgRhs,
    d: u32,
    out_json: *mut *mut c_char,
) -> IlsgStatus {
    guarded(|| {
        let a = match matrix_ref(matrix) {
            Ok(a) => a,
            Err(status) => return status,
        };
        let b = match rhs_ref(rhs) {
            Ok(b) => b,
            Err(status) => return status,
        };
        let d = match bound(d) {
            Ok(d) => d,
            Err(status) => return status,
        };
        match is_connected(a, b, d) {
            Ok(report) => emit_json(&report, out_json),
            Err(e) => record(e),
        }
    })
}

/// Disconnection witness as JSON, or the JSON literal `null` when the
/// requested method produces none.
///
/// # Safety
/// `matrix` must be a live handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ilsg_witness(
    matrix: *const IlsgMatrix,
    d: u32,
    method: IlsgWitnessMethod,
    out_json: *mut *mut c_char,
) -> IlsgStatus {
    guarded(|| {
        let a = match matrix_ref(matrix) {
            Ok(a) => a,
            Err(status) => return status,
        };
        let d = match bound(d) {
            Ok(d) => d,
            Err(status) => return status,
        };
        let result = match method {
            IlsgWitnessMethod::Analytic => analytic_witness(a, d),
            IlsgWitnessMethod::Search => search_witness(a, d),
            IlsgWitnessMethod::Auto => analytic_witness(a, d).and_then(|found| match found {
                Some(witness) => Ok(Some(witness)),
                None => search_witness(a, d),
            }),
        };
        match result {
            Ok(witness) => emit_json(&witness, out_json),
            Err(e) => record(e),
        }
    })
}

/// Universal-connectedness verdict at the given domain bound, as JSON.
///
/// # Safety
/// `matrix` must be a live handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ilsg_decide(
    matrix: *const IlsgMatrix,
    d: u32,
    out_json: *mut *mut c_char,
) -> IlsgStatus {
    guarded(|| {
        let a = match matrix_ref(matrix) {
            Ok(a) => a,
            Err(status) => return status,
        };
        let d = match bound(d) {
            Ok(d) => d,
            Err(status) => return status,
        };
        match decide_universal(a, d) {
            Ok(verdict) => emit_json(&verdict, out_json),
            Err(e) => record(e),
        }
    })
}

/// Permutations mapping a 4x3 matrix onto the canonical sign pattern, as
/// JSON, or `null` when no permutations work.
///
/// # Safety
/// `matrix` must be a live handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ilsg_canonical_match(
    matrix: *const IlsgMatrix,
    out_json: *mut *mut c_char,
) -> IlsgStatus {
    guarded(|| {
        let a = match matrix_ref(matrix) {
            Ok(a) => a,
            Err(status) => return status,
        };
        match match_canonical(&a.sign_pattern()) {
            Ok(matched) => emit_json(&matched, out_json),
            Err(e) => record(e),
        }
    })
}

unsafe fn read_point(values: *const u32, len: usize, what: &str) -> Result<Point, IlsgStatus> {
    if values.is_null() {
        return Err(record_error(
            IlsgStatus::InvalidInput,
            &format!("{what} pointer is null"),
        ));
    }
    Ok(std::slice::from_raw_parts(values, len).to_vec())
}

/// Explicit connecting path between two feasible points of a canonical 4x3
/// instance, as JSON.
///
/// # Safety
/// `matrix` and `rhs` must be live handles; `from`/`to` must point to
/// `from_len`/`to_len` readable `uint32_t` values; `out_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ilsg_canonical_path(
    matrix: *const IlsgMatrix,
    rhs: *const IlsgRhs,
    d: u32,
    from: *const u32,
    from_len: usize,
    to: *const u32,
    to_len: usize,
    out_json: *mut *mut c_char,
) -> IlsgStatus {
    guarded(|| {
        let a = match matrix_ref(matrix) {
            Ok(a) => a,
            Err(status) => return status,
        };
        let b = match rhs_ref(rhs) {
            Ok(b) => b,
            Err(status) => return status,
        };
        let d = match bound(d) {
            Ok(d) => d,
            Err(status) => return status,
        };
        let start = match read_point(from, from_len, "start point") {
            Ok(p) => p,
            Err(status) => return status,
        };
        let goal = match read_point(to, to_len, "goal point") {
            Ok(p) => p,
            Err(status) => return status,
        };
        match canonical_path(a, b, d, &start, &goal) {
            Ok(path) => emit_json(&path, out_json),
            Err(e) => record(e),
        }
    })
}

/// Release a string returned by any of the JSON-producing functions. Null
/// is accepted and ignored.
///
/// # Safety
/// `text` must be null or an unfreed pointer produced by this library.
#[no_mangle]
pub unsafe extern "C" fn ilsg_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

/// Message of the most recent failure on this thread, as a newly allocated
/// string (release with [`ilsg_string_free`]), or null when the last call
/// succeeded.
#[no_mangle]
pub extern "C" fn ilsg_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(message) => message.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn ilsg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
