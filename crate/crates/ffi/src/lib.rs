//! C ABI over `ra_kit`. Objects are opaque handles released with the
//! matching `_free` function; every fallible call returns an [`RaStatus`]
//! and leaves a message for [`ra_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ra_kit::{ApVerdict, DecideOptions, Element, Network, RelationAlgebra};

/// Result of a call. `RA_STATUS_NEGATIVE` is a successful "no" answer.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RaStatus {
    Ok = 0,
    Negative = 1,
    ParseError = 2,
    NullPointer = 3,
    InvalidArgument = 4,
    Budget = 5,
    Internal = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RaVerdict {
    Yes = 0,
    No = 1,
    Indeterminate = 2,
}

/// A parsed relation algebra.
pub struct RaAlgebra(RelationAlgebra);

/// A constraint network over some algebra.
pub struct RaNetwork(Network);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

type Failure = (RaStatus, String);

fn guard(f: impl FnOnce() -> Result<RaStatus, Failure>) -> RaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => {
            set_error("");
            status
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            RaStatus::Internal
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| (RaStatus::NullPointer, format!("{what} is null")))
}

unsafe fn c_str<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err((RaStatus::NullPointer, "text is null".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|e| (RaStatus::InvalidArgument, e.to_string()))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err((RaStatus::NullPointer, "output pointer is null".into()));
    }
    out.write(value);
    Ok(())
}

fn bits(ra: &RelationAlgebra, x: u64) -> Result<Element, Failure> {
    let x = Element::from_bits(x);
    if x.leq(ra.top()) {
        Ok(x)
    } else {
        Err((RaStatus::InvalidArgument, "element uses bits beyond the atom count".into()))
    }
}

/// Message for the last failing call on this thread, or "" after a
/// success. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ra_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses an algebra file.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ra_algebra_parse(text: *const c_char, out: *mut *mut RaAlgebra) -> RaStatus {
    guard(|| {
        let ra = RelationAlgebra::parse(c_str(text)?).map_err(|e| (RaStatus::ParseError, e.to_string()))?;
        put(out, Box::into_raw(Box::new(RaAlgebra(ra))))?;
        Ok(RaStatus::Ok)
    })
}

/// # Safety
/// `ra` must come from [`ra_algebra_parse`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ra_algebra_free(ra: *mut RaAlgebra) {
    if !ra.is_null() {
        drop(Box::from_raw(ra));
    }
}

/// Number of atoms, or 0 for a null handle.
///
/// # Safety
/// `ra` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ra_algebra_atom_count(ra: *const RaAlgebra) -> usize {
    ra.as_ref().map_or(0, |ra| ra.0.k())
}

/// Checks the algebra laws; `RA_STATUS_NEGATIVE` if any fail, with the
/// number of violations in `out_violations`.
///
/// # Safety
/// `ra` must be a live handle and `out_violations` writable.
#[no_mangle]
pub unsafe extern "C" fn ra_algebra_validate(ra: *const RaAlgebra, out_violations: *mut usize) -> RaStatus {
    guard(|| {
        let report = deref(ra, "algebra")?.0.validate();
        put(out_violations, report.violations.len())?;
        Ok(if report.is_clean() { RaStatus::Ok } else { RaStatus::Negative })
    })
}

/// Parses an element such as `"lt,eq"`, `"0"` or `"1"` into atom bits.
///
/// # Safety
/// `ra` must be a live handle, `text` NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ra_element_parse(ra: *const RaAlgebra, text: *const c_char, out: *mut u64) -> RaStatus {
    guard(|| {
        let x = deref(ra, "algebra")?.0.parse_element(c_str(text)?).map_err(|e| (RaStatus::ParseError, e.to_string()))?;
        put(out, x.bits())?;
        Ok(RaStatus::Ok)
    })
}

/// Composition of two elements given as atom bitmasks.
///
/// # Safety
/// `ra` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ra_compose(ra: *const RaAlgebra, x: u64, y: u64, out: *mut u64) -> RaStatus {
    guard(|| {
        let ra = &deref(ra, "algebra")?.0;
        put(out, ra.compose(bits(ra, x)?, bits(ra, y)?).bits())?;
        Ok(RaStatus::Ok)
    })
}

/// # Safety
/// `ra` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ra_converse(ra: *const RaAlgebra, x: u64, out: *mut u64) -> RaStatus {
    guard(|| {
        let ra = &deref(ra, "algebra")?.0;
        put(out, ra.converse(bits(ra, x)?).bits())?;
        Ok(RaStatus::Ok)
    })
}

/// Parses a network file against `ra`.
///
/// # Safety
/// `ra` must be a live handle, `text` NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ra_network_parse(
    ra: *const RaAlgebra,
    text: *const c_char,
    out: *mut *mut RaNetwork,
) -> RaStatus {
    guard(|| {
        let ra = &deref(ra, "algebra")?.0;
        let net = Network::parse(ra, c_str(text)?).map_err(|e| (RaStatus::ParseError, e.to_string()))?;
        put(out, Box::into_raw(Box::new(RaNetwork(net))))?;
        Ok(RaStatus::Ok)
    })
}

/// # Safety
/// `net` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ra_network_free(net: *mut RaNetwork) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// Number of nodes, or 0 for a null handle.
///
/// # Safety
/// `net` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ra_network_node_count(net: *const RaNetwork) -> usize {
    net.as_ref().map_or(0, |n| n.0.len())
}

/// Label of the ordered pair `(x, y)` as atom bits.
///
/// # Safety
/// `net` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ra_network_label(net: *const RaNetwork, x: usize, y: usize, out: *mut u64) -> RaStatus {
    guard(|| {
        let net = &deref(net, "network")?.0;
        if x >= net.len() || y >= net.len() {
            return Err((RaStatus::InvalidArgument, format!("node index out of range ({x}, {y})")));
        }
        put(out, net.label(x, y).bits())?;
        Ok(RaStatus::Ok)
    })
}

unsafe fn refine(
    ra: *const RaAlgebra,
    net: *const RaNetwork,
    out: *mut *mut RaNetwork,
    f: fn(&RelationAlgebra, &Network) -> Option<Network>,
) -> RaStatus {
    guard(|| {
        let ra = &deref(ra, "algebra")?.0;
        let net = &deref(net, "network")?.0;
        match f(ra, net) {
            Some(n) => {
                put(out, Box::into_raw(Box::new(RaNetwork(n))))?;
                Ok(RaStatus::Ok)
            }
            None => {
                put(out, ptr::null_mut())?;
                Ok(RaStatus::Negative)
            }
        }
    })
}

/// Finds an atomic refinement. On `RA_STATUS_OK` `out` holds a new network;
/// on `RA_STATUS_NEGATIVE` (unsatisfiable) it is set to null.
///
/// # Safety
/// Handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ra_network_solve(
    ra: *const RaAlgebra,
    net: *const RaNetwork,
    out: *mut *mut RaNetwork,
) -> RaStatus {
    refine(ra, net, out, ra_kit::refine_solve)
}

/// Normalizes and path-consistency-refines; null on `RA_STATUS_NEGATIVE`.
///
/// # Safety
/// Handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ra_network_path_consistency(
    ra: *const RaAlgebra,
    net: *const RaNetwork,
    out: *mut *mut RaNetwork,
) -> RaStatus {
    refine(ra, net, out, |ra, net| ra_kit::normalize(ra, net).and_then(|n| ra_kit::path_consistency(ra, &n)))
}

/// `RA_STATUS_OK` if atomic, `RA_STATUS_NEGATIVE` if not.
///
/// # Safety
/// Handles must be live.
#[no_mangle]
pub unsafe extern "C" fn ra_network_is_atomic(ra: *const RaAlgebra, net: *const RaNetwork) -> RaStatus {
    guard(|| {
        let atomic = ra_kit::is_atomic(&deref(ra, "algebra")?.0, &deref(net, "network")?.0);
        Ok(if atomic { RaStatus::Ok } else { RaStatus::Negative })
    })
}

/// The network in file format, or null on error. Release with
/// [`ra_string_free`].
///
/// # Safety
/// Handles must be live.
#[no_mangle]
pub unsafe extern "C" fn ra_network_to_string(ra: *const RaAlgebra, net: *const RaNetwork) -> *mut c_char {
    let mut result = ptr::null_mut();
    guard(|| {
        let s = deref(net, "network")?.0.to_text(&deref(ra, "algebra")?.0);
        result = CString::new(s).map_err(|e| (RaStatus::Internal, e.to_string()))?.into_raw();
        Ok(RaStatus::Ok)
    });
    result
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ra_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Decides the amalgamation property over 2-point diagrams with base size
/// at most `max_base`. Zero for `max_base`, `budget` or `threads` selects
/// the default. `RA_STATUS_BUDGET` goes with `RA_VERDICT_INDETERMINATE`.
///
/// # Safety
/// `ra` must be a live handle and `out_verdict` writable.
#[no_mangle]
pub unsafe extern "C" fn ra_decide_amalgamation(
    ra: *const RaAlgebra,
    max_base: usize,
    budget: u64,
    threads: usize,
    out_verdict: *mut RaVerdict,
) -> RaStatus {
    guard(|| {
        let ra = &deref(ra, "algebra")?.0;
        let defaults = DecideOptions::default();
        let opts = DecideOptions {
            max_base: (max_base > 0).then_some(max_base),
            budget: if budget > 0 { budget } else { defaults.budget },
            threads: (threads > 0).then_some(threads),
        };
        let (verdict, status) = match ra_kit::decide_amalgamation_property(ra, &opts) {
            ApVerdict::Yes { .. } => (RaVerdict::Yes, RaStatus::Ok),
            ApVerdict::No { .. } => (RaVerdict::No, RaStatus::Negative),
            ApVerdict::Indeterminate { .. } => (RaVerdict::Indeterminate, RaStatus::Budget),
        };
        put(out_verdict, verdict)?;
        Ok(status)
    })
}
