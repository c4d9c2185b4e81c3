//! C ABI over `dpgrid`. Diagrams are opaque handles; every fallible call
//! returns a `DpStatus` and leaves a message for `dp_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use dpgrid::grid::{gradings, GridState};
use dpgrid::harness::{homology_report, suite_d2};
use dpgrid::homology::{Route, Window};
use dpgrid::stab::stabilize_xsw;
use dpgrid::{Error, GridDiagram, Theory};

/// Status codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DpStatus {
    DpOk = 0,
    DpErrNull = 1,
    DpErrMalformed = 2,
    DpErrInvalidDiagram = 3,
    DpErrInvalidColumn = 4,
    DpErrInvalidState = 5,
    DpErrInvalidMove = 6,
    DpErrOther = 7,
}

/// Opaque grid diagram.
pub struct DpGrid {
    inner: GridDiagram,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: DpStatus, msg: &str) -> DpStatus {
    set_error(msg);
    status
}

fn from_error(e: &Error) -> DpStatus {
    let status = match e {
        Error::MalformedInput(_) => DpStatus::DpErrMalformed,
        Error::InvalidDiagram(_) | Error::NonIntegerAlexander => DpStatus::DpErrInvalidDiagram,
        Error::InvalidColumn(_) => DpStatus::DpErrInvalidColumn,
        Error::InvalidMove(_) | Error::IllegalCommutation(_) => DpStatus::DpErrInvalidMove,
        _ => DpStatus::DpErrOther,
    };
    fail(status, &format!("{}: {e}", e.kind()))
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, DpStatus> {
    if s.is_null() {
        return Err(fail(DpStatus::DpErrNull, "null string"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(DpStatus::DpErrMalformed, "string is not UTF-8"))
}

fn out_string(s: String, out: *mut *mut c_char) -> DpStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            DpStatus::DpOk
        }
        Err(_) => fail(DpStatus::DpErrOther, "output contains a NUL byte"),
    }
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn dp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses `{"n":..,"O":[..],"X":[..]}` into a new handle.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dp_grid_parse(json: *const c_char, out: *mut *mut DpGrid) -> DpStatus {
    if out.is_null() {
        return fail(DpStatus::DpErrNull, "null output pointer");
    }
    let text = match read_str(json) {
        Ok(t) => t,
        Err(s) => return s,
    };
    match GridDiagram::from_json(text) {
        Ok(g) => {
            *out = Box::into_raw(Box::new(DpGrid { inner: g }));
            DpStatus::DpOk
        }
        Err(e) => from_error(&e),
    }
}

/// # Safety
/// `g` must come from this library and not be freed twice; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn dp_grid_free(g: *mut DpGrid) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Grid number, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dp_grid_n(g: *const DpGrid) -> usize {
    g.as_ref().map_or(0, |g| g.inner.n())
}

/// Serializes a diagram; free the result with `dp_string_free`.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dp_grid_to_json(g: *const DpGrid, out: *mut *mut c_char) -> DpStatus {
    match (g.as_ref(), out.is_null()) {
        (Some(g), false) => out_string(g.inner.to_json(), out),
        _ => fail(DpStatus::DpErrNull, "null argument"),
    }
}

/// Maslov and Alexander gradings of the state with `rows[i]` the row of the
/// point on vertical circle `i`.
///
/// # Safety
/// `rows` must point to `len` bytes; `maslov` and `alexander` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dp_grid_gradings(
    g: *const DpGrid,
    rows: *const u8,
    len: usize,
    maslov: *mut i64,
    alexander: *mut i64,
) -> DpStatus {
    let Some(g) = g.as_ref() else { return fail(DpStatus::DpErrNull, "null handle") };
    if rows.is_null() || maslov.is_null() || alexander.is_null() {
        return fail(DpStatus::DpErrNull, "null argument");
    }
    if len != g.inner.n() {
        return fail(DpStatus::DpErrInvalidState, &format!("state has {len} points, grid number is {}", g.inner.n()));
    }
    let rows: Vec<usize> = std::slice::from_raw_parts(rows, len).iter().map(|&r| r as usize).collect();
    match GridState::from_rows(&rows) {
        Ok(x) => {
            let (m, a) = gradings(&g.inner, &x);
            *maslov = m;
            *alexander = a;
            DpStatus::DpOk
        }
        Err(e) => fail(DpStatus::DpErrInvalidState, &e.to_string()),
    }
}

/// Sets `*passed` to 1 when all three differentials square to zero, else 0.
///
/// # Safety
/// `g` must be a live handle; `passed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dp_verify_d2(g: *const DpGrid, passed: *mut i32) -> DpStatus {
    let Some(g) = g.as_ref() else { return fail(DpStatus::DpErrNull, "null handle") };
    if passed.is_null() {
        return fail(DpStatus::DpErrNull, "null output pointer");
    }
    let checks = suite_d2(&g.inner);
    *passed = checks.iter().all(|c| c.passed) as i32;
    DpStatus::DpOk
}

/// Homology table as JSON. `theory` is 0 for GH- and 1 for GH*; `window` is
/// `"d0:d1,s0:s1"` or null for the default. Free with `dp_string_free`.
///
/// # Safety
/// `g` must be a live handle; `window` null or NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dp_homology_json(
    g: *const DpGrid,
    theory: i32,
    window: *const c_char,
    out: *mut *mut c_char,
) -> DpStatus {
    let Some(g) = g.as_ref() else { return fail(DpStatus::DpErrNull, "null handle") };
    if out.is_null() {
        return fail(DpStatus::DpErrNull, "null output pointer");
    }
    let theory = match theory {
        0 => Theory::Minus,
        1 => Theory::Bullet,
        t => return fail(DpStatus::DpErrMalformed, &format!("unknown theory {t}")),
    };
    let window = if window.is_null() {
        None
    } else {
        let text = match read_str(window) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match Window::parse(text) {
            Ok(w) => Some(w),
            Err(e) => return from_error(&e),
        }
    };
    let table = homology_report(&g.inner, theory, window, Route::Collapsed);
    out_string(table.to_json().to_string(), out)
}

/// X:SW stabilization at column `col`; the new diagram goes to `*out`.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dp_stabilize(g: *const DpGrid, col: usize, out: *mut *mut DpGrid) -> DpStatus {
    let Some(g) = g.as_ref() else { return fail(DpStatus::DpErrNull, "null handle") };
    if out.is_null() {
        return fail(DpStatus::DpErrNull, "null output pointer");
    }
    match stabilize_xsw(&g.inner, col) {
        Ok((gp, _)) => {
            *out = Box::into_raw(Box::new(DpGrid { inner: gp }));
            DpStatus::DpOk
        }
        Err(e) => from_error(&e),
    }
}

/// # Safety
/// `s` must come from this library; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn dp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
