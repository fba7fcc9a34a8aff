//! C ABI over `k0count`.
//!
//! Every fallible call returns a [`K0Status`]; on failure a message is kept in
//! thread-local storage and can be read with [`k0_last_error_message`].
//! Classes and reports are opaque heap handles released with their `_free`
//! functions; strings returned to C are released with [`k0_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use k0count::classes::{sym_power_class, MotivicClass};
use k0count::ffcount::{CountingSequence, GroupAction, Numeric};
use k0count::polydiag::{polydiagonal_quotient, TowerSpace};
use k0count::suite::{self, RunConfig, Suite};
use k0count::Error;

pub const K0_ABI_VERSION: u32 = 1;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum K0Status {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    NotTame = 5,
    BudgetExceeded = 6,
    Unsupported = 7,
    Overflow = 8,
    Internal = 9,
    Panic = 10,
}

/// Opaque class in `Z[L][symbols]`.
pub struct K0Class {
    inner: MotivicClass,
}

/// Opaque verification report.
pub struct K0Report {
    inner: suite::Report,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> K0Status {
    match e {
        Error::Parse(_) | Error::UnboundSymbol(_) => K0Status::Parse,
        Error::NotTame(_) => K0Status::NotTame,
        Error::BudgetExceeded { .. } => K0Status::BudgetExceeded,
        Error::Unsupported(_) | Error::UnsupportedClass(_) => K0Status::Unsupported,
        Error::Overflow(_) => K0Status::Overflow,
        Error::NonIntegralBurnside { .. } | Error::Inconsistent(_) => K0Status::Internal,
        _ => K0Status::InvalidArgument,
    }
}

/// Runs `f`, recording errors and converting panics.
fn guard(f: impl FnOnce() -> Result<(), (K0Status, String)>) -> K0Status {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            K0Status::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside k0count");
            K0Status::Panic
        }
    }
}

fn lib<T>(r: k0count::Result<T>) -> Result<T, (K0Status, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null() -> (K0Status, String) {
    (K0Status::NullPointer, "null pointer argument".into())
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, (K0Status, String)> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (K0Status::InvalidUtf8, "string argument is not UTF-8".into()))
}

fn to_i64(v: i128) -> Result<i64, (K0Status, String)> {
    i64::try_from(v).map_err(|_| (K0Status::Overflow, format!("{v} does not fit in 64 bits")))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

#[no_mangle]
pub extern "C" fn k0_abi_version() -> u32 {
    K0_ABI_VERSION
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn k0_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn k0_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a class such as `"1 + 2*L + L^2"`.
///
/// # Safety
/// `expr` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn k0_class_parse(expr: *const c_char, out: *mut *mut K0Class) -> K0Status {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let inner: MotivicClass = lib(read_str(expr)?.parse())?;
        *out = Box::into_raw(Box::new(K0Class { inner }));
        Ok(())
    })
}

/// # Safety
/// `c` must be null or a handle from this library, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn k0_class_free(c: *mut K0Class) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Canonical text form; free with [`k0_string_free`]. Null on a null handle.
///
/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn k0_class_to_string(c: *const K0Class) -> *mut c_char {
    match c.as_ref() {
        Some(c) => c_string(c.inner.to_string()),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `c` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn k0_class_mod_l(c: *const K0Class, out: *mut *mut K0Class) -> K0Status {
    guard(|| {
        let c = c.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        *out = Box::into_raw(Box::new(K0Class {
            inner: c.inner.mod_l(),
        }));
        Ok(())
    })
}

/// `[Sym^n Z]` of a cell-decomposable class.
///
/// # Safety
/// `c` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn k0_class_sym_power(
    c: *const K0Class,
    n: usize,
    out: *mut *mut K0Class,
) -> K0Status {
    guard(|| {
        let c = c.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        let inner = lib(sym_power_class(&c.inner, n))?;
        *out = Box::into_raw(Box::new(K0Class { inner }));
        Ok(())
    })
}

/// Value at `L = q^m` of a class without base symbols.
///
/// # Safety
/// `c` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn k0_class_evaluate(
    c: *const K0Class,
    q: u64,
    m: u32,
    out: *mut i64,
) -> K0Status {
    guard(|| {
        let c = c.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        let v = lib(c.inner.evaluate_count(q, m, &Default::default()))?;
        *out = to_i64(v)?;
        Ok(())
    })
}

/// `#(Z^n/S_n)(F_q)` by Burnside, for `Z` with the given polynomial count.
///
/// # Safety
/// `base` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn k0_sym_power_count(
    base: *const K0Class,
    n: usize,
    q: u64,
    out: *mut i64,
) -> K0Status {
    guard(|| {
        let base = base.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        let action = lib(CountingSequence::polynomial(base.inner.clone())
            .and_then(|s| GroupAction::symmetric_power(s, n)))?;
        lib(action.validate(q))?;
        *out = to_i64(lib(action.burnside(&Numeric { q }))?)?;
        Ok(())
    })
}

/// `#(X<n>/S_n)(F_q)` and `#(X^n/S_n)(F_q)` for `X = A^dim` (`projective = 0`)
/// or `P^dim` (`projective != 0`), `n ∈ {2, 3}`.
///
/// # Safety
/// `tower_out` and `power_out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn k0_polydiagonal_count(
    projective: i32,
    dim: u32,
    n: usize,
    q: u64,
    tower_out: *mut i64,
    power_out: *mut i64,
) -> K0Status {
    guard(|| {
        if tower_out.is_null() || power_out.is_null() {
            return Err(null());
        }
        let space = if projective != 0 {
            TowerSpace::projective(dim)
        } else {
            TowerSpace::affine(dim)
        };
        let space = lib(TowerSpace::new(space.base, dim))?;
        let action = lib(GroupAction::symmetric_power(space.base.clone(), n))?;
        lib(action.validate(q))?;
        let alg = Numeric { q };
        *tower_out = to_i64(lib(polydiagonal_quotient(&alg, &space, n))?)?;
        *power_out = to_i64(lib(action.burnside(&alg))?)?;
        Ok(())
    })
}

/// Runs comma-separated suites (`"quotients,strata"`) over `qs` (the suite
/// defaults when `nq == 0`).
///
/// # Safety
/// `suites` must be a NUL-terminated string, `qs` must point to `nq` values
/// (or be null when `nq == 0`) and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn k0_verify(
    suites: *const c_char,
    qs: *const u64,
    nq: usize,
    seed: u64,
    out: *mut *mut K0Report,
) -> K0Status {
    guard(|| {
        if out.is_null() || (nq > 0 && qs.is_null()) {
            return Err(null());
        }
        let names = read_str(suites)?;
        let config = RunConfig {
            suites: lib(names
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.parse::<Suite>())
                .collect())?,
            q_list: if nq == 0 {
                Vec::new()
            } else {
                std::slice::from_raw_parts(qs, nq).to_vec()
            },
            seed,
            ..RunConfig::default()
        };
        let inner = lib(suite::run(&config))?;
        *out = Box::into_raw(Box::new(K0Report { inner }));
        Ok(())
    })
}

/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn k0_report_passed(r: *const K0Report) -> bool {
    r.as_ref().is_some_and(|r| r.inner.pass)
}

/// Number of instances that failed, or -1 on a null handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn k0_report_failures(r: *const K0Report) -> i64 {
    r.as_ref()
        .map_or(-1, |r| r.inner.summary.failed_instances as i64)
}

/// JSON form (schema "1"); free with [`k0_string_free`].
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn k0_report_json(r: *const K0Report) -> *mut c_char {
    match r.as_ref().map(|r| suite::render_json(&r.inner)) {
        Some(Ok(s)) => c_string(s),
        Some(Err(e)) => {
            set_error(e.to_string());
            ptr::null_mut()
        }
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `r` must be null or a handle from this library, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn k0_report_free(r: *mut K0Report) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}
