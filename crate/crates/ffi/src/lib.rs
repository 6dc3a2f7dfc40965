//! C ABI for the motivic library.
//!
//! Objects are opaque handles released with the matching `_free` function.
//! Results are returned as JSON strings owned by the caller and released
//! with [`motivic_string_free`]. Every entry point returns a
//! [`MotivicStatus`]; on failure [`motivic_last_error`] describes the error
//! for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use motivic::cli::run_args;
use motivic::motive::MotiveSpec;
use motivic::scalar::Fq;
use motivic::special::zeta_naive;
use motivic::tmodule::{smat_to_json, TModule};
use motivic::Error;

/// Status codes returned by every function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MotivicStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Usage = 3,
    Parse = 4,
    InvalidField = 5,
    InvalidMotive = 6,
    Computation = 7,
    VerificationFailed = 8,
    Panic = 9,
}

/// A finite field F_q.
pub struct MotivicField(Fq);

/// An Anderson t-module with its coefficient streams.
pub struct MotivicModule(TModule);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> MotivicStatus {
    match e {
        Error::Usage(_) => MotivicStatus::Usage,
        Error::Parse(_) => MotivicStatus::Parse,
        Error::InvalidField(_) => MotivicStatus::InvalidField,
        Error::InvalidMotive(_) => MotivicStatus::InvalidMotive,
        _ => MotivicStatus::Computation,
    }
}

/// Run `f`, recording errors and panics for `motivic_last_error`.
fn guard(f: impl FnOnce() -> Result<(), (MotivicStatus, String)>) -> MotivicStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MotivicStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            MotivicStatus::Panic
        }
    }
}

fn lib<T>(r: motivic::Result<T>) -> Result<T, (MotivicStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null() -> (MotivicStatus, String) {
    (MotivicStatus::NullPointer, "null pointer argument".into())
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, (MotivicStatus, String)> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s).to_str().map_err(|_| (MotivicStatus::InvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (MotivicStatus, String)> {
    if out.is_null() {
        return Err(null());
    }
    let c = CString::new(s).map_err(|_| (MotivicStatus::Computation, "output contains NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn write_handle<T>(out: *mut *mut T, v: T) -> Result<(), (MotivicStatus, String)> {
    if out.is_null() {
        return Err(null());
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn motivic_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Release a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn motivic_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Create F_q for a prime power q <= 256.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn motivic_field_new(q: u32, out: *mut *mut MotivicField) -> MotivicStatus {
    guard(|| {
        let fq = lib(Fq::new(q))?;
        write_handle(out, MotivicField(fq))
    })
}

/// # Safety
/// `f` must come from `motivic_field_new` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn motivic_field_free(f: *mut MotivicField) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// The Carlitz tensor power C^{⊗n} over `field`.
///
/// # Safety
/// `field` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn motivic_module_carlitz(field: *const MotivicField, n: u32, out: *mut *mut MotivicModule) -> MotivicStatus {
    guard(|| {
        let f = field.as_ref().ok_or_else(null)?;
        if n == 0 {
            return Err((MotivicStatus::Usage, "n must be at least 1".into()));
        }
        let t = lib(MotiveSpec::carlitz_tensor(&f.0, n as usize).and_then(|s| TModule::from_motive(&s)))?;
        write_handle(out, MotivicModule(t))
    })
}

/// The module attached to ζ_A(1,3) over F_2.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn motivic_module_mzv13(out: *mut *mut MotivicModule) -> MotivicStatus {
    guard(|| {
        let t = lib(MotiveSpec::mzv_13().and_then(|s| TModule::from_motive(&s)))?;
        write_handle(out, MotivicModule(t))
    })
}

/// A module from its motive JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn motivic_module_from_json(json: *const c_char, out: *mut *mut MotivicModule) -> MotivicStatus {
    guard(|| {
        let s = read_str(json)?;
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| (MotivicStatus::Parse, e.to_string()))?;
        let t = lib(MotiveSpec::from_json(&v).and_then(|s| TModule::from_motive(&s)))?;
        write_handle(out, MotivicModule(t))
    })
}

/// # Safety
/// `m` must come from a `motivic_module_*` constructor and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn motivic_module_free(m: *mut MotivicModule) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Dimension of the module, or 0 for NULL.
///
/// # Safety
/// `m` must be NULL or a valid module handle.
#[no_mangle]
pub unsafe extern "C" fn motivic_module_dim(m: *const MotivicModule) -> usize {
    m.as_ref().map_or(0, |m| m.0.dim())
}

unsafe fn coeff_json(m: *const MotivicModule, i: u32, exp: bool, out: *mut *mut c_char) -> MotivicStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(null)?;
        let c = lib(if exp { m.0.exp_coeff(i as usize) } else { m.0.log_coeff(i as usize) })?;
        write_string(out, smat_to_json(&c).to_string())
    })
}

/// Exponential coefficient Q_i as a JSON matrix of rational functions.
///
/// # Safety
/// `m` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn motivic_exp_coeff_json(m: *const MotivicModule, i: u32, out: *mut *mut c_char) -> MotivicStatus {
    coeff_json(m, i, true, out)
}

/// Logarithm coefficient P_i as a JSON matrix of rational functions.
///
/// # Safety
/// `m` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn motivic_log_coeff_json(m: *const MotivicModule, i: u32, out: *mut *mut c_char) -> MotivicStatus {
    coeff_json(m, i, false, out)
}

/// ζ_A(n) to u-adic precision `prec`, as JSON.
///
/// # Safety
/// `field` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn motivic_zeta_json(field: *const MotivicField, n: u64, prec: i64, out: *mut *mut c_char) -> MotivicStatus {
    guard(|| {
        let f = field.as_ref().ok_or_else(null)?;
        if n == 0 || prec < 1 {
            return Err((MotivicStatus::Usage, "n and prec must be positive".into()));
        }
        let v = lib(zeta_naive(&f.0, n, prec))?;
        write_string(out, v.to_json().to_string())
    })
}

/// Run a command-line invocation given as a JSON array of arguments
/// (without the program name), writing the JSON report to `out`. Returns
/// `VerificationFailed` when the report contains a failed check; the report
/// is written in that case too.
///
/// # Safety
/// `args_json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn motivic_run_json(args_json: *const c_char, out: *mut *mut c_char) -> MotivicStatus {
    let mut failed = false;
    let st = guard(|| {
        let s = read_str(args_json)?;
        let args: Vec<String> = serde_json::from_str(s).map_err(|e| (MotivicStatus::Parse, format!("arguments must be a JSON string array: {e}")))?;
        let argv = std::iter::once("motivic".to_string()).chain(args);
        let (_, rep) = lib(run_args(argv))?;
        failed = !rep.passed();
        write_string(out, serde_json::to_string(&rep.json).expect("report serializes"))
    });
    if st == MotivicStatus::Ok && failed {
        set_error("verification failed");
        return MotivicStatus::VerificationFailed;
    }
    st
}
