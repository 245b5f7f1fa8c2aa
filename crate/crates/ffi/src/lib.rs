//! C ABI over the `certreal` kernel.
//!
//! Handles are opaque pointers released with their `_free` function. Every
//! fallible call returns a [`CrStatus`]; on failure the message is available
//! from [`cr_last_error_message`] on the same thread. Rationals cross the
//! boundary as `"num/den"` strings allocated here and released with
//! [`cr_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use certreal::analysis::{integrate_ef, ivt_ef, precision_for, AnalysisError};
use certreal::cantor::{fan_modulus, suite, CantorError};
use certreal::cli::dsl::{compile, parse_expr};
use certreal::extract::{
    mu_from_dif, mu_from_mpc, mu_from_rie, oracle_dif, oracle_mpc, oracle_rie, seq_from_prefix,
};
use certreal::function::{FnWithModulus, Interval};
use certreal::rational::{parse_rational, pow2_neg, Rational};
use certreal::real::Real;
use num_bigint::BigInt;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    Precondition = 4,
    FuelExhausted = 5,
    Panic = 6,
}

/// An exact real.
pub struct CrReal(Real);

/// A function of `x` on an interval, with its derived uniform modulus.
pub struct CrFunction(FnWithModulus);

/// Modulus kind for [`cr_grilliot`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrMode {
    Mpc = 0,
    Dif = 1,
    Rie = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Failure(CrStatus, String);

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        Failure(CrStatus::Precondition, e.to_string())
    }
}

impl From<CantorError> for Failure {
    fn from(e: CantorError) -> Self {
        let code = match e {
            CantorError::FuelExhausted { .. } => CrStatus::FuelExhausted,
            _ => CrStatus::Precondition,
        };
        Failure(code, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            CrStatus::Ok
        }
        Ok(Err(Failure(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic");
            CrStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(CrStatus::NullPointer, "null pointer argument".into())
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(CrStatus::InvalidArgument, "string is not UTF-8".into()))
}

unsafe fn read_rational(p: *const c_char) -> Result<Rational, Failure> {
    let s = read_str(p)?;
    parse_rational(s).ok_or_else(|| Failure(CrStatus::ParseError, format!("bad rational `{s}`")))
}

fn rational_string(q: &Rational) -> *mut c_char {
    CString::new(format!("{}/{}", q.numer(), q.denom()))
        .expect("digits contain no NUL")
        .into_raw()
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    *out = v;
    Ok(())
}

/// Message of the last failed call on this thread, or null. Release with
/// [`cr_string_free`].
#[no_mangle]
pub extern "C" fn cr_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| match &*e.borrow() {
        Some(m) => m.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a rational such as `"3/4"`, `"-2"` or `"0.125"` into a real.
///
/// # Safety
/// `q` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cr_real_from_rational(q: *const c_char, out: *mut *mut CrReal) -> CrStatus {
    guard(|| {
        let q = read_rational(q)?;
        write_out(out, Box::into_raw(Box::new(CrReal(Real::from_rational(q)))))
    })
}

/// # Safety
/// `x` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn cr_real_free(x: *mut CrReal) {
    if !x.is_null() {
        drop(Box::from_raw(x));
    }
}

unsafe fn binary(
    a: *const CrReal,
    b: *const CrReal,
    out: *mut *mut CrReal,
    op: fn(&Real, &Real) -> Real,
) -> CrStatus {
    guard(|| {
        let (a, b) = (a.as_ref().ok_or_else(null)?, b.as_ref().ok_or_else(null)?);
        write_out(out, Box::into_raw(Box::new(CrReal(op(&a.0, &b.0)))))
    })
}

/// `out = a + b`.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cr_real_add(a: *const CrReal, b: *const CrReal, out: *mut *mut CrReal) -> CrStatus {
    binary(a, b, out, Real::add)
}

/// `out = a * b`.
///
/// # Safety
/// As for [`cr_real_add`].
#[no_mangle]
pub unsafe extern "C" fn cr_real_mul(a: *const CrReal, b: *const CrReal, out: *mut *mut CrReal) -> CrStatus {
    binary(a, b, out, Real::mul)
}

/// `out = sqrt(max(x, 0))`.
///
/// # Safety
/// `x` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cr_real_sqrt(x: *const CrReal, out: *mut *mut CrReal) -> CrStatus {
    guard(|| {
        let x = x.as_ref().ok_or_else(null)?;
        write_out(out, Box::into_raw(Box::new(CrReal(x.0.sqrt_nonneg()))))
    })
}

/// A rational within `2^-n` of `x`, as a `"num/den"` string.
///
/// # Safety
/// `x` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cr_real_approx(x: *const CrReal, n: u32, out: *mut *mut c_char) -> CrStatus {
    guard(|| {
        let x = x.as_ref().ok_or_else(null)?;
        write_out(out, rational_string(&x.0.approx(n)))
    })
}

/// Compiles an expression such as `"x*x - 1/2"` on `[a, b]`.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cr_function_parse(
    expr: *const c_char,
    a: *const c_char,
    b: *const c_char,
    out: *mut *mut CrFunction,
) -> CrStatus {
    guard(|| {
        let src = read_str(expr)?;
        let (a, b) = (read_rational(a)?, read_rational(b)?);
        let interval =
            Interval::new(a, b).map_err(|e| Failure(CrStatus::InvalidArgument, e.to_string()))?;
        let e = parse_expr(src).map_err(|e| Failure(CrStatus::ParseError, e.to_string()))?;
        let (f, _) = compile(&e, &interval).map_err(|e| Failure(CrStatus::Precondition, e.to_string()))?;
        write_out(out, Box::into_raw(Box::new(CrFunction(f))))
    })
}

/// # Safety
/// `f` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn cr_function_free(f: *mut CrFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// A point where `|f| < 1/k`; needs `f(a) < 0 < f(b)`.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cr_ivt(f: *const CrFunction, k: u64, out: *mut *mut c_char) -> CrStatus {
    guard(|| {
        let f = f.as_ref().ok_or_else(null)?;
        let r = ivt_ef(&f.0, k)?;
        write_out(out, rational_string(&r.x))
    })
}

/// The integral of `f` over its interval to within `1/k`.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cr_integrate(f: *const CrFunction, k: u64, out: *mut *mut c_char) -> CrStatus {
    guard(|| {
        let f = f.as_ref().ok_or_else(null)?;
        let v = integrate_ef(&f.0)?.approx(precision_for(k));
        write_out(out, rational_string(&v))
    })
}

/// Fan modulus of a built-in functional, searching prefixes up to `fuel`.
///
/// # Safety
/// `name` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cr_fan_modulus(name: *const c_char, fuel: u64, out: *mut u64) -> CrStatus {
    guard(|| {
        let name = read_str(name)?;
        let y = suite::functional(name)
            .ok_or_else(|| Failure(CrStatus::InvalidArgument, format!("unknown functional `{name}`")))?;
        write_out(out, fan_modulus(&y, fuel)?)
    })
}

/// Least zero of `seq[0..len]` continued by 1s, found through an oracle
/// modulus functional; `-1` when there is none.
///
/// # Safety
/// `seq` must point to `len` values (or be null with `len == 0`); `out` must
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn cr_grilliot(mode: CrMode, seq: *const u64, len: usize, out: *mut i64) -> CrStatus {
    guard(|| {
        let prefix: &[u64] = if len == 0 {
            &[]
        } else if seq.is_null() {
            return Err(null());
        } else {
            std::slice::from_raw_parts(seq, len)
        };
        if len > 20 {
            return Err(Failure(CrStatus::InvalidArgument, "at most 20 entries".into()));
        }
        let lower = pow2_neg(len as u32);
        let f = seq_from_prefix(prefix);
        let r = match mode {
            CrMode::Mpc => mu_from_mpc(&oracle_mpc(&lower), &f),
            CrMode::Dif => mu_from_dif(&oracle_dif(&lower), &f),
            CrMode::Rie => mu_from_rie(&oracle_rie(&lower), &f),
        };
        write_out(out, r.found.map_or(-1, |n| n as i64))
    })
}

/// Library version, statically allocated.
#[no_mangle]
pub extern "C" fn cr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a `"num/den"` string produced by this library.
pub fn parse_rational_string(s: &str) -> Option<Rational> {
    let (n, d) = s.split_once('/')?;
    Some(Rational::new(n.parse::<BigInt>().ok()?, d.parse::<BigInt>().ok()?))
}
