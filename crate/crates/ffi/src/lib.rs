//! C ABI for `symlseries`.
//!
//! Symmetric functions and L-values cross the boundary as opaque handles that
//! the caller releases with the matching `*_free` function. Every fallible
//! call returns a [`SymStatus`]; on failure a message is kept per thread and
//! can be read with [`symls_last_error`]. Strings returned through out
//! parameters are owned by the caller and released with
//! [`symls_string_free`].

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use symlseries::engine::DEFAULT_DIRECT_TOLERANCE;
use symlseries::exact::{compare_entry, constant_table, VerifyRow};
use symlseries::numeric::{parse_positive, upper_f64};
use symlseries::symfn::{classify_character, from_table, make_chi_2m, make_f_4m, Witness};
use symlseries::{evaluate, CRational, Error, EvalRequest, LValue, Method, Parity, Precision, SymmetricFunction};

/// Result codes shared by every function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymStatus {
    Ok = 0,
    InvalidArgument = 1,
    ParityMismatch = 2,
    Pole = 3,
    Infeasible = 4,
    NegativeSqrt = 5,
    NullPointer = 6,
    InvalidUtf8 = 7,
    /// One or more constants failed to match (verification only).
    VerifyFailed = 8,
    Panic = 9,
}

/// Opaque symmetric function.
pub struct SymFunction(SymmetricFunction);

/// Opaque L-value with its error bound.
pub struct SymLValue(LValue);

/// Verdict of the Dirichlet-character test.
///
/// `witness_kind` is 0 when there is no witness, 1 for a residue `a` where
/// the vanishing rule fails, and 2 for a unit pair `(a, b)` breaking
/// multiplicativity.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SymVerdict {
    pub is_character: bool,
    pub witness_kind: u32,
    pub a: u32,
    pub b: u32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> SymStatus {
    match e {
        Error::InvalidArgument(_) => SymStatus::InvalidArgument,
        Error::ParityMismatch { .. } => SymStatus::ParityMismatch,
        Error::Pole => SymStatus::Pole,
        Error::Infeasible(_) => SymStatus::Infeasible,
        Error::NegativeSqrt => SymStatus::NegativeSqrt,
    }
}

struct Fail(SymStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(SymStatus::NullPointer, format!("{what} is null"))
}

/// Run `body`, translating errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Fail>) -> SymStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => SymStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".to_string());
            SymStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(SymStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

fn into_c_string(s: String) -> Result<*mut c_char, Fail> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Fail(SymStatus::InvalidArgument, "string contains a nul byte".into()))
}

unsafe fn put_function(out: *mut *mut SymFunction, f: SymmetricFunction) -> Result<(), Fail> {
    *out = Box::into_raw(Box::new(SymFunction(f)));
    Ok(())
}

/// Message for the most recent failure on this thread, or null.
///
/// The pointer stays valid until the next call into this library on the
/// same thread.
#[no_mangle]
pub extern "C" fn symls_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn symls_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn symls_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The block-sign function χ_{2m}, m >= 2.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn symls_chi_2m(m: u32, out: *mut *mut SymFunction) -> SymStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        put_function(out, make_chi_2m(m)?)
    })
}

/// The odd-support function f_{4m}, m >= 1.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn symls_f_4m(m: u32, out: *mut *mut SymFunction) -> SymStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        put_function(out, make_f_4m(m)?)
    })
}

/// A real-valued function from `len` entries `a ↦ num/den`; the remaining
/// residues follow from the reflection law for the parity `odd`.
///
/// # Safety
/// `keys`, `nums` and `dens` must each point to `len` readable elements;
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn symls_from_table(
    modulus: u32,
    odd: bool,
    keys: *const u32,
    nums: *const i64,
    dens: *const i64,
    len: usize,
    out: *mut *mut SymFunction,
) -> SymStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if len > 0 && (keys.is_null() || nums.is_null() || dens.is_null()) {
            return Err(null("table array"));
        }
        let mut table = BTreeMap::new();
        for i in 0..len {
            let den = *dens.add(i);
            if den == 0 {
                return Err(Fail(SymStatus::InvalidArgument, "zero denominator".into()));
            }
            let value = CRational::real((*nums.add(i), den));
            table.insert(*keys.add(i), value);
        }
        let parity = if odd { Parity::Odd } else { Parity::Even };
        put_function(out, from_table(modulus, parity, &table)?)
    })
}

/// Parse `{modulus, parity, values}` JSON with complex-rational values.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn symls_from_json(json: *const c_char, out: *mut *mut SymFunction) -> SymStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(json, "json")?;
        let f: SymmetricFunction = serde_json::from_str(text)
            .map_err(|e| Fail(SymStatus::InvalidArgument, format!("bad symmetric function JSON: {e}")))?;
        put_function(out, f)
    })
}

/// # Safety
/// `f` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn symls_function_free(f: *mut SymFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Modulus N, or 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn symls_function_modulus(f: *const SymFunction) -> u32 {
    f.as_ref().map_or(0, |f| f.0.modulus())
}

/// JSON form of the function.
///
/// # Safety
/// `f` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn symls_function_to_json(f: *const SymFunction, out: *mut *mut c_char) -> SymStatus {
    guard(|| {
        let f = f.as_ref().ok_or_else(|| null("function"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let s = serde_json::to_string(&f.0).map_err(|e| Fail(SymStatus::InvalidArgument, e.to_string()))?;
        *out = into_c_string(s)?;
        Ok(())
    })
}

/// Dirichlet-character test with a witness on failure.
///
/// # Safety
/// `f` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn symls_classify(f: *const SymFunction, out: *mut SymVerdict) -> SymStatus {
    guard(|| {
        let f = f.as_ref().ok_or_else(|| null("function"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let v = classify_character(&f.0);
        *out = match v.witness {
            None => SymVerdict {
                is_character: v.is_character,
                ..SymVerdict::default()
            },
            Some(Witness::Residue { a }) => SymVerdict {
                is_character: false,
                witness_kind: 1,
                a,
                b: 0,
            },
            Some(Witness::Product { a, b }) => SymVerdict {
                is_character: false,
                witness_kind: 2,
                a,
                b,
            },
        };
        Ok(())
    })
}

/// Evaluate L(r, f).
///
/// `method` is one of `theorem23`, `half_sum`, `trig3`, `trig3_f`, `trig5`,
/// `direct`. `tolerance` applies to `direct` and may be null for the
/// default `1e-12`.
///
/// # Safety
/// `f` must be a live handle, `method` a nul-terminated string, `tolerance`
/// null or nul-terminated, and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn symls_eval(
    f: *const SymFunction,
    r: u32,
    method: *const c_char,
    precision_bits: u32,
    tolerance: *const c_char,
    out: *mut *mut SymLValue,
) -> SymStatus {
    guard(|| {
        let f = f.as_ref().ok_or_else(|| null("function"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let method: Method = read_str(method, "method")?.parse()?;
        let tol_text = if tolerance.is_null() {
            DEFAULT_DIRECT_TOLERANCE
        } else {
            read_str(tolerance, "tolerance")?
        };
        let req = EvalRequest::new(f.0.clone(), r, method)
            .with_precision(Precision::new(precision_bits)?)
            .with_tolerance(parse_positive(tol_text, 64)?);
        let v = evaluate(&req)?;
        *out = Box::into_raw(Box::new(SymLValue(v)));
        Ok(())
    })
}

/// # Safety
/// `v` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn symls_lvalue_free(v: *mut SymLValue) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// Real part rounded to a double; NaN for a null handle.
///
/// # Safety
/// `v` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn symls_lvalue_re(v: *const SymLValue) -> f64 {
    v.as_ref().map_or(f64::NAN, |v| v.0.re().to_f64())
}

/// Imaginary part rounded to a double; NaN for a null handle.
///
/// # Safety
/// `v` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn symls_lvalue_im(v: *const SymLValue) -> f64 {
    v.as_ref().map_or(f64::NAN, |v| v.0.im().to_f64())
}

/// Absolute error bound rounded up to a double; NaN for a null handle.
///
/// # Safety
/// `v` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn symls_lvalue_error_bound(v: *const SymLValue) -> f64 {
    v.as_ref().map_or(f64::NAN, |v| upper_f64(&v.0.error_bound))
}

/// `{value_re, value_im, error_bound, method, terms_used}` with decimal
/// strings at full precision.
///
/// # Safety
/// `v` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn symls_lvalue_to_json(v: *const SymLValue, out: *mut *mut c_char) -> SymStatus {
    guard(|| {
        let v = v.as_ref().ok_or_else(|| null("value"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let s = serde_json::to_string(&v.0.to_json()).map_err(|e| Fail(SymStatus::InvalidArgument, e.to_string()))?;
        *out = into_c_string(s)?;
        Ok(())
    })
}

/// Compare every tabulated closed form with the half-length sum.
///
/// Writes `[{id, family, m, r, decimal_value, matched, residual}]` to
/// `out_json` (may be null) and returns `VerifyFailed` when any entry
/// misses.
///
/// # Safety
/// `out_json` must be null or a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn symls_verify_constants(precision_bits: u32, out_json: *mut *mut c_char) -> SymStatus {
    guard(|| {
        let prec = Precision::new(precision_bits)?;
        let mut rows = Vec::new();
        for e in constant_table() {
            let c = compare_entry(&e, prec)?;
            rows.push(VerifyRow::new(&e, &c, prec));
        }
        if !out_json.is_null() {
            let s = serde_json::to_string(&rows).map_err(|e| Fail(SymStatus::InvalidArgument, e.to_string()))?;
            *out_json = into_c_string(s)?;
        }
        let failed: Vec<&str> = rows.iter().filter(|r| !r.matched).map(|r| r.id.as_str()).collect();
        if failed.is_empty() {
            Ok(())
        } else {
            Err(Fail(
                SymStatus::VerifyFailed,
                format!("unmatched: {}", failed.join(", ")),
            ))
        }
    })
}
