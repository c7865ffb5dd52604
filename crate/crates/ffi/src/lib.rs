//! C ABI over `ffjac`.
//!
//! Every object crosses the boundary as an opaque pointer owned by the
//! caller and released with its `_free` function. Every call returns an
//! [`FfjacStatus`]; on failure `ffjac_last_error` gives a message for the
//! current thread. Results come back through out-parameters, which are
//! left untouched on failure.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ffjac::divisor::Divisor;
use ffjac::error::Error;
use ffjac::field::{make_field, Field, FunctionField};
use ffjac::jacobian::{Config, JacobianCtx, ReducedClassRep, Strategy};

pub const FFJAC_STRATEGY_LINEAR: u32 = 0;
pub const FFJAC_STRATEGY_BINARY: u32 = 1;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FfjacStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Reducible = 4,
    NonzeroDegree = 5,
    FieldMismatch = 6,
    NoDegreeOnePlace = 7,
    Json = 8,
    Internal = 9,
    Panic = 10,
}

/// A function field F/F_p(x).
pub struct FfjacField(Field);

/// Jacobian arithmetic context: field, base place A and caches.
pub struct FfjacJacobian(JacobianCtx);

/// A reduced divisor class.
pub struct FfjacClass(ReducedClassRep);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> FfjacStatus {
    match e {
        Error::Reducible | Error::NotIrreducible(_) => FfjacStatus::Reducible,
        Error::NonzeroDegree(_) => FfjacStatus::NonzeroDegree,
        Error::FieldMismatch => FfjacStatus::FieldMismatch,
        Error::NoDegreeOnePlace => FfjacStatus::NoDegreeOnePlace,
        Error::Json(_) => FfjacStatus::Json,
        Error::HrMinNoSolution | Error::RetryBudget { .. } | Error::Io(_) => FfjacStatus::Internal,
        _ => FfjacStatus::InvalidArgument,
    }
}

struct Fail(FfjacStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null() -> Fail {
    Fail(FfjacStatus::NullPointer, "null pointer argument".into())
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> FfjacStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            FfjacStatus::Ok
        }
        Ok(Err(Fail(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&msg);
            FfjacStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(null)
}

unsafe fn get_mut<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(null)
}

unsafe fn put<T>(out: *mut *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null());
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s).to_str().map_err(|e| Fail(FfjacStatus::InvalidUtf8, e.to_string()))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null());
    }
    *out = CString::new(s).map_err(|e| Fail(FfjacStatus::Internal, e.to_string()))?.into_raw();
    Ok(())
}

/// Message for the last failed call on this thread. Empty after a
/// successful call. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ffjac_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn ffjac_status_str(status: FfjacStatus) -> *const c_char {
    let s: &'static CStr = match status {
        FfjacStatus::Ok => c"ok",
        FfjacStatus::NullPointer => c"null pointer",
        FfjacStatus::InvalidUtf8 => c"invalid utf-8",
        FfjacStatus::InvalidArgument => c"invalid argument",
        FfjacStatus::Reducible => c"defining polynomial reducible",
        FfjacStatus::NonzeroDegree => c"divisor of nonzero degree",
        FfjacStatus::FieldMismatch => c"objects from different fields",
        FfjacStatus::NoDegreeOnePlace => c"no degree-one place",
        FfjacStatus::Json => c"malformed json",
        FfjacStatus::Internal => c"internal error",
        FfjacStatus::Panic => c"panic",
    };
    s.as_ptr()
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn ffjac_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Build F = F_p(x)[y]/(f) with f = y^n + sum_{i<n} a_i(x) y^i.
///
/// `coeffs` holds the coefficients of a_0, ..., a_{n-1} back to back,
/// lowest degree first; `lens[i]` is the number of coefficients of a_i.
///
/// # Safety
/// `coeffs` must point to `sum(lens)` values and `lens` to `n` values.
#[no_mangle]
pub unsafe extern "C" fn ffjac_field_new(
    p: u64,
    coeffs: *const i64,
    lens: *const usize,
    n: usize,
    out: *mut *mut FfjacField,
) -> FfjacStatus {
    guard(|| {
        if lens.is_null() || n == 0 {
            return Err(null());
        }
        let lens = std::slice::from_raw_parts(lens, n);
        let total: usize = lens.iter().sum();
        if total > 0 && coeffs.is_null() {
            return Err(null());
        }
        let flat = if total == 0 { &[][..] } else { std::slice::from_raw_parts(coeffs, total) };
        let mut v = Vec::with_capacity(n);
        let mut at = 0;
        for &l in lens {
            v.push(flat[at..at + l].to_vec());
            at += l;
        }
        put(out, FfjacField(make_field(p, &v)?))
    })
}

/// # Safety
/// `json` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ffjac_field_from_json(json: *const c_char, out: *mut *mut FfjacField) -> FfjacStatus {
    guard(|| put(out, FfjacField(FunctionField::from_json(read_str(json)?)?)))
}

/// # Safety
/// `field` must be a live handle; free the string with `ffjac_string_free`.
#[no_mangle]
pub unsafe extern "C" fn ffjac_field_to_json(field: *const FfjacField, out: *mut *mut c_char) -> FfjacStatus {
    guard(|| put_string(out, get(field)?.0.to_json()))
}

/// # Safety
/// `field` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ffjac_field_genus(field: *const FfjacField, out: *mut u32) -> FfjacStatus {
    guard(|| {
        let g = get(field)?.0.genus();
        *get_mut(out)? = g;
        Ok(())
    })
}

/// # Safety
/// `field` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn ffjac_field_free(field: *mut FfjacField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// New arithmetic context. `strategy` is one of `FFJAC_STRATEGY_*`.
///
/// # Safety
/// `field` must be a live handle. The context keeps its own reference
/// to the field, so the field handle may be freed afterwards.
#[no_mangle]
pub unsafe extern "C" fn ffjac_jacobian_new(
    field: *const FfjacField,
    strategy: u32,
    caching: bool,
    out: *mut *mut FfjacJacobian,
) -> FfjacStatus {
    guard(|| {
        let strategy = match strategy {
            FFJAC_STRATEGY_LINEAR => Strategy::Linear,
            FFJAC_STRATEGY_BINARY => Strategy::Binary,
            s => return Err(Fail(FfjacStatus::InvalidArgument, format!("unknown strategy {s}"))),
        };
        let ctx = JacobianCtx::new(&get(field)?.0, Config::new(strategy, caching))?;
        put(out, FfjacJacobian(ctx))
    })
}

/// # Safety
/// `jac` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ffjac_jacobian_genus(jac: *const FfjacJacobian, out: *mut u32) -> FfjacStatus {
    guard(|| {
        let g = get(jac)?.0.genus();
        *get_mut(out)? = g;
        Ok(())
    })
}

/// # Safety
/// `jac` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn ffjac_jacobian_free(jac: *mut FfjacJacobian) {
    if !jac.is_null() {
        drop(Box::from_raw(jac));
    }
}

/// # Safety
/// `jac` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ffjac_class_zero(jac: *const FfjacJacobian, out: *mut *mut FfjacClass) -> FfjacStatus {
    guard(|| put(out, FfjacClass(get(jac)?.0.zero())))
}

/// Class of a random degree-zero divisor, deterministic in `seed`.
///
/// # Safety
/// `jac` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ffjac_class_random(
    jac: *mut FfjacJacobian,
    seed: u64,
    out: *mut *mut FfjacClass,
) -> FfjacStatus {
    guard(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        put(out, FfjacClass(get_mut(jac)?.0.random_element(&mut rng)?))
    })
}

/// Reduce a degree-zero divisor given as JSON.
///
/// # Safety
/// `jac` must be a live handle and `divisor_json` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ffjac_class_reduce(
    jac: *mut FfjacJacobian,
    divisor_json: *const c_char,
    out: *mut *mut FfjacClass,
) -> FfjacStatus {
    guard(|| {
        let ctx = &mut get_mut(jac)?.0;
        let d = Divisor::from_json(ctx.field(), read_str(divisor_json)?)?;
        put(out, FfjacClass(ctx.reduce(&d)?))
    })
}

/// # Safety
/// All handles must be live.
#[no_mangle]
pub unsafe extern "C" fn ffjac_class_add(
    jac: *mut FfjacJacobian,
    a: *const FfjacClass,
    b: *const FfjacClass,
    out: *mut *mut FfjacClass,
) -> FfjacStatus {
    guard(|| {
        let c = get_mut(jac)?.0.add(&get(a)?.0, &get(b)?.0)?;
        put(out, FfjacClass(c))
    })
}

/// # Safety
/// All handles must be live.
#[no_mangle]
pub unsafe extern "C" fn ffjac_class_neg(
    jac: *mut FfjacJacobian,
    a: *const FfjacClass,
    out: *mut *mut FfjacClass,
) -> FfjacStatus {
    guard(|| {
        let c = get_mut(jac)?.0.neg(&get(a)?.0)?;
        put(out, FfjacClass(c))
    })
}

/// # Safety
/// All handles must be live.
#[no_mangle]
pub unsafe extern "C" fn ffjac_class_scalar_mul(
    jac: *mut FfjacJacobian,
    k: i64,
    a: *const FfjacClass,
    out: *mut *mut FfjacClass,
) -> FfjacStatus {
    guard(|| {
        let c = get_mut(jac)?.0.scalar_mul(k, &get(a)?.0)?;
        put(out, FfjacClass(c))
    })
}

/// Representatives are unique, so this decides equality of classes.
///
/// # Safety
/// Both handles must be live.
#[no_mangle]
pub unsafe extern "C" fn ffjac_class_equal(a: *const FfjacClass, b: *const FfjacClass, out: *mut bool) -> FfjacStatus {
    guard(|| {
        let eq = get(a)?.0 == get(b)?.0;
        *get_mut(out)? = eq;
        Ok(())
    })
}

/// # Safety
/// `c` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ffjac_class_is_zero(c: *const FfjacClass, out: *mut bool) -> FfjacStatus {
    guard(|| {
        let z = get(c)?.0.is_zero();
        *get_mut(out)? = z;
        Ok(())
    })
}

/// The multiplicity r of the base place in the representative.
///
/// # Safety
/// `c` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ffjac_class_r(c: *const FfjacClass, out: *mut u32) -> FfjacStatus {
    guard(|| {
        let r = get(c)?.0.r();
        *get_mut(out)? = r;
        Ok(())
    })
}

/// # Safety
/// Handles must be live; free the string with `ffjac_string_free`.
#[no_mangle]
pub unsafe extern "C" fn ffjac_class_to_json(
    jac: *const FfjacJacobian,
    c: *const FfjacClass,
    out: *mut *mut c_char,
) -> FfjacStatus {
    guard(|| put_string(out, get(jac)?.0.to_json(&get(c)?.0)?))
}

/// # Safety
/// `jac` must be a live handle and `json` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ffjac_class_from_json(
    jac: *const FfjacJacobian,
    json: *const c_char,
    out: *mut *mut FfjacClass,
) -> FfjacStatus {
    guard(|| put(out, FfjacClass(get(jac)?.0.from_json(read_str(json)?)?)))
}

/// # Safety
/// `c` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn ffjac_class_free(c: *mut FfjacClass) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    #[test]
    fn status_strings_are_distinct() {
        let all = [FfjacStatus::Ok, FfjacStatus::NullPointer, FfjacStatus::Json, FfjacStatus::Panic];
        let mut seen: Vec<&str> =
            all.iter().map(|s| unsafe { CStr::from_ptr(ffjac_status_str(*s)) }.to_str().unwrap()).collect();
        seen.dedup();
        assert_eq!(seen.len(), all.len());
    }

    #[test]
    fn panics_become_status() {
        assert_eq!(guard(|| panic!("boom")), FfjacStatus::Panic);
        let msg = unsafe { CStr::from_ptr(ffjac_last_error()) };
        assert_eq!(msg.to_str().unwrap(), "boom");
        assert_eq!(guard(|| Ok(())), FfjacStatus::Ok);
        assert!(unsafe { CStr::from_ptr(ffjac_last_error()) }.is_empty());
    }

    #[test]
    fn null_out_pointer() {
        assert_eq!(unsafe { ffjac_field_genus(ptr::null(), ptr::null_mut()) }, FfjacStatus::NullPointer);
    }
}
