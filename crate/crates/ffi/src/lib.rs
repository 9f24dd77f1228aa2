//! C interface to `bergman`.
//!
//! Domains, moment tables and kernel evaluators are opaque handles created by
//! `*_new`/`*_build`/`*_from_json`/`*_load` and released by the matching
//! `*_free`. Every fallible call returns a [`BergmanStatus`]; the message of
//! the most recent failure on the calling thread is available from
//! [`bergman_last_error_message`].

use bergman::kernels::eval_kq;
use bergman::moments::{build_table, load_table, save_table};
use bergman::zerofinder::{kq_zero_locus, zero_free_verdict, VerdictBudget};
use bergman::{DomainSpec, Error, EvaluatedValue, KernelEvaluator, MomentTable};
use num_complex::Complex64;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

/// Result codes of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BergmanStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidJson = 3,
    InvalidParameters = 4,
    DimensionMismatch = 5,
    PointOutside = 6,
    Unsupported = 7,
    Unbounded = 8,
    QuadratureFailed = 9,
    Inconclusive = 10,
    CacheError = 11,
    Io = 12,
    BufferTooSmall = 13,
    Panic = 14,
    Other = 15,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BergmanComplex {
    pub re: f64,
    pub im: f64,
}

/// A kernel value with its error bound.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BergmanValue {
    pub re: f64,
    pub im: f64,
    pub tail_bound: f64,
    pub certified: bool,
}

/// Opaque domain descriptor.
pub struct BergmanDomain {
    spec: DomainSpec,
}

/// Opaque moment table.
pub struct BergmanTable {
    table: MomentTable,
}

/// Opaque kernel evaluator.
pub struct BergmanKernel {
    kernel: KernelEvaluator,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Failure(BergmanStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::DimensionMismatch { .. } => BergmanStatus::DimensionMismatch,
            Error::InvalidParameters(_) | Error::Inadmissible { .. } | Error::BudgetExceedsCap { .. } => {
                BergmanStatus::InvalidParameters
            }
            Error::Unsupported { .. } => BergmanStatus::Unsupported,
            Error::Unbounded(_) => BergmanStatus::Unbounded,
            Error::QuadratureFailed { .. } => BergmanStatus::QuadratureFailed,
            Error::PointOutside | Error::BranchLocus => BergmanStatus::PointOutside,
            Error::Inconclusive(_) | Error::DiagonalZero | Error::KernelZero => BergmanStatus::Inconclusive,
            Error::CorruptCache(_) | Error::HashMismatch { .. } | Error::VersionMismatch { .. } => {
                BergmanStatus::CacheError
            }
            Error::Io(_) => BergmanStatus::Io,
            Error::Json(_) => BergmanStatus::InvalidJson,
        };
        Failure(status, e.to_string())
    }
}

fn fail(status: BergmanStatus, msg: impl Into<String>) -> Failure {
    Failure(status, msg.into())
}

/// Runs `f`, converting errors and panics into a status and the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> BergmanStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BergmanStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            BergmanStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(fail(BergmanStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|e| fail(BergmanStatus::InvalidUtf8, e.to_string()))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| fail(BergmanStatus::NullPointer, "null handle"))
}

unsafe fn out_ptr<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| fail(BergmanStatus::NullPointer, "null output pointer"))
}

unsafe fn point(p: *const BergmanComplex, n: usize) -> Result<Vec<Complex64>, Failure> {
    if n == 0 {
        return Ok(Vec::new());
    }
    if p.is_null() {
        return Err(fail(BergmanStatus::NullPointer, "null coordinate array"));
    }
    Ok(std::slice::from_raw_parts(p, n).iter().map(|c| Complex64::new(c.re, c.im)).collect())
}

fn value(v: EvaluatedValue) -> BergmanValue {
    BergmanValue { re: v.value.re, im: v.value.im, tail_bound: v.tail_bound, certified: v.certified }
}

/// Message of the last failed call on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bergman_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bergman_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a JSON descriptor such as `{"variant":"Egg","params":{"exponents":[1,1]}}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bergman_domain_from_json(json: *const c_char, out: *mut *mut BergmanDomain) -> BergmanStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = ptr::null_mut();
        let text = str_arg(json)?;
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| fail(BergmanStatus::InvalidJson, e.to_string()))?;
        let spec = DomainSpec::from_json(&v)?;
        *out = Box::into_raw(Box::new(BergmanDomain { spec }));
        Ok(())
    })
}

/// # Safety
/// `d` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn bergman_domain_free(d: *mut BergmanDomain) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Complex dimension of the domain, 0 for NULL.
///
/// # Safety
/// `d` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bergman_domain_dim(d: *const BergmanDomain) -> usize {
    d.as_ref().map_or(0, |d| d.spec.dim())
}

/// # Safety
/// `d` must be a live handle, `z` must point to `n` values and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bergman_domain_contains(
    d: *const BergmanDomain,
    z: *const BergmanComplex,
    n: usize,
    out: *mut bool,
) -> BergmanStatus {
    guard(|| {
        let d = handle(d)?;
        let out = out_ptr(out)?;
        *out = d.spec.contains(&point(z, n)?)?;
        Ok(())
    })
}

/// Lebesgue volume with an absolute error estimate.
///
/// # Safety
/// `d` must be a live handle; `value` and `abs_error` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn bergman_domain_volume(
    d: *const BergmanDomain,
    tol: f64,
    value: *mut f64,
    abs_error: *mut f64,
) -> BergmanStatus {
    guard(|| {
        let d = handle(d)?;
        let (value, abs_error) = (out_ptr(value)?, out_ptr(abs_error)?);
        let (v, e) = d.spec.volume(tol)?;
        *value = v;
        *abs_error = e;
        Ok(())
    })
}

/// Builds the moment table of all admissible indices of total degree `<= degree_cap`.
///
/// # Safety
/// `d` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bergman_table_build(
    d: *const BergmanDomain,
    degree_cap: usize,
    tol: f64,
    out: *mut *mut BergmanTable,
) -> BergmanStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = ptr::null_mut();
        let table = build_table(&handle(d)?.spec, degree_cap, tol)?;
        *out = Box::into_raw(Box::new(BergmanTable { table }));
        Ok(())
    })
}

/// # Safety
/// `t` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn bergman_table_save(t: *const BergmanTable, path: *const c_char) -> BergmanStatus {
    guard(|| {
        save_table(&handle(t)?.table, Path::new(str_arg(path)?))?;
        Ok(())
    })
}

/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bergman_table_load(path: *const c_char, out: *mut *mut BergmanTable) -> BergmanStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = ptr::null_mut();
        let table = load_table(Path::new(str_arg(path)?))?;
        *out = Box::into_raw(Box::new(BergmanTable { table }));
        Ok(())
    })
}

/// Number of stored moments, 0 for NULL.
///
/// # Safety
/// `t` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bergman_table_len(t: *const BergmanTable) -> usize {
    t.as_ref().map_or(0, |t| t.table.len())
}

/// # Safety
/// `t` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn bergman_table_free(t: *mut BergmanTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Closed form when the domain has one, otherwise a series over a fresh table.
///
/// # Safety
/// `d` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bergman_kernel_new(
    d: *const BergmanDomain,
    degree_cap: usize,
    tol: f64,
    out: *mut *mut BergmanKernel,
) -> BergmanStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = ptr::null_mut();
        let kernel = KernelEvaluator::for_domain(&handle(d)?.spec, degree_cap, tol)?;
        *out = Box::into_raw(Box::new(BergmanKernel { kernel }));
        Ok(())
    })
}

/// Series kernel over a copy of the table; the table handle stays owned by the caller.
///
/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bergman_kernel_from_table(
    t: *const BergmanTable,
    out: *mut *mut BergmanKernel,
) -> BergmanStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = ptr::null_mut();
        let kernel = KernelEvaluator::series(handle(t)?.table.clone());
        *out = Box::into_raw(Box::new(BergmanKernel { kernel }));
        Ok(())
    })
}

/// `K(z, w)` for points with `n` coordinates each.
///
/// # Safety
/// `k` must be a live handle, `z` and `w` must point to `n` values, `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bergman_kernel_eval(
    k: *const BergmanKernel,
    z: *const BergmanComplex,
    w: *const BergmanComplex,
    n: usize,
    out: *mut BergmanValue,
) -> BergmanStatus {
    guard(|| {
        let k = handle(k)?;
        let out = out_ptr(out)?;
        *out = value(k.kernel.eval(&point(z, n)?, &point(w, n)?)?);
        Ok(())
    })
}

/// # Safety
/// `k` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn bergman_kernel_free(k: *mut BergmanKernel) {
    if !k.is_null() {
        drop(Box::from_raw(k));
    }
}

/// Weighted-disk kernel `K_q(x, y)` for the weight `(1 - |z|)^q`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bergman_kq_eval(
    q: f64,
    x: BergmanComplex,
    y: BergmanComplex,
    out: *mut BergmanValue,
) -> BergmanStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = value(eval_kq(q, Complex64::new(x.re, x.im), Complex64::new(y.re, y.im))?);
        Ok(())
    })
}

/// Writes the zeros of `K_q` in the unit disk to `out` (capacity `cap`) and
/// their number to `count`. Fails with `BUFFER_TOO_SMALL` when `cap` is short,
/// still reporting the needed count; `out` may be NULL when `cap` is 0.
///
/// # Safety
/// `out` must point to `cap` writable doubles; `count` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bergman_kq_zero_locus(q: f64, out: *mut f64, cap: usize, count: *mut usize) -> BergmanStatus {
    guard(|| {
        let count = out_ptr(count)?;
        if !(q > 0.0 && q.is_finite()) {
            return Err(fail(BergmanStatus::InvalidParameters, format!("q must be positive, got {q}")));
        }
        let locus = kq_zero_locus(q);
        *count = locus.len();
        if locus.len() > cap {
            return Err(fail(BergmanStatus::BufferTooSmall, format!("{} zeros, capacity {cap}", locus.len())));
        }
        if !locus.is_empty() {
            if out.is_null() {
                return Err(fail(BergmanStatus::NullPointer, "null output buffer"));
            }
            std::slice::from_raw_parts_mut(out, locus.len()).copy_from_slice(&locus);
        }
        Ok(())
    })
}

/// Zero verdict on the default axis slices with default budgets, as a JSON
/// string to be released with [`bergman_string_free`].
///
/// # Safety
/// `d` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bergman_verdict_json(d: *const BergmanDomain, out: *mut *mut c_char) -> BergmanStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = ptr::null_mut();
        let record = zero_free_verdict(&handle(d)?.spec, &VerdictBudget::default())?;
        let text = serde_json::to_string(&record).map_err(|e| fail(BergmanStatus::Other, e.to_string()))?;
        *out = CString::new(text).map_err(|e| fail(BergmanStatus::Other, e.to_string()))?.into_raw();
        Ok(())
    })
}
