//! C ABI for fpresum.
//!
//! Contexts and moment solutions cross the boundary as opaque handles.
//! Numbers cross as decimal strings so no precision is lost; results are
//! heap strings released with [`fpr_string_free`]. Every call returns an
//! [`FprStatus`]; the message of the last failure on the calling thread is
//! available from [`fpr_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use fpresum::extrapolant::{extrapolate_electric, extrapolate_magnetic};
use fpresum::heisenberg_euler::{
    exact_electric, exact_magnetic, partial_sum_magnetic, weak_field_coeffs, ContinuationBranch,
};
use fpresum::moment_solver::{solve_moments, MomentSolution};
use fpresum::precision::format_sci;
use fpresum::{BigReal, Context, Error};

/// Result of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FprStatus {
    Ok = 0,
    /// unreadable or corrupt file
    Io = 1,
    /// invalid argument or configuration
    Usage = 2,
    /// working precision below the moment count
    PrecisionRule = 3,
    /// singular pivot, breakdown, pole or unconverged evaluation
    Numerical = 4,
    /// a required pointer was null
    NullPointer = 5,
    /// a string argument was not valid UTF-8 or a number
    InvalidString = 6,
    /// internal panic caught at the boundary
    Panic = 7,
}

/// Working precision: decimal digits plus guard digits.
pub struct FprContext {
    ctx: Context,
}

/// A solved moment system.
pub struct FprSolution {
    ctx: Context,
    sol: MomentSolution,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> FprStatus {
    match e.exit_code() {
        1 => FprStatus::Io,
        2 => FprStatus::Usage,
        3 => FprStatus::PrecisionRule,
        _ => FprStatus::Numerical,
    }
}

struct Failure(FprStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

type Outcome = Result<(), Failure>;

/// Run `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Outcome) -> FprStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FprStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            FprStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(FprStatus::NullPointer, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(FprStatus::InvalidString, format!("{what} is not UTF-8")))
}

unsafe fn number(ctx: &Context, p: *const c_char, what: &str) -> Result<BigReal, Failure> {
    let s = text(p, what)?;
    ctx.parse(s).map_err(|_| {
        Failure(
            FprStatus::InvalidString,
            format!("{what} = {s:?} is not a decimal number"),
        )
    })
}

unsafe fn emit(out: *mut *mut c_char, x: &BigReal, sig: usize) -> Outcome {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let s = CString::new(format_sci(x, sig.max(1))).expect("no interior nul");
    *out = s.into_raw();
    Ok(())
}

unsafe fn context_ref<'a>(p: *const FprContext) -> Result<&'a Context, Failure> {
    p.as_ref().map(|c| &c.ctx).ok_or_else(|| null("context"))
}

unsafe fn solution_ref<'a>(p: *const FprSolution) -> Result<&'a FprSolution, Failure> {
    p.as_ref().ok_or_else(|| null("solution"))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn fpr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fpr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fpr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// New context with `digits` working digits and `guard_digits` extra.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn fpr_context_new(digits: u32, guard_digits: u32, out: *mut *mut FprContext) -> FprStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let ctx = Context::with_guard(digits, guard_digits)?;
        *out = Box::into_raw(Box::new(FprContext { ctx }));
        Ok(())
    })
}

/// # Safety
/// `ctx` must come from [`fpr_context_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fpr_context_free(ctx: *mut FprContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// Weak-field coefficient a_n, n ≥ 2.
///
/// # Safety
/// Pointers must be valid; `out` receives a string for [`fpr_string_free`].
#[no_mangle]
pub unsafe extern "C" fn fpr_coefficient(
    ctx: *const FprContext,
    n: usize,
    sig: usize,
    out: *mut *mut c_char,
) -> FprStatus {
    guard(|| {
        let ctx = context_ref(ctx)?;
        let coeffs = weak_field_coeffs(n, ctx)?;
        emit(out, coeffs.a(n), sig)
    })
}

/// Partial sum of the weak-field series through a_{d+2} at β.
///
/// # Safety
/// Pointers must be valid; `out` receives a string for [`fpr_string_free`].
#[no_mangle]
pub unsafe extern "C" fn fpr_partial_sum_magnetic(
    ctx: *const FprContext,
    beta: *const c_char,
    d: usize,
    sig: usize,
    out: *mut *mut c_char,
) -> FprStatus {
    guard(|| {
        let ctx = context_ref(ctx)?;
        let beta = number(ctx, beta, "beta")?;
        emit(out, &partial_sum_magnetic(&beta, d, ctx)?, sig)
    })
}

/// Closed form in a magnetic field β > 0.
///
/// # Safety
/// Pointers must be valid; `out` receives a string for [`fpr_string_free`].
#[no_mangle]
pub unsafe extern "C" fn fpr_exact_magnetic(
    ctx: *const FprContext,
    beta: *const c_char,
    sig: usize,
    out: *mut *mut c_char,
) -> FprStatus {
    guard(|| {
        let ctx = context_ref(ctx)?;
        let beta = number(ctx, beta, "beta")?;
        emit(out, &exact_magnetic(&beta, ctx)?, sig)
    })
}

/// Closed form in an electric field κ > 0, real and imaginary parts.
///
/// # Safety
/// Pointers must be valid; both outputs receive strings for
/// [`fpr_string_free`].
#[no_mangle]
pub unsafe extern "C" fn fpr_exact_electric(
    ctx: *const FprContext,
    kappa: *const c_char,
    sig: usize,
    out_re: *mut *mut c_char,
    out_im: *mut *mut c_char,
) -> FprStatus {
    guard(|| {
        let ctx = context_ref(ctx)?;
        let kappa = number(ctx, kappa, "kappa")?;
        if out_re.is_null() || out_im.is_null() {
            return Err(null("output pointer"));
        }
        let v = exact_electric(&kappa, ctx)?;
        emit(out_re, &v.re, sig)?;
        emit(out_im, &v.im, sig)
    })
}

/// Solve the moment system for `moments` = d + 1 moments under `ctx`.
///
/// # Safety
/// Pointers must be valid; `out` receives a handle for
/// [`fpr_solution_free`].
#[no_mangle]
pub unsafe extern "C" fn fpr_solve(ctx: *const FprContext, moments: usize, out: *mut *mut FprSolution) -> FprStatus {
    guard(|| {
        let ctx = context_ref(ctx)?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let d = moments
            .checked_sub(1)
            .ok_or_else(|| Failure(FprStatus::Usage, "at least one moment is required".into()))?;
        let sol = solve_moments(d, ctx)?;
        *out = Box::into_raw(Box::new(FprSolution { ctx: ctx.clone(), sol }));
        Ok(())
    })
}

/// Load a solution file written by [`fpr_solution_save`] or the CLI.
///
/// # Safety
/// `path` must be a nul-terminated string and `out` a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn fpr_solution_load(path: *const c_char, out: *mut *mut FprSolution) -> FprStatus {
    guard(|| {
        let path = text(path, "path")?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let sol = MomentSolution::load(Path::new(path))?;
        let ctx = sol.context()?;
        *out = Box::into_raw(Box::new(FprSolution { ctx, sol }));
        Ok(())
    })
}

/// # Safety
/// `sol` must be a live handle and `path` a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn fpr_solution_save(sol: *const FprSolution, path: *const c_char) -> FprStatus {
    guard(|| {
        let s = solution_ref(sol)?;
        let path = text(path, "path")?;
        s.sol.save(Path::new(path))?;
        Ok(())
    })
}

/// Number of moments of a solution (d + 1), or 0 for null.
///
/// # Safety
/// `sol` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fpr_solution_moments(sol: *const FprSolution) -> usize {
    sol.as_ref().map_or(0, |s| s.sol.d + 1)
}

/// Backward error of the solve, max_n |r_n| / Σ_m |P(n,m) c_m|.
///
/// # Safety
/// `sol` must be a live handle; `out` receives a string for
/// [`fpr_string_free`].
#[no_mangle]
pub unsafe extern "C" fn fpr_solution_backward_error(sol: *const FprSolution, out: *mut *mut c_char) -> FprStatus {
    guard(|| {
        let s = solution_ref(sol)?;
        emit(out, &s.sol.backward_error, 6)
    })
}

/// # Safety
/// `sol` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fpr_solution_free(sol: *mut FprSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

fn terms_arg(terms: usize) -> Option<usize> {
    (terms > 0).then_some(terms)
}

/// Magnetic extrapolant at β; `terms` = 0 selects the default tail length.
///
/// # Safety
/// Pointers must be valid; `out` receives a string for [`fpr_string_free`].
#[no_mangle]
pub unsafe extern "C" fn fpr_extrapolate_magnetic(
    sol: *const FprSolution,
    beta: *const c_char,
    terms: usize,
    sig: usize,
    out: *mut *mut c_char,
) -> FprStatus {
    guard(|| {
        let s = solution_ref(sol)?;
        let beta = number(&s.ctx, beta, "beta")?;
        let r = extrapolate_magnetic(&beta, &s.sol, terms_arg(terms), &s.ctx)?;
        emit(out, r.real_value(), sig)
    })
}

/// Electric extrapolant at κ, continued from below the cut.
///
/// # Safety
/// Pointers must be valid; both outputs receive strings for
/// [`fpr_string_free`].
#[no_mangle]
pub unsafe extern "C" fn fpr_extrapolate_electric(
    sol: *const FprSolution,
    kappa: *const c_char,
    terms: usize,
    sig: usize,
    out_re: *mut *mut c_char,
    out_im: *mut *mut c_char,
) -> FprStatus {
    guard(|| {
        let s = solution_ref(sol)?;
        let kappa = number(&s.ctx, kappa, "kappa")?;
        if out_re.is_null() || out_im.is_null() {
            return Err(null("output pointer"));
        }
        let r = extrapolate_electric(&kappa, &s.sol, terms_arg(terms), ContinuationBranch::Below, &s.ctx)?;
        emit(out_re, &r.value.re, sig)?;
        emit(out_im, &r.value.im, sig)
    })
}
