//! C ABI for `entmon`.
//!
//! States and parsed expressions are opaque heap handles created by the
//! `*_new`/`*_parse` functions and released with the matching `*_free`.
//! Every fallible call returns an [`EntmonStatus`]; on failure a message is
//! available from [`entmon_last_error_message`] on the same thread.
//! Amplitudes cross the boundary as interleaved `(re, im)` pairs in
//! row-major order with the last party fastest.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use entmon::invariants::{
    builtin_invariants_of_state, eval_contraction, parse_contraction, tangle, ContractionExpr,
};
use entmon::locc::slocc_bound;
use entmon::monotones::{solve_e, RankVector, SolverConfig};
use entmon::{catalog, Error, StateTensor};
use num_complex::Complex64;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntmonStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    BadDimension = 4,
    BadRank = 5,
    ParseError = 6,
    DimensionMismatch = 7,
    Unsupported = 8,
    NotNormalized = 9,
    UnknownState = 10,
    Io = 11,
    Panic = 12,
}

impl From<&Error> for EntmonStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::LengthMismatch { .. } | Error::BadDimension(_) => EntmonStatus::BadDimension,
            Error::BadRank(_) => EntmonStatus::BadRank,
            Error::Syntax { .. }
            | Error::IndexArity { .. }
            | Error::SlotArity(_)
            | Error::EpsDimension { .. }
            | Error::Json(_) => EntmonStatus::ParseError,
            Error::DimensionMismatch(_)
            | Error::StructureMismatch(_)
            | Error::PartyCountMismatch { .. }
            | Error::ShapeMismatch(_) => EntmonStatus::DimensionMismatch,
            Error::PartyCountUnsupported(_) | Error::NotSimpleForm(_) => EntmonStatus::Unsupported,
            Error::NotNormalized(_) => EntmonStatus::NotNormalized,
            Error::UnknownState(_) => EntmonStatus::UnknownState,
            Error::Io(_) => EntmonStatus::Io,
            _ => EntmonStatus::InvalidArgument,
        }
    }
}

/// Opaque pure state.
pub struct EntmonState(StateTensor);

/// Opaque parsed contraction expression.
pub struct EntmonExpr(ContractionExpr);

/// Outcome of [`entmon_solve_e`].
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct EntmonSolveResult {
    pub value: f64,
    pub converged: bool,
    pub exact: bool,
    pub restarts_agreeing: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(EntmonStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure((&e).into(), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(EntmonStatus::NullPointer, format!("`{what}` is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> EntmonStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            EntmonStatus::Ok
        }
        Ok(Err(Failure(code, msg))) => {
            set_last_error(&msg);
            code
        }
        Err(_) => {
            set_last_error("internal panic");
            EntmonStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(EntmonStatus::InvalidUtf8, format!("`{what}` is not UTF-8")))
}

unsafe fn slice_arg<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(p: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(value);
    Ok(())
}

fn config(restarts: usize, seed: u64) -> SolverConfig {
    SolverConfig {
        restarts,
        seed,
        ..SolverConfig::default()
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn entmon_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a state from `n_parties` dims and `n_amps` interleaved `(re, im)`
/// pairs (`2 * n_amps` doubles).
///
/// # Safety
/// `dims` and `amps` must point to arrays of the stated lengths and `out`
/// to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn entmon_state_new(
    dims: *const usize,
    n_parties: usize,
    amps: *const f64,
    n_amps: usize,
    out: *mut *mut EntmonState,
) -> EntmonStatus {
    guard(|| {
        let dims = slice_arg(dims, n_parties, "dims")?.to_vec();
        let raw = slice_arg(amps, 2 * n_amps, "amps")?;
        let amps = raw.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
        let s = StateTensor::new(dims, amps)?;
        write_out(out, Box::into_raw(Box::new(EntmonState(s))), "out")
    })
}

/// Looks up a catalog state (`ghz`, `w`, `bell-prod`, `kempe1`, `kempe2`,
/// `haar:D:S`).
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn entmon_state_catalog(
    name: *const c_char,
    out: *mut *mut EntmonState,
) -> EntmonStatus {
    guard(|| {
        let s = catalog::by_name(str_arg(name, "name")?)?;
        write_out(out, Box::into_raw(Box::new(EntmonState(s))), "out")
    })
}

/// Parses a state from its JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn entmon_state_from_json(
    json: *const c_char,
    out: *mut *mut EntmonState,
) -> EntmonStatus {
    guard(|| {
        let s = StateTensor::from_json(str_arg(json, "json")?)?;
        write_out(out, Box::into_raw(Box::new(EntmonState(s))), "out")
    })
}

/// Releases a state. Null is ignored.
///
/// # Safety
/// `state` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn entmon_state_free(state: *mut EntmonState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// # Safety
/// `state` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn entmon_state_n_parties(
    state: *const EntmonState,
    out: *mut usize,
) -> EntmonStatus {
    guard(|| write_out(out, ref_arg(state, "state")?.0.n_parties(), "out"))
}

/// # Safety
/// `state` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn entmon_state_squared_norm(
    state: *const EntmonState,
    out: *mut f64,
) -> EntmonStatus {
    guard(|| write_out(out, ref_arg(state, "state")?.0.squared_norm(), "out"))
}

/// `E_k` for ranks `ranks[0..n_ranks]` with the default iteration limits.
///
/// # Safety
/// `state` must be a live handle, `ranks` must hold `n_ranks` entries and
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn entmon_solve_e(
    state: *const EntmonState,
    ranks: *const usize,
    n_ranks: usize,
    restarts: usize,
    seed: u64,
    out: *mut EntmonSolveResult,
) -> EntmonStatus {
    guard(|| {
        let s = ref_arg(state, "state")?;
        let ks = RankVector::new(slice_arg(ranks, n_ranks, "ranks")?.to_vec());
        let r = solve_e(&s.0, &ks, &config(restarts, seed))?;
        let res = EntmonSolveResult {
            value: r.value,
            converged: r.converged,
            exact: r.exact,
            restarts_agreeing: r.restarts_agreeing,
        };
        write_out(out, res, "out")
    })
}

/// Writes `I2, I4_1, I4_2, I4_3, I4_4, I6` of a three-party state to
/// `out[0..6]`.
///
/// # Safety
/// `state` must be a live handle and `out` must hold 6 doubles.
#[no_mangle]
pub unsafe extern "C" fn entmon_builtin_invariants(
    state: *const EntmonState,
    out: *mut f64,
) -> EntmonStatus {
    guard(|| {
        let s = ref_arg(state, "state")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let inv = builtin_invariants_of_state(&s.0)?;
        let vals = [inv.i2, inv.i4_1, inv.i4_2, inv.i4_3, inv.i4_4, inv.i6];
        ptr::copy_nonoverlapping(vals.as_ptr(), out, vals.len());
        Ok(())
    })
}

/// Residual tangle of a three-qubit state.
///
/// # Safety
/// `state` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn entmon_tangle(state: *const EntmonState, out: *mut f64) -> EntmonStatus {
    guard(|| write_out(out, tangle(&ref_arg(state, "state")?.0)?, "out"))
}

/// Parses a contraction expression such as `psi[i,j] * psi*[i,j]`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn entmon_expr_parse(
    text: *const c_char,
    out: *mut *mut EntmonExpr,
) -> EntmonStatus {
    guard(|| {
        let e = parse_contraction(str_arg(text, "text")?)?;
        write_out(out, Box::into_raw(Box::new(EntmonExpr(e))), "out")
    })
}

/// Evaluates an expression on a state.
///
/// # Safety
/// Handles must be live; `out_re` and `out_im` writable.
#[no_mangle]
pub unsafe extern "C" fn entmon_expr_eval(
    expr: *const EntmonExpr,
    state: *const EntmonState,
    out_re: *mut f64,
    out_im: *mut f64,
) -> EntmonStatus {
    guard(|| {
        let e = ref_arg(expr, "expr")?;
        let s = ref_arg(state, "state")?;
        if out_re.is_null() || out_im.is_null() {
            return Err(null("out"));
        }
        let v = eval_contraction(&e.0, &s.0)?.value;
        out_re.write(v.re);
        out_im.write(v.im);
        Ok(())
    })
}

/// # Safety
/// `expr` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn entmon_expr_is_simple(
    expr: *const EntmonExpr,
    out: *mut bool,
) -> EntmonStatus {
    guard(|| write_out(out, ref_arg(expr, "expr")?.0.simple_form().simple, "out"))
}

/// Releases an expression. Null is ignored.
///
/// # Safety
/// `expr` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn entmon_expr_free(expr: *mut EntmonExpr) {
    if !expr.is_null() {
        drop(Box::from_raw(expr));
    }
}

/// Overall success-probability bound for converting `a` into `b` over the
/// default monotone set. `*out_constrained` is false when no monotone
/// restricts the conversion, in which case `*out_bound` is set to 1.
///
/// # Safety
/// Handles must be live; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn entmon_slocc_bound(
    a: *const EntmonState,
    b: *const EntmonState,
    restarts: usize,
    seed: u64,
    out_bound: *mut f64,
    out_constrained: *mut bool,
) -> EntmonStatus {
    guard(|| {
        let a = ref_arg(a, "a")?;
        let b = ref_arg(b, "b")?;
        if out_bound.is_null() || out_constrained.is_null() {
            return Err(null("out"));
        }
        let r = slocc_bound(&a.0, &b.0, None, &config(restarts, seed))?;
        out_bound.write(r.overall.unwrap_or(1.0));
        out_constrained.write(r.overall.is_some());
        Ok(())
    })
}
