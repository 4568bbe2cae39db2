//! C ABI over the `mdms` solver.
//!
//! Instances, utilities and solutions are opaque heap handles released with
//! their `*_free` function. Every fallible call returns an [`MdmsStatus`]; on
//! failure [`mdms_last_error`] describes the cause on the calling thread.

#![deny(unsafe_op_in_unsafe_fn)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mdms::{AlgoConfig, Algorithm, Error, Instance, LinearUtility, Problem, Schedule, Solution, Utility};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MdmsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Parameter = 4,
    SizeGuard = 5,
    IndexOutOfRange = 6,
    Infeasible = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MdmsAlgorithm {
    Gist = 0,
    GistExhaustive = 1,
    Simple = 2,
    Greedy = 3,
    Random = 4,
    BruteForce = 5,
}

impl From<MdmsAlgorithm> for Algorithm {
    fn from(a: MdmsAlgorithm) -> Self {
        match a {
            MdmsAlgorithm::Gist => Algorithm::Gist,
            MdmsAlgorithm::GistExhaustive => Algorithm::GistExhaustive,
            MdmsAlgorithm::Simple => Algorithm::Simple,
            MdmsAlgorithm::Greedy => Algorithm::Greedy,
            MdmsAlgorithm::Random => Algorithm::Random,
            MdmsAlgorithm::BruteForce => Algorithm::BruteForce,
        }
    }
}

/// Solver options. Obtain defaults from [`mdms_options_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MdmsOptions {
    /// Geometric grid parameter in (0, 1).
    pub epsilon: f64,
    /// Seed for the random baseline.
    pub seed: u64,
    /// Nonzero selects the exhaustive threshold schedule.
    pub exhaustive: u8,
    /// Nonzero sweeps GIST thresholds on a thread pool.
    pub parallel: u8,
}

/// Opaque metric instance.
pub struct MdmsInstance(Instance);

/// Opaque utility function.
pub struct MdmsUtility(Utility);

/// Opaque solver result.
pub struct MdmsSolution(Solution);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> MdmsStatus {
    match e {
        Error::Io(_) | Error::Parse(_) | Error::Csv(_) | Error::Input(_) | Error::Metric(_) => MdmsStatus::Parse,
        Error::Parameter(_) | Error::AlreadySelected(_) => MdmsStatus::Parameter,
        Error::IndexOutOfRange { .. } => MdmsStatus::IndexOutOfRange,
        Error::TooLarge { .. } => MdmsStatus::SizeGuard,
        Error::Infeasible(_) => MdmsStatus::Infeasible,
    }
}

struct Failure(MdmsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(MdmsStatus::NullPointer, format!("{what} is null"))
}

// Runs `body`, records any failure and maps panics to `Panic`.
fn guarded(body: impl FnOnce() -> Result<(), Failure>) -> MdmsStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => MdmsStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside mdms");
            MdmsStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    // SAFETY: caller passes a nul-terminated string.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|e| Failure(MdmsStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn slice_arg<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    // SAFETY: caller guarantees `len` readable elements.
    Ok(unsafe { std::slice::from_raw_parts(p, len) })
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    // SAFETY: non-null handles come from this library.
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

fn store<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    // SAFETY: checked non-null; caller owns the slot.
    unsafe { *out = Box::into_raw(Box::new(value)) };
    Ok(())
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn mdms_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread. Valid until the next
/// failing call on the same thread; empty when nothing has failed.
#[no_mangle]
pub extern "C" fn mdms_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn mdms_options_default() -> MdmsOptions {
    MdmsOptions { epsilon: 0.1, seed: 0, exhaustive: 0, parallel: 0 }
}

/// Parses instance JSON `{"n", "metric", "points"|"matrix"}`.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mdms_instance_from_json(json: *const c_char, out: *mut *mut MdmsInstance) -> MdmsStatus {
    guarded(|| {
        let s = unsafe { str_arg(json, "json") }?;
        store(out, MdmsInstance(Instance::from_json(s)?))
    })
}

/// Euclidean instance from `n * dim` row-major coordinates.
///
/// # Safety
/// `coords` must hold `n * dim` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mdms_instance_euclidean(
    coords: *const f64,
    n: usize,
    dim: usize,
    out: *mut *mut MdmsInstance,
) -> MdmsStatus {
    guarded(|| {
        let total = n
            .checked_mul(dim)
            .ok_or_else(|| Failure(MdmsStatus::Parameter, "n * dim overflows".into()))?;
        let flat = unsafe { slice_arg(coords, total, "coords") }?;
        let points = flat.chunks(dim.max(1)).map(<[f64]>::to_vec).collect();
        store(out, MdmsInstance(Instance::euclidean(points)?))
    })
}

/// Number of points, or 0 for a null handle.
///
/// # Safety
/// `instance` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mdms_instance_len(instance: *const MdmsInstance) -> usize {
    unsafe { instance.as_ref() }.map_or(0, |i| i.0.len())
}

/// Distance between points `i` and `j`.
///
/// # Safety
/// `instance` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mdms_instance_distance(
    instance: *const MdmsInstance,
    i: usize,
    j: usize,
    out: *mut f64,
) -> MdmsStatus {
    guarded(|| {
        let inst = unsafe { ref_arg(instance, "instance") }?;
        let d = inst.0.checked_dist(i, j)?;
        let out = unsafe { out.as_mut() }.ok_or_else(|| null("output pointer"))?;
        *out = d;
        Ok(())
    })
}

/// # Safety
/// `instance` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mdms_instance_free(instance: *mut MdmsInstance) {
    if !instance.is_null() {
        // SAFETY: created by Box::into_raw in this library.
        drop(unsafe { Box::from_raw(instance) });
    }
}

/// Parses utility JSON tagged by `"kind"`.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mdms_utility_from_json(json: *const c_char, out: *mut *mut MdmsUtility) -> MdmsStatus {
    guarded(|| {
        let s = unsafe { str_arg(json, "json") }?;
        store(out, MdmsUtility(Utility::from_json(s)?))
    })
}

/// Modular utility `g(S) = sum of weights[i]`.
///
/// # Safety
/// `weights` must hold `n` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mdms_utility_linear(weights: *const f64, n: usize, out: *mut *mut MdmsUtility) -> MdmsStatus {
    guarded(|| {
        let w = unsafe { slice_arg(weights, n, "weights") }?;
        store(out, MdmsUtility(LinearUtility::new(w.to_vec())?.into()))
    })
}

/// Value and marginal queries answered so far by this utility.
///
/// # Safety
/// `utility` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mdms_utility_queries(utility: *const MdmsUtility) -> u64 {
    unsafe { utility.as_ref() }.map_or(0, |u| u.0.queries())
}

/// # Safety
/// `utility` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mdms_utility_free(utility: *mut MdmsUtility) {
    if !utility.is_null() {
        // SAFETY: created by Box::into_raw in this library.
        drop(unsafe { Box::from_raw(utility) });
    }
}

/// `f(S) = g(S) + lambda * div(S)` for the index set `set[0..len]`.
///
/// # Safety
/// Handles must be live, `set` must hold `len` indices and `out_f` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn mdms_objective(
    instance: *const MdmsInstance,
    utility: *const MdmsUtility,
    lambda: f64,
    set: *const usize,
    len: usize,
    out_f: *mut f64,
) -> MdmsStatus {
    guarded(|| {
        let inst = unsafe { ref_arg(instance, "instance") }?;
        let util = unsafe { ref_arg(utility, "utility") }?;
        let set = unsafe { slice_arg(set, len, "set") }?;
        let problem = Problem::new(&inst.0, &util.0, lambda, 1)?;
        let eval = problem.objective(set)?;
        let out = unsafe { out_f.as_mut() }.ok_or_else(|| null("output pointer"))?;
        *out = eval.f;
        Ok(())
    })
}

/// Runs `algorithm` with cardinality `k`. `options` may be null for the
/// defaults.
///
/// # Safety
/// Handles must be live, `options` null or readable, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mdms_solve(
    instance: *const MdmsInstance,
    utility: *const MdmsUtility,
    algorithm: MdmsAlgorithm,
    lambda: f64,
    k: usize,
    options: *const MdmsOptions,
    out: *mut *mut MdmsSolution,
) -> MdmsStatus {
    guarded(|| {
        let inst = unsafe { ref_arg(instance, "instance") }?;
        let util = unsafe { ref_arg(utility, "utility") }?;
        let opts = unsafe { options.as_ref() }.copied().unwrap_or_else(|| mdms_options_default());
        let schedule = if opts.exhaustive != 0 { Schedule::Exhaustive } else { Schedule::Geometric };
        let problem = Problem::new(&inst.0, &util.0, lambda, k)?
            .with_epsilon(opts.epsilon)?
            .with_schedule(schedule);
        let config = AlgoConfig {
            seed: opts.seed,
            parallel_thresholds: opts.parallel != 0,
            ..AlgoConfig::default()
        };
        store(out, MdmsSolution(mdms::solve(&problem, algorithm.into(), &config)?))
    })
}

/// Number of selected points, or 0 for a null handle.
///
/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mdms_solution_len(solution: *const MdmsSolution) -> usize {
    unsafe { solution.as_ref() }.map_or(0, |s| s.0.selected.len())
}

/// Copies the selected indices (ascending) into `buf`. Fails with
/// `BufferTooSmall` when `cap` is below [`mdms_solution_len`].
///
/// # Safety
/// `solution` must be live and `buf` must have room for `cap` indices.
#[no_mangle]
pub unsafe extern "C" fn mdms_solution_selected(solution: *const MdmsSolution, buf: *mut usize, cap: usize) -> MdmsStatus {
    guarded(|| {
        let sol = unsafe { ref_arg(solution, "solution") }?;
        let sel = &sol.0.selected;
        if cap < sel.len() {
            return Err(Failure(
                MdmsStatus::BufferTooSmall,
                format!("buffer holds {cap} indices, {} needed", sel.len()),
            ));
        }
        if !sel.is_empty() {
            if buf.is_null() {
                return Err(null("buf"));
            }
            // SAFETY: room for `cap >= sel.len()` indices.
            unsafe { ptr::copy_nonoverlapping(sel.as_ptr(), buf, sel.len()) };
        }
        Ok(())
    })
}

/// Writes `f`, `g` and `div` of the solution. Any output pointer may be null.
///
/// # Safety
/// `solution` must be live; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn mdms_solution_values(
    solution: *const MdmsSolution,
    f: *mut f64,
    g: *mut f64,
    div: *mut f64,
) -> MdmsStatus {
    guarded(|| {
        let sol = &unsafe { ref_arg(solution, "solution") }?.0;
        for (p, v) in [(f, sol.f_value), (g, sol.g_value), (div, sol.div_value)] {
            if let Some(p) = unsafe { p.as_mut() } {
                *p = v;
            }
        }
        Ok(())
    })
}

/// Utility queries issued by the run that produced `solution`.
///
/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mdms_solution_oracle_calls(solution: *const MdmsSolution) -> u64 {
    unsafe { solution.as_ref() }.map_or(0, |s| s.0.oracle_calls)
}

/// Winning GIST threshold, or a negative value when the winner came from the
/// `d = 0` pass, the diametrical pair, or another algorithm.
///
/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mdms_solution_threshold(solution: *const MdmsSolution) -> f64 {
    unsafe { solution.as_ref() }.and_then(|s| s.0.winning_threshold).unwrap_or(-1.0)
}

/// # Safety
/// `solution` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mdms_solution_free(solution: *mut MdmsSolution) {
    if !solution.is_null() {
        // SAFETY: created by Box::into_raw in this library.
        drop(unsafe { Box::from_raw(solution) });
    }
}
