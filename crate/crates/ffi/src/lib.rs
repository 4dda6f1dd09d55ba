//! C ABI for `optobdd`.
//!
//! Functions and diagrams are opaque handles owned by the caller and released
//! with the matching `*_free` function. Every fallible call returns an
//! [`OptobddStatus`]; on failure [`optobdd_last_error`] describes the most
//! recent error on the calling thread. Variables are numbered from 1 and
//! orders are given root first.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use optobdd::dnc::{DncConfig, DncLevel};
use optobdd::{build_diagram, min_obdd_fs, opt_obdd_composed, params, parse_expression};
use optobdd::{Diagram, DiagramKind, Error, SearchMode, TruthTable, VariableOrder};

pub const OPTOBDD_KIND_OBDD: u32 = 0;
pub const OPTOBDD_KIND_ZDD: u32 = 1;

pub const OPTOBDD_MODE_CLASSICAL: u32 = 0;
pub const OPTOBDD_MODE_QSIM: u32 = 1;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OptobddStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    TooLarge = 4,
    Solver = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// A Boolean function given by its truth table.
pub struct OptobddFunction {
    tt: TruthTable,
}

/// A reduced OBDD or ZDD for a fixed order.
pub struct OptobddDiagram {
    diagram: Diagram,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(OptobddStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Syntax { .. } | Error::Format(_) => OptobddStatus::Parse,
            Error::TooLarge { .. } | Error::VariableCount { .. } => OptobddStatus::TooLarge,
            Error::Solver(_) => OptobddStatus::Solver,
            _ => OptobddStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn fail(status: OptobddStatus, msg: impl Into<String>) -> Failure {
    Failure(status, msg.into())
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> OptobddStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OptobddStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            OptobddStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    // SAFETY: the caller passes either null or a valid pointer.
    unsafe { p.as_ref() }.ok_or_else(|| fail(OptobddStatus::NullPointer, format!("{what} is null")))
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(fail(OptobddStatus::NullPointer, format!("{what} is null")));
    }
    // SAFETY: non-null and nul-terminated by contract.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| fail(OptobddStatus::Parse, format!("{what} is not UTF-8")))
}

unsafe fn write_out<T>(p: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        return Err(fail(OptobddStatus::NullPointer, format!("{what} is null")));
    }
    // SAFETY: non-null and writable by contract.
    unsafe { p.write(value) };
    Ok(())
}

fn kind_of(kind: u32) -> Result<DiagramKind, Failure> {
    match kind {
        OPTOBDD_KIND_OBDD => Ok(DiagramKind::Obdd),
        OPTOBDD_KIND_ZDD => Ok(DiagramKind::Zdd),
        other => Err(fail(OptobddStatus::InvalidArgument, format!("unknown diagram kind {other}"))),
    }
}

fn mode_of(mode: u32) -> Result<SearchMode, Failure> {
    match mode {
        OPTOBDD_MODE_CLASSICAL => Ok(SearchMode::Classical),
        OPTOBDD_MODE_QSIM => Ok(SearchMode::SimulatedQuantum),
        other => Err(fail(OptobddStatus::InvalidArgument, format!("unknown search mode {other}"))),
    }
}

unsafe fn write_order(order: &VariableOrder, out: *mut usize, cap: usize) -> Result<(), Failure> {
    let read = order.read_order();
    if out.is_null() {
        return Err(fail(OptobddStatus::NullPointer, "order buffer is null"));
    }
    if cap < read.len() {
        return Err(fail(
            OptobddStatus::BufferTooSmall,
            format!("order buffer holds {cap}, need {}", read.len()),
        ));
    }
    for (i, v) in read.iter().enumerate() {
        // SAFETY: `out` has room for `cap >= read.len()` elements.
        unsafe { out.add(i).write(v + 1) };
    }
    Ok(())
}

unsafe fn emit_function(tt: TruthTable, out: *mut *mut OptobddFunction) -> Result<(), Failure> {
    if out.is_null() {
        return Err(fail(OptobddStatus::NullPointer, "output handle is null"));
    }
    let handle = Box::into_raw(Box::new(OptobddFunction { tt }));
    // SAFETY: checked non-null above.
    unsafe { out.write(handle) };
    Ok(())
}

/// Library version, a static nul-terminated string.
#[no_mangle]
pub extern "C" fn optobdd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the most recent failure on this thread, or NULL. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn optobdd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parse an expression over `x1..xn` (`~ & ^ |`, parentheses, `0`, `1`).
///
/// # Safety
/// `expr` must be null or a nul-terminated string; `out` must be null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn optobdd_function_from_expr(
    expr: *const c_char,
    n: usize,
    out: *mut *mut OptobddFunction,
) -> OptobddStatus {
    guard(|| {
        let text = unsafe { c_str(expr, "expr") }?;
        let tt = parse_expression(text, n)?;
        unsafe { emit_function(tt, out) }
    })
}

/// Read the text format: an `n=<n>` line followed by `2^n` bits, `x1` least
/// significant.
///
/// # Safety
/// As [`optobdd_function_from_expr`].
#[no_mangle]
pub unsafe extern "C" fn optobdd_function_from_text(
    text: *const c_char,
    out: *mut *mut OptobddFunction,
) -> OptobddStatus {
    guard(|| {
        let text = unsafe { c_str(text, "text") }?;
        let tt = TruthTable::from_text(text)?;
        unsafe { emit_function(tt, out) }
    })
}

/// Uniformly random function, reproducible from `seed`.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn optobdd_function_random(n: usize, seed: u64, out: *mut *mut OptobddFunction) -> OptobddStatus {
    guard(|| {
        let tt = TruthTable::random(n, seed)?;
        unsafe { emit_function(tt, out) }
    })
}

/// Number of variables, 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn optobdd_function_num_vars(f: *const OptobddFunction) -> usize {
    unsafe { f.as_ref() }.map_or(0, |f| f.tt.n())
}

/// Value at the point whose bit `i` (from the least significant) is `x_{i+1}`.
///
/// # Safety
/// `f` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn optobdd_function_evaluate(
    f: *const OptobddFunction,
    point: u64,
    out: *mut bool,
) -> OptobddStatus {
    guard(|| {
        let f = unsafe { deref(f, "function") }?;
        let idx = usize::try_from(point)
            .ok()
            .filter(|&i| i < f.tt.len())
            .ok_or_else(|| fail(OptobddStatus::InvalidArgument, format!("point {point} out of range")))?;
        unsafe { write_out(out, f.tt.get(idx), "out") }
    })
}

/// # Safety
/// `f` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn optobdd_function_free(f: *mut OptobddFunction) {
    if !f.is_null() {
        // SAFETY: created by Box::into_raw in this library.
        drop(unsafe { Box::from_raw(f) });
    }
}

/// Exact minimum by the subset sweep. Writes the optimal order (root first,
/// 1-based) into `order_out[0..n]` and its nonterminal count into `cost_out`.
///
/// # Safety
/// `f` must be null or a live handle; `order_out` must hold `order_cap`
/// elements; `cost_out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn optobdd_minimize_fs(
    f: *const OptobddFunction,
    kind: u32,
    order_out: *mut usize,
    order_cap: usize,
    cost_out: *mut u32,
) -> OptobddStatus {
    guard(|| {
        let f = unsafe { deref(f, "function") }?;
        let kind = kind_of(kind)?;
        if cost_out.is_null() {
            return Err(fail(OptobddStatus::NullPointer, "cost_out is null"));
        }
        let m = min_obdd_fs(&f.tt, kind);
        unsafe { write_order(&m.order, order_out, order_cap) }?;
        unsafe { write_out(cost_out, m.min_cost, "cost_out") }
    })
}

/// Divide-and-conquer minimum. `alphas` holds `levels` rows of `k` split
/// fractions, innermost level first; `levels == 1` is the single-level
/// driver. `query_bound_out` may be NULL; in `OPTOBDD_MODE_QSIM` it receives
/// the summed nominal query bound.
///
/// # Safety
/// `alphas` must hold `levels * k` values; other pointers as in
/// [`optobdd_minimize_fs`].
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn optobdd_minimize_dnc(
    f: *const OptobddFunction,
    kind: u32,
    alphas: *const f64,
    k: usize,
    levels: usize,
    mode: u32,
    order_out: *mut usize,
    order_cap: usize,
    cost_out: *mut u32,
    query_bound_out: *mut u64,
) -> OptobddStatus {
    guard(|| {
        let f = unsafe { deref(f, "function") }?;
        let kind = kind_of(kind)?;
        let mode = mode_of(mode)?;
        if alphas.is_null() {
            return Err(fail(OptobddStatus::NullPointer, "alphas is null"));
        }
        if k == 0 || levels == 0 {
            return Err(fail(OptobddStatus::InvalidArgument, "k and levels must be positive"));
        }
        if cost_out.is_null() {
            return Err(fail(OptobddStatus::NullPointer, "cost_out is null"));
        }
        let len = k
            .checked_mul(levels)
            .ok_or_else(|| fail(OptobddStatus::InvalidArgument, "alpha count overflows"))?;
        // SAFETY: caller guarantees `levels * k` readable values.
        let flat = unsafe { std::slice::from_raw_parts(alphas, len) };
        let chain = flat
            .chunks_exact(k)
            .map(|row| DncLevel::new(row.to_vec()))
            .collect::<Result<Vec<_>, _>>()?;
        let cfg = DncConfig::chain(chain, kind, mode);
        let (state, stats) = opt_obdd_composed(&f.tt, &cfg)?;
        unsafe { write_order(&state.completed_order(), order_out, order_cap) }?;
        unsafe { write_out(cost_out, state.min_cost(), "cost_out") }?;
        if !query_bound_out.is_null() {
            unsafe { write_out(query_bound_out, stats.total_quantum_query_bound, "query_bound_out") }?;
        }
        Ok(())
    })
}

/// Build the reduced diagram for `read_order` (root first, 1-based).
///
/// # Safety
/// `f` null or live; `read_order` must hold `len` values; `out` null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn optobdd_diagram_build(
    f: *const OptobddFunction,
    read_order: *const usize,
    len: usize,
    kind: u32,
    out: *mut *mut OptobddDiagram,
) -> OptobddStatus {
    guard(|| {
        let f = unsafe { deref(f, "function") }?;
        let kind = kind_of(kind)?;
        if read_order.is_null() {
            return Err(fail(OptobddStatus::NullPointer, "read_order is null"));
        }
        if out.is_null() {
            return Err(fail(OptobddStatus::NullPointer, "output handle is null"));
        }
        // SAFETY: caller guarantees `len` readable values.
        let vars = unsafe { std::slice::from_raw_parts(read_order, len) };
        let zero_based = vars
            .iter()
            .map(|&v| v.checked_sub(1))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| fail(OptobddStatus::InvalidArgument, "variables are numbered from 1"))?;
        let order = VariableOrder::from_read_order(&zero_based)?;
        let diagram = build_diagram(&f.tt, &order, kind)?;
        let handle = Box::into_raw(Box::new(OptobddDiagram { diagram }));
        unsafe { out.write(handle) };
        Ok(())
    })
}

/// Nonterminal node count, 0 for a null handle.
///
/// # Safety
/// `d` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn optobdd_diagram_nonterminals(d: *const OptobddDiagram) -> usize {
    unsafe { d.as_ref() }.map_or(0, |d| d.diagram.nonterminals())
}

/// Nonterminals plus reachable terminals, 0 for a null handle.
///
/// # Safety
/// `d` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn optobdd_diagram_total_size(d: *const OptobddDiagram) -> usize {
    unsafe { d.as_ref() }.map_or(0, |d| d.diagram.total_size())
}

/// Number of nodes labelled with variable `var` (1-based).
///
/// # Safety
/// `d` null or live; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn optobdd_diagram_width(d: *const OptobddDiagram, var: usize, out: *mut usize) -> OptobddStatus {
    guard(|| {
        let d = unsafe { deref(d, "diagram") }?;
        let v = var
            .checked_sub(1)
            .ok_or_else(|| fail(OptobddStatus::InvalidArgument, "variables are numbered from 1"))?;
        let w = d.diagram.level_width(v)?;
        unsafe { write_out(out, w, "out") }
    })
}

/// Graphviz rendering; release the string with [`optobdd_string_free`].
///
/// # Safety
/// `d` null or live; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn optobdd_diagram_to_dot(d: *const OptobddDiagram, out: *mut *mut c_char) -> OptobddStatus {
    guard(|| {
        let d = unsafe { deref(d, "diagram") }?;
        let dot = CString::new(d.diagram.to_dot()).map_err(|_| fail(OptobddStatus::Panic, "nul in output"))?;
        unsafe { write_out(out, dot.into_raw(), "out") }
    })
}

/// # Safety
/// `d` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn optobdd_diagram_free(d: *mut OptobddDiagram) {
    if !d.is_null() {
        // SAFETY: created by Box::into_raw in this library.
        drop(unsafe { Box::from_raw(d) });
    }
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn optobdd_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: created by CString::into_raw in this library.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Balanced split fractions for `k` splits over a `gamma^n` subroutine.
/// Writes `k` values into `alphas_out` and the resulting base into
/// `beta_out`.
///
/// # Safety
/// `alphas_out` must hold `alphas_cap` values; `beta_out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn optobdd_solve_params(
    k: usize,
    gamma: f64,
    alphas_out: *mut f64,
    alphas_cap: usize,
    beta_out: *mut f64,
) -> OptobddStatus {
    guard(|| {
        if alphas_out.is_null() || beta_out.is_null() {
            return Err(fail(OptobddStatus::NullPointer, "output buffer is null"));
        }
        if alphas_cap < k {
            return Err(fail(
                OptobddStatus::BufferTooSmall,
                format!("alpha buffer holds {alphas_cap}, need {k}"),
            ));
        }
        let s = params::solve_system(k, gamma)?;
        for (i, a) in s.alphas.iter().enumerate() {
            // SAFETY: `alphas_cap >= k` slots.
            unsafe { alphas_out.add(i).write(*a) };
        }
        unsafe { write_out(beta_out, s.beta_out, "beta_out") }
    })
}
