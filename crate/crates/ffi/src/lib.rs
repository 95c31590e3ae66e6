//! C interface to the ckac library.
//!
//! Every function returns a `CkacStatus`. On failure a message describing
//! the error is kept per thread and can be read with `ckac_last_error`.
//! Handles returned through out-parameters are owned by the caller and must
//! be released with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ckac::automata::{accepts, PomsetAutomaton};
use ckac::bisim::{bisimilar, Bounds, RelationKind};
use ckac::expr::{lang_equiv_bounded, parse_with};
use ckac::pomset::{pomset_from_json, sync_translate};
use ckac::{CommTable, Error, Expr};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CkacStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Syntax = 3,
    InvalidInput = 4,
    Unsupported = 5,
    CapExceeded = 6,
    Internal = 7,
}

/// A parsed expression together with the communication table it was parsed against.
pub struct CkacExpr {
    expr: Expr,
    table: CommTable,
}

/// A pomset automaton together with its communication table.
pub struct CkacAutomaton {
    automaton: PomsetAutomaton,
    table: CommTable,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(CkacStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Syntax { .. } => CkacStatus::Syntax,
            Error::UnsupportedOperator(_)
            | Error::UnsupportedHypothesis(_)
            | Error::UnsupportedInput(_)
            | Error::UnsupportedStructure(_) => CkacStatus::Unsupported,
            Error::CapExceeded { .. } => CkacStatus::CapExceeded,
            _ => CkacStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CkacStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CkacStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal error");
            CkacStatus::Internal
        }
    }
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(CkacStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(CkacStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn table(p: *const c_char) -> Result<CommTable, Failure> {
    if p.is_null() {
        return Ok(CommTable::total());
    }
    Ok(CommTable::parse(c_str(p, "communication table")?)?)
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(CkacStatus::NullArgument, format!("{what} is null")))
}

fn out<T>(p: *mut T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure(CkacStatus::NullArgument, format!("{what} is null")))
    } else {
        Ok(())
    }
}

/// The message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn ckac_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses `text`. `comm_table` holds lines `a b result`; null means every
/// pair of actions communicates.
///
/// # Safety
/// Pointer arguments must be null or valid; strings must be nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn ckac_expr_parse(
    text: *const c_char,
    comm_table: *const c_char,
    out_expr: *mut *mut CkacExpr,
) -> CkacStatus {
    guard(|| {
        out(out_expr, "out_expr")?;
        let table = table(comm_table)?;
        let expr = parse_with(c_str(text, "text")?, &table)?;
        *out_expr = Box::into_raw(Box::new(CkacExpr { expr, table }));
        Ok(())
    })
}

/// # Safety
/// `expr` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ckac_expr_free(expr: *mut CkacExpr) {
    if !expr.is_null() {
        drop(Box::from_raw(expr));
    }
}

/// Prints an expression. Free the result with `ckac_string_free`.
///
/// # Safety
/// `expr` must be a live handle and `out_text` writable.
#[no_mangle]
pub unsafe extern "C" fn ckac_expr_to_string(
    expr: *const CkacExpr,
    out_text: *mut *mut c_char,
) -> CkacStatus {
    guard(|| {
        out(out_text, "out_text")?;
        let x = handle(expr, "expr")?;
        *out_text = CString::new(x.expr.to_string()).expect("no nul").into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ckac_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Whether the two expressions denote the same pomsets with at most `bound` events.
///
/// # Safety
/// Handles must be live and `out_equal` writable.
#[no_mangle]
pub unsafe extern "C" fn ckac_lang_equiv(
    x: *const CkacExpr,
    y: *const CkacExpr,
    bound: usize,
    out_equal: *mut bool,
) -> CkacStatus {
    guard(|| {
        out(out_equal, "out_equal")?;
        let (x, y) = (handle(x, "x")?, handle(y, "y")?);
        *out_equal = lang_equiv_bounded(&x.expr, &y.expr, bound)?;
        Ok(())
    })
}

/// Whether the two expressions are step bisimilar, exploring at most `cap`
/// states. The communication table of `x` is used.
///
/// # Safety
/// Handles must be live and `out_bisimilar` writable.
#[no_mangle]
pub unsafe extern "C" fn ckac_step_bisimilar(
    x: *const CkacExpr,
    y: *const CkacExpr,
    cap: usize,
    out_bisimilar: *mut bool,
) -> CkacStatus {
    guard(|| {
        out(out_bisimilar, "out_bisimilar")?;
        let (x, y) = (handle(x, "x")?, handle(y, "y")?);
        let bounds = Bounds {
            cap,
            ..Bounds::default()
        };
        *out_bisimilar = bisimilar(RelationKind::Step, &x.expr, &y.expr, &bounds, &x.table)?.holds;
        Ok(())
    })
}

/// An expression for the closure of `x` under the exchange laws.
///
/// # Safety
/// `x` must be live and `out_expr` writable.
#[no_mangle]
pub unsafe extern "C" fn ckac_closure(
    x: *const CkacExpr,
    out_expr: *mut *mut CkacExpr,
) -> CkacStatus {
    guard(|| {
        out(out_expr, "out_expr")?;
        let x = handle(x, "x")?;
        let expr = ckac::exchange::closure(&x.expr)?;
        *out_expr = Box::into_raw(Box::new(CkacExpr {
            expr,
            table: x.table.clone(),
        }));
        Ok(())
    })
}

/// Reads an automaton from its JSON form.
///
/// # Safety
/// Pointer arguments must be null or valid; strings must be nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn ckac_automaton_from_json(
    json: *const c_char,
    comm_table: *const c_char,
    out_automaton: *mut *mut CkacAutomaton,
) -> CkacStatus {
    guard(|| {
        out(out_automaton, "out_automaton")?;
        let table = table(comm_table)?;
        let automaton = PomsetAutomaton::from_json(c_str(json, "json")?, &table)?;
        *out_automaton = Box::into_raw(Box::new(CkacAutomaton { automaton, table }));
        Ok(())
    })
}

/// Whether the automaton accepts the pomset (JSON) from the named state.
/// Communication edges in the pomset are merged into single events first.
///
/// # Safety
/// Pointer arguments must be valid; strings must be nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn ckac_automaton_accepts(
    automaton: *const CkacAutomaton,
    state: *const c_char,
    pomset_json: *const c_char,
    out_accepted: *mut bool,
) -> CkacStatus {
    guard(|| {
        out(out_accepted, "out_accepted")?;
        let a = handle(automaton, "automaton")?;
        let name = c_str(state, "state")?;
        let q = a
            .automaton
            .state(name)
            .ok_or_else(|| Failure(CkacStatus::InvalidInput, format!("unknown state `{name}`")))?;
        let u = pomset_from_json(c_str(pomset_json, "pomset_json")?, &a.table)?;
        let u = sync_translate(&u, &a.table)?;
        *out_accepted = accepts(&a.automaton, q, &u)?;
        Ok(())
    })
}

/// # Safety
/// `automaton` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ckac_automaton_free(automaton: *mut CkacAutomaton) {
    if !automaton.is_null() {
        drop(Box::from_raw(automaton));
    }
}
