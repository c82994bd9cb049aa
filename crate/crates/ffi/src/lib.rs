//! C interface to `h3cycles`.
//!
//! Graphs are opaque handles created by `h3_graph_*` constructors and released
//! with `h3_graph_free`. Every function returns an `H3Status`; results come
//! back through out-pointers. Strings handed out by the library are JSON and
//! must be released with `h3_string_free`. After a failure,
//! `h3_last_error_message` describes it until the next call on the same thread.

use std::cell::RefCell;
use std::ffi::{CStr, CString, c_char};
use std::panic::{AssertUnwindSafe, catch_unwind};

use h3cycles::decomposer::{self, DecompositionStatus};
use h3cycles::euler;
use h3cycles::{DivisibilityKind, Error, ThreeGraph, io};

/// Result of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum H3Status {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Infeasible = 4,
    Budget = 5,
    Internal = 6,
    Panic = 7,
}

/// Which divisibility conditions `h3_check_divisibility` tests.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum H3Divisibility {
    Vertex3 = 0,
    Cycle = 1,
    K43 = 2,
}

/// Opaque 3-graph handle.
pub struct H3Graph {
    inner: ThreeGraph,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn status_of(e: &Error) -> H3Status {
    match e {
        Error::Parse { .. } | Error::Json(_) => H3Status::Parse,
        Error::IterationBudgetExceeded(_)
        | Error::LimitExceeded(_)
        | Error::ConstructionFailed(_)
        | Error::NoExtensionAvailable(_)
        | Error::GadgetConstructionFailed(_) => H3Status::Budget,
        Error::Internal(_) => H3Status::Internal,
        _ => H3Status::InvalidArgument,
    }
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<H3Status, Error>) -> H3Status {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(e)) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("panic inside h3cycles");
            H3Status::Panic
        }
    }
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            set_error(concat!("`", stringify!($p), "` is null"));
            return H3Status::NullPointer;
        })+
    };
}

fn boxed(g: ThreeGraph) -> *mut H3Graph {
    Box::into_raw(Box::new(H3Graph { inner: g }))
}

/// Hands `s` to the caller as a newly allocated string.
///
/// # Safety
/// `out` must be valid for writes.
unsafe fn put_json(s: String, out: *mut *mut c_char) -> Result<(), Error> {
    let c = CString::new(s).map_err(|e| Error::Internal(e.to_string()))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Message of the last failure on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[unsafe(no_mangle)]
pub extern "C" fn h3_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[unsafe(no_mangle)]
pub extern "C" fn h3_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates the complete 3-graph on `n` vertices.
///
/// # Safety
/// `out` must be valid for writes.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn h3_graph_complete(n: usize, out: *mut *mut H3Graph) -> H3Status {
    non_null!(out);
    guard(|| {
        if n > 2048 {
            return Err(Error::BadParams(format!("{n} vertices is too many for a complete graph")));
        }
        unsafe { *out = boxed(ThreeGraph::complete(n)) };
        Ok(H3Status::Ok)
    })
}

/// Creates a graph on `n` vertices from `count` triples stored as `3 * count` vertex indices.
///
/// # Safety
/// `triples` must point to `3 * count` readable values (or be null when `count` is 0)
/// and `out` must be valid for writes.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn h3_graph_from_triples(
    n: usize,
    triples: *const usize,
    count: usize,
    out: *mut *mut H3Graph,
) -> H3Status {
    non_null!(out);
    if count > 0 {
        non_null!(triples);
    }
    guard(|| {
        let flat: &[usize] = if count == 0 { &[] } else { unsafe { std::slice::from_raw_parts(triples, 3 * count) } };
        let g = ThreeGraph::build(n, flat.chunks_exact(3).map(|t| [t[0], t[1], t[2]]))?;
        unsafe { *out = boxed(g) };
        Ok(H3Status::Ok)
    })
}

/// Parses a graph in `.3g` text format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` valid for writes.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn h3_graph_parse(text: *const c_char, out: *mut *mut H3Graph) -> H3Status {
    non_null!(text, out);
    guard(|| {
        let s = unsafe { CStr::from_ptr(text) }
            .to_str()
            .map_err(|_| Error::Parse { line: 0, msg: "input is not UTF-8".into() })?;
        let g = io::parse_3g(s)?;
        unsafe { *out = boxed(g) };
        Ok(H3Status::Ok)
    })
}

/// Releases a graph. Null is ignored.
///
/// # Safety
/// `g` must come from an `h3_graph_*` constructor and not be used afterwards.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn h3_graph_free(g: *mut H3Graph) {
    if !g.is_null() {
        drop(unsafe { Box::from_raw(g) });
    }
}

/// Vertex and edge counts.
///
/// # Safety
/// `g` must be a live handle; `n_out` and `m_out` valid for writes.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn h3_graph_size(g: *const H3Graph, n_out: *mut usize, m_out: *mut usize) -> H3Status {
    non_null!(g, n_out, m_out);
    guard(|| {
        let g = unsafe { &(*g).inner };
        unsafe {
            *n_out = g.n();
            *m_out = g.edge_count();
        }
        Ok(H3Status::Ok)
    })
}

/// Minimum codegree over all pairs of distinct vertices.
///
/// # Safety
/// `g` must be a live handle and `out` valid for writes.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn h3_graph_min_codegree(g: *const H3Graph, out: *mut usize) -> H3Status {
    non_null!(g, out);
    guard(|| {
        unsafe { *out = (*g).inner.min_codegree() };
        Ok(H3Status::Ok)
    })
}

/// Tests divisibility; `ell` is only read for `H3_DIVISIBILITY_CYCLE`.
///
/// # Safety
/// `g` must be a live handle and `out` valid for writes.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn h3_check_divisibility(
    g: *const H3Graph,
    kind: H3Divisibility,
    ell: usize,
    out: *mut bool,
) -> H3Status {
    non_null!(g, out);
    guard(|| {
        let kind = match kind {
            H3Divisibility::Vertex3 => DivisibilityKind::Vertex3,
            H3Divisibility::Cycle => DivisibilityKind::Cycle(ell),
            H3Divisibility::K43 => DivisibilityKind::K43,
        };
        let c = unsafe { &(*g).inner }.check_divisibility(kind)?;
        unsafe { *out = c.divisible };
        Ok(H3Status::Ok)
    })
}

/// Exact decomposition into tight `ell`-cycles. The report JSON is written to
/// `json_out` for every outcome; the status is `H3_STATUS_INFEASIBLE` or
/// `H3_STATUS_BUDGET` when no decomposition was found.
///
/// # Safety
/// `g` must be a live handle and `json_out` valid for writes.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn h3_exact_decompose(
    g: *const H3Graph,
    ell: usize,
    budget: u64,
    json_out: *mut *mut c_char,
) -> H3Status {
    non_null!(g, json_out);
    guard(|| {
        let r = decomposer::exact_decompose(unsafe { &(*g).inner }, ell, budget);
        unsafe { put_json(serde_json::to_string(&r)?, json_out)? };
        Ok(match r.status {
            DecompositionStatus::Complete | DecompositionStatus::Partial => H3Status::Ok,
            DecompositionStatus::Infeasible => H3Status::Infeasible,
            DecompositionStatus::BudgetExceeded => H3Status::Budget,
        })
    })
}

/// Greedy packing of tight `ell`-cycles; writes the report JSON.
///
/// # Safety
/// `g` must be a live handle and `json_out` valid for writes.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn h3_greedy_pack(
    g: *const H3Graph,
    ell: usize,
    seed: u64,
    json_out: *mut *mut c_char,
) -> H3Status {
    non_null!(g, json_out);
    guard(|| {
        let r = decomposer::greedy_pack(unsafe { &(*g).inner }, ell, seed);
        unsafe { put_json(serde_json::to_string(&r)?, json_out)? };
        Ok(H3Status::Ok)
    })
}

/// Euler tour assembled from a spanning trail and spliced `ell`-cycles; writes
/// the tour as a JSON vertex array.
///
/// # Safety
/// `g` must be a live handle and `json_out` valid for writes.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn h3_euler_tour(
    g: *const H3Graph,
    ell: usize,
    seed: u64,
    json_out: *mut *mut c_char,
) -> H3Status {
    non_null!(g, json_out);
    guard(|| match euler::assemble_euler(unsafe { &(*g).inner }, ell, seed) {
        Ok(w) => {
            unsafe { put_json(serde_json::to_string(w.vertices())?, json_out)? };
            Ok(H3Status::Ok)
        }
        Err(Error::Precondition(msg)) => {
            set_error(msg);
            Ok(H3Status::Infeasible)
        }
        Err(e) => Err(e),
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn h3_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
