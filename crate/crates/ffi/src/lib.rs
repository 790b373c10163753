//! C interface to `graphclust`.
//!
//! Graphs live behind the opaque [`GcGraph`] handle. Every function returns a
//! [`GcStatus`]; on failure the message is available from
//! [`gc_last_error_message`] on the same thread. Strings handed out by the
//! library must be released with [`gc_string_free`], graphs with
//! [`gc_graph_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use graphclust::io::{export_dot, parse_graph, strategy_tags, GraphDocument};
use graphclust::pipeline::{eliminate, persistency_search, strategy_to_x_graph};
use graphclust::weyl::compensation_map;
use graphclust::{Error, MeasurementStrategy, VertexSet, WeightedGraph};

/// Opaque graph handle, optionally carrying a measurement strategy.
pub struct GcGraph {
    graph: WeightedGraph,
    strategy: Option<MeasurementStrategy>,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    NotPrime = 4,
    NotBasic = 5,
    NotAdmissible = 6,
    NotInvertible = 7,
    InvalidVertex = 8,
    InvalidStrategy = 9,
    Precondition = 10,
    SizeCap = 11,
    Panic = 12,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> GcStatus {
    match e {
        Error::Parse { .. } => GcStatus::Parse,
        Error::NotPrime(_) | Error::FieldMismatch(..) => GcStatus::NotPrime,
        Error::NotBasic => GcStatus::NotBasic,
        Error::NotAdmissible { .. } => GcStatus::NotAdmissible,
        Error::NotInvertible | Error::NotInvertibleBlock(_) | Error::NotSurjective | Error::NotSquare { .. } => {
            GcStatus::NotInvertible
        }
        Error::UnknownVertex(_) | Error::VertexCollision(_) | Error::DuplicateVertex(_) | Error::InvalidSubset(_) => {
            GcStatus::InvalidVertex
        }
        Error::InvalidStrategy(_) => GcStatus::InvalidStrategy,
        Error::SizeCap { .. } => GcStatus::SizeCap,
        _ => GcStatus::Precondition,
    }
}

struct Failure(GcStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(GcStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, records any error or panic and converts it to a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> GcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            GcStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            GcStatus::Panic
        }
    }
}

unsafe fn graph_ref<'a>(g: *const GcGraph) -> Result<&'a GcGraph, Failure> {
    g.as_ref().ok_or_else(|| null("graph"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure(GcStatus::InvalidUtf8, "string contains a nul byte".into()))
}

fn boxed(graph: WeightedGraph) -> *mut GcGraph {
    Box::into_raw(Box::new(GcGraph { graph, strategy: None }))
}

/// The graph on which only x-measurements remain.
fn x_graph(g: &GcGraph) -> Result<WeightedGraph, Failure> {
    match &g.strategy {
        Some(s) => Ok(strategy_to_x_graph(&g.graph, s)?.graph),
        None => Ok(g.graph.clone()),
    }
}

/// Parses a JSON graph document. Graph-basis strategy entries are not
/// supported here since they refer to other files.
///
/// # Safety
/// `json` must be a valid nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gc_graph_parse(json: *const c_char, out: *mut *mut GcGraph) -> GcStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Failure(GcStatus::InvalidUtf8, e.to_string()))?;
        let (graph, strategy) = parse_graph(text)?;
        write_out(out, Box::into_raw(Box::new(GcGraph { graph, strategy })))
    })
}

/// Releases a graph. Null is ignored.
///
/// # Safety
/// `g` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn gc_graph_free(g: *mut GcGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Canonical JSON document of the graph (and its strategy, if any).
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gc_graph_emit(g: *const GcGraph, out: *mut *mut c_char) -> GcStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let mut doc = GraphDocument::from_graph(&g.graph);
        if let Some(tags) = g.strategy.as_ref().and_then(strategy_tags) {
            doc = doc.with_strategy(tags);
        }
        write_out(out, into_c_string(doc.to_json())?)
    })
}

/// Field size d and number of vertices.
///
/// # Safety
/// `g` must be a live handle; `d` and `vertices` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gc_graph_info(g: *const GcGraph, d: *mut u32, vertices: *mut usize) -> GcStatus {
    guard(|| {
        let g = graph_ref(g)?;
        write_out(d, g.graph.modulus())?;
        write_out(vertices, g.graph.len())
    })
}

/// Whether Γ^{KJ}_{IK} is injective.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gc_graph_is_basic(g: *const GcGraph, out: *mut bool) -> GcStatus {
    guard(|| write_out(out, graph_ref(g)?.graph.is_basic()))
}

/// Admissibility conditions as bits: 1 = G1, 2 = G2, 4 = G3. The graph is
/// admissible when all three are set.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gc_graph_validate_admissible(g: *const GcGraph, out: *mut u32) -> GcStatus {
    guard(|| {
        let r = graph_ref(g)?.graph.validate_admissible();
        write_out(out, r.g1 as u32 | (r.g2 as u32) << 1 | (r.g3 as u32) << 2)
    })
}

/// Applies the strategy (if any) and removes all measuring vertices in the
/// default order. The result is a new handle.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gc_graph_reduce(g: *const GcGraph, out: *mut *mut GcGraph) -> GcStatus {
    guard(|| {
        let trace = eliminate(&x_graph(graph_ref(g)?)?)?;
        write_out(out, boxed(trace.final_graph))
    })
}

/// Schur complement X_N Γ for the `len` vertices at `vertices`.
///
/// # Safety
/// `g` must be a live handle, `vertices` must point to `len` values and `out`
/// must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gc_graph_schur_complement(
    g: *const GcGraph,
    vertices: *const u32,
    len: usize,
    out: *mut *mut GcGraph,
) -> GcStatus {
    guard(|| {
        let g = graph_ref(g)?;
        if vertices.is_null() && len > 0 {
            return Err(null("vertices"));
        }
        let list = if len == 0 { &[][..] } else { std::slice::from_raw_parts(vertices, len) };
        let n = VertexSet::new(list.iter().copied())?;
        write_out(out, boxed(g.graph.schur_complement(&n)?))
    })
}

/// DOT rendering of the graph.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gc_graph_export_dot(g: *const GcGraph, out: *mut *mut c_char) -> GcStatus {
    guard(|| write_out(out, into_c_string(export_dot(&graph_ref(g)?.graph))?))
}

/// Persistency upper bound of a d = 2 graph state with at most `budget`
/// measurements; `out` is set to -1 if none was found.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gc_graph_persistency(g: *const GcGraph, budget: usize, out: *mut i64) -> GcStatus {
    guard(|| {
        let w = persistency_search(&graph_ref(g)?.graph, budget)?;
        write_out(out, w.map_or(-1, |w| w.bound() as i64))
    })
}

/// Compensating map Θ = (A | B) of the graph after applying its strategy,
/// as JSON `{"a": {...}, "b": {...}}`.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gc_graph_compensation_json(g: *const GcGraph, out: *mut *mut c_char) -> GcStatus {
    guard(|| {
        let theta = compensation_map(&x_graph(graph_ref(g)?)?)?;
        let json = serde_json::to_string(&theta).map_err(|e| Failure(GcStatus::Precondition, e.to_string()))?;
        write_out(out, into_c_string(json)?)
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn gc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn gc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}
