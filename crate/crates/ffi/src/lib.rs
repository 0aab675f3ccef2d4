//! C ABI over `rado-lab`.
//!
//! Balls, decompositions and graphs cross the boundary as opaque handles
//! created and freed here. Every fallible call returns an [`RlStatus`]; on
//! failure `rl_last_error()` describes the error for the calling thread.
//! Rationals are passed as `"p/q"` strings, and strings returned by this
//! library must be released with `rl_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rado_lab::decomposition::{linf_decomposition, LinfDecomposition};
use rado_lab::exact_geometry::builtin::builtin;
use rado_lab::exact_geometry::{parse_rational, BallSpec, PolytopeBall, Vector};
use rado_lab::random_graphs::{
    bernoulli_subgraph, bj_audit, read_graph, sample_typical_points, unit_graph, write_graph, GeomGraph, Probability, Typicality,
};
use rado_lab::rng::derive_seed;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Geometry = 4,
    Decomposition = 5,
    Graph = 6,
    Panic = 7,
}

/// Opaque unit ball.
pub struct RlBall(PolytopeBall);

/// Opaque l_inf-decomposition.
pub struct RlDecomposition(LinfDecomposition);

/// Opaque random geometric graph.
pub struct RlGraph(GeomGraph);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Failure(RlStatus, String);

type FfiResult<T> = Result<T, Failure>;

fn fail<E: std::fmt::Display>(status: RlStatus) -> impl Fn(E) -> Failure {
    move |e| Failure(status, e.to_string())
}

/// Runs `f`, turning errors and panics into a status plus a stored message.
fn guard(f: impl FnOnce() -> FfiResult<()>) -> RlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RlStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside rado-lab");
            RlStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err(Failure(RlStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(RlStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, name: &str) -> FfiResult<&'a T> {
    p.as_ref().ok_or_else(|| Failure(RlStatus::NullPointer, format!("{name} is null")))
}

unsafe fn put<T>(out: *mut T, value: T) -> FfiResult<()> {
    if out.is_null() {
        return Err(Failure(RlStatus::NullPointer, "output pointer is null".into()));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn rl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn rl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Looks up a builtin ball such as `"cube_3"` or `"hexagon"`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_ball_builtin(name: *const c_char, out: *mut *mut RlBall) -> RlStatus {
    guard(|| {
        let name = str_arg(name, "name")?;
        let ball = builtin(name).ok_or_else(|| Failure(RlStatus::InvalidArgument, format!("unknown builtin ball {name:?}")))?;
        put(out, Box::into_raw(Box::new(RlBall(ball))))
    })
}

/// Parses `{"dim": d, "vertices": [["p/q", ...], ...]}` and validates it.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_ball_from_json(json: *const c_char, out: *mut *mut RlBall) -> RlStatus {
    guard(|| {
        let text = str_arg(json, "json")?;
        let ball = BallSpec::from_json(text).map_err(fail(RlStatus::Geometry))?;
        put(out, Box::into_raw(Box::new(RlBall(ball))))
    })
}

/// # Safety
/// `ball` must be null or a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_ball_to_json(ball: *const RlBall, out: *mut *mut c_char) -> RlStatus {
    guard(|| {
        let ball = ref_arg(ball, "ball")?;
        let text = serde_json::to_string(&ball.0.to_spec()).map_err(fail(RlStatus::Geometry))?;
        put(out, into_c_string(text))
    })
}

/// Dimension of the ball, or 0 for a null handle.
///
/// # Safety
/// `ball` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rl_ball_dim(ball: *const RlBall) -> usize {
    ball.as_ref().map_or(0, |b| b.0.dim())
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `ball` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rl_ball_vertex_count(ball: *const RlBall) -> usize {
    ball.as_ref().map_or(0, |b| b.0.vertices().len())
}

/// Exact norm of the vector with `len` rational coordinates; the result is
/// written as a `"p/q"` string.
///
/// # Safety
/// `coords` must point to `len` NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_ball_norm(ball: *const RlBall, coords: *const *const c_char, len: usize, out: *mut *mut c_char) -> RlStatus {
    guard(|| {
        let ball = ref_arg(ball, "ball")?;
        if coords.is_null() && len > 0 {
            return Err(Failure(RlStatus::NullPointer, "coords is null".into()));
        }
        let mut xs = Vec::with_capacity(len);
        for k in 0..len {
            let s = str_arg(*coords.add(k), "coordinate")?;
            xs.push(parse_rational(s).map_err(fail(RlStatus::InvalidArgument))?);
        }
        let norm = ball.0.norm(&Vector::new(xs)).map_err(fail(RlStatus::Geometry))?;
        put(out, into_c_string(norm.to_string()))
    })
}

/// # Safety
/// `ball` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rl_ball_free(ball: *mut RlBall) {
    if !ball.is_null() {
        drop(Box::from_raw(ball));
    }
}

/// Computes and cross-checks the l_inf-decomposition of `ball`.
///
/// # Safety
/// `ball` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_decompose(ball: *const RlBall, out: *mut *mut RlDecomposition) -> RlStatus {
    guard(|| {
        let ball = ref_arg(ball, "ball")?;
        let dec = linf_decomposition(&ball.0).map_err(fail(RlStatus::Decomposition))?;
        put(out, Box::into_raw(Box::new(RlDecomposition(dec))))
    })
}

/// Number of l_inf-directions, or 0 for a null handle.
///
/// # Safety
/// `dec` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rl_decomposition_linf_dim(dec: *const RlDecomposition) -> usize {
    dec.as_ref().map_or(0, |d| d.0.linf_dim())
}

/// Dimension of the complement `U`, or 0 for a null handle.
///
/// # Safety
/// `dec` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rl_decomposition_u_dim(dec: *const RlDecomposition) -> usize {
    dec.as_ref().map_or(0, |d| d.0.u_dim())
}

/// # Safety
/// `dec` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_decomposition_to_json(dec: *const RlDecomposition, out: *mut *mut c_char) -> RlStatus {
    guard(|| {
        let dec = ref_arg(dec, "dec")?;
        let text = serde_json::to_string(&dec.0).map_err(fail(RlStatus::Decomposition))?;
        put(out, into_c_string(text))
    })
}

/// # Safety
/// `dec` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rl_decomposition_free(dec: *mut RlDecomposition) {
    if !dec.is_null() {
        drop(Box::from_raw(dec));
    }
}

/// Samples `n` typical points in `[-window, window]^d` and keeps each unit
/// graph edge with probability `p`. `window` and `p` are rational strings.
///
/// # Safety
/// `ball` must be a live handle, `window` and `p` NUL-terminated strings,
/// and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rl_graph_sample(
    ball: *const RlBall,
    n: usize,
    window: *const c_char,
    p: *const c_char,
    seed: u64,
    out: *mut *mut RlGraph,
) -> RlStatus {
    guard(|| {
        let ball = ref_arg(ball, "ball")?;
        let window = parse_rational(str_arg(window, "window")?).map_err(fail(RlStatus::InvalidArgument))?;
        let p: Probability = str_arg(p, "p")?.parse().map_err(fail(RlStatus::InvalidArgument))?;
        let dec = linf_decomposition(&ball.0).map_err(fail(RlStatus::Decomposition))?;
        let sample = sample_typical_points(&ball.0, &dec, &window, n, seed, Typicality::for_decomposition(&dec)).map_err(fail(RlStatus::Graph))?;
        let g = bernoulli_subgraph(&unit_graph(&sample), p, derive_seed(seed, 1)).map_err(fail(RlStatus::Graph))?;
        put(out, Box::into_raw(Box::new(RlGraph(g))))
    })
}

/// Reads a graph file produced by `rl_graph_to_json` or the CLI.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_graph_from_json(json: *const c_char, out: *mut *mut RlGraph) -> RlStatus {
    guard(|| {
        let g = read_graph(str_arg(json, "json")?).map_err(fail(RlStatus::Graph))?;
        put(out, Box::into_raw(Box::new(RlGraph(g))))
    })
}

/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_graph_to_json(graph: *const RlGraph, out: *mut *mut c_char) -> RlStatus {
    guard(|| {
        let g = ref_arg(graph, "graph")?;
        put(out, into_c_string(write_graph(&g.0, None)))
    })
}

/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rl_graph_vertex_count(graph: *const RlGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.sample.len())
}

/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rl_graph_edge_count(graph: *const RlGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.edge_count())
}

/// Hop distance against norm distance for `k = 2..=k_max`, as JSON.
///
/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_graph_bj_audit(graph: *const RlGraph, k_max: u32, out: *mut *mut c_char) -> RlStatus {
    guard(|| {
        let g = ref_arg(graph, "graph")?;
        let report = bj_audit(&g.0, k_max).map_err(fail(RlStatus::Graph))?;
        let text = serde_json::to_string(&report).map_err(fail(RlStatus::Graph))?;
        put(out, into_c_string(text))
    })
}

/// # Safety
/// `graph` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rl_graph_free(graph: *mut RlGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}
