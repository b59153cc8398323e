//! C ABI for the packcolor library.
//!
//! Graphs travel as opaque handles, structured results as JSON strings the
//! caller frees with [`pc_string_free`], and every call reports a
//! [`PcStatus`] whose numeric values match the CLI's exit codes. No call
//! panics across the boundary: panics are caught and reported as
//! `PC_STATUS_INTERNAL`.

use packcolor::coloring::{verify, Certificate, Verdict};
use packcolor::constructive::{solve_1122, SolveResult, SolverOptions};
use packcolor::error::Error;
use packcolor::graph::named_graph;
use packcolor::graph6::{emit_graph6, parse_graph6};
use packcolor::subdivision::{pcn5_subdivision, subdivision_certificate};
use packcolor::Graph;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// A parsed graph. Opaque; create with `pc_graph_parse_graph6` or
/// `pc_graph_named`, release with `pc_graph_free`.
pub struct PcGraph {
    inner: Graph,
}

/// Status of every FFI call. Values 0..=4 match the CLI exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PcStatus {
    /// The call succeeded.
    Ok = 0,
    /// A coloring failed verification.
    InvalidColoring = 1,
    /// Unparseable input or a violated precondition.
    InputError = 2,
    /// The constructive solver stalled on every restart.
    RestartsExhausted = 3,
    /// An exact search exhausted its node budget.
    BudgetExhausted = 4,
    /// The input is the Petersen graph, the one graph the constructive
    /// method provably cannot color.
    Petersen = 5,
    /// A required pointer argument was null.
    NullPointer = 6,
    /// An internal invariant failed (a caught panic).
    Internal = 7,
}

fn status_of(e: &Error) -> PcStatus {
    match e {
        Error::RestartsExhausted { .. } => PcStatus::RestartsExhausted,
        Error::BudgetExhausted { .. } => PcStatus::BudgetExhausted,
        _ => PcStatus::InputError,
    }
}

fn guarded(f: impl FnOnce() -> PcStatus) -> PcStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(PcStatus::Internal)
}

/// Writes `s` through `out` as a fresh C string. `out` may be null when the
/// caller does not want the payload.
unsafe fn write_string(out: *mut *mut c_char, s: String) -> PcStatus {
    if out.is_null() {
        return PcStatus::Ok;
    }
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            PcStatus::Ok
        }
        // JSON and graph6 never contain NUL; anything else is a bug here.
        Err(_) => PcStatus::Internal,
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Option<&'a str> {
    if ptr.is_null() {
        return None;
    }
    CStr::from_ptr(ptr).to_str().ok()
}

/// Parses one graph6 line into a fresh handle.
///
/// # Safety
/// `line` must be a valid NUL-terminated string and `out` a valid pointer;
/// on `PC_STATUS_OK` the caller owns `*out` and must free it with
/// `pc_graph_free`.
#[no_mangle]
pub unsafe extern "C" fn pc_graph_parse_graph6(
    line: *const c_char,
    out: *mut *mut PcGraph,
) -> PcStatus {
    guarded(|| {
        if out.is_null() {
            return PcStatus::NullPointer;
        }
        let Some(text) = read_str(line) else {
            return PcStatus::NullPointer;
        };
        match parse_graph6(text.trim()) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(PcGraph { inner: g }));
                PcStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Builds a named graph: petersen, k4, k33, cycle(k), path(k), prism(k).
///
/// # Safety
/// Same contract as `pc_graph_parse_graph6`.
#[no_mangle]
pub unsafe extern "C" fn pc_graph_named(id: *const c_char, out: *mut *mut PcGraph) -> PcStatus {
    guarded(|| {
        if out.is_null() {
            return PcStatus::NullPointer;
        }
        let Some(text) = read_str(id) else {
            return PcStatus::NullPointer;
        };
        match named_graph(text) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(PcGraph { inner: g }));
                PcStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Releases a graph handle. Null is a no-op.
///
/// # Safety
/// `g` must be a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pc_graph_free(g: *mut PcGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `g` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn pc_graph_vertex_count(g: *const PcGraph) -> usize {
    if g.is_null() {
        0
    } else {
        (*g).inner.vertex_count()
    }
}

/// Number of edges, or 0 for a null handle.
///
/// # Safety
/// `g` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn pc_graph_edge_count(g: *const PcGraph) -> usize {
    if g.is_null() {
        0
    } else {
        (*g).inner.edge_count()
    }
}

/// Writes the graph's graph6 encoding through `out`.
///
/// # Safety
/// `g` must be a live handle; strings returned through `out` are freed with
/// `pc_string_free`.
#[no_mangle]
pub unsafe extern "C" fn pc_graph_to_graph6(
    g: *const PcGraph,
    out: *mut *mut c_char,
) -> PcStatus {
    guarded(|| {
        if g.is_null() || out.is_null() {
            return PcStatus::NullPointer;
        }
        match emit_graph6(&(*g).inner) {
            Ok(s) => write_string(out, s),
            Err(e) => status_of(&e),
        }
    })
}

/// Runs the constructive (1,1,2,2) solver. On `PC_STATUS_OK`, `out_json`
/// receives a certificate document re-verified before emission; on
/// `PC_STATUS_PETERSEN` nothing is written (the sentinel is the answer).
///
/// # Safety
/// `g` must be a live handle; `out_json` may be null or a valid pointer;
/// returned strings are freed with `pc_string_free`.
#[no_mangle]
pub unsafe extern "C" fn pc_solve_1122(
    g: *const PcGraph,
    seed: u64,
    restarts: u32,
    out_json: *mut *mut c_char,
) -> PcStatus {
    guarded(|| {
        if g.is_null() {
            return PcStatus::NullPointer;
        }
        let graph = &(*g).inner;
        let opts = SolverOptions {
            seed,
            restarts,
            ..SolverOptions::default()
        };
        match solve_1122(graph, &opts) {
            Ok(SolveResult::Petersen) => PcStatus::Petersen,
            Ok(SolveResult::Colored(c)) => {
                match verify(graph, &c) {
                    Ok(Verdict::Valid) => {}
                    _ => return PcStatus::InvalidColoring,
                }
                match Certificate::new(graph, &c).and_then(|cert| cert.to_json()) {
                    Ok(json) => write_string(out_json, json),
                    Err(_) => PcStatus::Internal,
                }
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Checks a certificate JSON document against a graph. Returns
/// `PC_STATUS_OK` when valid; `PC_STATUS_INVALID_COLORING` writes the first
/// violation's description through `out_message` (when non-null).
///
/// # Safety
/// `g` must be a live handle and `certificate_json` a valid NUL-terminated
/// string; strings returned through `out_message` are freed with
/// `pc_string_free`.
#[no_mangle]
pub unsafe extern "C" fn pc_verify(
    g: *const PcGraph,
    certificate_json: *const c_char,
    out_message: *mut *mut c_char,
) -> PcStatus {
    guarded(|| {
        if g.is_null() {
            return PcStatus::NullPointer;
        }
        let Some(text) = read_str(certificate_json) else {
            return PcStatus::NullPointer;
        };
        let coloring = match Certificate::from_json(text).and_then(|c| c.to_coloring()) {
            Ok(c) => c,
            Err(_) => return PcStatus::InputError,
        };
        match verify(&(*g).inner, &coloring) {
            Ok(Verdict::Valid) => PcStatus::Ok,
            Ok(Verdict::Invalid(v)) => {
                write_string(out_message, v.to_string());
                PcStatus::InvalidColoring
            }
            Err(_) => PcStatus::InputError,
        }
    })
}

/// Colors the 1-subdivision of `g` with schedule (1,2,3,4,5) and writes the
/// certificate (lineage included) through `out_json`.
///
/// # Safety
/// Same contract as `pc_solve_1122`.
#[no_mangle]
pub unsafe extern "C" fn pc_subdivide_color(
    g: *const PcGraph,
    seed: u64,
    restarts: u32,
    budget: u64,
    out_json: *mut *mut c_char,
) -> PcStatus {
    guarded(|| {
        if g.is_null() {
            return PcStatus::NullPointer;
        }
        let opts = SolverOptions {
            seed,
            restarts,
            ..SolverOptions::default()
        };
        match pcn5_subdivision(&(*g).inner, &opts, budget) {
            Ok(out) => {
                match verify(&out.map.subdivided, &out.coloring) {
                    Ok(Verdict::Valid) => {}
                    _ => return PcStatus::InvalidColoring,
                }
                match subdivision_certificate(&out).and_then(|c| c.to_json()) {
                    Ok(json) => write_string(out_json, json),
                    Err(_) => PcStatus::Internal,
                }
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Frees a string produced by this library. Null is a no-op.
///
/// # Safety
/// `s` must come from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn cstr(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    unsafe fn take_string(ptr: *mut c_char) -> String {
        let s = CStr::from_ptr(ptr).to_str().unwrap().to_owned();
        pc_string_free(ptr);
        s
    }

    #[test]
    fn solve_and_verify_round_trip() {
        unsafe {
            let mut g: *mut PcGraph = ptr::null_mut();
            assert_eq!(
                pc_graph_named(cstr("k4").as_ptr(), &mut g),
                PcStatus::Ok
            );
            assert_eq!(pc_graph_vertex_count(g), 4);
            assert_eq!(pc_graph_edge_count(g), 6);

            let mut json: *mut c_char = ptr::null_mut();
            assert_eq!(pc_solve_1122(g, 1, 64, &mut json), PcStatus::Ok);
            let cert = take_string(json);
            assert!(cert.contains("\"valid\":true"));

            let mut msg: *mut c_char = ptr::null_mut();
            assert_eq!(
                pc_verify(g, cstr(&cert).as_ptr(), &mut msg),
                PcStatus::Ok
            );
            assert!(msg.is_null());
            pc_graph_free(g);
        }
    }

    #[test]
    fn tampered_certificate_reports_the_violation() {
        unsafe {
            let mut g: *mut PcGraph = ptr::null_mut();
            assert_eq!(
                pc_graph_named(cstr("k4").as_ptr(), &mut g),
                PcStatus::Ok
            );
            // Two adjacent vertices in the first radius-1 class.
            let bad = r#"{"schedule":[1,1,2,2],"classes":[[0,1],[2],[3],[]],"valid":true}"#;
            let mut msg: *mut c_char = ptr::null_mut();
            assert_eq!(
                pc_verify(g, cstr(bad).as_ptr(), &mut msg),
                PcStatus::InvalidColoring
            );
            let text = take_string(msg);
            assert!(text.contains("class 1"), "got: {text}");
            pc_graph_free(g);
        }
    }

    #[test]
    fn petersen_sentinel_and_subdivision() {
        unsafe {
            let mut g: *mut PcGraph = ptr::null_mut();
            assert_eq!(
                pc_graph_named(cstr("petersen").as_ptr(), &mut g),
                PcStatus::Ok
            );
            assert_eq!(
                pc_solve_1122(g, 1, 64, ptr::null_mut()),
                PcStatus::Petersen
            );
            let mut json: *mut c_char = ptr::null_mut();
            assert_eq!(
                pc_subdivide_color(g, 1, 64, 100_000_000, &mut json),
                PcStatus::Ok
            );
            let cert = take_string(json);
            assert!(cert.contains("\"schedule\":[1,2,3,4,5]"));
            assert!(cert.contains("\"lineage\""));
            pc_graph_free(g);
        }
    }

    #[test]
    fn graph6_round_trip_through_the_boundary() {
        unsafe {
            let mut g: *mut PcGraph = ptr::null_mut();
            assert_eq!(
                pc_graph_named(cstr("cycle(5)").as_ptr(), &mut g),
                PcStatus::Ok
            );
            let mut s: *mut c_char = ptr::null_mut();
            assert_eq!(pc_graph_to_graph6(g, &mut s), PcStatus::Ok);
            let line = take_string(s);

            let mut back: *mut PcGraph = ptr::null_mut();
            assert_eq!(
                pc_graph_parse_graph6(cstr(&line).as_ptr(), &mut back),
                PcStatus::Ok
            );
            assert_eq!(pc_graph_vertex_count(back), 5);
            pc_graph_free(back);
            pc_graph_free(g);
        }
    }

    #[test]
    fn null_and_garbage_inputs() {
        unsafe {
            let mut g: *mut PcGraph = ptr::null_mut();
            assert_eq!(
                pc_graph_parse_graph6(ptr::null(), &mut g),
                PcStatus::NullPointer
            );
            assert_eq!(
                pc_graph_parse_graph6(cstr("!!").as_ptr(), &mut g),
                PcStatus::InputError
            );
            assert_eq!(
                pc_graph_named(cstr("nonesuch").as_ptr(), &mut g),
                PcStatus::InputError
            );
            assert_eq!(pc_solve_1122(ptr::null(), 1, 1, ptr::null_mut()), PcStatus::NullPointer);
            assert_eq!(pc_graph_vertex_count(ptr::null()), 0);
            pc_graph_free(ptr::null_mut());
            pc_string_free(ptr::null_mut());
        }
    }

    #[test]
    fn disconnected_input_is_an_input_error() {
        unsafe {
            // Two disjoint triangles.
            let two_triangles = packcolor::Graph::from_edges(
                6,
                &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)],
            )
            .unwrap();
            let line = cstr(&emit_graph6(&two_triangles).unwrap());
            let mut g: *mut PcGraph = ptr::null_mut();
            assert_eq!(pc_graph_parse_graph6(line.as_ptr(), &mut g), PcStatus::Ok);
            assert_eq!(
                pc_solve_1122(g, 1, 4, ptr::null_mut()),
                PcStatus::InputError
            );
            pc_graph_free(g);
        }
    }
}
