//! C ABI for the eternal vertex cover toolkit.
//!
//! Graphs live behind an opaque handle created from an edge array, an edge
//! list document, or melon path lengths; every entry point returns an
//! [`EvcStatus`] code and writes results through out-pointers. The header
//! `include/evc.h` is generated from this file by cbindgen at build time.
//!
//! All functions are panic-safe: internal panics are caught and reported as
//! `EVC_STATUS_INTERNAL_ERROR` instead of unwinding across the boundary.

use std::ffi::CStr;
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use evc::edgelist::parse_edge_list;
use evc::families::{melon_graph, MelonSpec};
use evc::graph::Graph;
use evc::melon::{evc_melon, path_rotation_class, strategy_class, CaseTag};
use evc::oracle::{evc_exact_with_limit, verify_class, OracleError};
use evc::sp::{recognize_melon, MelonStructure};

/// Status code returned by every entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EvcStatus {
    Ok = 0,
    /// A pointer was null or an argument out of range.
    InvalidArgument = 1,
    /// The input text or edge set is malformed.
    ParseError = 2,
    /// The operation needs a melon graph and the input is not one.
    NotAMelon = 3,
    /// The instance exceeds a configured resource limit.
    LimitExceeded = 4,
    /// A strategy class failed its closure check.
    VerifyFailed = 5,
    InternalError = 6,
}

/// Graph family of a handle, as recognized at construction.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EvcFamily {
    Path = 0,
    Cycle = 1,
    Melon = 2,
    Unrecognized = 3,
}

/// Parity case of a melon; `None` when the graph is not a melon.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EvcCase {
    SingleEdge = 0,
    PathCase = 1,
    CycleCase = 2,
    Odd = 3,
    Even = 4,
    MixedBoth = 5,
    MixedOneOdd = 6,
    MixedOneEven = 7,
    None = 8,
}

impl From<CaseTag> for EvcCase {
    fn from(tag: CaseTag) -> EvcCase {
        match tag {
            CaseTag::SingleEdge => EvcCase::SingleEdge,
            CaseTag::Path => EvcCase::PathCase,
            CaseTag::Cycle => EvcCase::CycleCase,
            CaseTag::Odd => EvcCase::Odd,
            CaseTag::Even => EvcCase::Even,
            CaseTag::MixedBoth => EvcCase::MixedBoth,
            CaseTag::MixedOneOdd => EvcCase::MixedOneOdd,
            CaseTag::MixedOneEven => EvcCase::MixedOneEven,
        }
    }
}

/// Closed-form solver output for a melon handle.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct EvcSolveResult {
    pub vertices: usize,
    pub edge_count: usize,
    pub family: EvcFamily,
    pub case_tag: EvcCase,
    pub vc: u64,
    pub evc: u64,
    pub class_size: u64,
}

/// Opaque graph handle; create with one of the `evc_graph_*` constructors
/// and release with [`evc_graph_free`].
pub struct EvcGraph {
    graph: Graph,
    melon: Option<MelonStructure>,
}

fn wrap(graph: Graph) -> Box<EvcGraph> {
    let melon = recognize_melon(&graph).ok().flatten();
    Box::new(EvcGraph { graph, melon })
}

fn guard<F: FnOnce() -> EvcStatus>(f: F) -> EvcStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(EvcStatus::InternalError)
}

/// Builds a graph from `edge_count` vertex pairs laid out as
/// `[u0, v0, u1, v1, ...]`. Writes a handle to `out` on success.
///
/// # Safety
/// `endpoints` must point to `2 * edge_count` readable elements and `out`
/// must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn evc_graph_from_edges(
    vertex_count: usize,
    endpoints: *const usize,
    edge_count: usize,
    out: *mut *mut EvcGraph,
) -> EvcStatus {
    if out.is_null() || (endpoints.is_null() && edge_count > 0) {
        return EvcStatus::InvalidArgument;
    }
    let pairs: &[usize] = if edge_count == 0 {
        &[]
    } else {
        std::slice::from_raw_parts(endpoints, 2 * edge_count)
    };
    guard(|| {
        let edges: Vec<(usize, usize)> = pairs.chunks_exact(2).map(|c| (c[0], c[1])).collect();
        match Graph::new(vertex_count, &edges) {
            Ok(g) => {
                *out = Box::into_raw(wrap(g));
                EvcStatus::Ok
            }
            Err(_) => EvcStatus::ParseError,
        }
    })
}

/// Builds a graph from an edge list document (one `u v` pair per line,
/// `#` comments, optional `n <count>` header).
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn evc_graph_from_edge_list(
    text: *const c_char,
    out: *mut *mut EvcGraph,
) -> EvcStatus {
    if text.is_null() || out.is_null() {
        return EvcStatus::InvalidArgument;
    }
    let Ok(text) = CStr::from_ptr(text).to_str() else {
        return EvcStatus::ParseError;
    };
    guard(|| match parse_edge_list(text) {
        Ok(g) => {
            *out = Box::into_raw(wrap(g));
            EvcStatus::Ok
        }
        Err(_) => EvcStatus::ParseError,
    })
}

/// Builds the canonical melon with the given path lengths.
///
/// # Safety
/// `lengths` must point to `count` readable elements and `out` must be a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn evc_graph_from_melon_lengths(
    lengths: *const usize,
    count: usize,
    out: *mut *mut EvcGraph,
) -> EvcStatus {
    if lengths.is_null() || out.is_null() {
        return EvcStatus::InvalidArgument;
    }
    let lengths = std::slice::from_raw_parts(lengths, count).to_vec();
    guard(|| match MelonSpec::new(lengths) {
        Ok(spec) => {
            let (g, m) = melon_graph(&spec);
            *out = Box::into_raw(Box::new(EvcGraph { graph: g, melon: Some(m) }));
            EvcStatus::Ok
        }
        Err(_) => EvcStatus::ParseError,
    })
}

/// Releases a handle. Passing null is a no-op.
///
/// # Safety
/// `g` must be a pointer previously returned by a constructor, or null.
#[no_mangle]
pub unsafe extern "C" fn evc_graph_free(g: *mut EvcGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of vertices behind the handle; 0 for null.
///
/// # Safety
/// `g` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn evc_graph_vertex_count(g: *const EvcGraph) -> usize {
    g.as_ref().map_or(0, |h| h.graph.vertex_count())
}

/// Number of edges behind the handle; 0 for null.
///
/// # Safety
/// `g` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn evc_graph_edge_count(g: *const EvcGraph) -> usize {
    g.as_ref().map_or(0, |h| h.graph.edge_count())
}

fn family_of(h: &EvcGraph) -> EvcFamily {
    match &h.melon {
        Some(m) if m.k() == 1 => EvcFamily::Path,
        Some(m) if m.k() == 2 => EvcFamily::Cycle,
        Some(_) => EvcFamily::Melon,
        None => EvcFamily::Unrecognized,
    }
}

/// Closed-form melon solver. Fails with `NotAMelon` when the handle does
/// not hold a recognized melon.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn evc_solve(g: *const EvcGraph, out: *mut EvcSolveResult) -> EvcStatus {
    let (Some(h), false) = (g.as_ref(), out.is_null()) else {
        return EvcStatus::InvalidArgument;
    };
    guard(|| match &h.melon {
        Some(m) => {
            let r = evc_melon(m);
            *out = EvcSolveResult {
                vertices: h.graph.vertex_count(),
                edge_count: h.graph.edge_count(),
                family: family_of(h),
                case_tag: r.case.into(),
                vc: r.vc as u64,
                evc: r.evc as u64,
                class_size: r.class_size,
            };
            EvcStatus::Ok
        }
        None => EvcStatus::NotAMelon,
    })
}

/// Exact game solver: writes the eternal vertex cover number and the size
/// of the maximal safe family. `max_vertices` bounds the exhaustive search
/// (pass 0 for the default limit).
///
/// # Safety
/// `g` must be a live handle; `out_evc` and `out_safe_size` must be valid
/// pointers.
#[no_mangle]
pub unsafe extern "C" fn evc_oracle(
    g: *const EvcGraph,
    max_vertices: usize,
    out_evc: *mut u64,
    out_safe_size: *mut u64,
) -> EvcStatus {
    let (Some(h), false) = (g.as_ref(), out_evc.is_null() || out_safe_size.is_null()) else {
        return EvcStatus::InvalidArgument;
    };
    let limit = if max_vertices == 0 {
        evc::oracle::DEFAULT_ORACLE_LIMIT
    } else {
        max_vertices
    };
    guard(|| match evc_exact_with_limit(&h.graph, limit) {
        Ok((number, set)) => {
            *out_evc = number as u64;
            *out_safe_size = set.len() as u64;
            EvcStatus::Ok
        }
        Err(OracleError::LimitExceeded { .. } | OracleError::TooManyGuards(_)) => {
            EvcStatus::LimitExceeded
        }
        Err(_) => EvcStatus::ParseError,
    })
}

/// Builds the strategy class of a melon handle and checks the closure
/// property for every configuration/edge pair; writes the number of checked
/// pairs. Returns `VerifyFailed` when any pair fails.
///
/// # Safety
/// `g` must be a live handle and `out_checked` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn evc_verify_strategy(
    g: *const EvcGraph,
    out_checked: *mut usize,
) -> EvcStatus {
    let (Some(h), false) = (g.as_ref(), out_checked.is_null()) else {
        return EvcStatus::InvalidArgument;
    };
    guard(|| {
        let Some(m) = &h.melon else {
            return EvcStatus::NotAMelon;
        };
        let class = if m.k() == 1 { path_rotation_class(m) } else { strategy_class(m) };
        let class = match class {
            Ok(c) => c,
            Err(evc::melon::MelonError::ClassTooLarge(_)) => return EvcStatus::LimitExceeded,
            Err(_) => return EvcStatus::InternalError,
        };
        let report = verify_class(&h.graph, &class);
        *out_checked = report.checked;
        if report.ok() {
            EvcStatus::Ok
        } else {
            EvcStatus::VerifyFailed
        }
    })
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn evc_status_message(status: EvcStatus) -> *const c_char {
    let msg: &'static [u8] = match status {
        EvcStatus::Ok => b"ok\0",
        EvcStatus::InvalidArgument => b"invalid argument\0",
        EvcStatus::ParseError => b"malformed input\0",
        EvcStatus::NotAMelon => b"input graph is not a melon\0",
        EvcStatus::LimitExceeded => b"resource limit exceeded\0",
        EvcStatus::VerifyFailed => b"strategy class failed verification\0",
        EvcStatus::InternalError => b"internal error\0",
    };
    msg.as_ptr() as *const c_char
}

// keep a typed null around so cbindgen emits the opaque forward declaration
#[allow(dead_code)]
const NULL_GRAPH: *const EvcGraph = ptr::null();

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    #[test]
    fn solve_through_the_c_surface() {
        let mut handle: *mut EvcGraph = ptr::null_mut();
        let lengths = [2usize, 2, 2];
        let status =
            unsafe { evc_graph_from_melon_lengths(lengths.as_ptr(), lengths.len(), &mut handle) };
        assert_eq!(status, EvcStatus::Ok);
        assert_eq!(unsafe { evc_graph_vertex_count(handle) }, 5);
        assert_eq!(unsafe { evc_graph_edge_count(handle) }, 6);

        let mut result = EvcSolveResult {
            vertices: 0,
            edge_count: 0,
            family: EvcFamily::Unrecognized,
            case_tag: EvcCase::None,
            vc: 0,
            evc: 0,
            class_size: 0,
        };
        assert_eq!(unsafe { evc_solve(handle, &mut result) }, EvcStatus::Ok);
        assert_eq!(result.family, EvcFamily::Melon);
        assert_eq!(result.case_tag, EvcCase::Even);
        assert_eq!((result.vc, result.evc, result.class_size), (2, 3, 3));

        let mut evc_out = 0u64;
        let mut size_out = 0u64;
        assert_eq!(
            unsafe { evc_oracle(handle, 0, &mut evc_out, &mut size_out) },
            EvcStatus::Ok
        );
        assert_eq!(evc_out, 3);
        assert!(size_out >= 3);

        let mut checked = 0usize;
        assert_eq!(unsafe { evc_verify_strategy(handle, &mut checked) }, EvcStatus::Ok);
        assert_eq!(checked, 18);

        unsafe { evc_graph_free(handle) };
    }

    #[test]
    fn edge_list_and_error_paths() {
        let text = CString::new("n 4\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n").unwrap();
        let mut handle: *mut EvcGraph = ptr::null_mut();
        assert_eq!(
            unsafe { evc_graph_from_edge_list(text.as_ptr(), &mut handle) },
            EvcStatus::Ok
        );
        let mut result = EvcSolveResult {
            vertices: 0,
            edge_count: 0,
            family: EvcFamily::Unrecognized,
            case_tag: EvcCase::None,
            vc: 0,
            evc: 0,
            class_size: 0,
        };
        // K4 is not a melon
        assert_eq!(unsafe { evc_solve(handle, &mut result) }, EvcStatus::NotAMelon);
        let mut evc_out = 0u64;
        let mut size_out = 0u64;
        assert_eq!(
            unsafe { evc_oracle(handle, 0, &mut evc_out, &mut size_out) },
            EvcStatus::Ok
        );
        assert_eq!(evc_out, 3);
        unsafe { evc_graph_free(handle) };

        let bad = CString::new("0 0\n").unwrap();
        assert_eq!(
            unsafe { evc_graph_from_edge_list(bad.as_ptr(), &mut handle) },
            EvcStatus::ParseError
        );
        assert_eq!(
            unsafe { evc_graph_from_edge_list(ptr::null(), &mut handle) },
            EvcStatus::InvalidArgument
        );
        assert_eq!(unsafe { evc_solve(ptr::null(), &mut result) }, EvcStatus::InvalidArgument);

        // limit guard: a 21-vertex instance under the default limit
        let lengths = [9usize, 9, 3];
        assert_eq!(
            unsafe { evc_graph_from_melon_lengths(lengths.as_ptr(), lengths.len(), &mut handle) },
            EvcStatus::Ok
        );
        assert_eq!(
            unsafe { evc_oracle(handle, 0, &mut evc_out, &mut size_out) },
            EvcStatus::LimitExceeded
        );
        unsafe { evc_graph_free(handle) };
    }

    #[test]
    fn graphs_from_raw_edge_arrays() {
        let mut handle: *mut EvcGraph = ptr::null_mut();
        // the 4-cycle as a flat endpoint array
        let endpoints = [0usize, 1, 1, 2, 2, 3, 3, 0];
        assert_eq!(
            unsafe { evc_graph_from_edges(4, endpoints.as_ptr(), 4, &mut handle) },
            EvcStatus::Ok
        );
        let mut evc_out = 0u64;
        let mut size_out = 0u64;
        assert_eq!(
            unsafe { evc_oracle(handle, 0, &mut evc_out, &mut size_out) },
            EvcStatus::Ok
        );
        assert_eq!((evc_out, size_out), (2, 2));
        unsafe { evc_graph_free(handle) };

        // degenerate but legal: an edgeless graph from a null array
        assert_eq!(
            unsafe { evc_graph_from_edges(1, ptr::null(), 0, &mut handle) },
            EvcStatus::Ok
        );
        assert_eq!(unsafe { evc_graph_vertex_count(handle) }, 1);
        unsafe { evc_graph_free(handle) };

        // self-loops are rejected, null out-pointers are refused
        let loopy = [0usize, 0];
        assert_eq!(
            unsafe { evc_graph_from_edges(1, loopy.as_ptr(), 1, &mut handle) },
            EvcStatus::ParseError
        );
        assert_eq!(
            unsafe { evc_graph_from_edges(2, endpoints.as_ptr(), 1, ptr::null_mut()) },
            EvcStatus::InvalidArgument
        );
        assert_eq!(
            unsafe { evc_graph_from_edges(2, ptr::null(), 1, &mut handle) },
            EvcStatus::InvalidArgument
        );
    }

    #[test]
    fn status_messages_are_nul_terminated() {
        for status in [
            EvcStatus::Ok,
            EvcStatus::InvalidArgument,
            EvcStatus::ParseError,
            EvcStatus::NotAMelon,
            EvcStatus::LimitExceeded,
            EvcStatus::VerifyFailed,
            EvcStatus::InternalError,
        ] {
            let msg = evc_status_message(status);
            assert!(!msg.is_null());
            let text = unsafe { CStr::from_ptr(msg) }.to_str().unwrap();
            assert!(!text.is_empty());
        }
    }
}
