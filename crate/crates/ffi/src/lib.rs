//! C interface to `gored`.
//!
//! Objects cross the boundary as opaque handles created by `*_new`/`*_parse`
//! functions and released by the matching `*_free`. Every fallible call
//! returns a [`GoredStatus`]; the message of the last failure on the calling
//! thread is available from [`gored_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use gored::gproj::{gproj_test, GprojVerdict};
use gored::homology::{ext_dims, DimVerdict, SearchConfig};
use gored::module_cat::Module;
use gored::presentation::{parse_presentation, Certified};
use gored::reduction::{gorenstein_test, reduce, ReduceOptions, ReductionTrace};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GoredStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    NotFound = 4,
    Computation = 5,
    BufferTooSmall = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GoredDimKind {
    Finite = 0,
    InfiniteCertified = 1,
    AtLeast = 2,
}

/// A dimension verdict: `value` is the dimension for `Finite`, the lower
/// bound for `AtLeast`, and the period end for `InfiniteCertified`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GoredDim {
    pub kind: GoredDimKind,
    pub value: usize,
    pub period_start: usize,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GoredGproj {
    Certified = 0,
    NotGproj = 1,
    Undetermined = 2,
}

/// A certified presented algebra.
pub struct GoredAlgebra {
    inner: Certified,
}

/// A module over a [`GoredAlgebra`].
pub struct GoredModule {
    inner: Module,
}

pub struct GoredTrace {
    inner: ReductionTrace,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(status: GoredStatus, msg: impl std::fmt::Display) -> GoredStatus {
    let text = CString::new(msg.to_string().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
    status
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, GoredStatus> {
    if s.is_null() {
        return Err(fail(GoredStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| fail(GoredStatus::InvalidUtf8, e))
}

fn dim(v: DimVerdict) -> GoredDim {
    match v {
        DimVerdict::Finite { value, .. } => GoredDim {
            kind: GoredDimKind::Finite,
            value,
            period_start: 0,
        },
        DimVerdict::InfiniteCertified {
            period_start,
            period_end,
            ..
        } => GoredDim {
            kind: GoredDimKind::InfiniteCertified,
            value: period_end,
            period_start,
        },
        DimVerdict::AtLeast { value, .. } => GoredDim {
            kind: GoredDimKind::AtLeast,
            value,
            period_start: 0,
        },
    }
}

/// Message of the last failure on this thread. Valid until the next call
/// that fails on the same thread.
#[no_mangle]
pub extern "C" fn gored_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses and certifies an algebra in `.alg` format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gored_algebra_parse(text: *const c_char, out: *mut *mut GoredAlgebra) -> GoredStatus {
    if out.is_null() {
        return fail(GoredStatus::NullPointer, "null output pointer");
    }
    *out = ptr::null_mut();
    let text = match read_str(text) {
        Ok(t) => t,
        Err(s) => return s,
    };
    match parse_presentation(text).and_then(|p| p.certify(None)) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(GoredAlgebra { inner }));
            GoredStatus::Ok
        }
        Err(e) => fail(GoredStatus::Parse, e),
    }
}

/// # Safety
/// `alg` must come from [`gored_algebra_parse`] or be null.
#[no_mangle]
pub unsafe extern "C" fn gored_algebra_free(alg: *mut GoredAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

/// Dimension of the algebra, or 0 for a null handle.
///
/// # Safety
/// `alg` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn gored_algebra_dimension(alg: *const GoredAlgebra) -> usize {
    alg.as_ref().map_or(0, |a| a.inner.dimension())
}

/// The least `N` with `J^N ⊆ I`, or 0 for a null handle.
///
/// # Safety
/// `alg` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn gored_algebra_nilpotency(alg: *const GoredAlgebra) -> usize {
    alg.as_ref().map_or(0, |a| a.inner.nilpotency)
}

/// `id_A A` and `id_{A^op} A` within `bound`.
///
/// # Safety
/// `alg` must be a live handle; `left` and `right` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gored_gorenstein(
    alg: *const GoredAlgebra,
    bound: usize,
    left: *mut GoredDim,
    right: *mut GoredDim,
) -> GoredStatus {
    let (Some(a), false, false) = (alg.as_ref(), left.is_null(), right.is_null()) else {
        return fail(GoredStatus::NullPointer, "null argument");
    };
    match gorenstein_test(&a.inner.algebra, &SearchConfig::with_bound(bound)) {
        Ok(g) => {
            *left = dim(g.left);
            *right = dim(g.right);
            GoredStatus::Ok
        }
        Err(e) => fail(GoredStatus::Computation, e),
    }
}

/// The simple module at the vertex labelled `vertex`.
///
/// # Safety
/// `alg` must be a live handle, `vertex` a NUL-terminated string and `out`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gored_module_simple(
    alg: *const GoredAlgebra,
    vertex: *const c_char,
    out: *mut *mut GoredModule,
) -> GoredStatus {
    let (Some(a), false) = (alg.as_ref(), out.is_null()) else {
        return fail(GoredStatus::NullPointer, "null argument");
    };
    *out = ptr::null_mut();
    let label = match read_str(vertex) {
        Ok(t) => t,
        Err(s) => return s,
    };
    let Some(v) = a.inner.algebra.vertex_index(label) else {
        return fail(GoredStatus::NotFound, format!("unknown vertex `{label}`"));
    };
    match Module::simple(a.inner.algebra.clone(), v) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(GoredModule { inner }));
            GoredStatus::Ok
        }
        Err(e) => fail(GoredStatus::Computation, e),
    }
}

/// # Safety
/// `m` must come from a `gored_module_*` constructor or be null.
#[no_mangle]
pub unsafe extern "C" fn gored_module_free(m: *mut GoredModule) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn gored_module_dimension(m: *const GoredModule) -> usize {
    m.as_ref().map_or(0, |m| m.inner.dim())
}

/// Gorenstein projectivity of `m`; the witness degree of a failing Ext
/// (0 when the witness is the evaluation map) goes to `degree`.
///
/// # Safety
/// `m` must be a live handle and `out`, `degree` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gored_gproj_test(
    m: *const GoredModule,
    bound: usize,
    out: *mut GoredGproj,
    degree: *mut usize,
) -> GoredStatus {
    let (Some(m), false, false) = (m.as_ref(), out.is_null(), degree.is_null()) else {
        return fail(GoredStatus::NullPointer, "null argument");
    };
    use gored::gproj::NotGprojWitness as W;
    match gproj_test(&m.inner, &SearchConfig::with_bound(bound)) {
        Ok(v) => {
            *degree = 0;
            *out = match v {
                GprojVerdict::CertifiedGproj { .. } => GoredGproj::Certified,
                GprojVerdict::CertifiedNotGproj { witness } => {
                    if let W::ExtNonzero { degree: d } | W::DualExtNonzero { degree: d } = witness {
                        *degree = d;
                    }
                    GoredGproj::NotGproj
                }
                GprojVerdict::Undetermined { .. } => GoredGproj::Undetermined,
            };
            GoredStatus::Ok
        }
        Err(e) => fail(GoredStatus::Computation, e),
    }
}

/// Writes `dim Ext^j(m, n)` for `j = 0..=jmax` into `out`, which must hold
/// `jmax + 1` entries.
///
/// # Safety
/// `m`, `n` must be live handles over the same algebra and `out` must point
/// to `len` writable entries.
#[no_mangle]
pub unsafe extern "C" fn gored_ext_dims(
    m: *const GoredModule,
    n: *const GoredModule,
    jmax: usize,
    bound: usize,
    out: *mut usize,
    len: usize,
) -> GoredStatus {
    let (Some(m), Some(n), false) = (m.as_ref(), n.as_ref(), out.is_null()) else {
        return fail(GoredStatus::NullPointer, "null argument");
    };
    if len <= jmax {
        return fail(GoredStatus::BufferTooSmall, format!("need {} entries", jmax + 1));
    }
    match ext_dims(&m.inner, &n.inner, jmax, &SearchConfig::with_bound(bound)) {
        Ok(d) => {
            std::slice::from_raw_parts_mut(out, len)[..d.len()].copy_from_slice(&d);
            GoredStatus::Ok
        }
        Err(e) => fail(GoredStatus::Computation, e),
    }
}

/// Runs the reduction pipeline. `idempotent` is a comma-separated list of
/// vertex labels or null.
///
/// # Safety
/// `alg` must be a live handle, `idempotent` null or NUL-terminated, and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gored_reduce(
    alg: *const GoredAlgebra,
    idempotent: *const c_char,
    bound: usize,
    jmax: usize,
    out: *mut *mut GoredTrace,
) -> GoredStatus {
    let (Some(a), false) = (alg.as_ref(), out.is_null()) else {
        return fail(GoredStatus::NullPointer, "null argument");
    };
    *out = ptr::null_mut();
    let idem = if idempotent.is_null() {
        None
    } else {
        match read_str(idempotent) {
            Ok(t) => Some(t.split(',').map(|x| x.trim().to_string()).collect()),
            Err(s) => return s,
        }
    };
    let options = ReduceOptions {
        search: SearchConfig::with_bound(bound),
        jmax,
        idempotent: idem,
        seed: 0,
    };
    match reduce(&a.inner.presentation, &options) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(GoredTrace { inner }));
            GoredStatus::Ok
        }
        Err(e) => fail(GoredStatus::Computation, e),
    }
}

/// # Safety
/// `t` must come from [`gored_reduce`] or be null.
#[no_mangle]
pub unsafe extern "C" fn gored_trace_free(t: *mut GoredTrace) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Exit code of the trace (0, 2 or 3), or -1 for a null handle.
///
/// # Safety
/// `t` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn gored_trace_exit_code(t: *const GoredTrace) -> i32 {
    t.as_ref().map_or(-1, |t| t.inner.exit_code())
}

/// Number of applied steps, or 0 for a null handle.
///
/// # Safety
/// `t` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn gored_trace_applied_steps(t: *const GoredTrace) -> usize {
    t.as_ref().map_or(0, |t| t.inner.applied_steps().count())
}

/// The trace as JSON; release with [`gored_string_free`]. Null for a null
/// handle.
///
/// # Safety
/// `t` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn gored_trace_json(t: *const GoredTrace) -> *mut c_char {
    match t.as_ref() {
        Some(t) => CString::new(t.inner.to_json()).map_or(ptr::null_mut(), CString::into_raw),
        None => ptr::null_mut(),
    }
}

/// The final core in `.alg` format; release with [`gored_string_free`].
///
/// # Safety
/// `t` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn gored_trace_core(t: *const GoredTrace) -> *mut c_char {
    match t.as_ref() {
        Some(t) => CString::new(t.inner.core.clone()).map_or(ptr::null_mut(), CString::into_raw),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn gored_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
