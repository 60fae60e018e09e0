use std::ffi::{CStr, CString};
use std::ptr;

use gored_ffi::*;

const EX46: &str = include_str!("../../core/fixtures/ex46.alg");
const LOOP_X2: &str = include_str!("../../core/fixtures/loop-x2.alg");

fn parse(text: &str) -> *mut GoredAlgebra {
    let text = CString::new(text).unwrap();
    let mut alg = ptr::null_mut();
    assert_eq!(unsafe { gored_algebra_parse(text.as_ptr(), &mut alg) }, GoredStatus::Ok);
    assert!(!alg.is_null());
    alg
}

fn simple(alg: *const GoredAlgebra, v: &str) -> *mut GoredModule {
    let v = CString::new(v).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { gored_module_simple(alg, v.as_ptr(), &mut m) }, GoredStatus::Ok);
    m
}

#[test]
fn algebra_invariants() {
    let alg = parse(EX46);
    unsafe {
        assert_eq!(gored_algebra_dimension(alg), 14);
        assert_eq!(gored_algebra_nilpotency(alg), 4);
        gored_algebra_free(alg);
    }
}

#[test]
fn parse_error_sets_message() {
    let text = CString::new("vertex 1\narrow a: 1 -> 9\n").unwrap();
    let mut alg = ptr::null_mut();
    let status = unsafe { gored_algebra_parse(text.as_ptr(), &mut alg) };
    assert_eq!(status, GoredStatus::Parse);
    assert!(alg.is_null());
    let msg = unsafe { CStr::from_ptr(gored_last_error()) }.to_str().unwrap();
    assert!(!msg.is_empty());
}

#[test]
fn null_arguments_are_rejected() {
    unsafe {
        assert_eq!(gored_algebra_parse(ptr::null(), ptr::null_mut()), GoredStatus::NullPointer);
        assert_eq!(gored_algebra_dimension(ptr::null()), 0);
        assert_eq!(gored_trace_exit_code(ptr::null()), -1);
        assert!(gored_trace_json(ptr::null()).is_null());
        gored_algebra_free(ptr::null_mut());
        gored_string_free(ptr::null_mut());
    }
}

#[test]
fn unknown_vertex() {
    let alg = parse(LOOP_X2);
    let v = CString::new("nope").unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { gored_module_simple(alg, v.as_ptr(), &mut m) }, GoredStatus::NotFound);
    unsafe { gored_algebra_free(alg) };
}

#[test]
fn ext_and_gproj_over_dual_numbers() {
    let alg = parse(LOOP_X2);
    let s = simple(alg, "1");
    unsafe {
        assert_eq!(gored_module_dimension(s), 1);
        let mut buf = [usize::MAX; 7];
        assert_eq!(gored_ext_dims(s, s, 6, 20, buf.as_mut_ptr(), buf.len()), GoredStatus::Ok);
        assert_eq!(buf, [1; 7]);
        assert_eq!(gored_ext_dims(s, s, 6, 20, buf.as_mut_ptr(), 3), GoredStatus::BufferTooSmall);

        let (mut verdict, mut degree) = (GoredGproj::Undetermined, 99);
        assert_eq!(gored_gproj_test(s, 20, &mut verdict, &mut degree), GoredStatus::Ok);
        assert_eq!(verdict, GoredGproj::Certified);

        let zero = GoredDim { kind: GoredDimKind::AtLeast, value: 9, period_start: 9 };
        let (mut l, mut r) = (zero, zero);
        assert_eq!(gored_gorenstein(alg, 20, &mut l, &mut r), GoredStatus::Ok);
        assert_eq!((l.kind, l.value), (GoredDimKind::Finite, 0));
        assert_eq!((r.kind, r.value), (GoredDimKind::Finite, 0));

        gored_module_free(s);
        gored_algebra_free(alg);
    }
}

#[test]
fn non_gproj_simple_reports_degree() {
    let alg = parse(EX46);
    let s = simple(alg, "1");
    let (mut verdict, mut degree) = (GoredGproj::Undetermined, 0);
    unsafe {
        assert_eq!(gored_gproj_test(s, 20, &mut verdict, &mut degree), GoredStatus::Ok);
        gored_module_free(s);
        gored_algebra_free(alg);
    }
    assert_eq!(verdict, GoredGproj::NotGproj);
    assert_eq!(degree, 1);
}

#[test]
fn reduce_produces_trace() {
    let alg = parse(EX46);
    let mut trace = ptr::null_mut();
    unsafe {
        assert_eq!(gored_reduce(alg, ptr::null(), 20, 12, &mut trace), GoredStatus::Ok);
        assert_eq!(gored_trace_exit_code(trace), 0);
        assert_eq!(gored_trace_applied_steps(trace), 2);
        let json = gored_trace_json(trace);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        gored_string_free(json);
        assert!(text.contains("VertexRemoval"));
        let core = gored_trace_core(trace);
        let core_text = CStr::from_ptr(core).to_str().unwrap().to_owned();
        gored_string_free(core);
        let reparsed = parse(&core_text);
        assert_eq!(gored_algebra_dimension(reparsed), 2);
        gored_algebra_free(reparsed);
        gored_trace_free(trace);
        gored_algebra_free(alg);
    }
}

#[test]
fn header_is_current() {
    let header = include_str!("../include/gored.h");
    for name in ["gored_algebra_parse", "gored_reduce", "gored_ext_dims", "GORED_STATUS_OK"] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
