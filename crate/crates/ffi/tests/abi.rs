use std::ffi::{CStr, CString};
use std::ptr;

use graphclust_ffi::*;

const EXAMPLE1: &str = include_str!("../../core/tests/data/example1.json");
const EXAMPLE2: &str = include_str!("../../core/tests/data/example2.json");
const K4: &str = include_str!("../../core/tests/data/k4.json");

fn parse(text: &str) -> *mut GcGraph {
    let c = CString::new(text).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { gc_graph_parse(c.as_ptr(), &mut g) }, GcStatus::Ok);
    assert!(!g.is_null());
    g
}

fn take_string(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { gc_string_free(s) };
    out
}

fn last_error() -> String {
    let p = gc_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

#[test]
fn emit_round_trips_the_documents() {
    for text in [EXAMPLE1, EXAMPLE2, K4] {
        let g = parse(text);
        let mut s = ptr::null_mut();
        assert_eq!(unsafe { gc_graph_emit(g, &mut s) }, GcStatus::Ok);
        assert_eq!(take_string(s), text);
        unsafe { gc_graph_free(g) };
    }
}

#[test]
fn reduce_example_one() {
    let g = parse(EXAMPLE1);
    let (mut basic, mut adm) = (false, 0u32);
    unsafe {
        assert_eq!(gc_graph_is_basic(g, &mut basic), GcStatus::Ok);
        assert_eq!(gc_graph_validate_admissible(g, &mut adm), GcStatus::Ok);
    }
    assert!(basic);
    assert_eq!(adm, 0b101);
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { gc_graph_reduce(g, &mut r) }, GcStatus::Ok);
    let (mut d, mut n) = (0u32, 0usize);
    assert_eq!(unsafe { gc_graph_info(r, &mut d, &mut n) }, GcStatus::Ok);
    assert_eq!((d, n), (2, 4));
    let mut dot = ptr::null_mut();
    assert_eq!(unsafe { gc_graph_export_dot(r, &mut dot) }, GcStatus::Ok);
    let dot = take_string(dot);
    assert!(dot.contains("1 -- 7") && dot.contains("2 -- 8") && dot.contains("7 -- 8"));
    unsafe {
        gc_graph_free(r);
        gc_graph_free(g);
    }
}

#[test]
fn schur_complement_and_its_errors() {
    let g = parse(EXAMPLE1);
    let mut out = ptr::null_mut();
    let set = [3u32, 4];
    assert_eq!(unsafe { gc_graph_schur_complement(g, set.as_ptr(), 2, &mut out) }, GcStatus::Ok);
    let mut n = 0usize;
    let mut d = 0u32;
    unsafe { gc_graph_info(out, &mut d, &mut n) };
    assert_eq!(n, 6);
    unsafe { gc_graph_free(out) };

    let singular = [5u32];
    let st = unsafe { gc_graph_schur_complement(g, singular.as_ptr(), 1, &mut out) };
    assert_eq!(st, GcStatus::NotInvertible);
    assert!(last_error().contains("not invertible"));
    let inputs = [1u32];
    assert_eq!(unsafe { gc_graph_schur_complement(g, inputs.as_ptr(), 1, &mut out) }, GcStatus::InvalidVertex);
    unsafe { gc_graph_free(g) };
}

#[test]
fn persistency_and_compensation() {
    let k4 = parse(K4);
    let mut bound = 0i64;
    assert_eq!(unsafe { gc_graph_persistency(k4, 3, &mut bound) }, GcStatus::Ok);
    assert_eq!(bound, 1);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { gc_graph_compensation_json(k4, &mut s) }, GcStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
    assert_eq!(v["a"]["rows"].as_array().unwrap().len(), 4);

    let ex2 = parse(EXAMPLE2);
    assert_eq!(unsafe { gc_graph_compensation_json(ex2, &mut s) }, GcStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
    assert_eq!(v["b"]["cols"], serde_json::json!([1, 2, 3, 4, 8, 9]));
    unsafe {
        gc_graph_free(k4);
        gc_graph_free(ex2);
    }
}

#[test]
fn failures_set_status_and_message() {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { gc_graph_parse(ptr::null(), &mut g) }, GcStatus::NullPointer);
    let bad = CString::new(r#"{"d": 6, "vertices": [], "edges": []}"#).unwrap();
    assert_eq!(unsafe { gc_graph_parse(bad.as_ptr(), &mut g) }, GcStatus::Parse);
    assert!(last_error().starts_with("parse error at d"));
    let garbage = CString::new("{").unwrap();
    assert_eq!(unsafe { gc_graph_parse(garbage.as_ptr(), &mut g) }, GcStatus::Parse);
    assert!(g.is_null());

    let ex1 = parse(EXAMPLE1);
    let mut bound = 0i64;
    assert_eq!(unsafe { gc_graph_persistency(ex1, 2, &mut bound) }, GcStatus::Precondition);
    assert_eq!(unsafe { gc_graph_is_basic(ex1, ptr::null_mut()) }, GcStatus::NullPointer);
    let mut basic = false;
    assert_eq!(unsafe { gc_graph_is_basic(ex1, &mut basic) }, GcStatus::Ok);
    assert!(gc_last_error_message().is_null());
    unsafe {
        gc_graph_free(ex1);
        gc_graph_free(ptr::null_mut());
        gc_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/graphclust.h");
    for name in [
        "gc_graph_parse",
        "gc_graph_free",
        "gc_graph_emit",
        "gc_graph_info",
        "gc_graph_is_basic",
        "gc_graph_validate_admissible",
        "gc_graph_reduce",
        "gc_graph_schur_complement",
        "gc_graph_export_dot",
        "gc_graph_persistency",
        "gc_graph_compensation_json",
        "gc_string_free",
        "gc_last_error_message",
        "typedef struct GcGraph GcGraph",
        "GC_STATUS_OK = 0",
    ] {
        assert!(header.contains(name), "{name}");
    }
}
