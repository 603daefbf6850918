use std::ffi::{CStr, CString};
use std::ptr;

use counterpoint_ffi::*;

fn last_error() -> String {
    let p = cp_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

unsafe fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    cp_string_free(p);
    s
}

fn parse(n: u32, text: &str) -> *mut CpDichotomy {
    let text = CString::new(text).unwrap();
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { cp_dichotomy_parse(n, text.as_ptr(), &mut d) }, CpStatus::Ok);
    d
}

#[test]
fn z6_example_through_the_abi() {
    unsafe {
        let members = [0u32, 2, 3];
        let mut d = ptr::null_mut();
        assert_eq!(cp_dichotomy_new(6, members.as_ptr(), 3, &mut d), CpStatus::Ok);
        assert_eq!(cp_dichotomy_modulus(d), 6);
        let mut strong = false;
        assert_eq!(cp_dichotomy_is_strong(d, &mut strong), CpStatus::Ok);
        assert!(strong);
        let (mut r, mut w) = (0, 0);
        assert_eq!(cp_dichotomy_polarity(d, &mut r, &mut w), CpStatus::Ok);
        assert_eq!((r, w), (1, 5));

        let mut s = ptr::null_mut();
        assert_eq!(cp_symmetries(d, 0, 2, &mut s), CpStatus::Ok);
        assert_eq!(cp_successor_set_cardinality(s), 15);
        assert_eq!(cp_successor_set_symmetry_count(s), 1);
        let mut g = CpSymmetry::default();
        assert_eq!(cp_successor_set_symmetry(s, 0, &mut g), CpStatus::Ok);
        assert_eq!(g, CpSymmetry { t: 3, u: 1, v: 3 });
        assert_eq!(cp_successor_set_symmetry(s, 1, &mut g), CpStatus::IndexOutOfRange);

        let count = cp_successor_set_successor_count(s);
        assert_eq!(count, 15);
        let mut buf = vec![CpDualNumber::default(); count];
        let mut written = 0;
        assert_eq!(
            cp_successor_set_successors(s, buf.as_mut_ptr(), buf.len(), &mut written),
            CpStatus::Ok
        );
        assert_eq!(written, 15);
        assert!(buf.iter().all(|x| members.contains(&x.interval)));

        let mut json = ptr::null_mut();
        assert_eq!(cp_successor_set_json(s, &mut json), CpStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(v["symmetries"], serde_json::json!(["e^(e.3).(1+e.3)"]));

        cp_successor_set_free(s);
        cp_dichotomy_free(d);
    }
}

#[test]
fn extension_through_the_abi() {
    unsafe {
        let (x6, x12) = (parse(6, "X6"), parse(12, "X12"));
        let mut s = ptr::null_mut();
        assert_eq!(cp_extend(x6, x12, 2, 2, CpLinkage::Interval, &mut s), CpStatus::Ok);
        assert_eq!(cp_successor_set_cardinality(s), 48);
        assert_eq!(cp_successor_set_interval(s), 4);
        assert_eq!(cp_successor_set_symmetry_count(s), 2);
        cp_successor_set_free(s);
        assert_eq!(cp_extend(x6, x12, 2, 2, CpLinkage::Fiber, &mut s), CpStatus::Ok);
        assert_eq!(cp_successor_set_cardinality(s), 60);
        cp_successor_set_free(s);
        assert_eq!(
            cp_extend(x6, x12, 3, 2, CpLinkage::Interval, &mut s),
            CpStatus::InvalidEmbedding
        );
        cp_dichotomy_free(x6);
        cp_dichotomy_free(x12);
    }
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let mut d = ptr::null_mut();
        let two = [0u32, 1];
        assert_eq!(cp_dichotomy_new(6, two.as_ptr(), 2, &mut d), CpStatus::InvalidDichotomy);
        assert!(last_error().contains("expected 3 members"));
        assert_eq!(cp_dichotomy_new(1, ptr::null(), 0, &mut d), CpStatus::InvalidModulus);
        assert_eq!(cp_dichotomy_new(6, ptr::null(), 3, &mut d), CpStatus::NullPointer);
        let bad = CString::new("0,x,3").unwrap();
        assert_eq!(cp_dichotomy_parse(6, bad.as_ptr(), &mut d), CpStatus::Parse);
        assert_eq!(cp_dichotomy_parse(6, ptr::null(), &mut d), CpStatus::NullPointer);

        let weak = parse(6, "0,1,2");
        let (mut r, mut w) = (0, 0);
        assert_eq!(cp_dichotomy_polarity(weak, &mut r, &mut w), CpStatus::NotStrong);
        let mut s = ptr::null_mut();
        assert_eq!(cp_symmetries(weak, 0, 0, &mut s), CpStatus::NotStrong);
        cp_dichotomy_free(weak);

        let u0 = parse(16, "U0");
        assert_eq!(cp_symmetries(u0, 0, 2, &mut s), CpStatus::NotConsonant);
        assert_eq!(cp_symmetries(ptr::null(), 0, 2, &mut s), CpStatus::NullPointer);
        assert_eq!(cp_symmetries(u0, 0, 6, ptr::null_mut()), CpStatus::NullPointer);
        cp_dichotomy_free(u0);
        cp_dichotomy_free(ptr::null_mut());
        cp_successor_set_free(ptr::null_mut());
        cp_string_free(ptr::null_mut());
    }
}

#[test]
fn table_and_continuum_through_the_abi() {
    unsafe {
        let mut json = ptr::null_mut();
        assert_eq!(
            cp_table1_json(CpExtensionMode::Chained, CpLinkage::Interval, &mut json),
            CpStatus::Ok
        );
        let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(v["rows"].as_array().unwrap().len(), 8);
        assert_eq!(v["top_modulus"], 512);

        let (mut num, mut den) = (0, 0);
        assert_eq!(cp_continuum_measure(1, 8, &mut num, &mut den), CpStatus::Ok);
        assert_eq!((num, den), (3, 8));
        assert_eq!(cp_continuum_measure(1, 2, &mut num, &mut den), CpStatus::InvalidPoint);
        assert_eq!(cp_continuum_measure(1, 0, &mut num, &mut den), CpStatus::InvalidPoint);
        assert_eq!(cp_continuum_json(1, 4, &mut json), CpStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(v["maximizers"]["symmetries"].as_array().unwrap().len(), 2);
        assert_eq!(v["successors"], "[0,1/4)∪(1/4,1/2)");
    }
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(cp_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
