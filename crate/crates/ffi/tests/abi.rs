use std::ffi::{CStr, CString};
use std::ptr;

use kunneth_ffi::*;

fn cs(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn surface(name: &str) -> *mut KnSurface {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { kn_surface_new(cs(name).as_ptr(), &mut s) }, KnStatus::Ok);
    assert!(!s.is_null());
    s
}

fn last_error() -> String {
    let p = kn_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn take(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { kn_string_free(p) };
    s
}

#[test]
fn numeric_invariants() {
    let p2 = surface("P2");
    let k3 = surface("K3");
    let mut out = 0i64;
    unsafe {
        assert_eq!(kn_euler_chi(p2, cs("1,0,0").as_ptr(), &mut out), KnStatus::Ok);
        assert_eq!(out, 1);
        assert_eq!(kn_euler_chi(p2, cs("1,1,1/2").as_ptr(), &mut out), KnStatus::Ok);
        assert_eq!(out, 3);
        assert_eq!(kn_obstruction(p2, cs("1,0,-4").as_ptr(), &mut out), KnStatus::Ok);
        assert_eq!(out, 1);
        assert_eq!(kn_expected_dim(k3, cs("1,0,-3").as_ptr(), 2, &mut out), KnStatus::Ok);
        assert_eq!(out, 6);
        assert_eq!(kn_mukai_pair(k3, cs("1,0,-1").as_ptr(), cs("1,0,-1").as_ptr(), &mut out), KnStatus::Ok);
        assert_eq!(out, 0);
        assert!(kn_last_error().is_null());
        kn_surface_free(p2);
        kn_surface_free(k3);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    let p2 = surface("P2");
    let mut out = 7i64;
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(kn_surface_new(cs("bogus").as_ptr(), &mut s), KnStatus::Validation);
        assert!(s.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(kn_surface_new(ptr::null(), &mut s), KnStatus::NullPointer);
        assert_eq!(kn_euler_chi(ptr::null(), cs("1,0,0").as_ptr(), &mut out), KnStatus::NullPointer);
        assert_eq!(kn_euler_chi(p2, cs("1,2").as_ptr(), &mut out), KnStatus::Parse);
        assert!(last_error().contains("needs"));
        assert_eq!(kn_expected_dim(p2, cs("1,0,0").as_ptr(), 3, &mut out), KnStatus::Validation);
        assert_eq!(kn_euler_chi(p2, cs("1,0,0").as_ptr(), ptr::null_mut()), KnStatus::NullPointer);
        assert_eq!(out, 7);
        // K3 is not rational
        let k3 = surface("K3");
        let mut json = ptr::null_mut();
        assert_ne!(kn_blowup_decomposition(k3, 1, &mut json), KnStatus::Ok);
        assert!(json.is_null());
        kn_surface_free(k3);
        kn_surface_free(p2);
        kn_surface_free(ptr::null_mut());
        kn_string_free(ptr::null_mut());
    }
}

#[test]
fn overflow_is_reported() {
    let p2 = surface("P2");
    let mut out = 0i64;
    let big = cs("1,0,-100000000000000000000");
    unsafe {
        assert_eq!(kn_euler_chi(p2, big.as_ptr(), &mut out), KnStatus::Overflow);
        kn_surface_free(p2);
    }
}

#[test]
fn blowup_json_and_spec_round_trip() {
    let p2 = surface("P2");
    let mut json = ptr::null_mut();
    unsafe {
        assert_eq!(kn_blowup_decomposition(p2, 2, &mut json), KnStatus::Ok);
    }
    let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
    assert_eq!(v["pairs"].as_array().unwrap().len(), 5);

    let mut spec = ptr::null_mut();
    unsafe { assert_eq!(kn_surface_json(p2, &mut spec), KnStatus::Ok) };
    let spec = take(spec);
    let again = surface(&spec);
    let mut out = 0i64;
    unsafe {
        assert_eq!(kn_euler_chi(again, cs("1,1,1/2").as_ptr(), &mut out), KnStatus::Ok);
        assert_eq!(out, 3);
        kn_surface_free(again);
        kn_surface_free(p2);
    }
}

#[test]
fn header_is_valid_c_and_cxx() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/kunneth.h");
    let text = std::fs::read_to_string(header).unwrap();
    for sym in ["kn_surface_new", "kn_surface_free", "kn_euler_chi", "kn_mukai_pair", "kn_expected_dim",
        "kn_obstruction", "kn_blowup_decomposition", "kn_string_free", "kn_last_error", "KN_STATUS_INVARIANT"]
    {
        assert!(text.contains(sym), "{sym} missing from header");
    }
    for (cc, lang) in [("cc", "c"), ("c++", "c++")] {
        let Ok(status) = std::process::Command::new(cc)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang, header])
            .status()
        else {
            eprintln!("{cc} not available; skipping compile check");
            continue;
        };
        assert!(status.success(), "{cc} rejected the header");
    }
}
