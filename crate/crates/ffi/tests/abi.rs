use std::ffi::{CStr, CString};
use std::ptr;

use equicat_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn json_of(r: *const EquicatResult) -> serde_json::Value {
    serde_json::from_str(CStr::from_ptr(equicat_result_json(r)).to_str().unwrap()).unwrap()
}

unsafe fn last_error() -> String {
    CStr::from_ptr(equicat_last_error())
        .to_string_lossy()
        .into_owned()
}

#[test]
fn check_round_trip() {
    unsafe {
        let mut r = ptr::null_mut();
        assert_eq!(
            equicat_run_check(c("modelhpb").as_ptr(), 7, 3, ptr::null(), &mut r),
            EquicatStatus::Ok
        );
        assert_eq!(equicat_result_verdict(r), EquicatVerdict::Pass);
        assert_eq!(json_of(r)["passed"], 3);
        equicat_result_free(r);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut r = ptr::null_mut();
        assert_eq!(
            equicat_run_check(ptr::null(), 0, 1, ptr::null(), &mut r),
            EquicatStatus::NullPointer
        );
        assert_eq!(
            equicat_run_check(c("x").as_ptr(), 0, 1, ptr::null(), ptr::null_mut()),
            EquicatStatus::NullPointer
        );
        assert_eq!(
            equicat_run_check(c("nope").as_ptr(), 0, 1, ptr::null(), &mut r),
            EquicatStatus::UnknownName
        );
        assert!(last_error().contains("unknown check"));
        assert!(r.is_null());
        assert_eq!(
            equicat_bounds(
                c("bm").as_ptr(),
                c("{not json").as_ptr(),
                ptr::null(),
                &mut r
            ),
            EquicatStatus::InvalidInput
        );
        let bad = [0xffu8, 0];
        assert_eq!(
            equicat_homology(c("nerve").as_ptr(), bad.as_ptr().cast(), 2, &mut r),
            EquicatStatus::InvalidUtf8
        );
        assert_eq!(
            equicat_run_check(c("gthom").as_ptr(), 0, 1_000_000, ptr::null(), &mut r),
            EquicatStatus::SizeCap
        );
    }
}

#[test]
fn caps_handle() {
    unsafe {
        let caps = equicat_caps_new();
        assert_eq!(
            equicat_caps_set(caps, c("colour").as_ptr(), 3),
            EquicatStatus::UnknownName
        );
        assert_eq!(
            equicat_caps_set(caps, c("j").as_ptr(), 1),
            EquicatStatus::Ok
        );
        let input = c(
            r#"{"group": "Z2", "j": "regular", "m": {"e": 2, "G": 1}, "conn_m": {"e": 0, "G": 0}}"#,
        );
        let mut r = ptr::null_mut();
        assert_eq!(
            equicat_bounds(c("configuration").as_ptr(), input.as_ptr(), caps, &mut r),
            EquicatStatus::SizeCap
        );
        assert_eq!(
            equicat_caps_set(caps, c("j").as_ptr(), 6),
            EquicatStatus::Ok
        );
        assert_eq!(
            equicat_bounds(c("configuration").as_ptr(), input.as_ptr(), caps, &mut r),
            EquicatStatus::Ok
        );
        assert_eq!(json_of(r)["nu"]["{e,a}"], -1);
        assert_eq!(equicat_result_verdict(r), EquicatVerdict::None);
        equicat_result_free(r);
        equicat_caps_free(caps);
    }
}

#[test]
fn homology_of_a_circle() {
    // two parallel arrows between two objects have the circle as nerve
    let input = c(r#"{"objects": ["x", "y"], "morphisms": [
        {"id": "f", "src": "x", "tgt": "y"}, {"id": "g", "src": "x", "tgt": "y"}]}"#);
    unsafe {
        let mut r = ptr::null_mut();
        assert_eq!(
            equicat_homology(c("nerve").as_ptr(), input.as_ptr(), 3, &mut r),
            EquicatStatus::Ok
        );
        assert_eq!(json_of(r)["homology"]["betti"], serde_json::json!([1, 1]));
        equicat_result_free(r);
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(equicat_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
