use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::path::Path;
use std::process::Command;
use std::ptr;

use zassenhaus_ffi::*;

fn group(spec: &str) -> *mut ZsGroup {
    let spec = CString::new(spec).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { zs_group_new(spec.as_ptr(), &mut g) }, ZsStatus::Ok);
    assert!(!g.is_null());
    g
}

fn take(s: *mut c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { zs_string_free(s) };
    out
}

fn last_error() -> String {
    let p = zs_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn group_queries() {
    let g = group(r#"{"kind":"magnus","p":2,"d":2,"m":3}"#);
    let mut order = 0;
    assert_eq!(unsafe { zs_group_order(g, &mut order) }, ZsStatus::Ok);
    assert_eq!(order, 32);

    let mut buf = [0usize; 8];
    let mut len = 0;
    assert_eq!(unsafe { zs_filtration_orders(g, buf.as_mut_ptr(), buf.len(), &mut len) }, ZsStatus::Ok);
    assert_eq!(&buf[..len], &[32, 8, 1]);
    assert_eq!(unsafe { zs_filtration_orders(g, buf.as_mut_ptr(), 2, &mut len) }, ZsStatus::BufferTooSmall);
    assert_eq!(len, 3);

    let word = CString::new("x1^2").unwrap();
    let mut x = 0;
    assert_eq!(unsafe { zs_group_element(g, word.as_ptr(), &mut x) }, ZsStatus::Ok);
    let mut label = ptr::null_mut();
    assert_eq!(unsafe { zs_group_label(g, x, &mut label) }, ZsStatus::Ok);
    assert_eq!(take(label), "x1*x1");

    let mut digest = ptr::null_mut();
    assert_eq!(unsafe { zs_group_digest(g, &mut digest) }, ZsStatus::Ok);
    assert_eq!(take(digest).len(), 64);
    unsafe { zs_group_free(g) };
}

#[test]
fn separation_and_verification() {
    let g = group(r#"{"kind":"magnus","p":2,"d":2,"m":4}"#);
    let word = CString::new("[x1,x2]").unwrap();
    let mut x = 0;
    assert_eq!(unsafe { zs_group_element(g, word.as_ptr(), &mut x) }, ZsStatus::Ok);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { zs_separate(g, x, 2, &mut out) }, ZsStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["outcome"], "found");
    assert_eq!(v["depth"], 2);
    unsafe { zs_group_free(g) };

    let g = group(r#"{"kind":"cyclic","p":2,"order":4}"#);
    let mut report = ptr::null_mut();
    let mut verdict = -1;
    assert_eq!(unsafe { zs_verify(g, 2, &mut report, &mut verdict) }, ZsStatus::Ok);
    assert_eq!(verdict, 0);
    let v: serde_json::Value = serde_json::from_str(&take(report)).unwrap();
    assert_eq!(v["verdicts"]["overall"], "established");
    assert!(v.get("timings_ms").is_none());
    unsafe { zs_group_free(g) };
}

#[test]
fn errors_carry_status_and_message() {
    let mut g = ptr::null_mut();
    let bad = CString::new("{\"kind\":\"magnus\"").unwrap();
    assert_eq!(unsafe { zs_group_new(bad.as_ptr(), &mut g) }, ZsStatus::Parse);
    assert!(g.is_null());
    assert!(!last_error().is_empty());

    let huge = CString::new(r#"{"kind":"magnus","p":2,"d":3,"m":5}"#).unwrap();
    assert_eq!(unsafe { zs_group_new(huge.as_ptr(), &mut g) }, ZsStatus::TooLarge);

    assert_eq!(unsafe { zs_group_new(ptr::null(), &mut g) }, ZsStatus::NullPointer);
    let mut order = 0;
    assert_eq!(unsafe { zs_group_order(ptr::null(), &mut order) }, ZsStatus::NullPointer);

    let g = group(r#"{"kind":"cyclic","p":2,"order":4}"#);
    let word = CString::new("x7").unwrap();
    let mut x = 0;
    assert_eq!(unsafe { zs_group_element(g, word.as_ptr(), &mut x) }, ZsStatus::Parse);
    assert!(last_error().contains("x7"));
    let mut label = ptr::null_mut();
    assert_eq!(unsafe { zs_group_label(g, 99, &mut label) }, ZsStatus::InvalidArgument);
    unsafe { zs_group_free(g) };
    unsafe { zs_group_free(ptr::null_mut()) };
    unsafe { zs_string_free(ptr::null_mut()) };
}

#[test]
fn header_compiles_as_c_and_cpp() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/zassenhaus.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for f in ["zs_group_new", "zs_group_free", "zs_separate", "zs_verify", "typedef struct ZsGroup ZsGroup"] {
        assert!(text.contains(f), "{f} missing from header");
    }
    for (compiler, lang) in [("cc", "c"), ("c++", "c++")] {
        let Ok(out) = Command::new(compiler)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang])
            .arg(&header)
            .output()
        else {
            continue;
        };
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
}
