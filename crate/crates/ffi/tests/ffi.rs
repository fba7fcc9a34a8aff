use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use k0count_ffi::*;

fn last_error() -> String {
    let p = k0_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn parse(expr: &str) -> *mut K0Class {
    let s = CString::new(expr).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { k0_class_parse(s.as_ptr(), &mut out) },
        K0Status::Ok
    );
    out
}

fn text(c: *const K0Class) -> String {
    unsafe {
        let p = k0_class_to_string(c);
        let s = CStr::from_ptr(p).to_string_lossy().into_owned();
        k0_string_free(p);
        s
    }
}

#[test]
fn class_round_trip() {
    let c = parse("(1 + L)^2");
    assert_eq!(text(c), "1 + 2*L + L^2");
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { k0_class_mod_l(c, &mut m) }, K0Status::Ok);
    assert_eq!(text(m), "1");
    let mut v = 0i64;
    assert_eq!(unsafe { k0_class_evaluate(c, 3, 2, &mut v) }, K0Status::Ok);
    assert_eq!(v, 100);
    unsafe {
        k0_class_free(m);
        k0_class_free(c);
    }
}

#[test]
fn symmetric_powers_of_the_line() {
    let p1 = parse("1 + L");
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { k0_class_sym_power(p1, 3, &mut s) }, K0Status::Ok);
    assert_eq!(text(s), "1 + L + L^2 + L^3");
    let mut n = 0i64;
    assert_eq!(
        unsafe { k0_sym_power_count(p1, 4, 3, &mut n) },
        K0Status::Ok
    );
    assert_eq!(n, 121);
    unsafe {
        k0_class_free(s);
        k0_class_free(p1);
    }
}

#[test]
fn polydiagonal_pair() {
    let (mut t, mut p) = (0i64, 0i64);
    assert_eq!(
        unsafe { k0_polydiagonal_count(1, 2, 2, 2, &mut t, &mut p) },
        K0Status::Ok
    );
    assert_eq!((t, p), (49, 35));
    assert_eq!(
        unsafe { k0_polydiagonal_count(0, 2, 4, 2, &mut t, &mut p) },
        K0Status::Unsupported
    );
    assert!(last_error().contains("n = 2, 3"));
}

#[test]
fn errors_are_reported() {
    let bad = CString::new("1 + * L").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { k0_class_parse(bad.as_ptr(), &mut out) },
        K0Status::Parse
    );
    assert!(out.is_null());
    assert!(!last_error().is_empty());
    assert_eq!(
        unsafe { k0_class_parse(ptr::null(), &mut out) },
        K0Status::NullPointer
    );
    let big = parse("L^40");
    let mut v = 0i64;
    assert_eq!(
        unsafe { k0_class_evaluate(big, 13, 1, &mut v) },
        K0Status::Overflow
    );
    let sym = parse("X + L");
    assert_eq!(
        unsafe { k0_class_evaluate(sym, 3, 1, &mut v) },
        K0Status::Parse
    );
    unsafe {
        k0_class_free(big);
        k0_class_free(sym);
        k0_class_free(ptr::null_mut());
        k0_string_free(ptr::null_mut());
    }
    assert_eq!(k0_abi_version(), K0_ABI_VERSION);
}

#[test]
fn verify_report() {
    let suites = CString::new("quotients").unwrap();
    let qs = [3u64, 7];
    let mut r = ptr::null_mut();
    assert_eq!(
        unsafe { k0_verify(suites.as_ptr(), qs.as_ptr(), qs.len(), 0, &mut r) },
        K0Status::Ok
    );
    assert!(unsafe { k0_report_passed(r) });
    assert_eq!(unsafe { k0_report_failures(r) }, 0);
    let json = unsafe { k0_report_json(r) };
    let s = unsafe { CStr::from_ptr(json) }
        .to_string_lossy()
        .into_owned();
    assert!(s.contains("\"schema\": \"1\""));
    unsafe {
        k0_string_free(json);
        k0_report_free(r);
    }
    let tame = [5u64];
    let mut r = ptr::null_mut();
    assert_eq!(
        unsafe { k0_verify(suites.as_ptr(), tame.as_ptr(), 1, 0, &mut r) },
        K0Status::Ok
    );
    unsafe { k0_report_free(r) };
    let empty = CString::new("").unwrap();
    assert_eq!(
        unsafe { k0_verify(empty.as_ptr(), ptr::null(), 0, 0, &mut r) },
        K0Status::InvalidArgument
    );
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "k0count.h"

int main(void) {
    K0Class *c = NULL;
    if (k0_class_parse("1 + L", &c) != K0_STATUS_OK) return 10;
    int64_t n = 0;
    if (k0_sym_power_count(c, 4, 3, &n) != K0_STATUS_OK || n != 121) return 11;
    K0Class *bad = NULL;
    if (k0_class_parse("1 +", &bad) != K0_STATUS_PARSE || k0_last_error_message() == NULL) return 12;
    int64_t t = 0, p = 0;
    if (k0_polydiagonal_count(1, 2, 2, 2, &t, &p) != K0_STATUS_OK || t != 49 || p != 35) return 13;
    char *s = k0_class_to_string(c);
    printf("%s\n", s);
    k0_string_free(s);
    k0_class_free(c);
    return 0;
}
"#;

/// Compiles a C program against the generated header and the static library.
#[test]
fn c_program_links() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header_dir = manifest.join("include");
    assert!(header_dir.join("k0count.h").exists());
    let profile_dir = std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf();
    let lib = profile_dir.join("libk0count_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let exe = dir.path().join("main");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(&header_dir)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1 + L");
}
