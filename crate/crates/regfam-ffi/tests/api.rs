use std::ffi::{c_char, CStr, CString};
use std::ptr;

use regfam_ffi::*;

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    regfam_string_free(s);
    out
}

fn family(expr: &str) -> *mut RegfamFamily {
    let c = CString::new(expr).unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { regfam_family_parse(c.as_ptr(), &mut f) }, RegfamStatus::Ok);
    f
}

#[test]
fn family_queries() {
    unsafe {
        let f = family("S");
        let mut member = true;
        assert_eq!(regfam_family_member(f, [2u64, 3, 4].as_ptr(), 3, &mut member), RegfamStatus::Ok);
        assert!(!member);
        assert_eq!(regfam_family_member(f, [3u64, 4, 5].as_ptr(), 3, &mut member), RegfamStatus::Ok);
        assert!(member);

        let (mut has, mut next) = (false, 0u64);
        assert_eq!(regfam_family_min_extension(f, [3u64, 4].as_ptr(), 2, &mut has, &mut next), RegfamStatus::Ok);
        assert!(has && next == 5);
        assert_eq!(regfam_family_min_extension(f, [2u64, 3].as_ptr(), 2, &mut has, &mut next), RegfamStatus::Ok);
        assert!(!has);

        let mut text = ptr::null_mut();
        assert_eq!(regfam_family_iota(f, &mut text), RegfamStatus::Ok);
        assert_eq!(take(text), "w");
        assert_eq!(regfam_family_rank(f, [5u64].as_ptr(), 1, &mut text), RegfamStatus::Ok);
        assert_eq!(take(text), "4");
        regfam_family_free(f);

        let f = family("S[2]");
        assert_eq!(regfam_family_iota(f, &mut text), RegfamStatus::Ok);
        assert_eq!(take(text), "w^2");
        regfam_family_free(f);
    }
}

#[test]
fn errors_carry_status_and_message() {
    unsafe {
        let bad = CString::new("S[w+]").unwrap();
        let mut f = ptr::null_mut();
        assert_eq!(regfam_family_parse(bad.as_ptr(), &mut f), RegfamStatus::Syntax);
        assert!(f.is_null());
        let msg = take(regfam_last_error());
        assert!(msg.contains("column 4"), "{msg}");

        let f = family("S");
        let mut member = false;
        assert_eq!(regfam_family_member(f, [3u64, 2].as_ptr(), 2, &mut member), RegfamStatus::Domain);
        let mut text = ptr::null_mut();
        assert_eq!(regfam_family_rank(f, [2u64, 3, 4].as_ptr(), 3, &mut text), RegfamStatus::Domain);
        regfam_family_free(f);
        regfam_family_free(ptr::null_mut());

        let ok = family("A(1)");
        assert_eq!(regfam_family_member(ok, ptr::null(), 0, &mut member), RegfamStatus::Ok);
        assert!(member);
        assert!(regfam_last_error().is_null());
        regfam_family_free(ok);
    }
}

#[test]
fn space_norms() {
    unsafe {
        let expr = CString::new("T(1/2,S)").unwrap();
        let mut s = ptr::null_mut();
        assert_eq!(regfam_space_parse(expr.as_ptr(), &mut s), RegfamStatus::Ok);
        let v = CString::new("[3:1,4:1,5:1]").unwrap();
        let mut text = ptr::null_mut();
        assert_eq!(regfam_space_norm(s, v.as_ptr(), 0, &mut text), RegfamStatus::Ok);
        assert_eq!(take(text), "3/2");
        let v = CString::new("[1:1,2:1,3:1,4:1]").unwrap();
        assert_eq!(regfam_space_norm(s, v.as_ptr(), 3, &mut text), RegfamStatus::Domain);
        regfam_space_free(s);

        let theta = CString::new("T(3/2,S)").unwrap();
        assert_eq!(regfam_space_parse(theta.as_ptr(), &mut s), RegfamStatus::Domain);
    }
}

#[test]
fn run_mirrors_exit_codes() {
    unsafe {
        let mut text = ptr::null_mut();
        let line = CString::new("iota S[2]").unwrap();
        assert_eq!(regfam_run(line.as_ptr(), false, &mut text), RegfamStatus::Ok);
        assert_eq!(take(text), "w^2");
        let line = CString::new("member S {2,3,4}").unwrap();
        assert_eq!(regfam_run(line.as_ptr(), true, &mut text), RegfamStatus::Ok);
        assert_eq!(take(text), r#"{"input":"member S {2,3,4}","value":"false","verb":"member"}"#);
        let line = CString::new("frobnicate").unwrap();
        assert_eq!(regfam_run(line.as_ptr(), false, &mut text), RegfamStatus::Syntax);
        let line = CString::new("search-sum A(3) even(maxF) 3").unwrap();
        assert_eq!(regfam_run(line.as_ptr(), false, &mut text), RegfamStatus::Inconclusive);
    }
}
