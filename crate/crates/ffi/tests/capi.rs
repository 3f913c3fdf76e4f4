use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use watt_hopf_ffi::*;

fn last_error() -> String {
    let p = wh_last_error();
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { wh_string_free(p) };
    s
}

#[test]
fn closed_forms_and_domain_errors() {
    let mut v = 0.0;
    assert_eq!(unsafe { wh_l1_closed(0.5, 1.0, &mut v) }, WhStatus::Ok);
    assert!((v + 0.328_906_639_806_723_5).abs() < 1e-12);
    assert_eq!(unsafe { wh_critical_epsilon(0.5, 1.0, &mut v) }, WhStatus::Ok);
    assert!((v - 0.5f64.sqrt()).abs() < 1e-15);

    assert_eq!(unsafe { wh_l2_closed(1.2, 1.0, &mut v) }, WhStatus::Domain);
    assert!(last_error().contains("beta in (0, 1)"));
    assert_eq!(unsafe { wh_l1_closed(0.5, 1.0, ptr::null_mut()) }, WhStatus::NullPointer);
}

#[test]
fn locate_q_matches_reference() {
    let (mut b, mut a, mut e) = (0.0, 0.0, 0.0);
    assert_eq!(unsafe { wh_locate_q(0.87, 0.85, &mut b, &mut a, &mut e) }, WhStatus::Ok);
    assert!((b - 0.868_280_339_979_712_8).abs() < 1e-12);
    assert!((a - 0.850_500_484_306_850_2).abs() < 1e-12);
    assert!((e - 1.376_241_064_846_599_5).abs() < 1e-12);
}

#[test]
fn certificate_handle_round_trip() {
    let mut cert = ptr::null_mut();
    assert_eq!(unsafe { wh_certificate_new(0.868_280_339_979_712_8, 0.850_500_484_306_850_2, false, &mut cert) }, WhStatus::Ok);
    assert!(!cert.is_null());

    let mut c = [0.0; 4];
    assert_eq!(unsafe { wh_certificate_coefficients(cert, c.as_mut_ptr()) }, WhStatus::Ok);
    assert!(c[0].abs() < 1e-10 && c[1].abs() < 1e-10);
    assert!((c[2] - 0.39050).abs() < 1e-4);

    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(unsafe { wh_certificate_g(cert, 43, &mut re, &mut im) }, WhStatus::Ok);
    assert!((re - 56.23254).abs() < 1e-4 && (im + 2424.27069).abs() < 1e-4);
    assert_eq!(unsafe { wh_certificate_g(cert, 22, &mut re, &mut im) }, WhStatus::InvalidArgument);

    let name = CString::new("h22").unwrap();
    let mut h = [0.0; 6];
    assert_eq!(unsafe { wh_certificate_vector(cert, name.as_ptr(), h.as_mut_ptr(), h.len()) }, WhStatus::Ok);
    assert!((h[0] + 15.72589).abs() < 1e-4 && (h[4] - 10.92671).abs() < 1e-4);
    assert_eq!(unsafe { wh_certificate_vector(cert, name.as_ptr(), h.as_mut_ptr(), 4) }, WhStatus::InvalidArgument);
    let bad = CString::new("h99").unwrap();
    assert_eq!(unsafe { wh_certificate_vector(cert, bad.as_ptr(), h.as_mut_ptr(), 6) }, WhStatus::InvalidArgument);
    assert!(last_error().contains("h99"));

    let mut strict = false;
    assert_eq!(unsafe { wh_certificate_strict(cert, 3, &mut strict) }, WhStatus::Ok);
    assert!(strict);

    unsafe { wh_certificate_free(cert) };
    unsafe { wh_certificate_free(ptr::null_mut()) };
}

#[test]
fn failed_construction_leaves_null_handle() {
    let mut cert = ptr::NonNull::<WhCertificate>::dangling().as_ptr();
    assert_eq!(unsafe { wh_certificate_new(0.5, -1.0, true, &mut cert) }, WhStatus::Domain);
    assert!(cert.is_null());
    let mut c = [0.0; 4];
    assert_eq!(unsafe { wh_certificate_coefficients(ptr::null(), c.as_mut_ptr()) }, WhStatus::NullPointer);
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(wh_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_api_and_parses_as_c() {
    let header = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/watt_hopf.h");
    let text = std::fs::read_to_string(&header).expect("header generated by build.rs");
    for f in ["wh_locate_q", "wh_certificate_new", "wh_certificate_free", "wh_last_error", "WH_STATUS_DOMAIN"] {
        assert!(text.contains(f), "{f} missing from header");
    }
    // Syntax check with the system C compiler when one is installed.
    if let Ok(status) = Command::new("cc").args(["-fsyntax-only", "-std=c99", "-x", "c"]).arg(&header).status() {
        assert!(status.success(), "header does not compile as C99");
    }
}
