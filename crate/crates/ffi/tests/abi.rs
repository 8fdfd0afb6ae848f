use std::ffi::{CStr, CString};
use std::ptr;

use qmed_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(qmed_last_error_message()) }.to_string_lossy().into_owned()
}

fn initial() -> *mut QmedState {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { qmed_state_initial(&mut s) }, QmedStatus::Ok);
    assert!(!s.is_null());
    s
}

#[test]
fn initial_state_round_trips_through_json() {
    let s = initial();
    unsafe {
        let mut n = 0usize;
        assert_eq!(qmed_state_num_qubits(s, &mut n), QmedStatus::Ok);
        assert_eq!(n, 3);

        let mut text = ptr::null_mut();
        assert_eq!(qmed_state_to_json(s, &mut text), QmedStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(qmed_state_from_json(text, &mut back), QmedStatus::Ok);
        qmed_string_free(text);

        let cut = CString::new("A:MB").unwrap();
        let (mut x, mut y) = (0.0, 0.0);
        qmed_negativity(s, cut.as_ptr(), &mut x);
        qmed_negativity(back, cut.as_ptr(), &mut y);
        assert!((x - y).abs() < 1e-12);
        assert!((x - 0.5).abs() < 1e-12);
        qmed_state_free(back);
        qmed_state_free(s);
    }
}

#[test]
fn evolution_localises_entanglement() {
    let s = initial();
    unsafe {
        let mut e = ptr::null_mut();
        assert_eq!(qmed_evolve(s, 1.0, std::f64::consts::PI / 8.0, &mut e), QmedStatus::Ok);
        let cut = CString::new("A:B").unwrap();
        let mut n = 0.0;
        assert_eq!(qmed_negativity(e, cut.as_ptr(), &mut n), QmedStatus::Ok);
        let mut n0 = 1.0;
        qmed_negativity(s, cut.as_ptr(), &mut n0);
        assert!(n0.abs() < 1e-12);

        let mut mi = 0.0;
        let ab_m = CString::new("AB:M").unwrap();
        assert_eq!(qmed_mutual_information(e, ab_m.as_ptr(), &mut mi), QmedStatus::Ok);
        let mut r = QmedReport::default();
        assert_eq!(qmed_measure(e, 0.4, 3, &mut r), QmedStatus::Ok);
        assert_eq!(r.time, 0.4);
        assert!((r.neg_a_b - n).abs() < 1e-12);
        assert!((r.mutual_info_ab_m - mi).abs() < 1e-12);
        assert_eq!(r.ree_converged, 1);

        let m = CString::new("M").unwrap();
        let mut d = 1.0;
        assert_eq!(qmed_discord(s, m.as_ptr(), &mut d), QmedStatus::Ok);
        assert!(d.abs() < 1e-6);
        qmed_state_free(e);
        qmed_state_free(s);
    }
}

#[test]
fn null_pointers_are_reported() {
    unsafe {
        assert_eq!(qmed_state_initial(ptr::null_mut()), QmedStatus::NullPointer);
        assert!(last_error().contains("null"));
        let mut n = 0usize;
        assert_eq!(qmed_state_num_qubits(ptr::null(), &mut n), QmedStatus::NullPointer);
        let s = initial();
        assert_eq!(qmed_negativity(s, ptr::null(), ptr::null_mut()), QmedStatus::NullPointer);
        qmed_state_free(s);
        qmed_state_free(ptr::null_mut());
        qmed_string_free(ptr::null_mut());
    }
}

#[test]
fn bad_input_maps_to_status_codes() {
    let s = initial();
    unsafe {
        let mut out = ptr::null_mut();
        let junk = CString::new("{not json").unwrap();
        assert_eq!(qmed_state_from_json(junk.as_ptr(), &mut out), QmedStatus::ParseError);
        assert!(out.is_null());
        assert!(!last_error().is_empty());

        let cut = CString::new("A:Q").unwrap();
        let mut x = 0.0;
        assert_eq!(qmed_negativity(s, cut.as_ptr(), &mut x), QmedStatus::InvalidArgument);

        let mut e = ptr::null_mut();
        assert_eq!(qmed_evolve(s, -1.0, 1.0, &mut e), QmedStatus::InvalidArgument);
        assert!(e.is_null());
        qmed_state_free(s);
    }
}

#[test]
fn header_declares_the_abi() {
    let header = include_str!("../include/qmed.h");
    for name in [
        "QMED_H",
        "typedef struct QmedState QmedState;",
        "QMED_STATUS_NULL_POINTER = 1",
        "QMED_STATUS_PANIC = 5",
        "qmed_state_initial",
        "qmed_state_from_json",
        "qmed_state_free",
        "qmed_negativity",
        "qmed_mutual_information",
        "qmed_discord",
        "qmed_evolve",
        "qmed_measure",
        "qmed_last_error_message",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}
