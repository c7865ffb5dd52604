use std::ffi::{CStr, CString};
use std::ptr;

use ffjac_ffi::*;

fn genus_two() -> *mut FfjacField {
    // y^2 = x^5 + 1 over F_7
    let coeffs = [-1i64, 0, 0, 0, 0, -1];
    let lens = [6usize, 0];
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { ffjac_field_new(7, coeffs.as_ptr(), lens.as_ptr(), 2, &mut f) }, FfjacStatus::Ok);
    f
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ffjac_last_error()) }.to_str().unwrap().to_string()
}

#[test]
fn field_round_trip() {
    let f = genus_two();
    let mut g = 0;
    unsafe {
        assert_eq!(ffjac_field_genus(f, &mut g), FfjacStatus::Ok);
        assert_eq!(g, 2);
        let mut s = ptr::null_mut();
        assert_eq!(ffjac_field_to_json(f, &mut s), FfjacStatus::Ok);
        let mut f2 = ptr::null_mut();
        assert_eq!(ffjac_field_from_json(s, &mut f2), FfjacStatus::Ok);
        let mut g2 = 0;
        ffjac_field_genus(f2, &mut g2);
        assert_eq!(g2, 2);
        ffjac_string_free(s);
        ffjac_field_free(f2);
        ffjac_field_free(f);
    }
}

#[test]
fn reducible_and_bad_input() {
    // y^2 = x^2 is reducible
    let coeffs = [0i64, 0, -1];
    let lens = [3usize, 0];
    let mut f = ptr::null_mut();
    unsafe {
        assert_eq!(ffjac_field_new(5, coeffs.as_ptr(), lens.as_ptr(), 2, &mut f), FfjacStatus::Reducible);
        assert!(f.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(ffjac_field_new(4, coeffs.as_ptr(), lens.as_ptr(), 2, &mut f), FfjacStatus::InvalidArgument);
        let junk = CString::new("{not json").unwrap();
        assert_eq!(ffjac_field_from_json(junk.as_ptr(), &mut f), FfjacStatus::Json);
        assert_eq!(ffjac_field_from_json(ptr::null(), &mut f), FfjacStatus::NullPointer);
        let g = genus_two();
        assert_eq!(ffjac_jacobian_new(g, 7, true, &mut ptr::null_mut()), FfjacStatus::InvalidArgument);
        ffjac_field_free(g);
    }
}

#[test]
fn class_arithmetic() {
    unsafe {
        let f = genus_two();
        let mut jac = ptr::null_mut();
        assert_eq!(ffjac_jacobian_new(f, FFJAC_STRATEGY_BINARY, true, &mut jac), FfjacStatus::Ok);
        // the context keeps the field alive
        ffjac_field_free(f);
        let (mut a, mut b, mut z) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
        assert_eq!(ffjac_class_random(jac, 1, &mut a), FfjacStatus::Ok);
        assert_eq!(ffjac_class_random(jac, 2, &mut b), FfjacStatus::Ok);
        assert_eq!(ffjac_class_zero(jac, &mut z), FfjacStatus::Ok);

        let (mut ab, mut ba) = (ptr::null_mut(), ptr::null_mut());
        ffjac_class_add(jac, a, b, &mut ab);
        ffjac_class_add(jac, b, a, &mut ba);
        let mut eq = false;
        ffjac_class_equal(ab, ba, &mut eq);
        assert!(eq);

        let mut na = ptr::null_mut();
        ffjac_class_neg(jac, a, &mut na);
        let mut s = ptr::null_mut();
        ffjac_class_add(jac, a, na, &mut s);
        let mut zero = false;
        ffjac_class_is_zero(s, &mut zero);
        assert!(zero);
        ffjac_class_equal(s, z, &mut eq);
        assert!(eq);

        let mut m = ptr::null_mut();
        ffjac_class_scalar_mul(jac, -1, a, &mut m);
        ffjac_class_equal(m, na, &mut eq);
        assert!(eq);

        let mut r = 99;
        ffjac_class_r(a, &mut r);
        assert!(r <= 2);

        let mut js = ptr::null_mut();
        assert_eq!(ffjac_class_to_json(jac, ab, &mut js), FfjacStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(ffjac_class_from_json(jac, js, &mut back), FfjacStatus::Ok);
        ffjac_class_equal(back, ab, &mut eq);
        assert!(eq);
        ffjac_string_free(js);

        for c in [a, b, z, ab, ba, na, s, m, back] {
            ffjac_class_free(c);
        }
        ffjac_jacobian_free(jac);
    }
}

#[test]
fn reduce_and_mismatch() {
    unsafe {
        let f = genus_two();
        let mut jac = ptr::null_mut();
        ffjac_jacobian_new(f, FFJAC_STRATEGY_LINEAR, false, &mut jac);
        let zero_div = CString::new("[]").unwrap();
        let mut c = ptr::null_mut();
        assert_eq!(ffjac_class_reduce(jac, zero_div.as_ptr(), &mut c), FfjacStatus::Ok, "{}", last_error());
        let mut r = 9;
        ffjac_class_r(c, &mut r);
        assert_eq!(r, 0);

        // y^2 + y = x^3 over F_2
        let coeffs = [0i64, 0, 0, -1, 1];
        let lens = [4usize, 1];
        let mut f2 = ptr::null_mut();
        ffjac_field_new(2, coeffs.as_ptr(), lens.as_ptr(), 2, &mut f2);
        let mut jac2 = ptr::null_mut();
        ffjac_jacobian_new(f2, FFJAC_STRATEGY_LINEAR, true, &mut jac2);
        let mut other = ptr::null_mut();
        ffjac_class_random(jac2, 3, &mut other);
        let mut out = ptr::null_mut();
        assert_eq!(ffjac_class_add(jac, c, other, &mut out), FfjacStatus::FieldMismatch);
        assert!(out.is_null());

        ffjac_class_free(c);
        ffjac_class_free(other);
        ffjac_jacobian_free(jac);
        ffjac_jacobian_free(jac2);
        ffjac_field_free(f);
        ffjac_field_free(f2);
    }
}

#[test]
fn null_handles() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(ffjac_class_add(ptr::null_mut(), ptr::null(), ptr::null(), &mut out), FfjacStatus::NullPointer);
        ffjac_class_free(ptr::null_mut());
        ffjac_jacobian_free(ptr::null_mut());
        ffjac_field_free(ptr::null_mut());
        ffjac_string_free(ptr::null_mut());
    }
}
