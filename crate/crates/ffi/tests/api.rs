use std::ffi::{CStr, CString};
use std::ptr;

use formring_ffi::*;

fn cs(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(fr_last_error()).to_string_lossy().into_owned() }
}

fn group(spec: &str) -> *mut FrGroup {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { fr_group_parse(cs(spec).as_ptr(), &mut g) }, FrStatus::Ok, "{}", last_error());
    g
}

#[test]
fn parse_errors_carry_codes_and_messages() {
    let mut g = ptr::null_mut();
    let st = unsafe { fr_group_parse(cs("zmod:4:lambda=2/quad:3").as_ptr(), &mut g) };
    assert_eq!(st, FrStatus::MultiplierInvalid);
    assert!(g.is_null());
    assert!(!last_error().is_empty());
    let st = unsafe { fr_group_parse(cs("nonsense").as_ptr(), &mut g) };
    assert_eq!(st, FrStatus::Parse);
    assert_eq!(unsafe { fr_group_parse(ptr::null(), &mut g) }, FrStatus::NullPointer);
    let ok = group("zmod:5:lambda=4/quad:3");
    assert!(last_error().is_empty());
    unsafe { fr_group_free(ok) };
}

#[test]
fn word_round_trip_and_membership() {
    let g = group("zmod:5:lambda=4/quad:3");
    unsafe {
        assert_eq!(fr_group_dim(g), 6);
        assert_eq!(fr_group_ring_size(g), 5);
        let json = cs(r#"[{"family":"qe","i":1,"j":2,"payload":3},{"family":"qr","i":1,"j":3,"payload":2}]"#);
        let mut w = ptr::null_mut();
        assert_eq!(fr_word_from_json(g, json.as_ptr(), &mut w), FrStatus::Ok, "{}", last_error());
        assert_eq!(fr_word_len(w), 2);

        let mut s = ptr::null_mut();
        assert_eq!(fr_word_to_json(g, w, &mut s), FrStatus::Ok);
        let back = CStr::from_ptr(s).to_str().unwrap().to_owned();
        fr_string_free(s);
        let mut w2 = ptr::null_mut();
        assert_eq!(fr_word_from_json(g, cs(&back).as_ptr(), &mut w2), FrStatus::Ok);

        let (mut m, mut m2) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(fr_word_eval(g, w, &mut m), FrStatus::Ok);
        assert_eq!(fr_word_eval(g, w2, &mut m2), FrStatus::Ok);
        let (mut a, mut b) = ([0u32; 36], [0u32; 36]);
        assert_eq!(fr_matrix_data(m, a.as_mut_ptr(), 36), 36);
        assert_eq!(fr_matrix_data(m2, b.as_mut_ptr(), 36), 36);
        assert_eq!(a, b);
        assert_eq!(fr_matrix_data(m, a.as_mut_ptr(), 10), 0);

        let mut member = false;
        assert_eq!(fr_group_is_member(g, m, &mut member), FrStatus::Ok);
        assert!(member);

        let mut bad = a;
        bad[0] = (bad[0] + 1) % 5;
        let mut mb = ptr::null_mut();
        assert_eq!(fr_matrix_new(g, bad.as_ptr(), 36, &mut mb), FrStatus::Ok);
        assert_eq!(fr_group_is_member(g, mb, &mut member), FrStatus::Ok);
        assert!(!member);
        bad[3] = 9;
        let mut mc = ptr::null_mut();
        assert_eq!(fr_matrix_new(g, bad.as_ptr(), 36, &mut mc), FrStatus::OutOfRange);
        assert_eq!(fr_matrix_new(g, bad.as_ptr(), 35, &mut mc), FrStatus::Dimension);

        for p in [m, m2, mb] {
            fr_matrix_free(p);
        }
        fr_word_free(w);
        fr_word_free(w2);
        fr_group_free(g);
    }
}

#[test]
fn reduce_vector_gives_verified_word() {
    let g = group("zmod:5:lambda=4/quad:3");
    unsafe {
        // e_1 is isotropic and unimodular
        let v = [1u32, 0, 0, 0, 0, 0];
        let mut w = ptr::null_mut();
        assert_eq!(fr_reduce_vector(g, v.as_ptr(), 6, &mut w), FrStatus::Ok, "{}", last_error());
        fr_word_free(w);
        let zero = [0u32; 6];
        assert_ne!(fr_reduce_vector(g, zero.as_ptr(), 6, &mut w), FrStatus::Ok);
        fr_group_free(g);
    }
}

#[test]
fn bfs_oracle_answers_with_witness() {
    let g = group("zmod:2;gens=0,1/quad:3");
    unsafe {
        let mut o = ptr::null_mut();
        assert_eq!(fr_oracle_bfs(g, 5000, &mut o), FrStatus::Ok);
        assert!(!fr_oracle_complete(o));
        assert!(fr_oracle_size(o) > 1 && fr_oracle_size(o) <= 5000);

        let mut w = ptr::null_mut();
        let json = cs(r#"[{"family":"qe","i":1,"j":2,"payload":1}]"#);
        assert_eq!(fr_word_from_json(g, json.as_ptr(), &mut w), FrStatus::Ok, "{}", last_error());
        let mut m = ptr::null_mut();
        assert_eq!(fr_word_eval(g, w, &mut m), FrStatus::Ok);
        let mut ans = FrAnswer::Unknown;
        let mut wit = ptr::null_mut();
        assert_eq!(fr_oracle_contains(o, m, &mut ans, &mut wit), FrStatus::Ok);
        assert_eq!(ans, FrAnswer::Yes);
        assert!(!wit.is_null());
        let mut m2 = ptr::null_mut();
        assert_eq!(fr_word_eval(g, wit, &mut m2), FrStatus::Ok);
        let (mut a, mut b) = ([0u32; 36], [0u32; 36]);
        fr_matrix_data(m, a.as_mut_ptr(), 36);
        fr_matrix_data(m2, b.as_mut_ptr(), 36);
        assert_eq!(a, b);

        fr_word_free(wit);
        fr_word_free(w);
        fr_matrix_free(m);
        fr_matrix_free(m2);
        fr_oracle_free(o);
        fr_group_free(g);
    }
}

#[test]
fn suite_report_is_json() {
    let mut verdict = -1;
    let mut rep = ptr::null_mut();
    let st = unsafe {
        fr_run_suite(cs("split").as_ptr(), cs("zmod:5:lambda=4/quad:3").as_ptr(), 7, 5, &mut verdict, &mut rep)
    };
    assert_eq!(st, FrStatus::Ok, "{}", last_error());
    assert_eq!(verdict, 0);
    let text = unsafe { CStr::from_ptr(rep).to_str().unwrap().to_owned() };
    unsafe { fr_string_free(rep) };
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["pass"], 5);
    let st = unsafe {
        fr_run_suite(cs("nope").as_ptr(), cs("zmod:5:lambda=4/quad:3").as_ptr(), 7, 5, &mut verdict, &mut rep)
    };
    assert_ne!(st, FrStatus::Ok);
}

#[test]
fn null_handles_are_harmless() {
    unsafe {
        fr_group_free(ptr::null_mut());
        fr_word_free(ptr::null_mut());
        fr_matrix_free(ptr::null_mut());
        fr_oracle_free(ptr::null_mut());
        fr_string_free(ptr::null_mut());
        assert_eq!(fr_group_dim(ptr::null()), 0);
        let mut ans = FrAnswer::No;
        assert_eq!(fr_oracle_contains(ptr::null(), ptr::null(), &mut ans, ptr::null_mut()), FrStatus::NullPointer);
        assert!(!CStr::from_ptr(fr_version()).to_bytes().is_empty());
    }
}
