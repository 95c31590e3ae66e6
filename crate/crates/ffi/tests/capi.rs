use std::ffi::{CStr, CString};
use std::ptr;

use ckac_ffi::*;

fn cs(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn parse(text: &str) -> *mut CkacExpr {
    let mut e = ptr::null_mut();
    let status = unsafe { ckac_expr_parse(cs(text).as_ptr(), ptr::null(), &mut e) };
    assert_eq!(status, CkacStatus::Ok);
    e
}

fn last_error() -> String {
    let p = ckac_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn parse_print_free() {
    let e = parse("a.(b+c)");
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ckac_expr_to_string(e, &mut s) }, CkacStatus::Ok);
    assert_eq!(unsafe { CStr::from_ptr(s) }.to_str().unwrap(), "a.(b+c)");
    unsafe {
        ckac_string_free(s);
        ckac_expr_free(e);
    }
}

#[test]
fn syntax_errors_are_reported() {
    let mut e = ptr::null_mut();
    let status = unsafe { ckac_expr_parse(cs("a.(b").as_ptr(), ptr::null(), &mut e) };
    assert_eq!(status, CkacStatus::Syntax);
    assert!(e.is_null());
    assert!(last_error().contains("syntax"));
}

#[test]
fn null_arguments_are_rejected() {
    let mut e = ptr::null_mut();
    assert_eq!(
        unsafe { ckac_expr_parse(ptr::null(), ptr::null(), &mut e) },
        CkacStatus::NullArgument
    );
    let x = parse("a");
    assert_eq!(
        unsafe { ckac_lang_equiv(x, ptr::null(), 3, ptr::null_mut()) },
        CkacStatus::NullArgument
    );
    unsafe { ckac_expr_free(x) };
    unsafe { ckac_expr_free(ptr::null_mut()) };
}

#[test]
fn language_and_step_equivalence_differ() {
    let x = parse("a.(b+c)");
    let y = parse("a.b+a.c");
    let (mut lang, mut step) = (false, true);
    unsafe {
        assert_eq!(ckac_lang_equiv(x, y, 4, &mut lang), CkacStatus::Ok);
        assert_eq!(ckac_step_bisimilar(x, y, 10_000, &mut step), CkacStatus::Ok);
        ckac_expr_free(x);
        ckac_expr_free(y);
    }
    assert!(lang);
    assert!(!step);
}

#[test]
fn closure_and_cap() {
    let x = parse("a.c||b");
    let mut c = ptr::null_mut();
    let mut eq = false;
    let sample = parse("a.b.c");
    let joined = parse("a.b.c+a.c||b");
    unsafe {
        assert_eq!(ckac_closure(x, &mut c), CkacStatus::Ok);
        // the closure contains the interleaving a.b.c
        let mut s = ptr::null_mut();
        ckac_expr_to_string(c, &mut s);
        let text = CStr::from_ptr(s).to_str().unwrap().to_owned();
        ckac_string_free(s);
        let closed = parse(&text);
        let mut with_sample = ptr::null_mut();
        assert_eq!(
            ckac_expr_parse(
                cs(&format!("({text})+a.b.c")).as_ptr(),
                ptr::null(),
                &mut with_sample
            ),
            CkacStatus::Ok
        );
        assert_eq!(
            ckac_lang_equiv(closed, with_sample, 3, &mut eq),
            CkacStatus::Ok
        );
        assert!(eq);
        let mut bis = false;
        assert_eq!(
            ckac_step_bisimilar(x, joined, 1, &mut bis),
            CkacStatus::CapExceeded
        );
        for h in [x, c, sample, joined, closed, with_sample] {
            ckac_expr_free(h);
        }
    }
}

const FORK: &str = r#"{"states":["q0","q1","q2","q3"],"finals":["q3"],
  "delta":[{"from":"q1","label":"a","to":"q3"},{"from":"q2","label":"b","to":"q3"}],
  "gamma":[{"from":"q0","fork":["q1","q2"],"to":"q3"}]}"#;

#[test]
fn automaton_acceptance() {
    let mut a = ptr::null_mut();
    unsafe {
        assert_eq!(
            ckac_automaton_from_json(cs(FORK).as_ptr(), ptr::null(), &mut a),
            CkacStatus::Ok
        );
        let par =
            cs(r#"{"nodes":[{"id":0,"label":"a"},{"id":1,"label":"b"}],"eedges":[],"cedges":[]}"#);
        let seq = cs(
            r#"{"nodes":[{"id":0,"label":"a"},{"id":1,"label":"b"}],"eedges":[[0,1]],"cedges":[]}"#,
        );
        let mut yes = false;
        assert_eq!(
            ckac_automaton_accepts(a, cs("q0").as_ptr(), par.as_ptr(), &mut yes),
            CkacStatus::Ok
        );
        assert!(yes);
        assert_eq!(
            ckac_automaton_accepts(a, cs("q0").as_ptr(), seq.as_ptr(), &mut yes),
            CkacStatus::Ok
        );
        assert!(!yes);
        assert_eq!(
            ckac_automaton_accepts(a, cs("nope").as_ptr(), par.as_ptr(), &mut yes),
            CkacStatus::InvalidInput
        );
        assert!(last_error().contains("nope"));
        ckac_automaton_free(a);
    }
}

#[test]
fn partial_comm_table() {
    let mut e = ptr::null_mut();
    let table = cs("a b s\n");
    unsafe {
        assert_eq!(
            ckac_expr_parse(cs("rho(a,b)").as_ptr(), table.as_ptr(), &mut e),
            CkacStatus::Ok
        );
        ckac_expr_free(e);
        assert_eq!(
            ckac_expr_parse(cs("rho(a,c)").as_ptr(), table.as_ptr(), &mut e),
            CkacStatus::Syntax
        );
    }
}

#[test]
fn header_is_valid_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/ckac.h");
    assert!(std::path::Path::new(header).exists());
    let Ok(status) = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-x", "c", header])
        .status()
    else {
        eprintln!("no C compiler available, skipping syntax check");
        return;
    };
    assert!(status.success());
}
