use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use dpgrid_ffi::*;

const T5: &str = r#"{"n":5,"O":[1,2,3,4,0],"X":[4,0,1,2,3]}"#;

fn parse(json: &str) -> (DpStatus, *mut DpGrid) {
    let text = CString::new(json).unwrap();
    let mut g = ptr::null_mut();
    let status = unsafe { dp_grid_parse(text.as_ptr(), &mut g) };
    (status, g)
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(dp_last_error()) }.to_str().unwrap().to_string()
}

#[test]
fn parse_query_and_free() {
    let (status, g) = parse(T5);
    assert_eq!(status, DpStatus::DpOk);
    unsafe {
        assert_eq!(dp_grid_n(g), 5);
        let mut s = ptr::null_mut();
        assert_eq!(dp_grid_to_json(g, &mut s), DpStatus::DpOk);
        assert_eq!(CStr::from_ptr(s).to_str().unwrap(), T5);
        dp_string_free(s);
        dp_grid_free(g);
        assert_eq!(dp_grid_n(ptr::null()), 0);
    }
}

#[test]
fn invalid_diagram_sets_status_and_message() {
    let (status, g) = parse(r#"{"n":2,"O":[0,1],"X":[0,1]}"#);
    assert_eq!(status, DpStatus::DpErrInvalidDiagram);
    assert!(g.is_null());
    assert!(last_error().starts_with("InvalidDiagram"));
    let (status, _) = parse("not json");
    assert_eq!(status, DpStatus::DpErrMalformed);
}

#[test]
fn gradings_of_a_state() {
    let (_, g) = parse(r#"{"n":2,"O":[0,1],"X":[1,0]}"#);
    let rows = [0u8, 1];
    let (mut m, mut a) = (99i64, 99i64);
    unsafe {
        assert_eq!(dp_grid_gradings(g, rows.as_ptr(), 2, &mut m, &mut a), DpStatus::DpOk);
        assert_eq!((m, a), (dpgrid::grid::gradings(&dpgrid::GridDiagram::new(vec![0, 1], vec![1, 0]).unwrap(), &dpgrid::GridState::identity(2))));
        let bad = [0u8, 0];
        assert_eq!(dp_grid_gradings(g, bad.as_ptr(), 2, &mut m, &mut a), DpStatus::DpErrInvalidState);
        assert_eq!(dp_grid_gradings(g, rows.as_ptr(), 3, &mut m, &mut a), DpStatus::DpErrInvalidState);
        dp_grid_free(g);
    }
}

#[test]
fn verify_homology_and_stabilize() {
    let (_, g) = parse(T5);
    unsafe {
        let mut passed = -1;
        assert_eq!(dp_verify_d2(g, &mut passed), DpStatus::DpOk);
        assert_eq!(passed, 1);

        let mut s = ptr::null_mut();
        assert_eq!(dp_homology_json(g, 0, ptr::null(), &mut s), DpStatus::DpOk);
        let v: serde_json::Value = serde_json::from_str(CStr::from_ptr(s).to_str().unwrap()).unwrap();
        assert_eq!(v["theory"], "minus");
        dp_string_free(s);

        let w = CString::new("0:3,0:1").unwrap();
        assert_eq!(dp_homology_json(g, 1, w.as_ptr(), &mut s), DpStatus::DpOk);
        dp_string_free(s);
        let w = CString::new("bogus").unwrap();
        assert_eq!(dp_homology_json(g, 1, w.as_ptr(), &mut s), DpStatus::DpErrMalformed);
        assert_eq!(dp_homology_json(g, 7, ptr::null(), &mut s), DpStatus::DpErrMalformed);

        let mut gp = ptr::null_mut();
        assert_eq!(dp_stabilize(g, 0, &mut gp), DpStatus::DpOk);
        assert_eq!(dp_grid_n(gp), 6);
        assert_eq!(dp_stabilize(g, 9, &mut gp), DpStatus::DpErrInvalidColumn);
        dp_grid_free(gp);
        dp_grid_free(g);
    }
}

#[test]
fn null_arguments_are_rejected() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(dp_grid_parse(ptr::null(), &mut g), DpStatus::DpErrNull);
        let mut passed = 0;
        assert_eq!(dp_verify_d2(ptr::null(), &mut passed), DpStatus::DpErrNull);
        dp_grid_free(ptr::null_mut());
        dp_string_free(ptr::null_mut());
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let header = format!("{dir}/include/dpgrid.h");
    let src = "#include \"dpgrid.h\"\nint main(void) { DpGrid *g = 0; return dp_grid_parse(\"{}\", &g) == DP_OK; }\n";
    let tmp = tempfile::tempdir().unwrap();
    let c_file = tmp.path().join("smoke.c");
    std::fs::write(&c_file, src).unwrap();
    assert!(std::path::Path::new(&header).exists());
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(format!("{dir}/include"))
        .arg(&c_file)
        .status()
        .expect("C compiler available");
    assert!(status.success());
}
