use std::ffi::{CStr, CString, c_char};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use h3cycles_ffi::*;

fn take_string(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { h3_string_free(s) };
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(h3_last_error_message()) }.to_str().unwrap().to_owned()
}

#[test]
fn complete_graph_round_trip() {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { h3_graph_complete(5, &mut g) }, H3Status::Ok);
    let (mut n, mut m) = (0, 0);
    assert_eq!(unsafe { h3_graph_size(g, &mut n, &mut m) }, H3Status::Ok);
    assert_eq!((n, m), (5, 10));
    let mut cod = 0;
    assert_eq!(unsafe { h3_graph_min_codegree(g, &mut cod) }, H3Status::Ok);
    assert_eq!(cod, 3);
    let mut div = false;
    assert_eq!(unsafe { h3_check_divisibility(g, H3Divisibility::Cycle, 5, &mut div) }, H3Status::Ok);
    assert!(div);
    assert_eq!(unsafe { h3_check_divisibility(g, H3Divisibility::Cycle, 4, &mut div) }, H3Status::Ok);
    assert!(!div);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { h3_exact_decompose(g, 5, 1_000_000, &mut json) }, H3Status::Ok);
    let report: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
    assert_eq!(report["status"], "Complete");
    assert_eq!(report["cycles"].as_array().unwrap().len(), 2);
    unsafe { h3_graph_free(g) };
}

#[test]
fn triples_and_infeasible_status() {
    let c8: Vec<usize> = (0..8usize)
        .flat_map(|i| {
            let mut t = [i, (i + 1) % 8, (i + 2) % 8];
            t.sort();
            t
        })
        .collect();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { h3_graph_from_triples(8, c8.as_ptr(), 8, &mut g) }, H3Status::Ok);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { h3_exact_decompose(g, 4, 1_000_000, &mut json) }, H3Status::Infeasible);
    assert!(take_string(json).contains("Infeasible"));
    unsafe { h3_graph_free(g) };
}

#[test]
fn bad_input_sets_message() {
    let mut g = ptr::null_mut();
    let text = CString::new("3graph 3 1\n0 1 5\n").unwrap();
    assert_eq!(unsafe { h3_graph_parse(text.as_ptr(), &mut g) }, H3Status::Parse);
    assert!(g.is_null());
    assert!(last_error().contains("out of range"));
    let bad = [0usize, 0, 1];
    assert_eq!(unsafe { h3_graph_from_triples(3, bad.as_ptr(), 1, &mut g) }, H3Status::InvalidArgument);
    assert_eq!(unsafe { h3_graph_complete(4, ptr::null_mut()) }, H3Status::NullPointer);
    unsafe { h3_graph_free(ptr::null_mut()) };
    unsafe { h3_string_free(ptr::null_mut()) };
}

#[test]
fn euler_tour_through_the_interface() {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { h3_graph_complete(7, &mut g) }, H3Status::Ok);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { h3_euler_tour(g, 9, 1, &mut json) }, H3Status::Ok);
    let tour: Vec<usize> = serde_json::from_str(&take_string(json)).unwrap();
    assert_eq!(tour.len(), 35);
    let mut pack = ptr::null_mut();
    assert_eq!(unsafe { h3_greedy_pack(g, 7, 1, &mut pack) }, H3Status::Ok);
    assert!(take_string(pack).contains("\"ell\":7"));
    unsafe { h3_graph_free(g) };

    let mut k6 = ptr::null_mut();
    assert_eq!(unsafe { h3_graph_complete(6, &mut k6) }, H3Status::Ok);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { h3_euler_tour(k6, 9, 1, &mut json) }, H3Status::Infeasible);
    assert!(json.is_null());
    unsafe { h3_graph_free(k6) };
}

#[test]
fn version_is_crate_version() {
    let v = unsafe { CStr::from_ptr(h3_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

/// Compiles a C program against the generated header and the static library.
#[test]
fn c_program_links_and_runs() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap().to_path_buf();
    let lib = profile_dir.join("libh3cycles_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no static library at {} or no C compiler", lib.display());
        return;
    }
    let out = std::env::temp_dir().join(format!("h3_smoke_{}", std::process::id()));
    let status = Command::new("cc")
        .arg(crate_dir.join("tests/smoke.c"))
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let run = Command::new(&out).output().unwrap();
    let _ = std::fs::remove_file(&out);
    assert!(run.status.success(), "smoke program exited with {:?}", run.status.code());
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
}
