use std::path::Path;

use h3cycles::cli::{self, EXIT_INFEASIBLE, EXIT_OK, EXIT_USAGE};
use h3cycles::{ThreeGraph, io};

fn run(args: &[&str]) -> i32 {
    cli::run(std::iter::once("h3").chain(args.iter().copied()))
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn tight_cycle(len: usize) -> ThreeGraph {
    ThreeGraph::build(len, (0..len).map(|i| [i, (i + 1) % len, (i + 2) % len])).unwrap()
}

fn read_json(p: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn counterexample_with_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.3g");
    let report = dir.path().join("report.json");
    assert_eq!(
        run(&["gen-counterexample", "--n", "36", "--ell", "4", "--out", path_str(&out), "--json", path_str(&report)]),
        EXIT_OK
    );
    let g = io::read_3g_file(&out).unwrap();
    assert_eq!(g.n(), 36);
    let cert = read_json(&dir.path().join("x.3g.cert.json"));
    assert_eq!(cert["h112_mod3"], 0);
    assert_eq!(cert["h122_mod3"], 1);

    let part = dir.path().join("part.json");
    std::fs::write(&part, cert["partition"].to_string()).unwrap();
    let verdict = dir.path().join("verdict.json");
    let code = run(&[
        "certify-no-tour",
        "--in",
        path_str(&out),
        "--partition",
        path_str(&part),
        "--json",
        path_str(&verdict),
    ]);
    assert_eq!(code, EXIT_INFEASIBLE);
    assert_eq!(read_json(&verdict)["certified"], true);
}

#[test]
fn exact_solver_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let c8 = dir.path().join("c8.3g");
    io::write_3g_file(&c8, &tight_cycle(8)).unwrap();
    let json = dir.path().join("c8.json");
    assert_eq!(run(&["solve-exact", "--in", path_str(&c8), "--ell", "4", "--json", path_str(&json)]), EXIT_INFEASIBLE);
    assert_eq!(read_json(&json)["status"], "Infeasible");

    let k4 = dir.path().join("k4.3g");
    io::write_3g_file(&k4, &ThreeGraph::complete(4)).unwrap();
    assert_eq!(run(&["solve-exact", "--in", path_str(&k4), "--ell", "4", "--json", path_str(&json)]), EXIT_OK);
    assert_eq!(read_json(&json)["cycles"].as_array().unwrap().len(), 1);
}

#[test]
fn divisibility_check() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("check.json");
    let c7 = dir.path().join("c7.3g");
    io::write_3g_file(&c7, &tight_cycle(7)).unwrap();
    assert_eq!(run(&["check", "--in", path_str(&c7), "--divisibility", "cycle:7", "--json", path_str(&json)]), EXIT_OK);
    let c8 = dir.path().join("c8.3g");
    io::write_3g_file(&c8, &tight_cycle(8)).unwrap();
    assert_eq!(
        run(&["check", "--in", path_str(&c8), "--divisibility", "cycle:7", "--json", path_str(&json)]),
        EXIT_INFEASIBLE
    );
    assert!(!read_json(&json)["check"]["violation"].is_null());
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let host = dir.path().join("host.3g");
    io::write_3g_file(&host, &h3cycles::generate::random_host(16, 0.8, 3)).unwrap();
    let outputs: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let json = dir.path().join(format!("greedy{i}.json"));
            let code = run(&["pack-greedy", "--in", path_str(&host), "--ell", "6", "--seed", "11", "--json", path_str(&json)]);
            assert_eq!(code, EXIT_OK);
            std::fs::read(&json).unwrap()
        })
        .collect();
    assert_eq!(outputs[0], outputs[1]);

    let graphs: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let out = dir.path().join(format!("hn{i}.3g"));
            let json = dir.path().join("hn.json");
            assert_eq!(run(&["gen-hn", "--k", "2", "--regular", "--seed", "4", "--out", path_str(&out), "--json", path_str(&json)]), EXIT_OK);
            std::fs::read(&out).unwrap()
        })
        .collect();
    assert_eq!(graphs[0], graphs[1]);
}

#[test]
fn euler_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let k7 = dir.path().join("k7.3g");
    io::write_3g_file(&k7, &ThreeGraph::complete(7)).unwrap();
    let json = dir.path().join("tour.json");
    assert_eq!(run(&["euler", "--in", path_str(&k7), "--json", path_str(&json)]), EXIT_OK);
    let tour: Vec<usize> = serde_json::from_value(read_json(&json)).unwrap();
    assert_eq!(tour.len(), 35);

    let k6 = dir.path().join("k6.3g");
    io::write_3g_file(&k6, &ThreeGraph::complete(6)).unwrap();
    assert_eq!(run(&["euler", "--in", path_str(&k6), "--json", path_str(&json)]), EXIT_INFEASIBLE);
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["solve-exact", "--ell", "4"]), EXIT_USAGE);
    assert_eq!(run(&["no-such-command"]), EXIT_USAGE);
    assert_eq!(run(&["solve-exact", "--in", "/nonexistent/g.3g", "--ell", "4"]), EXIT_USAGE);
}
