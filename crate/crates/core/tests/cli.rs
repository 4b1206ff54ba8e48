use std::path::Path;
use std::process::Command;

use elliptope4::cli::run;
use elliptope4::io::{import_matrix, read_json};
use elliptope4::numkit::{int, ratio};

fn elliptope4(args: &[&str]) -> i32 {
    run(std::iter::once("elliptope4").chain(args.iter().copied()))
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn laurent_and_etf_moments_coincide() {
    let dir = tempfile::tempdir().unwrap();
    let (laurent, frame, etf) = (p(dir.path(), "L.csv"), p(dir.path(), "s5.json"), p(dir.path(), "E.csv"));
    assert_eq!(elliptope4(&["moments", "laurent", "--n", "5", "--d", "4", "-o", &laurent]), 0);
    assert_eq!(elliptope4(&["frame", "simplex", "--n", "5", "-o", &frame]), 0);
    assert_eq!(elliptope4(&["moments", "etf", "--frame", &frame, "-o", &etf]), 0);
    let a = std::fs::read(&laurent).unwrap();
    assert_eq!(a, std::fs::read(&etf).unwrap());

    let y = import_matrix(&laurent).unwrap();
    let y = y.exact().unwrap();
    assert_eq!(y[(0, 6)], int(1)); // (00)(11)
    assert_eq!(y[(1, 2)], ratio(-1, 4)); // (01)(02)
    assert_eq!(y[(1, 13)], ratio(3, 8)); // (01)(23)
    let side = read_json(dir.path().join("L.json")).unwrap();
    assert_eq!(side["indexing"], "pair-major");

    assert_eq!(elliptope4(&["verify", "degree4", &laurent]), 0);
}

#[test]
fn maximal_frame_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let frame = p(dir.path(), "simplex3.json");
    assert_eq!(elliptope4(&["frame", "simplex", "--n", "3", "-o", &frame]), 0);
    assert_eq!(elliptope4(&["check", "membership", "--set", "e4", "--frame", &frame]), 2);
    assert_eq!(elliptope4(&["moments", "etf", "--frame", &frame, "-o", &p(dir.path(), "Y.csv")]), 2);
    assert_eq!(elliptope4(&["check", "membership", "--set", "e2", "--frame", &frame]), 0);
}

#[test]
fn membership_by_gram_file() {
    let dir = tempfile::tempdir().unwrap();
    let gram = p(dir.path(), "x.csv");
    std::fs::write(&gram, "1,-1/4,-1/4,-1/4,-1/4\n-1/4,1,-1/4,-1/4,-1/4\n-1/4,-1/4,1,-1/4,-1/4\n-1/4,-1/4,-1/4,1,-1/4\n-1/4,-1/4,-1/4,-1/4,1\n").unwrap();
    assert_eq!(elliptope4(&["check", "membership", "--set", "cut", "--gram", &gram]), 2);
    assert_eq!(elliptope4(&["check", "membership", "--set", "e4", "--gram", &gram]), 0);
    assert_eq!(elliptope4(&["check", "membership", "--set", "e2", "--gram", &gram]), 0);
}

#[test]
fn witness_commands_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (frame, y, m, m2) =
        (p(dir.path(), "s5.json"), p(dir.path(), "Y.csv"), p(dir.path(), "M.csv"), p(dir.path(), "M2.csv"));
    assert_eq!(elliptope4(&["frame", "simplex", "--n", "5", "-o", &frame]), 0);
    assert_eq!(elliptope4(&["moments", "etf", "--frame", &frame, "-o", &y]), 0);
    assert_eq!(elliptope4(&["witness", "from-moments", &y, "--frame", &frame, "-o", &m]), 0);
    assert_eq!(elliptope4(&["verify", "witness", &m, "--frame", &frame]), 0);
    assert_eq!(elliptope4(&["witness", "etf", "--frame", &frame, "-o", &m2]), 0);
    assert_eq!(elliptope4(&["verify", "witness", &m2, "--r", "4"]), 0);
    // The identity in B(5, 4) is a valid witness but certifies nothing about this frame.
    let ident = p(dir.path(), "I.csv");
    let rows: Vec<String> =
        (0..20).map(|i| (0..20).map(|j| if i == j { "1" } else { "0" }).collect::<Vec<_>>().join(",")).collect();
    std::fs::write(&ident, rows.join("\n")).unwrap();
    assert_eq!(elliptope4(&["verify", "witness", &ident, "--r", "4"]), 0);
    assert_eq!(elliptope4(&["verify", "witness", &ident, "--r", "4", "--frame", &frame]), 2);
}

#[test]
fn invalid_degree4_file_is_a_violation() {
    let dir = tempfile::tempdir().unwrap();
    let y = p(dir.path(), "bad.csv");
    // Y_(11)(11) = 2 breaks the unit diagonal.
    std::fs::write(&y, "1,0,0,1\n0,1,0,0\n0,0,1,0\n1,0,0,2\n").unwrap();
    assert_eq!(elliptope4(&["verify", "degree4", &y]), 2);
}

#[test]
fn frame_etf287_writes_graph() {
    let dir = tempfile::tempdir().unwrap();
    let (frame, graph) = (p(dir.path(), "etf.json"), p(dir.path(), "graph.json"));
    assert_eq!(elliptope4(&["frame", "etf287", "--graph", &graph, "-o", &frame]), 0);
    let f = read_json(&frame).unwrap();
    assert_eq!(f["N"], 28);
    let g = read_json(&graph).unwrap();
    assert_eq!(g["n"], 27);
    assert_eq!(g["edges"].as_array().unwrap().len(), 216);
    assert_eq!(elliptope4(&["moments", "etf", "--frame", &frame, "-o", &p(dir.path(), "Y.csv")]), 2);
}

#[test]
fn cross_section_command_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path(), "cs.csv");
    assert_eq!(elliptope4(&["cross-section", "--n", "5", "--seed", "1", "--angles", "2", "-o", &out]), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("theta,radius_cut,radius_e4,radius_e2"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(elliptope4(&["frame", "simplex"]), 1);
    assert_eq!(elliptope4(&["no-such-command"]), 1);
    assert_eq!(elliptope4(&["moments", "laurent", "--n", "6", "--d", "4"]), 1);
    assert_eq!(elliptope4(&["verify", "degree4", "/nonexistent/Y.csv"]), 1);
    assert_eq!(elliptope4(&["--tol", "abc", "frame", "simplex", "--n", "4"]), 1);
    assert_eq!(elliptope4(&["--help"]), 0);
}

#[test]
fn binary_reports_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let frame = p(dir.path(), "simplex3.json");
    let bin = env!("CARGO_BIN_EXE_elliptope4");
    let ok = Command::new(bin).args(["frame", "simplex", "--n", "3", "-o", &frame]).status().unwrap();
    assert_eq!(ok.code(), Some(0));
    let refused = Command::new(bin).args(["check", "membership", "--set", "e4", "--frame", &frame]).output().unwrap();
    assert_eq!(refused.status.code(), Some(2));
    let printed = Command::new(bin).args(["frame", "simplex", "--n", "3"]).output().unwrap();
    assert_eq!(printed.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&printed.stdout).unwrap();
    assert_eq!(v["N"], 3);
}

#[test]
fn schlafli_verification_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (p(dir.path(), "a.json"), p(dir.path(), "b.json"));
    assert_eq!(elliptope4(&["verify", "schlafli", "-o", &a]), 0);
    assert_eq!(elliptope4(&["verify", "schlafli", "-o", &b]), 0);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let va = read_json(&a).unwrap();
    assert_eq!(va["constant"], "112");
    assert_eq!(va["psd"], true);
    assert_eq!(va["value_at_etf"], "126");
}
