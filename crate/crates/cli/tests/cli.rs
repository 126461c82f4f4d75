use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use essentri_core::format::parse_triangulation;
use essentri_core::skeleton::{build_skeleton, SkeletonSummary};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn essentri(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_essentri")).args(args).env_remove("ESSENTRI_BUDGET").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_and_info_report_the_edge_table() {
    let m136 = fixture("m136.tri");
    assert_eq!(essentri(&["validate", path(&m136)]).status.code(), Some(0));
    let out = essentri(&["info", path(&m136)]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let degrees: Vec<&str> = text
        .lines()
        .skip_while(|l| !l.starts_with("edge"))
        .skip(1)
        .take_while(|l| !l.trim().is_empty())
        .map(|l| l.split_whitespace().nth(1).unwrap())
        .collect();
    assert_eq!(degrees, ["4", "4", "10", "10", "6", "4", "4"]);
}

#[test]
fn info_json_round_trips() {
    let m136 = fixture("m136.tri");
    let out = essentri(&["info", "--json", path(&m136)]);
    let parsed: SkeletonSummary = serde_json::from_slice(&out.stdout).unwrap();
    let tri = parse_triangulation(&std::fs::read_to_string(&m136).unwrap()).unwrap();
    assert_eq!(parsed, build_skeleton(&tri).unwrap());
}

#[test]
fn invalid_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.tri");
    std::fs::write(&bad, "tets: 1\n0: - | - | - | -\n").unwrap();
    let out = essentri(&["validate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("unglued"));
}

#[test]
fn strict_angles_on_m136() {
    let out = essentri(&["angles", "--strict", path(&fixture("m136.tri"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("strict: infeasible (t* = 0)"));
    let out = essentri(&["angles", "--taut", "--limit", "2", path(&fixture("m136.tri"))]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn certify_exit_codes() {
    let out = essentri(&["certify", "--strong", path(&fixture("fig8.tri"))]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("yes (certificate: strict_angle)"));
    let out = essentri(&["certify", "--essential", path(&fixture("quaternionic.tri"))]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("group(word)"));
    // With only the homology tier the closed case cannot be decided.
    let out = essentri(&["certify", "--essential", "--methods", "homology", path(&fixture("quaternionic.tri"))]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pillow_written_by_move_is_not_strongly_essential() {
    let dir = tempfile::tempdir().unwrap();
    let out_file = dir.path().join("pillow.tri");
    let m136 = fixture("m136.tri");
    let mut made = false;
    'search: for e in 0..7 {
        for i in 0..10 {
            for j in i + 1..10 {
                let spec = format!("{e},{i},{j}");
                let o = essentri(&["move", path(&m136), "--zero-two", &spec, "-o", out_file.to_str().unwrap()]);
                if o.status.code() == Some(0) {
                    made = true;
                    break 'search;
                }
            }
        }
    }
    assert!(made);
    let out = essentri(&["certify", "--strong", out_file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    assert!(stdout(&out).contains("pillow"));
}

#[test]
fn json_certify_and_budget_errors() {
    let out = essentri(&["certify", "--essential", "--json", "--seed", "7", path(&fixture("m136.tri"))]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["essential"], "yes");
    assert_eq!(v["edges"][0]["certificate"]["kind"], "semi_angle");
    let out = essentri(&["certify", "--strong", "--budget", "nonsense=1", path(&fixture("fig8.tri"))]);
    assert!(out.status.code().unwrap() > 2);
    let out = Command::new(env!("CARGO_BIN_EXE_essentri"))
        .args(["certify", "--strong", path(&fixture("fig8.tri"))])
        .env("ESSENTRI_BUDGET", "coset_nodes=x")
        .output()
        .unwrap();
    assert!(out.status.code().unwrap() > 2);
}

#[test]
fn shapes_verify_and_solve() {
    let out = essentri(&["shapes", "--verify", path(&fixture("m136.tri"))]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("flat: [3, 5]"));
    let out = essentri(&["shapes", "--solve", path(&fixture("fig8.tri"))]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("0.5000000000"));
    assert!(essentri(&["shapes", "--verify", path(&fixture("fig8.tri"))]).status.code().unwrap() > 2);
}

#[test]
fn usage_errors_and_missing_files() {
    assert!(essentri(&["certify", path(&fixture("fig8.tri"))]).status.code().unwrap() > 2);
    assert!(essentri(&["info", "/nonexistent/file.tri"]).status.code().unwrap() > 2);
    assert!(essentri(&["info", "--bogus", path(&fixture("fig8.tri"))]).status.code().unwrap() > 2);
}

#[test]
fn two_three_then_three_two_restores_size() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.tri");
    let o = essentri(&["move", path(&fixture("fig8.tri")), "--two-three", "0", "-o", a.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let rec: serde_json::Value =
        serde_json::from_slice(&essentri(&["--json", "move", path(&fixture("fig8.tri")), "--two-three", "0", "-o", a.to_str().unwrap()]).stdout)
            .unwrap();
    let edge = rec["created_edges"][0].as_u64().unwrap().to_string();
    let o = essentri(&["move", a.to_str().unwrap(), "--three-two", &edge, "-o", b.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let tri = parse_triangulation(&std::fs::read_to_string(&b).unwrap()).unwrap();
    assert_eq!(tri.tet_count(), 2);
}
