use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_okounkov"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn compute_p2_writes_files_and_matches() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(&["compute", "--case", "p2", "--c", "1", "--max-level", "4", "--out", out]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let poly = std::fs::read_to_string(dir.path().join("p2_c1_M4_complete_polytope.json")).unwrap();
    assert_eq!(poly, "{\"dim\":2,\"vertices\":[[\"0/1\",\"0/1\"],[\"0/1\",\"1/1\"],[\"1/1\",\"0/1\"]]}\n");
    assert!(dir.path().join("p2_c1_M4_powers_semigroup.json").exists());
}

#[test]
fn compute_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = run(&["compute", "--case", "fermat_cubic", "--max-level", "3", "--out", d.path().to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    for name in ["fermat_cubic_c1_M3_complete_semigroup.json", "fermat_cubic_c1_M3_powers_polytope.json"] {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y);
    }
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["compute", "--case", "p2", "--c", "0"]).status.code(), Some(1));
    assert_eq!(run(&["compute", "--case", "p2", "--max-level", "0"]).status.code(), Some(1));
    assert_eq!(run(&["compute", "--case", "nope"]).status.code(), Some(1));
    assert_eq!(run(&["compute"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["certify", "--case", "p2", "--kind", "sideways"]).status.code(), Some(1));
    assert_eq!(run(&["lemma-ec", "--p", "100"]).status.code(), Some(1));
    assert_eq!(run(&["verify-flag", "--case", "/nonexistent/fixture.json"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn certify_reports_both_kinds() {
    let o = run(&["certify", "--case", "fermat_cubic", "--kind", "both", "--max-level", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.matches("CERTIFIED finitely generated (vertex criterion)").count(), 2);
    assert!(text.contains("empirical generation degree k = 1"));
    assert!(text.contains("identical across kinds: yes"));
}

#[test]
fn failing_fixture_is_refused() {
    let f = fixture("quadric_nontangent.json");
    assert_eq!(run(&["verify-flag", "--case", &f]).status.code(), Some(2));
    assert_eq!(run(&["certify", "--case", &f]).status.code(), Some(2));
    assert_eq!(run(&["compute", "--case", &f]).status.code(), Some(2));
    assert_eq!(run(&["verify-flag", "--case", "quadric_nontangent"]).status.code(), Some(2));
}

#[test]
fn passing_fixtures_verify() {
    for f in ["fermat_cubic.json", "quadric_tangent_shifted.json"] {
        let o = run(&["verify-flag", "--case", &fixture(f)]);
        assert_eq!(o.status.code(), Some(0), "{f}: {}", stdout(&o));
    }
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["compute", "--case", &fixture("quadric_tangent_shifted.json"), "--max-level", "2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn verify_flag_shipped_cases() {
    for case in ["p2", "p3", "quadric_surface", "fermat_cubic"] {
        let o = run(&["verify-flag", "--case", case]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("all checks pass"));
    }
}

#[test]
fn export_toric_p2() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["export-toric", "--case", "p2", "--c", "1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let fan = std::fs::read_to_string(dir.path().join("p2_c1_M4_fan.json")).unwrap();
    assert_eq!(fan, "{\"dim\":2,\"rays\":[[-1,-1],[0,1],[1,0]]}\n");
}

#[test]
fn lemma_ec_counts() {
    let o = run(&["lemma-ec", "--p", "101", "--d", "3", "--samples", "200", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("200 classes sampled"));
    assert!(text.contains("Hasse bound holds"));
    assert_eq!(text.lines().filter(|l| l.starts_with('#')).count(), 200);
}

#[test]
fn demo_table() {
    let o = run(&["demo", "--max-level", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().any(|l| l.starts_with("fermat_cubic") && l.contains("(0,0) (0,3) (1,0)")));
}
