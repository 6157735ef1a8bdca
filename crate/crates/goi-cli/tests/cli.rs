use std::path::PathBuf;
use std::process::{Command, Output};

fn goi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_goi")).args(args).output().expect("binary runs")
}

fn proof(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "goi", "tests", "proofs", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn check_accepts_an_axiom() {
    let o = goi(&["check", &proof("axiom.gl")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "ok: ⊢ X0(0)^⊥, X0(1);\n");
}

#[test]
fn verify_rejects_contraction_of_a_non_behavior() {
    let o = goi(&["verify", &proof("ctr_on_nonbehavior.gl")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("rule \"ctr (B Behavior)\""));
}

#[test]
fn prop_trefoil_reports_exact_cases() {
    let o = goi(&["prop", "trefoil", "--iters", "1000", "--seed", "42"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1000/1000 exact"), "{}", stdout(&o));
}

#[test]
fn outputs_are_deterministic() {
    for args in [vec!["prop", "promotion", "--iters", "5", "--seed", "3"], vec!["verify", &proof("contraction.gl")]] {
        let a = goi(&args);
        let b = goi(&args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn interpret_exec_and_export_round_trip() {
    let dir = std::env::temp_dir().join(format!("goi-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.json");
    let o = goi(&["interpret", &proof("axiom.gl"), "-o", a.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&a).unwrap()).unwrap();
    assert_eq!(v["wager"], "0/1");
    let o = goi(&["exec", a.to_str().unwrap(), a.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = goi(&["export", a.to_str().unwrap(), "--format", "dot"]);
    assert!(stdout(&o).starts_with("digraph"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(goi(&["prop", "bogus"]).status.code(), Some(2));
    assert_eq!(goi(&["check", "/nonexistent.gl"]).status.code(), Some(2));
    assert_eq!(goi(&["check", &proof("missing.gl")]).status.code(), Some(2));
}
