use std::fs;
use std::process::{Command, Output};

fn conepda(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conepda")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn two_element_example_writes_three_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("out.dot");
    let o = conepda(&["examples", "figure1", "--dot", dot.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&dot).unwrap();
    assert_eq!(text.matches("digraph").count(), 3);
    assert!(stdout(&o).contains("homomorphism true"));
}

#[test]
fn plane_grid_is_unstable_but_succeeds() {
    let o = conepda(&["cones", "--backend", "rule:z2", "--radius", "8"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("UNSTABLE"), "{out}");
    assert!(out.contains("level  classes"));
}

#[test]
fn comb_automaton_is_built_and_verified() {
    let dir = tempfile::tempdir().unwrap();
    let pda = dir.path().join("comb.pda");
    let o = conepda(&[
        "build-pda", "--backend", "rule:comb", "--radius", "6", "--depth", "3", "--verify", "10", "--out",
        pda.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.starts_with("CERTIFIED"));
    assert!(out.contains("PASS build_pda_from_cones"));
    let p = pda.to_str().unwrap();
    assert_eq!(stdout(&conepda(&["run-pda", "--pda", p, "--word", "b a b^"])).trim(), "accept");
    assert_eq!(stdout(&conepda(&["run-pda", "--pda", p, "--word", "a b a^ b^"])).trim(), "reject");
    let tight = conepda(&["run-pda", "--pda", p, "--word", "b a b^", "--max-steps", "1"]);
    assert_eq!((code(&tight), stdout(&tight).trim().to_string()), (3, "unknown".to_string()));
}

#[test]
fn unstable_synthesis_exits_one() {
    let o = conepda(&["build-pda", "--backend", "rule:z2", "--radius", "4"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("UNSTABLE"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&conepda(&["no-such-command"])), 2);
    assert_eq!(code(&conepda(&["cones", "--radius", "3"])), 2);
    assert_eq!(code(&conepda(&["cones", "--backend", "rule:nope", "--radius", "3"])), 2);
    assert_eq!(code(&conepda(&["verify", "--suite", "nope"])), 2);
    assert_eq!(code(&conepda(&["examples", "nope"])), 2);
}

#[test]
fn memory_cap_exits_three() {
    let o = Command::new(env!("CARGO_BIN_EXE_conepda"))
        .args(["cones", "--backend", "rule:z2", "--radius", "8"])
        .env("CONEPDA_MAX_MEMORY", "50")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
}

#[test]
fn verify_writes_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let o = conepda(&["verify", "--suite", "figure1", "--max-len", "6", "--json", json.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["status"], "pass");
    let reports = v["reports"].as_array().unwrap();
    assert!(!reports.is_empty());
    for r in reports {
        assert_eq!(r["disagree"], 0);
        assert!(r["mode"].is_string());
    }
}

#[test]
fn translate_and_grammar_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let path = |n: &str| dir.path().join(n).to_str().unwrap().to_string();
    let (f, t, g) = (path("f.pda"), path("t.pda"), path("f.cfg"));
    assert_eq!(code(&conepda(&["build-pda", "--backend", "free:a", "--radius", "1", "--out", &f])), 0);
    let o = conepda(&["translate-pda", "--pda", &f, "--alphabet", "c c^", "--map", "c=b a b^", "--out", &t]);
    assert_eq!(code(&o), 0);
    // b a b^ has no power in ⟨a⟩ except the trivial one.
    assert_eq!(stdout(&conepda(&["run-pda", "--pda", &t, "--word", "c c c^ c^"])).trim(), "accept");
    assert_eq!(stdout(&conepda(&["run-pda", "--pda", &t, "--word", "c"])).trim(), "reject");

    assert_eq!(code(&conepda(&["pda-to-cfg", "--pda", &f, "--out", &g])), 0);
    let member = conepda(&["grammar", "member", "--grammar", &g, "--word", "b a b^ a"]);
    assert!(stdout(&member).starts_with("not a member"));
    let member = conepda(&["grammar", "member", "--grammar", &g, "--word", "b a b^ b a^ b^"]);
    assert!(stdout(&member).starts_with("member"));
    let check = conepda(&["grammar", "check-diagonals", "--grammar", &g, "--word", "b a b^ b a^ b^ a", "--backend", "free:a"]);
    assert_eq!(code(&check), 0, "{}", String::from_utf8_lossy(&check.stderr));
}

#[test]
fn dihedral_lift_and_regular_tools() {
    let o = conepda(&["lift-pda", "--example", "dihedral"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("alphabet"));

    assert_eq!(stdout(&conepda(&["regular", "index", "--backend", "cyclic:3"])).trim(), "finite 3");
    assert_eq!(code(&conepda(&["regular", "index", "--backend", "rule:z2", "--cap", "4"])), 3);

    let dir = tempfile::tempdir().unwrap();
    let dfa = dir.path().join("c3.dfa");
    let d = dfa.to_str().unwrap();
    assert_eq!(code(&conepda(&["regular", "build", "--backend", "cyclic:3", "--out", d])), 0);
    let k = conepda(&["regular", "kappa", "--dfa", d, "--backend", "cyclic:3"]);
    assert_eq!(code(&k), 0);
    assert!(stdout(&k).contains("injective true"));
    let dot = conepda(&["export-dot", "--dfa", d]);
    assert!(stdout(&dot).starts_with("digraph"));
}
