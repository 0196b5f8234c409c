use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_eqsheaf"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("eqsheaf-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn reports(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn subgroup_space_writes_json_and_dot() {
    let dir = scratch("space");
    let out = dir.join("t");
    let o = run(&["subgroup-space", "cyclic:8", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("sizes 1,2,3,4"));
    let doc: Value = serde_json::from_str(&fs::read_to_string(out.join("tower.json")).unwrap()).unwrap();
    assert_eq!(doc["type"], "tower");
    assert_eq!(doc["depth"], 3);
    assert!(fs::read_to_string(out.join("tower.dot")).unwrap().starts_with("digraph"));

    let o = run(&["subgroup-space", "sym:3", "--format", "dot"]);
    assert!(stdout(&o).starts_with("digraph"));
}

#[test]
fn counit_passes_on_the_sheafified_group_ring() {
    let dir = scratch("counit");
    let f = dir.join("gr.json");
    let o = run(&["example", "group-ring", "--tower", "cyclic:8", "--sheafify", "--out", f.to_str().unwrap()]);
    assert!(o.status.success());
    let o = run(&["check", "counit", "--input", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let r = reports(&o);
    assert!(!r.is_empty());
    assert!(r.iter().all(|r| r["pass"] == true));
}

#[test]
fn weyl_suite_passes_on_a_constant_sheaf() {
    let dir = scratch("weyl");
    let f = dir.join("c.json");
    run(&["example", "constant", "--tower", "sym:3", "--dim", "2", "--out", f.to_str().unwrap()]);
    let doc: Value = serde_json::from_str(&fs::read_to_string(&f).unwrap()).unwrap();
    assert_eq!(doc["weyl"], true);
    let o = run(&["check", "weyl", "--input", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(reports(&o).iter().any(|r| r["check"] == "weyl.is-weyl"));
}

#[test]
fn corrupted_sheaf_fails_the_cocycle_check_with_a_witness() {
    let dir = scratch("corrupt");
    let f = dir.join("r.json");
    run(&["example", "constant", "--tower", "cyclic:4", "--rep", "regular", "--out", f.to_str().unwrap()]);
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&f).unwrap()).unwrap();
    doc["translations"][0][0] =
        serde_json::json!([["2", "0", "0", "0"], ["0", "1", "0", "0"], ["0", "0", "1", "0"], ["0", "0", "0", "1"]]);
    fs::write(&f, doc.to_string()).unwrap();
    let o = run(&["check", "cocycle", "--input", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let r = reports(&o);
    let w = &r[0]["witnesses"][0];
    assert_eq!(r[0]["pass"], false);
    for key in ["g_outer", "g_inner", "point"] {
        assert!(w[key].is_u64(), "missing {key} in {w}");
    }
}

#[test]
fn random_checks_report_timings_on_request() {
    let o = run(&["check", "abelian", "--tower", "cyclic:4", "--count", "2", "--seed", "9", "--timing"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(reports(&o).iter().all(|r| r["millis"].is_number()));
    let o = run(&["check", "abelian", "--tower", "cyclic:4", "--count", "2"]);
    assert!(reports(&o).iter().all(|r| r.get("millis").is_none()));
}

#[test]
fn show_and_example_outputs_round_trip() {
    let dir = scratch("show");
    let p = dir.join("p.json");
    let d = dir.join("d.json");
    run(&["example", "group-ring", "--tower", "cyclic:4", "--out", p.to_str().unwrap()]);
    run(&["example", "fix", "--tower", "cyclic:4", "--rep", "regular", "--out", d.to_str().unwrap()]);
    let o = run(&["show", p.to_str().unwrap()]);
    assert!(stdout(&o).contains("level 2: [4, 2, 1]"));
    let o = run(&["show", d.to_str().unwrap()]);
    assert!(stdout(&o).contains("dims [1, 2, 4] stabilized from None"));
    let o = run(&["check", "sheafify-idem", "--input", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn bad_arguments_exit_with_two() {
    assert_eq!(run(&["check", "nope", "--tower", "sym:3"]).status.code(), Some(2));
    assert_eq!(run(&["subgroup-space", "foo:3"]).status.code(), Some(2));
    assert_eq!(run(&["subgroup-space", "sym:8", "--cap", "100"]).status.code(), Some(2));
    assert_eq!(run(&["check", "cocycle"]).status.code(), Some(2));
}
