use std::path::PathBuf;

use graded_core::cli::{render, run};
use graded_core::format::{parse_system, write_system};
use graded_core::harness::{ClaimId, Instance};
use graded_core::Grade;
use serde_json::Value;

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

fn invoke(args: &[&str]) -> (i32, Value, String) {
    let mut json_argv = vec!["graded", "--json"];
    json_argv.extend_from_slice(args);
    let j = run(&json_argv);
    let mut human_argv = vec!["graded"];
    human_argv.extend_from_slice(args);
    let h = run(&human_argv);
    assert_eq!(j.status, h.status, "{args:?}");
    let v: Value = serde_json::from_str(&j.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", j.stdout));
    (j.status, v, h.stdout)
}

fn leaves(v: &Value, key: &str, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| leaves(x, k, out)),
        Value::Array(a) => a.iter().for_each(|x| leaves(x, key, out)),
        Value::Null => out.push((key.into(), "none".into())),
        Value::String(s) => out.push((key.into(), s.clone())),
        other => out.push((key.into(), other.to_string())),
    }
}

fn commands() -> Vec<Vec<String>> {
    let f = fixture;
    let mut cmds = Vec::new();
    for sys in ["ex_a.grs", "ex_b.grs", "ex_c.grs", "ex_e.grs", "singleton.grs"] {
        cmds.push(vec!["validate".into(), f(sys)]);
        cmds.push(vec!["classify".into(), f(sys)]);
        for mode in ["paper", "closure"] {
            cmds.push(vec!["hulls".into(), f(sys), "--mode".into(), mode.into()]);
            cmds.push(vec!["structure".into(), f(sys), "--mode".into(), mode.into()]);
        }
    }
    for (sys, map) in [("ex_a.grs", "reflect.map"), ("ex_c.grs", "succ.map"), ("ex_e.grs", "swap.map")] {
        cmds.push(vec!["dynamics".into(), f(sys), f(map)]);
        cmds.push(vec!["fixpoint".into(), f(sys), f(map)]);
    }
    for claim in ClaimId::ALL {
        cmds.push(vec!["falsify".into(), claim.to_string(), "--trials".into(), "40".into()]);
    }
    cmds
}

#[test]
fn human_output_carries_every_json_leaf() {
    for cmd in commands() {
        let args: Vec<&str> = cmd.iter().map(String::as_str).collect();
        let (_, v, human) = invoke(&args);
        assert_eq!(render(&v), human, "{args:?}");
        let mut ls = Vec::new();
        leaves(&v, "", &mut ls);
        for (k, leaf) in ls {
            assert!(human.contains(&k), "{args:?}: key {k} missing");
            for line in leaf.lines() {
                assert!(human.contains(line), "{args:?}: {k} = {line} missing");
            }
        }
    }
}

#[test]
fn exit_statuses() {
    let f = fixture;
    assert_eq!(invoke(&["classify", &f("ex_b.grs")]).0, 1);
    assert_eq!(invoke(&["classify", &f("ex_c.grs")]).0, 0);
    assert_eq!(invoke(&["fixpoint", &f("ex_c.grs"), &f("succ.map")]).0, 0);
    assert_eq!(invoke(&["falsify", "prop-r10-metric", "--trials", "100"]).0, 1);
    assert_eq!(invoke(&["falsify", "thm-homo-iff-nonexp", "--trials", "100"]).0, 0);
    assert_eq!(run(["graded", "fixpoint", &f("ex_a.grs"), &f("succ.map")]).status, 2);
    assert_eq!(run(["graded", "classify", &f("rtt.dm")]).status, 2);
    assert_eq!(run(["graded", "falsify", "prop-r10-metric", "--trials", "x"]).status, 2);
    let bad = run(["graded", "validate", &f("succ.map")]);
    assert!(bad.stderr.starts_with("error:"), "{}", bad.stderr);
}

#[test]
fn malformed_input_reports_position() {
    let path = scratch("asym.grs");
    std::fs::write(&path, "gradedsystem v1\npoints: 2\nwindow: 0 3\ngrades:\n- 1\n2 -\n").unwrap();
    let out = run(["graded", "validate", path.to_str().unwrap()]);
    assert_eq!(out.status, 2);
    assert!(out.stderr.starts_with("error: 6:1: [symmetry]"), "{}", out.stderr);
}

#[test]
fn falsify_writes_a_replayable_counterexample() {
    let path = scratch("cube.cx");
    let out = run(["graded", "falsify", "prop-r10-metric", "--trials", "300", "--seed", "4", "-o", path.to_str().unwrap()]);
    assert_eq!(out.status, 1);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# counterexample claim=prop-r10-metric seed=4 trial="));
    let (m, inst) = Instance::from_text(&text).unwrap();
    assert_eq!(m.claim, ClaimId::R10Metric);
    assert_eq!(inst.system.len(), 3);
    assert!(!inst.locus.is_empty());
}

#[test]
fn ingest_quantizes_a_distance_matrix() {
    let path = scratch("rtt.grs");
    let out = run(["graded", "ingest", &fixture("rtt.dm"), "--window", "0", "4", "-o", path.to_str().unwrap()]);
    assert_eq!(out.status, 0, "{}", out.stderr);
    let text = std::fs::read_to_string(&path).unwrap();
    let sys = parse_system(&text).unwrap();
    assert_eq!(write_system(&sys), text);
    let l = Grade::Level;
    assert_eq!(sys.grade(0, 1), l(2));
    assert_eq!(sys.grade(0, 2), l(1));
    assert_eq!(sys.grade(1, 2), l(1));
    assert_eq!(sys.grade(2, 3), l(0));
    assert_eq!(run(["graded", "validate", path.to_str().unwrap()]).status, 0);
}
