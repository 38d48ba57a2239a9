use std::path::PathBuf;
use std::process::{Command, Output};

use rcmix::graph::families;
use serde_json::Value;

fn graph_file(name: &str, text: &str) -> String {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(format!("cli-{name}.txt"));
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn rcmix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rcmix")).args(args).output().unwrap()
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn verify_triangle_passes() {
    let g = graph_file("triangle", &families::triangle().to_text());
    let out = rcmix(&["verify", "--graph", &g, "--beta", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    assert!(recs.len() >= 15);
    for r in &recs {
        assert_eq!(r["schema_version"], 1);
        assert_ne!(r["status"], "fail", "{r}");
    }
    let names: Vec<&str> = recs.iter().map(|r| r["check"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
}

#[test]
fn verify_k4_passes() {
    let g = graph_file("k4", &families::complete(4).to_text());
    assert_eq!(rcmix(&["verify", "--graph", &g, "--beta", "2"]).status.code(), Some(0));
}

#[test]
fn self_loop_is_an_input_error() {
    let g = graph_file("loop", "3 2\n0 1\n\n# comment\n2 2\n");
    let out = rcmix(&["verify", "--graph", &g, "--beta", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 5"), "{err}");
}

#[test]
fn guard_refusal_exits_3() {
    let g = graph_file("k4-guard", &families::complete(4).to_text());
    let out = rcmix(&["verify", "--graph", &g, "--beta", "2", "--guard-m", "5"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bad_arguments_exit_2() {
    let g = graph_file("triangle-args", &families::triangle().to_text());
    assert_eq!(rcmix(&["verify", "--graph", &g]).status.code(), Some(2));
    assert_eq!(
        rcmix(&["verify", "--graph", &g, "--beta", "2", "--p", "1/2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        rcmix(&["verify", "--graph", &g, "--beta", "1/2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        rcmix(&["verify", "--graph", &g, "--beta", "2", "--q", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(rcmix(&["--help"]).status.code(), Some(0));
}

#[test]
fn exact_triangle_gives_28_three_ways() {
    let g = graph_file("triangle-exact", &families::triangle().to_text());
    let out = rcmix(&["exact", "--graph", &g, "--beta", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &records(&out)[0];
    for key in ["z_ising", "rc_side", "even_side"] {
        assert_eq!(r[key]["value"], "28/1");
        assert_eq!(r[key]["mode"], "rational");
    }
}

#[test]
fn sample_without_steps_echoes_the_initial_state() {
    let g = graph_file("triangle-sample", &families::triangle().to_text());
    let out = rcmix(&["sample", "--graph", &g, "--p", "1/2", "--steps", "0"]);
    let r = &records(&out)[0];
    assert_eq!(r["subset_bitmask"], 0);
    assert_eq!(r["steps"], 0);
}

#[test]
fn trace_and_histogram_formats() {
    let g = graph_file("edge-trace", &families::single_edge().to_text());
    let out = rcmix(&["sample", "--graph", &g, "--p", "1/2", "--steps", "3", "--trace"]);
    let recs = records(&out);
    assert_eq!(recs.len(), 3);
    for r in &recs {
        let keys: Vec<&String> = r.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["accepted", "edge", "kind", "t"]);
    }
    let out = rcmix(&[
        "sample",
        "--graph",
        &g,
        "--p",
        "1/2",
        "--steps",
        "10",
        "--samples",
        "100",
        "--format",
        "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("subset_bitmask,count,frequency\n"));
}

#[test]
fn mix_single_edge() {
    let g = graph_file("edge-mix", &families::single_edge().to_text());
    let out = rcmix(&["mix", "--graph", &g, "--p", "1/2", "--eps", "1/4"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &records(&out)[0];
    assert_eq!(r["tau_exact"], 1);
    let bound = r["bound_thm43"]["value"].as_f64().unwrap();
    assert!((bound - 266.1685).abs() < 1e-3, "{bound}");
    assert_eq!(r["bound_thm43"]["tolerance"], 1e-12);
}

#[test]
fn congestion_report_and_dump() {
    let g = graph_file("edge-congestion", &families::single_edge().to_text());
    let dump = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-edge-transitions.csv");
    let out = rcmix(&[
        "congestion",
        "--graph",
        &g,
        "--beta",
        "2",
        "--transitions-csv",
        dump.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = &records(&out)[0];
    assert_eq!(r["max_congestion"]["value"], "4/3");
    assert_eq!(r["bound"]["value"], "128/1");
    let csv = std::fs::read_to_string(dump).unwrap();
    assert_eq!(csv.lines().count(), 5);
}
