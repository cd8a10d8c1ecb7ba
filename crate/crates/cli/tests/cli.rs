use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(rel)
}

fn heegaard(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heegaard")).args(args).output().expect("binary runs")
}

fn json_run(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = heegaard(&all);
    let text = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(text.trim()).unwrap_or_else(|e| panic!("{e}: {text}"));
    (out.status.code().unwrap(), v)
}

fn path(rel: &str) -> String {
    fixture(rel).display().to_string()
}

#[test]
fn standard_genus_three_reduces_in_three_steps() {
    let (code, v) = json_run(&["reduce-diagram", &path("diagrams/standard_g3.hd")]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "trivial-diagram");
    assert_eq!(v["results"]["steps"].as_array().unwrap().len(), 3);
    assert_eq!(v["results"]["final_genus"], 0);
    assert_eq!(v["convention"], "neg_theta_dot_alpha");
}

#[test]
fn lens_homology_and_stuck_exit_code() {
    let (code, v) = json_run(&["homology", &path("diagrams/lens_5_1.hd")]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["invariant_factors"], serde_json::json!([5]));
    let (code, v) = json_run(&["reduce-diagram", &path("diagrams/lens_5_1.hd")]);
    assert_eq!(code, 1);
    assert_eq!(v["verdict"], "stuck");
    assert_eq!(v["results"]["stuck"]["h1"], serde_json::json!([5]));
    assert!(!v["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn torus_invariants() {
    let (code, v) = json_run(&["invariants", &path("arrangements/torus_11.arr")]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["degree"], 1);
    assert_eq!(v["results"]["algebraic_intersection"].as_i64().unwrap().abs(), 1);
    let (_, v) = json_run(&["invariants", &path("arrangements/torus_31_1m2_wiggled.arr")]);
    assert_eq!(v["results"]["degree"], 7);
    assert!(v["results"]["crossings"].as_u64().unwrap() > 7);
}

#[test]
fn inputs_are_hashed() {
    let (_, v) = json_run(&["validate", &path("arrangements/torus_11.arr")]);
    let sha = v["inputs"][0]["sha256"].as_str().unwrap();
    assert_eq!(sha.len(), 64);
    assert!(sha.bytes().all(|b| b.is_ascii_hexdigit()));
}

#[test]
fn malformed_diagram_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.hd");
    std::fs::write(&p, "genus 1\n# fine\ntheta 1: b1 c2\n").unwrap();
    let out = heegaard(&["pi1", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad.hd:3:"), "{err}");
    let (code, v) = json_run(&["pi1", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["verdict"], "invalid-input");
}

#[test]
fn malformed_arrangement_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.arr");
    std::fs::write(&p, "{\"genus\": 1,\n \"crossings\": [}\n").unwrap();
    let out = heegaard(&["validate", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("bad.arr:2:"));
}

#[test]
fn unknown_flag_is_invalid() {
    let out = heegaard(&["homology", "--frobnicate", &path("diagrams/lens_5_1.hd")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical() {
    for args in [
        vec!["reduce-diagram", "diagrams/wiggled_torus.hd"],
        vec!["cancel", "diagrams/standard_g2.hd"],
        vec!["reduce", "arrangements/filling_3.arr"],
    ] {
        let full = [args[0], &path(args[1]), "--json"];
        let a = heegaard(&full).stdout;
        let b = heegaard(&full).stdout;
        assert!(!a.is_empty());
        assert_eq!(a, b);
    }
}

#[test]
fn reduced_arrangement_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["torus_doubled", "filling_2", "torus_41_m13_wiggled"] {
        let out = dir.path().join(format!("{name}.arr"));
        let trace = dir.path().join(format!("{name}.jsonl"));
        let (code, v) = json_run(&[
            "reduce",
            &path(&format!("arrangements/{name}.arr")),
            "--output",
            out.to_str().unwrap(),
            "--trace",
            trace.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let lines = std::fs::read_to_string(&trace).unwrap();
        assert_eq!(lines.lines().count(), v["results"]["trace"].as_array().unwrap().len());
        for l in lines.lines() {
            let step: Value = serde_json::from_str(l).unwrap();
            let before = step["crossings_before"].as_u64().unwrap();
            assert_eq!(before - step["crossings_after"].as_u64().unwrap(), 2);
        }
        let (code, again) = json_run(&["invariants", out.to_str().unwrap()]);
        assert_eq!(code, 0);
        assert_eq!(again["results"]["degree"], v["results"]["degree"]);
        assert_eq!(again["results"]["crossings"], v["results"]["degree"]);
        assert_eq!(again["results"]["removals"], 0);
    }
}

#[test]
fn final_diagram_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("final.hd");
    let (code, _) = json_run(&["reduce-diagram", &path("diagrams/mixed_g2.hd"), "--output", out.to_str().unwrap()]);
    assert_eq!(code, 1);
    let (code, v) = json_run(&["homology", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["invariant_factors"], serde_json::json!([3]));
}

#[test]
fn batch_directory_is_ordered_and_parallel_safe() {
    let dir = path("arrangements");
    let one = heegaard(&["invariants", &dir, "--json", "--jobs", "1"]);
    let four = heegaard(&["invariants", &dir, "--json", "--jobs", "4"]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    let text = String::from_utf8(one.stdout).unwrap();
    assert_eq!(text.lines().count(), 20);
    let paths: Vec<String> = text
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap()["inputs"][0]["path"].as_str().unwrap().to_string())
        .collect();
    let mut sorted = paths.clone();
    sorted.sort();
    assert_eq!(paths, sorted);
}

#[test]
fn batch_exit_code_is_the_worst_verdict() {
    let out = heegaard(&["reduce-diagram", &path("diagrams"), "--json", "--jobs", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn pi1_of_standard_diagram_is_trivial() {
    let (code, v) = json_run(&["pi1", &path("diagrams/standard_g3.hd")]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["trivial"], true);
    let (_, v) = json_run(&["pi1", &path("diagrams/lens_3_1.hd"), "--max-tietze", "5"]);
    assert_eq!(v["results"]["simplified"], "< b1 | b1 b1 b1 >");
}

#[test]
fn cancel_reports_certificate() {
    let (code, v) = json_run(&["cancel", &path("diagrams/wiggled_torus.hd")]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["certificate"]["geometric"], true);
    assert_eq!(v["results"]["pairs"][0]["crossings"], 7);
    assert_eq!(v["results"]["pairs"][0]["degree"], 1);
    let (code, v) = json_run(&["cancel", &path("diagrams/lens_2_1.hd")]);
    assert_eq!(code, 1);
    assert!(v["results"]["certificate"].is_null());
}

#[test]
fn morse_commands() {
    let (code, v) = json_run(&["morse", "chi", &path("morse/genus2.morse")]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["chi"], 0);
    assert_eq!(v["results"]["middle_genus"], 2);

    let (_, v) = json_run(&["morse", "self-index", &path("morse/genus2.morse")]);
    let levels: Vec<&str> = v["results"]["program"]["points"].as_array().unwrap().iter().map(|p| p["level"].as_str().unwrap()).collect();
    assert_eq!(levels, ["0", "1", "1", "2", "2", "3"]);

    let (code, v) = json_run(&["morse", "cancel", &path("morse/extra_minimum.morse"), "o2", "p1"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["chi_before"], v["results"]["chi_after"]);
    assert_eq!(v["results"]["program"]["points"].as_array().unwrap().len(), 2);
    let (code, _) = json_run(&["morse", "cancel", &path("morse/extra_maximum.morse"), "r2", "q1"]);
    assert_eq!(code, 0);
    let (code, _) = json_run(&["morse", "cancel", &path("morse/extra_minimum.morse"), "o1", "p1"]);
    assert_eq!(code, 2);

    let (code, _) = json_run(&["morse", "chi", &path("morse/with_boundary.morse")]);
    assert_eq!(code, 2);
    let (code, v) = json_run(&["morse", "to-heegaard", &path("morse/unbalanced.morse"), "--theta", &path("morse/standard_g1.theta")]);
    assert_eq!(code, 2);
    assert!(v["errors"][0].as_str().unwrap().contains("Euler characteristic"));
}

#[test]
fn morse_to_heegaard_delegates_to_reduction() {
    let (code, v) = json_run(&["morse", "to-heegaard", &path("morse/genus1.morse"), "--theta", &path("morse/standard_g1.theta")]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "trivial-diagram");
    assert_eq!(v["inputs"].as_array().unwrap().len(), 2);
    let (code, v) = json_run(&["morse", "to-heegaard", &path("morse/genus1.morse"), "--theta", &path("morse/lens_5_1.theta")]);
    assert_eq!(code, 1);
    assert_eq!(v["results"]["reduction"]["h1_initial"], serde_json::json!([5]));
    let (code, v) = json_run(&["morse", "to-heegaard", &path("morse/s3_min_max.morse"), "--theta", &path("morse/standard_g1.theta")]);
    assert_eq!(code, 2, "{v}");
}
