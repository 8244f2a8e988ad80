//! End-to-end tests driving the compiled binary: output shapes, JSON
//! validity, and the exit-code protocol (0 success, 1 domain, 2 usage).

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_temporel"))
        .args(args)
        .output()
        .expect("the binary should run")
}

fn stdout_lines(out: &Output) -> Vec<String> {
    String::from_utf8(out.stdout.clone())
        .expect("stdout should be UTF-8")
        .lines()
        .map(str::to_owned)
        .collect()
}

fn stdout_json(out: &Output) -> Value {
    let text = String::from_utf8(out.stdout.clone()).expect("stdout should be UTF-8");
    serde_json::from_str(text.trim()).expect("stdout should be one JSON value")
}

fn stderr_error_kind(out: &Output) -> String {
    let text = String::from_utf8(out.stderr.clone()).expect("stderr should be UTF-8");
    let value: Value = serde_json::from_str(text.trim()).expect("stderr should be a JSON object");
    value["error"]["kind"]
        .as_str()
        .expect("the error object should carry a kind")
        .to_owned()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("the binary should not be killed")
}

fn write_fixture(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, content).expect("fixture should be writable");
    path.to_str().expect("fixture path should be UTF-8").to_owned()
}

// ---------------------------------------------------------------------------
// eval

#[test]
fn eval_prints_the_four_march_mondays() {
    let out = run(&[
        "eval",
        "tous les lundis de mars",
        "--from",
        "2005-01-01",
        "--to",
        "2006-01-01",
    ]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(
        stdout_lines(&out),
        vec![
            "[2005-03-07T00:00, 2005-03-08T00:00)",
            "[2005-03-14T00:00, 2005-03-15T00:00)",
            "[2005-03-21T00:00, 2005-03-22T00:00)",
            "[2005-03-28T00:00, 2005-03-29T00:00)",
        ]
    );
}

#[test]
fn eval_emits_one_valid_json_object() {
    let out = run(&[
        "eval",
        "tous les lundis de mars",
        "--from",
        "2005-01-01",
        "--to",
        "2006-01-01",
        "--json",
    ]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout_lines(&out).len(), 1, "one JSON line");
    let value = stdout_json(&out);
    assert_eq!(value["kind"], "concrete");
    let intervals = value["intervals"].as_array().expect("intervals array");
    assert_eq!(intervals.len(), 4);
    assert_eq!(intervals[0]["beg"], "2005-03-07T00:00");
    assert_eq!(intervals[3]["end"], "2005-03-29T00:00");
    assert_eq!(intervals[0]["point"], false);
}

#[test]
fn eval_selector_denotes_the_second_monday_of_each_march() {
    let out = run(&[
        "eval",
        "le 2e lundi de mars",
        "--from",
        "2004-01-01",
        "--to",
        "2006-01-01",
    ]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(
        stdout_lines(&out),
        vec![
            "[2004-03-08T00:00, 2004-03-09T00:00)",
            "[2005-03-14T00:00, 2005-03-15T00:00)",
        ]
    );
}

#[test]
fn eval_witness_satisfies_the_majority_threshold() {
    // Nine Mondays in the frame; a majority witness needs more than 66/100,
    // hence six members.
    let out = run(&[
        "eval",
        "la plupart des lundis",
        "--from",
        "2005-01-01",
        "--to",
        "2005-03-01",
        "--witness",
    ]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout_lines(&out).len(), 6);
}

#[test]
fn eval_summarizes_a_family_when_no_witness_is_asked() {
    let out = run(&[
        "eval",
        "la plupart des lundis",
        "--from",
        "2005-01-01",
        "--to",
        "2005-03-01",
    ]);
    assert_eq!(exit_code(&out), 0);
    let lines = stdout_lines(&out);
    assert_eq!(lines[0], "family over a base of 9 members");
    assert!(lines[1].starts_with("constraint: more than 66/100"));
}

#[test]
fn eval_rejects_an_unparseable_phrase_with_a_json_error() {
    let out = run(&[
        "eval",
        "bidule machin",
        "--from",
        "2005-01-01",
        "--to",
        "2006-01-01",
    ]);
    assert_eq!(exit_code(&out), 1);
    assert!(out.stdout.is_empty());
    assert_eq!(stderr_error_kind(&out), "parse");
}

#[test]
fn eval_reports_a_degenerate_family_over_a_tiny_base() {
    // Three months in the frame: no sub-series has a ratio below 1/3.
    let out = run(&[
        "eval",
        "certains mois",
        "--from",
        "2004-01-01",
        "--to",
        "2004-04-01",
        "--witness",
    ]);
    assert_eq!(exit_code(&out), 1);
    assert_eq!(stderr_error_kind(&out), "degenerate_family");
}

// ---------------------------------------------------------------------------
// check

#[test]
fn check_reports_extraction_of_the_selector_series() {
    let out = run(&[
        "check",
        "le 2e lundi de mars",
        "tous les lundis de mars",
        "--from",
        "2005-01-01",
        "--to",
        "2006-01-01",
        "--json",
    ]);
    assert_eq!(exit_code(&out), 0);
    let value = stdout_json(&out);
    let report = &value["report"];
    assert_eq!(report["equal"], false);
    assert_eq!(report["first_extracted_from_second"], true);
    assert_eq!(report["second_extracted_from_first"], false);
    assert_eq!(report["first_included_in_second"], true);
    assert_eq!(report["disjoint"], false);
}

#[test]
fn check_sees_disjoint_weekday_series() {
    let out = run(&[
        "check",
        "tous les lundis",
        "tous les mardis",
        "--from",
        "2005-01-01",
        "--to",
        "2005-02-01",
    ]);
    assert_eq!(exit_code(&out), 0);
    let lines = stdout_lines(&out);
    assert!(lines.contains(&String::from("disjoint: true")));
    assert!(lines.contains(&String::from("equal: false")));
}

// ---------------------------------------------------------------------------
// network

#[test]
fn network_solve_rejects_a_precedence_cycle() {
    let dir = tempfile::tempdir().expect("tempdir");
    let net = write_fixture(dir.path(), "cycle3.net", "a p b\nb p c\nc p a\n");
    let out = run(&["network", "solve", &net]);
    assert_eq!(exit_code(&out), 1);
    assert_eq!(stdout_lines(&out)[0], "verdict: inconsistent");
    assert_eq!(stderr_error_kind(&out), "inconsistent");
}

#[test]
fn network_solve_closes_a_precedence_chain() {
    let dir = tempfile::tempdir().expect("tempdir");
    let net = write_fixture(dir.path(), "chain.net", "# chain\na p b\nb p c\n");
    let out = run(&["network", "solve", &net]);
    assert_eq!(exit_code(&out), 0);
    let lines = stdout_lines(&out);
    assert_eq!(lines[0], "verdict: consistent");
    assert!(
        lines.contains(&String::from("a {p} c")),
        "the derived edge should be printed: {lines:?}"
    );
}

#[test]
fn network_solve_json_lists_the_closed_edges() {
    let dir = tempfile::tempdir().expect("tempdir");
    let net = write_fixture(dir.path(), "chain.net", "a p b\nb p c\n");
    let out = run(&["network", "solve", &net, "--json"]);
    assert_eq!(exit_code(&out), 0);
    let value = stdout_json(&out);
    assert_eq!(value["verdict"], "consistent");
    let edges = value["edges"].as_array().expect("edges array");
    assert!(edges.iter().any(|e| {
        e["from"] == "a" && e["to"] == "c" && e["relations"] == serde_json::json!(["p"])
    }));
}

#[test]
fn network_scenario_ranks_chain_endpoints_in_order() {
    let dir = tempfile::tempdir().expect("tempdir");
    let net = write_fixture(dir.path(), "chain.net", "a p b\nb p c\n");
    let out = run(&["network", "scenario", &net]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout_lines(&out), vec!["a: 0..1", "b: 2..3", "c: 4..5"]);
}

#[test]
fn network_chronogram_draws_every_node() {
    let dir = tempfile::tempdir().expect("tempdir");
    let net = write_fixture(dir.path(), "chain.net", "a p b\nb p c\n");
    let out = run(&["network", "chronogram", &net]);
    assert_eq!(exit_code(&out), 0);
    let text = String::from_utf8(out.stdout.clone()).expect("UTF-8");
    for node in ["a ", "b ", "c "] {
        assert!(text.lines().any(|l| l.starts_with(node)), "missing {node:?}");
    }
}

#[test]
fn network_files_with_unknown_relations_are_parse_errors() {
    let dir = tempfile::tempdir().expect("tempdir");
    let net = write_fixture(dir.path(), "bad.net", "a zz b\n");
    let out = run(&["network", "solve", &net]);
    assert_eq!(exit_code(&out), 1);
    assert_eq!(stderr_error_kind(&out), "parse");
}

// ---------------------------------------------------------------------------
// sdt

#[test]
fn sdt_reports_the_insoluble_depuis_conflict() {
    let out = run(&["sdt", "activite", "passe-simple", "--depuis", "120"]);
    assert_eq!(exit_code(&out), 0, "a diagnosis is a result, not an error");
    assert!(stdout_lines(&out).contains(&String::from("diagnosis: insoluble")));
}

#[test]
fn sdt_resolves_iteration_and_exposes_the_series_aspect() {
    let out = run(&[
        "sdt",
        "activite",
        "imparfait",
        "--pendant",
        "120",
        "--depuis",
        "100000",
        "--json",
    ]);
    assert_eq!(exit_code(&out), 0);
    let value = stdout_json(&out);
    assert_eq!(value["diagnosis"], "resolved_iteration");
    assert_eq!(value["aspect"], "aoristique");
    assert_eq!(value["series_aspect"], "inaccompli");
    assert_eq!(value["iterative"], true);
}

#[test]
fn sdt_resolves_contraction_for_clock_anchored_activities() {
    let out = run(&["sdt", "activite", "passe-simple", "--clock", "10:40"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout_lines(&out).contains(&String::from("diagnosis: resolved_contraction")));
}

#[test]
fn sdt_adverb_readings_follow_the_aspect_table() {
    let imparfait = run(&["sdt", "activite", "imparfait", "--adverb", "encore"]);
    assert_eq!(exit_code(&imparfait), 0);
    assert!(stdout_lines(&imparfait).contains(&String::from("reading: ambiguous")));

    let compose = run(&["sdt", "activite", "passe-compose", "--adverb", "deja"]);
    assert_eq!(exit_code(&compose), 0);
    assert!(stdout_lines(&compose).contains(&String::from("reading: iterative")));
}

#[test]
fn sdt_rejects_unknown_situation_types_as_usage_errors() {
    let out = run(&["sdt", "gadget", "imparfait"]);
    assert_eq!(exit_code(&out), 2);
}

// ---------------------------------------------------------------------------
// instantiate

const NESTED_ITERATION: &str = r#"{
  "iterator": {"by_intervals": {"phrase": "tous les dimanches"}},
  "model": {
    "slots": [
      {"nested": {"name": "bains", "iteration": {
        "iterator": {"numeric": 2},
        "model": {"slots": [{"process": {"name": "bain", "model": [0, 30], "reference": [0, 30]}}]}
      }}}
    ]
  }
}"#;

#[test]
fn instantiate_places_two_baths_inside_each_sunday() {
    let dir = tempfile::tempdir().expect("tempdir");
    let file = write_fixture(dir.path(), "baths.json", NESTED_ITERATION);
    let out = run(&[
        "instantiate",
        &file,
        "--from",
        "2005-03-01",
        "--to",
        "2005-03-29",
        "--json",
    ]);
    assert_eq!(exit_code(&out), 0);
    let value = stdout_json(&out);
    assert_eq!(value["count"], 4);
    let occurrences = value["occurrences"].as_array().expect("occurrences");
    let mut inner_begs = Vec::new();
    for occ in occurrences {
        let children = occ["children"][0]["occurrences"]
            .as_array()
            .expect("nested occurrences");
        assert_eq!(children.len(), 2, "two baths per Sunday");
        for child in children {
            inner_begs.push(child["anchor"]["beg"].as_str().expect("beg").to_owned());
        }
    }
    assert_eq!(inner_begs.len(), 8);
    let mut sorted = inner_begs.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), 8, "inner anchors must be distinct");
    assert_eq!(inner_begs[0], "2005-03-06T08:00");
}

#[test]
fn instantiate_rejects_malformed_descriptions_as_domain_errors() {
    let dir = tempfile::tempdir().expect("tempdir");
    let file = write_fixture(dir.path(), "broken.json", "{\"iterator\": ");
    let out = run(&[
        "instantiate",
        &file,
        "--from",
        "2005-03-01",
        "--to",
        "2005-03-29",
    ]);
    assert_eq!(exit_code(&out), 1);
    assert_eq!(stderr_error_kind(&out), "parse");
}

// ---------------------------------------------------------------------------
// extract

const CORPUS_SENTENCES: &str = "\
Ils se retrouvent tous les mardis au club. Elle lui rend visite une fois par mois.
Il gagne un dimanche sur deux. Le recensement a lieu en principe tous les cinq ans.
";

#[test]
fn extract_emits_one_json_line_per_match() {
    let dir = tempfile::tempdir().expect("tempdir");
    let file = write_fixture(dir.path(), "corpus.txt", CORPUS_SENTENCES);
    let out = run(&["extract", &file, "--json"]);
    assert_eq!(exit_code(&out), 0);
    let lines = stdout_lines(&out);
    assert_eq!(lines.len(), 4);
    let values: Vec<Value> = lines
        .iter()
        .map(|l| serde_json::from_str(l).expect("each line should be valid JSON"))
        .collect();
    let patterns: Vec<&str> = values.iter().map(|v| v["pattern"].as_str().unwrap()).collect();
    assert_eq!(patterns, ["TOUS_LES", "FOIS_PAR", "N_SUR_N", "TOUS_LES_N"]);
    let labels: Vec<&str> = values.iter().map(|v| v["label"].as_str().unwrap()).collect();
    assert_eq!(labels, ["mardi", "mois", "dimanche", "an"]);
    let periods: Vec<&str> = values.iter().map(|v| v["period"].as_str().unwrap()).collect();
    assert_eq!(
        periods,
        ["discontinuous", "continuous", "discontinuous", "discontinuous"]
    );
    assert_eq!(values[2]["number"], 1);
    assert_eq!(values[2]["out_of"], 2);
}

#[test]
fn extract_pattern_flag_filters_matches() {
    let dir = tempfile::tempdir().expect("tempdir");
    let file = write_fixture(dir.path(), "corpus.txt", CORPUS_SENTENCES);
    let out = run(&["extract", &file, "--pattern", "fois-par"]);
    assert_eq!(exit_code(&out), 0);
    let lines = stdout_lines(&out);
    assert_eq!(lines.len(), 1);
    assert!(lines[0].starts_with("FOIS_PAR label=mois"));
}

#[test]
fn extract_rejects_unknown_pattern_ids_as_usage_errors() {
    let dir = tempfile::tempdir().expect("tempdir");
    let file = write_fixture(dir.path(), "corpus.txt", CORPUS_SENTENCES);
    let out = run(&["extract", &file, "--pattern", "NOPE"]);
    assert_eq!(exit_code(&out), 2);
}

// ---------------------------------------------------------------------------
// usage protocol

#[test]
fn missing_frame_flags_are_usage_errors() {
    let out = run(&["eval", "tous les lundis"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn malformed_dates_are_usage_errors() {
    let out = run(&[
        "eval",
        "tous les lundis",
        "--from",
        "2005-13-01",
        "--to",
        "2006-01-01",
    ]);
    assert_eq!(exit_code(&out), 2);
    assert!(out.stdout.is_empty());
}

#[test]
fn unreadable_input_files_are_usage_errors() {
    let out = run(&["network", "solve", "/nonexistent/never.net"]);
    assert_eq!(exit_code(&out), 2);
}
