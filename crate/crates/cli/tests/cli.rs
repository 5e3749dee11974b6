use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_search-pursuit"))
}

fn game(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "games", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn text(v: &Value) -> String {
    v.as_str()
        .unwrap_or_else(|| panic!("not a string: {v}"))
        .to_string()
}

fn probs(doc: &Value) -> Vec<String> {
    doc["hider"]
        .as_array()
        .unwrap()
        .iter()
        .map(|h| text(&h["probability"]))
        .collect()
}

fn temp_file(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("search-pursuit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn solves_the_four_location_example() {
    let out = run(&["solve", &game("four_locations.json"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(text(&doc["value"]["exact"]), "6/115");
    assert_eq!(probs(&doc), ["12/23", "0", "8/23", "3/23"]);
    assert_eq!(text(&doc["provenance"]), "lp");
    assert_eq!(doc["certificate"]["ok"], Value::Bool(true));
    let sets: Vec<(String, String)> = doc["searcher"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| (text(&s["set"]), text(&s["probability"])))
        .collect();
    assert_eq!(
        sets,
        [
            ("{1}".to_string(), "12/23".to_string()),
            ("{2,3}".to_string(), "8/23".to_string()),
            ("{4}".to_string(), "3/23".to_string())
        ]
    );
}

#[test]
fn output_is_byte_identical_across_runs() {
    let a = run(&["solve", &game("four_locations.json"), "--format", "both"]);
    let b = run(&["solve", &game("four_locations.json"), "--format", "both"]);
    assert_eq!(a.stdout, b.stdout);
    let a = run(&[
        "sweep",
        &game("five_locations.json"),
        "--k-from",
        "5",
        "--k-to",
        "10",
        "--format",
        "json",
    ]);
    let b = run(&[
        "sweep",
        &game("five_locations.json"),
        "--k-from",
        "5",
        "--k-to",
        "10",
        "--format",
        "json",
    ]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn timing_is_opt_in() {
    let plain = json(&run(&[
        "solve",
        &game("four_locations.json"),
        "--format",
        "json",
    ]));
    assert!(plain.get("timing_ms").is_none());
    let timed = json(&run(&[
        "solve",
        &game("four_locations.json"),
        "--format",
        "json",
        "--timing",
    ]));
    assert!(timed["timing_ms"].is_number());
}

#[test]
fn paper_names_label_locations_by_search_time() {
    let out = run(&["solve", &game("four_locations.json"), "--paper-names"]);
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.contains("{3,4}"), "{table}");
    assert!(table.contains("{7}"), "{table}");
}

#[test]
fn empty_budget_has_value_zero() {
    let out = run(&["solve", &game("empty_budget.json"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(text(&doc["value"]["exact"]), "0");
    let searcher = doc["searcher"].as_array().unwrap();
    assert_eq!(searcher.len(), 1);
    assert_eq!(text(&searcher[0]["set"]), "{}");
}

#[test]
fn two_type_modes_agree() {
    let closed = json(&run(&["solve", &game("two_type.json"), "--format", "json"]));
    let general = json(&run(&[
        "solve",
        &game("two_type.json"),
        "--mode",
        "general",
        "--format",
        "json",
    ]));
    assert_eq!(text(&closed["value"]["exact"]), "3/25");
    assert_eq!(closed["value"], general["value"]);
    assert_eq!(text(&closed["provenance"]), "both");
    assert_eq!(closed["certificate"]["ok"], Value::Bool(true));
}

#[test]
fn constant_times_closed_form() {
    let doc = json(&run(&[
        "solve",
        &game("unit_times.json"),
        "--format",
        "json",
    ]));
    assert_eq!(text(&doc["value"]["exact"]), "3/31");
    assert_eq!(probs(&doc), ["15/31", "10/31", "6/31"]);
    assert_eq!(text(&doc["provenance"]), "both");
}

#[test]
fn sweep_reproduces_the_five_location_table() {
    let out = run(&[
        "sweep",
        &game("five_locations.json"),
        "--k-from",
        "5",
        "--k-to",
        "10",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let rows = doc["rows"].as_array().unwrap();
    let values: Vec<String> = rows.iter().map(|r| text(&r["value"]["exact"])).collect();
    assert_eq!(values, ["3/55", "3/55", "1/15", "1/15", "18/185", "1/10"]);
    let k9: Vec<String> = rows[4]["hider"]
        .as_array()
        .unwrap()
        .iter()
        .map(text)
        .collect();
    assert_eq!(k9, ["0", "3/37", "4/37", "6/37", "24/37"]);
    assert!(rows.iter().all(|r| r["certified"] == Value::Bool(true)));
}

#[test]
fn sweep_of_width_one() {
    let doc = json(&run(&[
        "sweep",
        &game("five_locations.json"),
        "--k-from",
        "7",
        "--k-to",
        "7",
        "--format",
        "json",
    ]));
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(text(&rows[0]["value"]["exact"]), "1/15");
}

#[test]
fn two_type_sweep_matches_the_closed_form_in_regime() {
    let out = run(&[
        "sweep",
        &game("two_type.json"),
        "--k-from",
        "1",
        "--k-to",
        "6",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let mut compared = 0;
    for row in doc["rows"].as_array().unwrap() {
        if let Some(c) = row.get("closed_form") {
            assert_eq!(c, &row["value"]["exact"]);
            compared += 1;
        }
    }
    assert_eq!(compared, 3);
}

#[test]
fn bad_sweep_range_is_an_input_error() {
    let out = run(&[
        "sweep",
        &game("five_locations.json"),
        "--k-from",
        "6",
        "--k-to",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn learning_reports() {
    let doc = json(&run(&[
        "learning", "--low", "1/3", "--high", "2/3", "--format", "json",
    ]));
    assert_eq!(text(&doc["value"]["exact"]), "21/68");
    assert_eq!(text(&doc["prob_rs"]), "9/17");
    assert_eq!(text(&doc["posterior"]["implied_capture_x"]), "4/9");
    assert_eq!(text(&doc["posterior"]["q_low_capture"]), "2/3");
    assert_eq!(doc["return_to_same_location"], Value::Bool(true));
    let matrix: Vec<Vec<String>> = doc["matrix_a"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_array().unwrap().iter().map(text).collect())
        .collect();
    assert_eq!(matrix, [["13/36", "1/4"], ["1/4", "3/8"]]);

    let doc = json(&run(&[
        "learning", "--low", "0", "--high", "0", "--format", "json",
    ]));
    assert_eq!(text(&doc["value"]["exact"]), "1/2");
    let doc = json(&run(&[
        "learning", "--low", "0", "--high", "0.5", "--format", "json",
    ]));
    assert_eq!(text(&doc["value"]["exact"]), "33/80");
    assert_eq!(text(&doc["prob_rs"]), "3/5");
}

#[test]
fn invalid_learning_probabilities() {
    assert_eq!(
        run(&["learning", "--low", "2/3", "--high", "1/3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["learning", "--low", "0", "--high", "3/2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["learning", "--low", "x", "--high", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_round_trip() {
    let path = temp_file("solution.json", "");
    let out = run(&["solve", &game("four_locations.json"), "--output", &path]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["verify", &game("four_locations.json"), &path]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );

    for (file, mode) in [
        ("two_type.json", None),
        ("two_type.json", Some("general")),
        ("unit_times.json", None),
        ("learning.json", None),
        ("empty_budget.json", None),
    ] {
        let mut args = vec!["solve", file, "--format", "json"];
        let g = game(file);
        args[1] = &g;
        if let Some(m) = mode {
            args.extend(["--mode", m]);
        }
        let solved = run(&args);
        let out = run_stdin(&["verify", &g, "-"], &solved.stdout);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{file}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
    }
}

#[test]
fn tampered_value_fails_verification() {
    let solved = run(&["solve", &game("four_locations.json"), "--format", "json"]);
    let tampered = String::from_utf8(solved.stdout)
        .unwrap()
        .replace("\"6/115\"", "\"7/115\"");
    let out = run_stdin(
        &[
            "verify",
            &game("four_locations.json"),
            "-",
            "--format",
            "json",
        ],
        tampered.as_bytes(),
    );
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["ok"], Value::Bool(false));
    assert!(text(&report["min_searcher_slack"]).starts_with('-'));
    assert!(text(&report["worst_column"]["slack"]).starts_with('-'));
}

#[test]
fn arithmetic_closed_form_pipes_into_verify() {
    let solved = run(&[
        "solve",
        &game("five_locations.json"),
        "--mode",
        "arithmetic-times",
        "--format",
        "json",
    ]);
    assert_eq!(solved.status.code(), Some(0));
    let doc = json(&solved);
    assert_eq!(text(&doc["value"]["exact"]), "3/55");
    assert_eq!(text(&doc["provenance"]), "both");
    let out = run_stdin(
        &["verify", &game("five_locations.json"), "-"],
        &solved.stdout,
    );
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn even_arithmetic_closed_form_is_reported_as_failing() {
    let path = temp_file(
        "even.json",
        r#"{"mode": "arithmetic-times", "budget": 4, "locations": [
            {"time": 1, "capture": ".5"}, {"time": 2, "capture": ".4"},
            {"time": 3, "capture": ".3"}, {"time": 4, "capture": ".2"}]}"#,
    );
    let out = run(&["solve", &path, "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json(&out);
    assert_eq!(text(&doc["provenance"]), "closed-form");
    assert_eq!(text(&doc["lp_value"]["exact"]), "6/65");
}

#[test]
fn verify_rejects_mismatched_solutions() {
    let solved = run(&["solve", &game("four_locations.json"), "--format", "json"]);
    let out = run_stdin(
        &["verify", &game("five_locations.json"), "-"],
        &solved.stdout,
    );
    assert_eq!(out.status.code(), Some(2));
    let out = run_stdin(
        &["verify", &game("four_locations.json"), "-"],
        b"{\"value\": 1}",
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn input_errors_exit_with_two() {
    let unknown = temp_file("unknown.json", "{\n  \"locations\": [],\n  \"budgt\": 1\n}");
    let out = run(&["solve", &unknown]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("budgt") && err.contains("line 3"), "{err}");

    let bad_rational = temp_file(
        "rational.json",
        r#"{"locations": [{"time": 1, "capture": "1/0"}], "budget": 1}"#,
    );
    assert_eq!(run(&["solve", &bad_rational]).status.code(), Some(2));
    let bad_probability = temp_file(
        "probability.json",
        r#"{"locations": [{"time": 1, "capture": "3/2"}], "budget": 1}"#,
    );
    assert_eq!(run(&["solve", &bad_probability]).status.code(), Some(2));
    assert_eq!(
        run(&["solve", "/nonexistent/game.json"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "solve",
            &game("four_locations.json"),
            "--mode",
            "arithmetic-times"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn size_cap_exits_with_three() {
    let out = run(&["solve", &game("five_locations.json"), "--max-subsets", "3"]);
    assert_eq!(out.status.code(), Some(3));
}
