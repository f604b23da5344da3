use std::io::Write;

use polyvol_cli::run_args;

fn run(args: &[&str]) -> (i32, String) {
    run_args(args.iter().copied())
}

fn json(args: &[&str]) -> (i32, serde_json::Value) {
    let (code, out) = run(args);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}")))
}

const PYRAMID_JSON: &str = r#"{"dim": 3, "facets": [
    {"name": "N", "a": ["0", "-1", "-1"], "b": "1"},
    {"name": "S", "a": ["0", "1", "-1"], "b": "1"},
    {"name": "E", "a": ["-1", "0", "-1"], "b": "1"},
    {"name": "W", "a": ["1", "0", "-1"], "b": "1"},
    {"name": "B", "a": ["0", "0", "2"], "b": "0"}
]}"#;

fn write_temp(src: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(src.as_bytes()).unwrap();
    f
}

#[test]
fn pyramid_ih_betti_text() {
    let (code, out) = run(&["ih-betti", "--builtin", "pyr-square"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("ih-betti 1 2 2 1"), "{out}");
    assert!(out.contains("toric h-vector 1 2 2 1 (match)"), "{out}");
}

#[test]
fn pyramid_resolutions_summary() {
    let (code, out) = run(&["resolutions", "--builtin", "pyr-square"]);
    assert_eq!(code, 0);
    let summary = out.lines().nth(2).unwrap();
    assert!(summary.starts_with("2 types: "), "{summary}");
    assert!(summary.contains("Δ_NS") && summary.contains("Δ_EW"), "{summary}");
    assert!(summary.ends_with("(by diff at vertex {N,S,E,W})"), "{summary}");
}

#[test]
fn header_echoes_flags() {
    let (code, v) = json(&["oracle", "--builtin", "octahedron", "--seed", "7", "--sample-count", "3", "--json"]);
    assert_eq!(code, 0);
    let h = &v["header"];
    assert_eq!(h["command"], "oracle");
    assert_eq!(h["input"], "builtin:octahedron");
    assert_eq!((h["seed"].as_u64(), h["sample_count"].as_u64(), h["max_orderings"].as_u64()), (Some(7), Some(3), Some(5040)));
    assert_eq!(v["result"]["generalized_h"], serde_json::json!([1, 5, 5, 1]));
    assert_eq!(v["result"]["generalized_h_primal"], serde_json::json!([1, 3, 3, 1]));
    let (_, text) = run(&["oracle", "--builtin", "cube(3)"]);
    assert!(text.starts_with("# polyvol 0.1.0 oracle builtin:cube(3) seed=20240613 sample_count=256 max_orderings=5040"), "{text}");
}

#[test]
fn file_input_matches_builtin() {
    let f = write_temp(PYRAMID_JSON);
    let path = f.path().to_str().unwrap();
    let (code, from_file) = json(&["local-global", path, "--json"]);
    let (_, from_builtin) = json(&["local-global", "--builtin", "pyr-square", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(from_file["result"], from_builtin["result"]);
    assert_eq!(from_file["result"]["relations"], 0);
}

#[test]
fn redundant_row_is_an_input_error() {
    let bad = PYRAMID_JSON.replace(r#""b": "0"}"#, r#""b": "0"}, {"name": "lid", "a": ["0", "0", "-1"], "b": "7"}"#);
    let f = write_temp(&bad);
    let (code, out) = run(&["info", f.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.contains("redundant") && out.contains("lid"), "{out}");
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(run(&["info", "/nonexistent/polytope.json"]).0, 2);
    assert_eq!(run(&["info", "--builtin", "dodecahedron"]).0, 2);
    assert_eq!(run(&["frobnicate", "--builtin", "cube"]).0, 2);
    assert_eq!(run(&["info"]).0, 2);
    let f = write_temp("{\"dim\": 2, \"facets\": []");
    assert_eq!(run(&["info", f.path().to_str().unwrap()]).0, 2);
    // betti is the simple-case computation
    let (code, out) = run(&["betti", "--builtin", "pyr-square"]);
    assert_eq!(code, 2);
    assert!(out.contains("not simple"), "{out}");
    // wrong arity, and a product that vanishes on r0 = Δ_EW
    assert_eq!(run(&["uniform", "--builtin", "pyr-square", "--calibrate", "N,E"]).0, 2);
    assert_eq!(run(&["uniform", "--builtin", "pyr-square", "--calibrate", "N,S,B"]).0, 2);
    assert_eq!(run(&["uniform", "--builtin", "pyr-square", "--expr", "N*Q"]).0, 2);
}

#[test]
fn guards_exit_three() {
    let (code, out) = run(&["resolutions", "--builtin", "octahedron", "--max-orderings", "10", "--sample-count", "0"]);
    assert_eq!(code, 3, "{out}");
    assert_eq!(run(&["info", "--builtin", "cube(9)"]).0, 3);
}

#[test]
fn calibrated_intersection_numbers() {
    let (code, v) = json(&["volume-poly", "--builtin", "pyr-square", "--calibrate", "N,E,B", "--expr", "N*S*E", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["calibration"], "2");
    let values: Vec<(String, String)> = v["result"]["chambers"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["label"].as_str().unwrap().to_string(), c["value"].as_str().unwrap().to_string()))
        .collect();
    assert!(values.contains(&("Δ_NS".into(), "0".into())), "{values:?}");
    assert!(values.contains(&("Δ_EW".into(), "1".into())), "{values:?}");
}

#[test]
fn uniformity_verdicts() {
    let (_, v) = json(&["uniform", "--builtin", "pyr-square", "--expr", "E*W - N*S", "--json"]);
    assert_eq!(v["result"]["test"]["uniform"], true);
    let (code, v) = json(&["uniform", "--builtin", "pyr-square", "--expr", "N*S", "--degree", "2", "--json"]);
    assert_eq!(code, 0, "non-uniform is an answer, not a finding");
    assert_eq!(v["result"]["test"]["uniform"], false);
    assert!(v["result"]["test"]["witness"]["against"].is_string());
    assert_eq!(v["result"]["spaces"].as_array().unwrap().len(), 1);
}

#[test]
fn simple_betti_and_volume() {
    let (code, v) = json(&["betti", "--builtin", "cube(3)", "--degree", "1", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["betti"], serde_json::json!([1, 3, 3, 1]));
    assert_eq!(v["result"]["degrees"].as_array().unwrap().len(), 1);
    let (_, out) = run(&["volume-poly", "--builtin", "simplex(2)"]);
    assert!(out.contains("vol = 1/2 - ε_s0 - ε_s1 - ε_s2"), "{out}");
    let (_, v) = json(&["info", "--builtin", "cube(3)", "--json"]);
    assert_eq!(v["result"]["volume"], "1");
    assert_eq!(v["result"]["euler_characteristic"], 2);
    assert_eq!(v["polytope"]["f_vector"], serde_json::json!([8, 12, 6]));
}

#[test]
fn reports_are_reproducible() {
    let args = ["ih-betti", "--builtin", "pyr-square", "--json"];
    assert_eq!(run(&args), run(&args));
}
