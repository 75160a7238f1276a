use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn pgrade(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_pgrade"))
        .args(args)
        .output()
        .expect("pgrade runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.push("--json");
    let run = pgrade(&full);
    assert_eq!(run.code, 0, "{args:?}: {}", run.stderr);
    serde_json::from_str(&run.stdout).unwrap()
}

fn schema(name: &str) -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schemas").join(name);
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_valid(schema_name: &str, instance: &Value) {
    let validator = jsonschema::validator_for(&schema(schema_name)).unwrap();
    let errors: Vec<String> = validator.iter_errors(instance).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema_name}: {errors:?}");
}

#[test]
fn reports_validate_against_schemas() {
    let cases: &[(&[&str], Option<&str>)] = &[
        (&["verify", "--n", "3"], None),
        (&["verify", "--n", "2", "--suite", "pauli"], None),
        (&["sl2", "--n", "3", "order", "--matrix", "1,0,1,1"], None),
        (&["lift", "--n", "3", "--matrix", "0,-1,1,0"], Some("lift.schema.json")),
        (&["lift", "--n", "5", "--matrix", "2,0,0,3"], Some("lift.schema.json")),
        (&["lift", "--n", "4", "--matrix", "-1,0,0,1"], Some("lift.schema.json")),
        (&["grading", "--n", "3"], None),
        (&["cartan", "--n", "5"], None),
        (&["contractions", "--n", "3", "equations"], Some("equation-system.schema.json")),
        (&["contractions", "--n", "4", "equations"], Some("equation-system.schema.json")),
        (&["contractions", "--n", "3", "orbits"], Some("orbit-report.schema.json")),
    ];
    for (args, data_schema) in cases {
        let report = json(args);
        assert_valid("run-report.schema.json", &report);
        if let Some(s) = data_schema {
            assert_valid(s, &report["data"]);
        }
    }
}

#[test]
fn failed_checks_need_counterexamples() {
    let bad: Value = serde_json::json!({
        "command": "verify", "n": 3, "passed": false, "data": null,
        "sections": [{ "name": "pauli", "notes": [],
            "checks": [{ "name": "x", "passed": false, "detail": "" }] }]
    });
    let validator = jsonschema::validator_for(&schema("run-report.schema.json")).unwrap();
    assert!(!validator.is_valid(&bad));
}

#[test]
fn verify_small_suites() {
    let report = json(&["verify", "--n", "2", "--suite", "pauli"]);
    assert_eq!(report["passed"], true);
    let checks = &report["sections"][0]["checks"];
    assert_eq!(checks[0]["name"], "group_order");
    assert!(checks[0]["detail"].as_str().unwrap().ends_with("= 8"));
    let all = json(&["verify", "--n", "3"]);
    let names: Vec<&str> = all["sections"].as_array().unwrap().iter().map(|s| s["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["pauli", "grading", "cartan", "sl2", "normalizer", "contractions"]);
}

#[test]
fn exit_codes() {
    assert_eq!(pgrade(&["verify", "--n", "3", "--suite", "cartan"]).code, 0);
    assert_eq!(pgrade(&["verify", "--n", "0"]).code, 2);
    assert_eq!(pgrade(&["verify", "--n", "14"]).code, 2);
    assert_eq!(pgrade(&["verify", "--n", "14", "--max-n", "13"]).code, 2);
    assert_eq!(pgrade(&["verify", "--n", "3", "--suite", "nope"]).code, 2);
    assert_eq!(pgrade(&["verify"]).code, 2);
    assert_eq!(pgrade(&["bogus"]).code, 2);
    let det0 = pgrade(&["lift", "--n", "3", "--matrix", "1,1,1,1"]);
    assert_eq!(det0.code, 2);
    assert!(det0.stderr.contains("determinant 0"));
    assert_eq!(pgrade(&["sl2", "--n", "4", "bruhat", "--matrix", "1,1,0,1"]).code, 2);
    assert_eq!(pgrade(&["sl2", "--n", "3", "decompose", "--matrix", "2,0,0,1"]).code, 2);
    assert_eq!(pgrade(&["lift", "--n", "3", "--matrix", "1,0,0,1", "--outer"]).code, 2);
    assert_eq!(pgrade(&["cartan", "--n", "4"]).code, 2);
    assert_eq!(pgrade(&["contractions", "--n", "9", "equations"]).code, 2);
}

#[test]
fn sl2_examples() {
    let order = json(&["sl2", "--n", "3", "order", "--matrix", "1,0,1,1"]);
    assert_eq!(order["data"]["order"], 3);
    let word = json(&["sl2", "--n", "3", "decompose", "--matrix", "1,1,0,1"]);
    assert_eq!(word["data"]["word"], "B A^2 B^3");
    assert_eq!(word["passed"], true);
    let cell = json(&["sl2", "--n", "5", "bruhat", "--matrix", "1,1,0,1"]);
    assert_eq!(cell["data"]["cell"]["cell"], "big");
}

#[test]
fn lift_examples() {
    let syl = json(&["lift", "--n", "3", "--matrix", "0,-1,1,0"]);
    assert_eq!(syl["passed"], true);
    assert_eq!(syl["data"]["phi"], serde_json::json!([0, 2, 1, 0]));
    // entries ω^{ij}, ω = z^2 = -1 + z
    assert_eq!(syl["data"]["matrix"][1], serde_json::json!(["1", "-1 + z", "-z"]));
    let m2 = json(&["lift", "--n", "5", "--matrix", "2,0,0,3"]);
    let expected: Vec<Vec<String>> = (0..5)
        .map(|i| (0..5).map(|j| if i == (2 * j) % 5 { "1" } else { "0" }.to_string()).collect())
        .collect();
    assert_eq!(m2["data"]["matrix"], serde_json::json!(expected));
    let outer = json(&["lift", "--n", "3", "--matrix", "2,0,0,1", "--outer"]);
    assert_eq!(outer["data"]["outer"], true);
    let outer2 = json(&["lift", "--n", "2", "--matrix", "1,0,0,1", "--outer"]);
    assert_eq!(outer2["data"]["outer"], true);
    assert_eq!(outer2["data"]["phi"], serde_json::json!([1, 0, 0, 1]));
}

#[test]
fn table_commands() {
    let cartan = json(&["cartan", "--n", "5"]);
    assert_eq!(cartan["data"]["lines"].as_array().unwrap().len(), 6);
    let eqs = json(&["contractions", "--n", "3", "equations"]);
    assert_eq!(eqs["data"]["equations"].as_array().unwrap().len(), 48);
    assert_eq!(eqs["data"]["parameter_count"], 28);
    let orbits = json(&["contractions", "--n", "3", "orbits"]);
    for part in orbits["data"]["partitions"].as_array().unwrap() {
        let sizes: Vec<u64> = part["orbits"].as_array().unwrap().iter().map(|o| o["size"].as_u64().unwrap()).collect();
        assert_eq!(sizes, [24, 24], "{}", part["group"]);
    }
    let grading = json(&["grading", "--n", "3"]);
    assert_eq!(grading["data"]["table"].as_array().unwrap().len(), 28);
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["verify", "--n", "4"],
        vec!["contractions", "--n", "3", "orbits", "--json"],
        vec!["lift", "--n", "7", "--matrix", "3,1,2,1"],
    ] {
        let (a, b) = (pgrade(&args), pgrade(&args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let seq = pgrade(&["contractions", "--n", "4", "equations", "--json", "--sequential"]);
    let par = pgrade(&["contractions", "--n", "4", "equations", "--json"]);
    assert_eq!(seq.stdout, par.stdout);
}

#[test]
fn text_mirrors_json() {
    let report = json(&["contractions", "--n", "3", "equations"]);
    let text = pgrade(&["contractions", "--n", "3", "equations"]).stdout;
    for eq in report["data"]["equations"].as_array().unwrap() {
        assert!(text.contains(eq["text"].as_str().unwrap()));
    }
    let verify = json(&["verify", "--n", "3"]);
    let text = pgrade(&["verify", "--n", "3"]).stdout;
    for section in verify["sections"].as_array().unwrap() {
        for check in section["checks"].as_array().unwrap() {
            assert!(text.contains(&format!("PASS {}: {}", check["name"].as_str().unwrap(), check["detail"].as_str().unwrap())));
        }
    }
    assert!(text.trim_end().ends_with("result: PASS"));
}

#[test]
fn out_writes_a_file() {
    let dir = std::env::temp_dir().join(format!("pgrade-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cartan.json");
    let run = pgrade(&["cartan", "--n", "3", "--json", "--out", path.to_str().unwrap()]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.is_empty());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written, json(&["cartan", "--n", "3"]));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn timing_is_opt_in() {
    assert!(json(&["cartan", "--n", "3"]).get("timing_ms").is_none());
    assert!(json(&["cartan", "--n", "3", "--timing"])["timing_ms"].is_u64());
}
