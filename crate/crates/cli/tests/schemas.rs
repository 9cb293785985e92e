use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn repo(parts: &[&str]) -> PathBuf {
    let mut p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", ".."].iter().collect();
    p.extend(parts);
    p
}

fn load(parts: &[&str]) -> Value {
    let path = repo(parts);
    serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Checks the top-level `required` keys and the `format_version` constant.
fn assert_shape(schema: &str, doc: &Value) {
    let s = load(&["schemas", schema]);
    for key in s["required"].as_array().unwrap() {
        let key = key.as_str().unwrap();
        assert!(doc.get(key).is_some(), "{schema}: missing {key}");
    }
    if let Some(v) = s["properties"]["format_version"].get("const") {
        assert_eq!(&doc["format_version"], v, "{schema}");
    }
    if let Some(extra) = s.get("additionalProperties").and_then(Value::as_bool) {
        if !extra {
            let known = s["properties"].as_object().unwrap();
            for k in doc.as_object().unwrap().keys() {
                assert!(known.contains_key(k), "{schema}: unexpected key {k}");
            }
        }
    }
}

fn bornctl_json(args: &[&str]) -> Value {
    let o = Command::new(env!("CARGO_BIN_EXE_bornctl")).args(args).env_remove("BORNCTL_SEED").output().unwrap();
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn shipped_scenarios_have_the_schema_shape() {
    for name in ["default.json", "broken.json", "violations.json", "fake_sigma.json"] {
        assert_shape("scenario.schema.json", &load(&["scenarios", name]));
    }
    assert_shape("scenario.schema.json", &load(&["crates", "core", "tests", "golden", "object_seed0.json"]));
}

#[test]
fn reports_have_the_schema_shape() {
    assert_shape("report.schema.json", &load(&["crates", "core", "tests", "golden", "report_seed0.json"]));
    let scenario = repo(&["scenarios", "fake_sigma.json"]);
    let failing = bornctl_json(&["suite", "scenario", "--scenario", scenario.to_str().unwrap(), "--report", "json"]);
    assert_shape("report.schema.json", &failing);
    let cex = failing["suites"][0]["laws"]
        .as_array()
        .unwrap()
        .iter()
        .find_map(|l| l["first_counterexample"].as_object().cloned())
        .expect("a counterexample");
    assert_shape("counterexample.schema.json", &Value::Object(cex));
}

#[test]
fn check_reports_have_the_schema_shape() {
    for name in ["default.json", "violations.json"] {
        let r = bornctl_json(&["check", repo(&["scenarios", name]).to_str().unwrap(), "--report", "json"]);
        assert_shape("check.schema.json", &r);
    }
}
