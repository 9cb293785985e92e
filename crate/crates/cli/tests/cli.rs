use std::path::PathBuf;
use std::process::{Command, Output};

fn bornctl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bornctl"))
        .args(args)
        .env_remove("BORNCTL_SEED")
        .output()
        .expect("binary runs")
}

fn scenario(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "scenarios", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn coherence_and_fibration_pass_at_seed_7() {
    let o = bornctl(&["suite", "coherence", "fibration", "--seed", "7", "--instances", "200"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn dangling_reference_is_an_ingestion_error() {
    let o = bornctl(&["check", &scenario("broken.json")]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("dangling reference"));
}

#[test]
fn valid_scenario_checks_clean() {
    let o = bornctl(&["check", &scenario("default.json"), "--report", "json"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["format_version"], 1);
}

#[test]
fn declared_violations_are_classified() {
    let o = bornctl(&["check", &scenario("violations.json"), "--report", "json"]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let class_of = |name: &str| {
        v["declarations"]
            .as_array()
            .unwrap()
            .iter()
            .find(|d| d["name"] == name)
            .and_then(|d| d["class"].as_str())
            .map(str::to_string)
    };
    assert_eq!(class_of("WholeLine").as_deref(), Some("NotCompatible"));
    assert_eq!(class_of("proj1").as_deref(), Some("NotProper"));
    assert_eq!(class_of("Twisted").as_deref(), Some("CocycleViolation"));
    assert_eq!(class_of("lopsided").as_deref(), Some("NotEquivariant"));
}

#[test]
fn replay_reproduces_a_planted_failure() {
    let dir = tempfile::tempdir().unwrap();
    let cex = dir.path().join("cex.json");
    let cex_s = cex.to_string_lossy().into_owned();
    let o = bornctl(&["suite", "scenario", "--scenario", &scenario("fake_sigma.json"), "--cex-out", &cex_s]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));
    let recorded: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cex).unwrap()).unwrap();
    assert_eq!(recorded["format_version"], 1);
    assert_eq!(recorded["law"], "sigma_natural");

    let r = bornctl(&["replay", &cex_s]);
    assert_eq!(code(&r), 1);
    assert!(stdout(&r).starts_with("reproduced"), "{}", stdout(&r));
}

#[test]
fn replay_of_a_passing_case_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cex = dir.path().join("cex.json");
    let doc = serde_json::json!({
        "format_version": 1,
        "suite": "coherence",
        "law": "pentagon",
        "config": {
            "instance": {"instance": "mat", "ring": {"kind": "int"}},
            "group": "Z2",
            "shape": "whole4",
            "shapes": ["whole4"],
            "max_points": 6, "max_rank": 3, "max_radius": 4
        },
        "seed": 1,
        "case": 0,
        "error": {"class": "LawViolation", "message": "edited by hand"}
    });
    std::fs::write(&cex, doc.to_string()).unwrap();
    let r = bornctl(&["replay", &cex.to_string_lossy()]);
    assert_eq!(code(&r), 0, "{}", stdout(&r));
}

#[test]
fn env_seed_is_echoed() {
    let o = Command::new(env!("CARGO_BIN_EXE_bornctl"))
        .args(["suite", "strictness", "--instances", "2", "--report", "json"])
        .env("BORNCTL_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["seed"], 42);
    assert_eq!(v["seed_source"], "env");
}

#[test]
fn flag_beats_env_seed() {
    let o = Command::new(env!("CARGO_BIN_EXE_bornctl"))
        .args(["suite", "strictness", "--instances", "2", "--seed", "5", "--report", "json"])
        .env("BORNCTL_SEED", "42")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["seed"], 5);
    assert_eq!(v["seed_source"], "flag");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&bornctl(&["suite", "nonexistent"])), 2);
    assert_eq!(code(&bornctl(&["suite", "coherence", "--ring", "R"])), 2);
    assert_eq!(code(&bornctl(&["frobnicate"])), 2);
    assert_eq!(code(&bornctl(&["oracle", "nothing"])), 2);
}

#[test]
fn oracle_subcommand_runs() {
    let o = bornctl(&["oracle", "composition", "--instances", "5"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("oracle_composition"));
}

#[test]
fn ring_flag_restricts_instances() {
    let o = bornctl(&["suite", "coherence", "--instances", "4", "--ring", "Z/3", "--report", "json"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let tags = v["suites"][0]["laws"][0]["tags"].as_object().unwrap();
    assert!(tags.contains_key("instance:MatCat(Z/3)"));
    assert!(tags.contains_key("instance:ShiftCat(Z2,Z/3)"));
}

#[test]
fn json_reports_repeat_byte_for_byte_without_timing() {
    let args = ["suite", "category", "negative", "--seed", "11", "--instances", "5", "--report", "json", "--no-timing"];
    let a = bornctl(&args);
    let b = bornctl(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}
