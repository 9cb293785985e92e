//! Acceptance run: one line per criterion, nonzero exit if any fails.
//!
//! Set `BORNCTL_BLESS=1` to rewrite the golden files instead of comparing.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use bornctl::coarse::MapTerm;
use bornctl::verify::fixtures::{group_named, Shape};
use bornctl::verify::laws::map_rejection;
use bornctl::verify::par::Execution;
use bornctl::verify::report::{LawReport, Report};
use bornctl::verify::scenario::fixture_scenario;
use bornctl::verify::suites::{run_suites, SuiteOptions};

/// Cases per law for criteria 1, 2, 4.
const LAW_CASES: u64 = 200;
/// Finite-space cases for the oracle comparison.
const ORACLE_CASES: u64 = 100;
/// Wall-clock ceiling per coherence law.
const MAX_LAW_MS: u64 = 60_000;
const SEED: u64 = 7;
/// Cases per law in the seed-0 golden report.
const GOLDEN_CASES: u64 = 10;

type Check = Result<String, String>;

fn run(suite: &str, cases: u64) -> Report {
    let opts = SuiteOptions { instances: cases, ..SuiteOptions::defaults(SEED) };
    run_suites(&[suite.to_string()], &opts).expect("known suite")
}

fn clean(l: &LawReport, min_cases: u64) -> Result<(), String> {
    if l.instances < min_cases {
        return Err(format!("{}: only {} cases", l.law, l.instances));
    }
    if l.fail != 0 || l.unknown != 0 {
        let first = l.first_counterexample.as_ref().map(|c| format!("{}: {}", c.error.class, c.error.message));
        return Err(format!("{}: {} fail, {} unknown, first {:?}", l.law, l.fail, l.unknown, first));
    }
    Ok(())
}

fn tagged<'a>(l: &'a LawReport, prefix: &str) -> BTreeSet<&'a str> {
    l.tags.keys().filter_map(|k| k.strip_prefix(prefix)).collect()
}

fn coherence() -> Check {
    let r = run("coherence", LAW_CASES);
    let s = r.suite("coherence").unwrap();
    let want_instances = ["MatCat(Z/2)", "MatCat(Z)", "MatCat(Q)", "ShiftCat(Z2,Z)"];
    for law in ["pentagon", "triangle", "inverse", "hexagon"] {
        let l = s.law(law).ok_or(format!("{law} missing"))?;
        clean(l, LAW_CASES)?;
        if l.wall_ms > MAX_LAW_MS {
            return Err(format!("{law} took {} ms", l.wall_ms));
        }
        let inst = tagged(l, "instance:");
        if let Some(missing) = want_instances.iter().find(|i| !inst.contains(*i)) {
            return Err(format!("{law} never ran on {missing}"));
        }
        let shapes: Vec<Shape> = tagged(l, "shape:").into_iter().filter_map(Shape::parse).collect();
        if shapes.len() < 4 || !shapes.iter().any(Shape::has_line) || !shapes.iter().any(Shape::is_tensor) {
            return Err(format!("{law} shape coverage too thin: {shapes:?}"));
        }
    }
    Ok(format!("4 laws x {LAW_CASES} cases, 4 instances, 5 shapes"))
}

fn fibration() -> Check {
    let r = run("fibration", LAW_CASES);
    let s = r.suite("fibration").unwrap();
    for law in ["strict_projection", "exchange", "bi_additivity", "cocartesian"] {
        clean(s.law(law).ok_or(format!("{law} missing"))?, LAW_CASES)?;
    }
    let ex = s.law("exchange").unwrap();
    let ni = ex.tags.get("map:non_injective").copied().unwrap_or(0);
    let ns = ex.tags.get("map:non_surjective").copied().unwrap_or(0);
    if ni == 0 || ns == 0 {
        return Err(format!("exchange saw {ni} non-injective and {ns} non-surjective maps"));
    }
    Ok(format!("4 laws x {LAW_CASES}; exchange over {ni} non-injective, {ns} non-surjective maps"))
}

fn oracle() -> Check {
    let r = run("oracle", ORACLE_CASES);
    let s = r.suite("oracle").unwrap();
    for law in ["oracle_composition", "oracle_pushforward", "oracle_tensor"] {
        let l = s.law(law).ok_or(format!("{law} missing"))?;
        clean(l, ORACLE_CASES)?;
        if tagged(l, "shape:").into_iter().filter_map(Shape::parse).any(|s| s.has_line()) {
            return Err(format!("{law} ran on an infinite space"));
        }
    }
    clean(s.law("equivariance_placement").unwrap(), ORACLE_CASES)?;
    Ok(format!("3 operations x {ORACLE_CASES} finite cases, exact agreement"))
}

fn category() -> Check {
    let r = run("category", LAW_CASES);
    let s = r.suite("category").unwrap();
    let laws = ["associativity", "identity", "bilinearity", "witness_containment", "functoriality", "cocycle_preservation"];
    for law in laws {
        clean(s.law(law).ok_or(format!("{law} missing"))?, LAW_CASES)?;
    }
    Ok(format!("{} laws x {LAW_CASES}", laws.len()))
}

fn negative() -> Check {
    let r = run("negative", LAW_CASES);
    let s = r.suite("negative").unwrap();
    if s.laws.len() != 6 {
        return Err(format!("{} planted violations, expected 6", s.laws.len()));
    }
    for l in &s.laws {
        clean(l, LAW_CASES)?;
    }
    let z = Shape::LineMetric.build(&group_named("trivial").unwrap());
    let zz = Shape::tensor(Shape::LineMetric, Shape::LineMetric).build(&group_named("trivial").unwrap());
    let got = map_rejection(MapTerm::Proj1, zz, z).map(|e| e.class());
    if got != Some("NotProper") {
        return Err(format!("Proj1 on the integer plane gave {got:?}"));
    }
    Ok("6 planted violations detected with their classes; Proj1 gives NotProper".into())
}

fn strictness() -> Check {
    let r = run("strictness", 20);
    let l = r.suite("strictness").unwrap().law("strict_action").unwrap();
    clean(l, 20)?;
    for (inst, pairs) in [("ShiftCat(Z2,Z)", "pairs:4"), ("ShiftCat(Z3,Z)", "pairs:9")] {
        if !tagged(l, "instance:").contains(inst) || !l.tags.contains_key(pairs) {
            return Err(format!("{inst} not covered exhaustively"));
        }
    }
    Ok("all 4 pairs of Z/2 and all 9 pairs of Z/3".into())
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn golden(name: &str, actual: &str, bless: bool) -> Result<(), String> {
    let path = golden_dir().join(name);
    if bless {
        std::fs::create_dir_all(golden_dir()).map_err(|e| e.to_string())?;
        std::fs::write(&path, actual).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let expected = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected != actual {
        return Err(format!("{name} differs from the golden file"));
    }
    Ok(())
}

fn determinism() -> Check {
    let bless = std::env::var_os("BORNCTL_BLESS").is_some();
    let all = vec!["all".to_string()];
    let mut seq = SuiteOptions { instances: GOLDEN_CASES, ..SuiteOptions::defaults(0) };
    seq.execution = Execution::Sequential;
    let par = SuiteOptions { execution: Execution::Parallel, ..seq.clone() };
    let a = run_suites(&all, &seq).unwrap().without_timing().to_json();
    let b = run_suites(&all, &seq).unwrap().without_timing().to_json();
    let c = run_suites(&all, &par).unwrap().without_timing().to_json();
    if a != b {
        return Err("two sequential runs differ".into());
    }
    if a != c {
        return Err("parallel run differs from sequential".into());
    }
    let fixture = serde_json::to_string_pretty(&fixture_scenario(0)).unwrap() + "\n";
    golden("object_seed0.json", &fixture, bless)?;
    golden("report_seed0.json", &a, bless)?;
    Ok(if bless { "golden files rewritten".into() } else { "repeat runs identical, seed-0 golden files match".into() })
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 7] = [
        ("coherence", coherence),
        ("fibration", fibration),
        ("oracle", oracle),
        ("category laws", category),
        ("negative", negative),
        ("strictness", strictness),
        ("determinism", determinism),
    ];
    let mut ok = true;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", i + 1),
            Err(why) => {
                ok = false;
                println!("criterion {} {name}: FAIL ({why})", i + 1);
            }
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
