//! The law catalog and the seeded runner.
//!
//! Case `i` of a law picks its instance, shape and group by rotating
//! through the configured lists (instances fastest), so every combination
//! is reached once the case count exceeds their product.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use crate::additive::{instance_law_names, AdditiveCategory, InstanceSpec};
use crate::error::ScenarioError;
use crate::group::FiniteGroup;
use crate::ring::RingSpec;
use crate::with_instance;

use super::fixtures::{default_shapes, group_label, group_named, Shape};
use super::gen::{GenParams, Generator};
use super::laws::{self, Breach, Ctx, LawResult};
use super::negative;
use super::par::{map_cases, Execution};
use super::report::{CaseConfig, Counterexample, ErrorInfo, LawReport, Report, SuiteReport, FORMAT_VERSION};

pub const SUITES: &[&str] = &["coherence", "fibration", "category", "oracle", "negative", "strictness", "instance"];

const COHERENCE: &[(&str, &str)] = &[
    ("pentagon", "pentagon identity for the associator of controlled objects"),
    ("triangle", "triangle identity linking associator and unitors"),
    ("inverse", "the symmetry squares to the identity"),
    ("hexagon", "hexagon identity for symmetry against associator"),
    ("naturality", "naturality of the structure isomorphisms"),
];

const FIBRATION: &[(&str, &str)] = &[
    ("strict_projection", "projection to spaces preserves the monoidal data on the nose"),
    ("exchange", "pushforward of an external product is the product of pushforwards"),
    ("bi_additivity", "the tensor product distributes over sums in each variable"),
    ("cocartesian", "the lift with identity fiber part is cocartesian"),
];

const CATEGORY: &[(&str, &str)] = &[
    ("associativity", "composition of total morphisms is associative"),
    ("identity", "identities are neutral for composition"),
    ("bilinearity", "composition is bilinear in both arguments"),
    ("witness_containment", "composite supports lie in the composed entourage"),
    ("functoriality", "pushforward along a composite is the composite of pushforwards"),
    ("cocycle_preservation", "every constructor returns validated equivariant data"),
];

const ORACLE: &[(&str, &str)] = &[
    ("oracle_composition", "matrix composition equals composition of subset functors"),
    ("oracle_pushforward", "matrix pushforward equals the functorial pushforward"),
    ("oracle_tensor", "matrix tensor equals the functorial external product"),
    ("equivariance_placement", "pointwise equivariance equals the functorial condition"),
];

const NEGATIVE: &[(&str, &str)] = &[
    ("non_proper_projection", "planted: projection of the integer plane, expects NotProper"),
    ("off_entourage_entry", "planted: entry outside every entourage, expects HullNotEntourage"),
    ("broken_cocycle", "planted: twisted action isomorphism, expects CocycleViolation"),
    ("non_equivariant_matrix", "planted: entry off its orbit, expects NotEquivariant"),
    ("fake_symmetry", "planted: identity as symmetry, expects LawViolation"),
    ("incompatible_bornology", "planted: maximal coarse structure with finite bounded sets, expects NotCompatible"),
];

const STRICTNESS: &[(&str, &str)] = &[("strict_action", "action data compose strictly over every pair of group elements")];

const PLACEMENT_NOTE: &str = "equivariance is tested pointwise as phi[g.y, g.x] = rho_N(g)[g.y]^-1 . g(phi[y, x]) . rho_M(g)[g.x]; \
equivariance_placement compares this with the functorial condition on two-point spaces";

/// Laws of `suite` with their anchors.
pub fn laws_of(suite: &str) -> Option<Vec<(String, String)>> {
    let table = match suite {
        "coherence" => COHERENCE,
        "fibration" => FIBRATION,
        "category" => CATEGORY,
        "oracle" => ORACLE,
        "negative" => NEGATIVE,
        "strictness" => STRICTNESS,
        "instance" => {
            return Some(
                instance_law_names()
                    .iter()
                    .map(|l| (l.to_string(), format!("additive instance axiom: {}", l.replace('_', " "))))
                    .collect(),
            )
        }
        _ => return None,
    };
    Some(table.iter().map(|(l, a)| (l.to_string(), a.to_string())).collect())
}

/// Knobs shared by all suites of one run.
#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    pub seed_source: String,
    pub instances: u64,
    pub additive: Vec<InstanceSpec>,
    pub shapes: Vec<Shape>,
    pub groups: Vec<Arc<FiniteGroup>>,
    /// Ring for the shift instances of the strictness and instance suites.
    pub ring: RingSpec,
    pub params: GenParams,
    pub execution: Execution,
}

pub fn shift(group: &str, ring: RingSpec) -> InstanceSpec {
    InstanceSpec::Shift {
        group: group_named(group).expect("built-in group"),
        group_name: group.to_string(),
        ring,
    }
}

impl SuiteOptions {
    pub fn defaults(seed: u64) -> Self {
        SuiteOptions {
            seed,
            seed_source: "default".into(),
            instances: 200,
            additive: vec![
                InstanceSpec::Mat(RingSpec::Mod(2)),
                InstanceSpec::Mat(RingSpec::Integers),
                InstanceSpec::Mat(RingSpec::Rationals),
                shift("Z2", RingSpec::Integers),
            ],
            shapes: default_shapes(),
            groups: ["Z2", "Z3", "trivial"].iter().map(|g| group_named(g).unwrap()).collect(),
            ring: RingSpec::Integers,
            params: GenParams::default(),
            execution: Execution::default(),
        }
    }

    /// Restricts the additive instances to matrices and shifts over `ring`.
    pub fn with_ring(mut self, ring: RingSpec) -> Self {
        self.additive = vec![InstanceSpec::Mat(ring), shift("Z2", ring)];
        self.ring = ring;
        self
    }

    fn plan(&self, suite: &str, law: &str) -> Plan {
        let mut plan = Plan {
            specs: self.additive.clone(),
            shapes: self.shapes.clone(),
            groups: self.groups.clone(),
        };
        match suite {
            "oracle" => {
                let finite: Vec<Shape> =
                    self.shapes.iter().filter(|s| !s.has_line() && !s.is_tensor()).cloned().collect();
                plan.shapes = if finite.is_empty() { vec![Shape::Whole4, Shape::Classes6] } else { finite };
            }
            "negative" => {
                let nontrivial: Vec<_> = self.groups.iter().filter(|g| g.order() > 1).cloned().collect();
                plan.groups = if nontrivial.is_empty() { vec![group_named("Z2").unwrap()] } else { nontrivial };
                if law == "fake_symmetry" {
                    let mut rings: Vec<RingSpec> = Vec::new();
                    for s in &self.additive {
                        let r = spec_ring(s);
                        if !rings.contains(&r) {
                            rings.push(r);
                        }
                    }
                    plan.specs = rings.into_iter().map(InstanceSpec::FakeSigma).collect();
                }
            }
            "strictness" => {
                plan.specs = vec![shift("Z2", self.ring), shift("Z3", self.ring)];
                plan.shapes = vec![Shape::Point];
            }
            "instance" => {
                plan.specs.push(shift("Z3", self.ring));
                plan.shapes = vec![Shape::Point];
            }
            _ => {}
        }
        plan
    }
}

fn spec_ring(s: &InstanceSpec) -> RingSpec {
    match s {
        InstanceSpec::Mat(r) | InstanceSpec::FakeSigma(r) | InstanceSpec::Shift { ring: r, .. } => *r,
    }
}

struct Plan {
    specs: Vec<InstanceSpec>,
    shapes: Vec<Shape>,
    groups: Vec<Arc<FiniteGroup>>,
}

impl Plan {
    fn config(&self, case: u64, params: GenParams) -> CaseConfig {
        let (k, s) = (self.specs.len() as u64, self.shapes.len() as u64);
        let spec = &self.specs[(case % k) as usize];
        let shape = &self.shapes[((case / k) % s) as usize];
        let group = match spec {
            InstanceSpec::Shift { group_name, .. } => group_name.clone(),
            _ => group_label(&self.groups[((case / (k * s)) % self.groups.len() as u64) as usize]),
        };
        CaseConfig {
            instance: spec.to_json(),
            group,
            shape: shape.to_string(),
            shapes: self.shapes.iter().map(Shape::to_string).collect(),
            max_points: params.max_points,
            max_rank: params.max_rank,
            max_radius: params.max_radius,
        }
    }
}

/// Result of one case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail(ErrorInfo),
    Unknown(String),
}

#[derive(Clone, Debug)]
pub struct CaseResult {
    pub outcome: Outcome,
    pub tags: Vec<String>,
}

fn dispatch<A: AdditiveCategory>(cx: &mut Ctx<'_, A>, suite: &str, law: &str) -> LawResult {
    match (suite, law) {
        ("coherence", "pentagon") => laws::pentagon(cx),
        ("coherence", "triangle") => laws::triangle(cx),
        ("coherence", "inverse") => laws::inverse(cx),
        ("coherence", "hexagon") => laws::hexagon(cx),
        ("coherence", "naturality") => laws::naturality(cx),
        ("fibration", "strict_projection") => laws::strict_projection(cx),
        ("fibration", "exchange") => laws::exchange(cx),
        ("fibration", "bi_additivity") => laws::bi_additivity(cx),
        ("fibration", "cocartesian") => laws::cocartesian(cx),
        ("category", "associativity") => laws::associativity(cx),
        ("category", "identity") => laws::identity(cx),
        ("category", "bilinearity") => laws::bilinearity(cx),
        ("category", "witness_containment") => laws::witness_containment(cx),
        ("category", "functoriality") => laws::functoriality(cx),
        ("category", "cocycle_preservation") => laws::cocycle_preservation(cx),
        ("oracle", "oracle_composition") => laws::oracle_composition(cx),
        ("oracle", "oracle_pushforward") => laws::oracle_pushforward(cx),
        ("oracle", "oracle_tensor") => laws::oracle_tensor(cx),
        ("oracle", "equivariance_placement") => laws::equivariance_placement(cx),
        ("negative", "non_proper_projection") => negative::non_proper_projection(cx),
        ("negative", "off_entourage_entry") => negative::off_entourage_entry(cx),
        ("negative", "broken_cocycle") => negative::broken_cocycle(cx),
        ("negative", "non_equivariant_matrix") => negative::non_equivariant_matrix(cx),
        ("negative", "fake_symmetry") => negative::fake_symmetry(cx),
        ("negative", "incompatible_bornology") => negative::incompatible_bornology(cx),
        ("strictness", "strict_action") => laws::strict_action(cx),
        ("instance", l) => laws::instance_law(cx, l),
        _ => Err(Breach::Violation {
            class: "UnknownLaw".into(),
            message: format!("{suite}/{law}"),
        }),
    }
}

/// Rebuilds the configuration of a case and runs it once.
pub fn run_case(suite: &str, law: &str, config: &CaseConfig, seed: u64, case: u64) -> Result<CaseResult, String> {
    let spec = InstanceSpec::parse(&config.instance, &group_named)?;
    let group = group_named(&config.group).ok_or_else(|| format!("unknown group {:?}", config.group))?;
    if group.order() > 3 {
        return Err(format!("fixture spaces cover groups of order at most 3, got {}", config.group));
    }
    if !spec.supports(&group) {
        return Err(format!("{} does not act with {}", spec.name(), config.group));
    }
    let parse = |s: &str| Shape::parse(s).ok_or_else(|| format!("unknown shape {s:?}"));
    let primary = parse(&config.shape)?;
    let shapes = config.shapes.iter().map(|s| parse(s)).collect::<Result<Vec<_>, _>>()?;
    if shapes.is_empty() {
        return Err("empty shape list".into());
    }
    let params = GenParams {
        max_points: config.max_points,
        max_rank: config.max_rank,
        max_radius: config.max_radius,
    };
    let mut base_tags = vec![
        format!("instance:{}", spec.name()),
        format!("shape:{primary}"),
        format!("group:{}", config.group),
    ];
    let run = || -> (LawResult, Vec<String>) {
        with_instance!(&spec, |cat| {
            let mut cx = Ctx {
                cat: &cat,
                group: group.clone(),
                primary: primary.clone(),
                shapes: &shapes,
                gen: Generator::new(seed, law, case, params),
                tags: Vec::new(),
            };
            let r = dispatch(&mut cx, suite, law);
            (r, cx.tags)
        })
    };
    let (result, tags) = match catch_unwind(AssertUnwindSafe(run)) {
        Ok(x) => x,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            (Err(Breach::Violation { class: "Panic".into(), message: msg }), Vec::new())
        }
    };
    base_tags.extend(tags);
    let outcome = match result {
        Ok(()) => Outcome::Pass,
        Err(Breach::Violation { class, message }) => Outcome::Fail(ErrorInfo { class, message }),
        Err(Breach::Unknown(m)) => Outcome::Unknown(m),
    };
    Ok(CaseResult { outcome, tags: base_tags })
}

fn run_law(suite: &str, law: &str, anchor: &str, opts: &SuiteOptions) -> LawReport {
    let plan = opts.plan(suite, law);
    let start = Instant::now();
    let results = map_cases(opts.instances, opts.execution, |case| {
        let config = plan.config(case, opts.params);
        let result = run_case(suite, law, &config, opts.seed, case).unwrap_or_else(|e| CaseResult {
            outcome: Outcome::Fail(ErrorInfo { class: "BadConfig".into(), message: e }),
            tags: Vec::new(),
        });
        (config, result)
    });
    let wall_ms = start.elapsed().as_millis() as u64;

    let mut report = LawReport {
        law: law.to_string(),
        anchor: anchor.to_string(),
        instances: opts.instances,
        pass: 0,
        fail: 0,
        unknown: 0,
        first_counterexample: None,
        wall_ms,
        tags: BTreeMap::new(),
        note: (law == "equivariance_placement").then(|| PLACEMENT_NOTE.to_string()),
    };
    let mut first_unknown = None;
    for (case, (config, result)) in results.into_iter().enumerate() {
        for t in result.tags {
            *report.tags.entry(t).or_insert(0) += 1;
        }
        let cex = |error: ErrorInfo| Counterexample {
            format_version: FORMAT_VERSION,
            suite: suite.to_string(),
            law: law.to_string(),
            config: config.clone(),
            seed: opts.seed,
            case: case as u64,
            error,
        };
        match result.outcome {
            Outcome::Pass => report.pass += 1,
            Outcome::Fail(e) => {
                report.fail += 1;
                if report.first_counterexample.is_none() {
                    report.first_counterexample = Some(cex(e));
                }
            }
            Outcome::Unknown(m) => {
                report.unknown += 1;
                if first_unknown.is_none() {
                    first_unknown = Some(cex(ErrorInfo { class: "Unknown".into(), message: m }));
                }
            }
        }
    }
    if report.first_counterexample.is_none() {
        report.first_counterexample = first_unknown;
    }
    report
}

/// Runs every law of one suite.
pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<SuiteReport, ScenarioError> {
    let laws = laws_of(name).ok_or_else(|| ScenarioError::UnknownSuite(name.to_string()))?;
    Ok(SuiteReport::new(name, laws.iter().map(|(l, a)| run_law(name, l, a, opts)).collect()))
}

/// Runs a single law of a suite, as the `oracle` subcommand does.
pub fn run_single(suite: &str, law: &str, opts: &SuiteOptions) -> Result<SuiteReport, ScenarioError> {
    let laws = laws_of(suite).ok_or_else(|| ScenarioError::UnknownSuite(suite.to_string()))?;
    let (l, a) = laws
        .iter()
        .find(|(l, _)| l == law)
        .ok_or_else(|| ScenarioError::UnknownSuite(format!("{suite}/{law}")))?;
    Ok(SuiteReport::new(suite, vec![run_law(suite, l, a, opts)]))
}

/// Expands `all` and rejects unknown names before anything runs.
pub fn run_suites(names: &[String], opts: &SuiteOptions) -> Result<Report, ScenarioError> {
    let mut expanded = Vec::new();
    for n in names {
        if n == "all" {
            expanded.extend(SUITES.iter().map(|s| s.to_string()));
        } else if laws_of(n).is_some() {
            expanded.push(n.clone());
        } else {
            return Err(ScenarioError::UnknownSuite(n.clone()));
        }
    }
    let suites = expanded.iter().map(|n| run_suite(n, opts)).collect::<Result<Vec<_>, _>>()?;
    Ok(Report::new(opts.seed, &opts.seed_source, opts.instances, suites))
}

/// Re-runs a serialized counterexample; `Ok(true)` when the same error
/// class comes back.
pub fn replay(cex: &Counterexample) -> Result<(bool, Outcome), String> {
    let r = run_case(&cex.suite, &cex.law, &cex.config, cex.seed, cex.case)?;
    let same = match &r.outcome {
        Outcome::Fail(e) => e.class == cex.error.class,
        Outcome::Unknown(_) => cex.error.class == "Unknown",
        Outcome::Pass => false,
    };
    Ok((same, r.outcome))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(n: u64) -> SuiteOptions {
        SuiteOptions {
            instances: n,
            ..SuiteOptions::defaults(3)
        }
    }

    #[test]
    fn every_suite_has_laws() {
        for s in SUITES {
            assert!(!laws_of(s).unwrap().is_empty(), "{s}");
        }
        assert!(laws_of("nope").is_none());
    }

    #[test]
    fn rotation_reaches_every_instance_and_shape() {
        let opts = SuiteOptions::defaults(0);
        let plan = opts.plan("coherence", "pentagon");
        let configs: Vec<_> = (0..20).map(|i| plan.config(i, opts.params)).collect();
        let instances: std::collections::BTreeSet<_> = configs.iter().map(|c| c.instance.to_string()).collect();
        let shapes: std::collections::BTreeSet<_> = configs.iter().map(|c| c.shape.clone()).collect();
        assert_eq!(instances.len(), 4);
        assert_eq!(shapes.len(), 5);
    }

    #[test]
    fn shift_cases_use_their_own_group() {
        let opts = SuiteOptions::defaults(0);
        let plan = opts.plan("coherence", "pentagon");
        for i in 0..60 {
            let c = plan.config(i, opts.params);
            if c.instance["instance"] == "shift" {
                assert_eq!(c.group, "Z2");
            }
        }
    }

    #[test]
    fn small_coherence_run_passes() {
        let r = run_suite("coherence", &small(8)).unwrap();
        for l in &r.laws {
            assert_eq!((l.fail, l.unknown), (0, 0), "{:?}", l.first_counterexample);
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let mut a = small(6);
        a.execution = Execution::Sequential;
        let mut b = small(6);
        b.execution = Execution::Parallel;
        let ra = run_suites(&["category".into()], &a).unwrap().without_timing();
        let rb = run_suites(&["category".into()], &b).unwrap().without_timing();
        assert_eq!(ra, rb);
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(matches!(
            run_suites(&["bogus".into()], &small(1)),
            Err(ScenarioError::UnknownSuite(_))
        ));
    }
}
