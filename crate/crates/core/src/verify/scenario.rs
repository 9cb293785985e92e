//! Scenario files: declarative groups, spaces, maps, objects and morphisms.
//!
//! Ingestion is two-phased. Structural problems (bad JSON, wrong version,
//! unknown names, malformed records) abort with a [`ScenarioError`]. Data
//! that parses but fails its validator is reported per declaration, and
//! declarations that depend on a rejected one are marked `blocked`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::additive::{AdditiveCategory, InstanceSpec, MatCat};
use crate::coarse::{
    morphism_check, space_tensor, BornCoarseSpace, Bornology, CoarseStructure, Entourage, MapTerm, SpaceMorphism,
};
use crate::controlled::{mor_check, obj_check, ControlledObject};
use crate::error::ScenarioError;
use crate::groth::groth_check;
use crate::group::{ActionKind, FiniteGroup, GAction};
use crate::ring::IntMod;
use crate::set::AmbientSet;
use crate::with_instance;

use super::fixtures::{group_label, group_named, Shape};
use super::gen::{GenParams, Generator};
use super::report::FORMAT_VERSION;
use super::suites::{laws_of, SuiteOptions};

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub format_version: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instances_per_law: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub suites: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub shapes: Vec<String>,
    #[serde(default)]
    pub groups: BTreeMap<String, Value>,
    #[serde(default)]
    pub spaces: BTreeMap<String, Value>,
    #[serde(default)]
    pub instances: BTreeMap<String, Value>,
    #[serde(default)]
    pub maps: BTreeMap<String, Value>,
    #[serde(default)]
    pub objects: BTreeMap<String, Value>,
    #[serde(default)]
    pub morphisms: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub kind: String,
    pub name: String,
    /// `ok`, `violation` or `blocked`.
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub format_version: u64,
    pub declarations: Vec<CheckEntry>,
}

impl CheckReport {
    pub fn exit_code(&self) -> i32 {
        if self.declarations.iter().all(|d| d.status == "ok") {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("check report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for d in &self.declarations {
            out.push_str(&format!("{:<9} {:<16} {}", d.kind, d.name, d.status));
            match (&d.class, &d.message) {
                (Some(c), Some(m)) => out.push_str(&format!(": {c}: {m}")),
                (None, Some(m)) => out.push_str(&format!(" ({m})")),
                _ => {}
            }
            out.push('\n');
        }
        out
    }
}

fn invalid(name: &str, reason: impl Into<String>) -> ScenarioError {
    ScenarioError::Invalid { name: name.to_string(), reason: reason.into() }
}

fn dangling(kind: &'static str, name: &str) -> ScenarioError {
    ScenarioError::DanglingReference { kind, name: name.to_string() }
}

fn str_field<'a>(v: &'a Value, key: &str, owner: &str) -> Result<&'a str, ScenarioError> {
    v.get(key).and_then(Value::as_str).ok_or_else(|| invalid(owner, format!("missing string field {key:?}")))
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Scenario, ScenarioError> {
        let raw: Value = serde_json::from_str(text)?;
        match raw.get("format_version").and_then(Value::as_u64) {
            Some(FORMAT_VERSION) => {}
            Some(v) => return Err(ScenarioError::Version(v)),
            None => return Err(invalid("format_version", "missing or not an integer")),
        }
        let s: Scenario = serde_json::from_value(raw)?;
        s.resolve_names()?;
        Ok(s)
    }

    pub fn load(path: &std::path::Path) -> Result<Scenario, ScenarioError> {
        Scenario::from_json(&std::fs::read_to_string(path)?)
    }

    /// Every reference names a declaration of the right kind, and suite and
    /// shape names are known.
    fn resolve_names(&self) -> Result<(), ScenarioError> {
        for s in &self.suites {
            if s != "all" && laws_of(s).is_none() {
                return Err(ScenarioError::UnknownSuite(s.clone()));
            }
        }
        for s in &self.shapes {
            Shape::parse(s).ok_or_else(|| invalid(s, "unknown shape"))?;
        }
        for (name, v) in &self.spaces {
            if let Some(parts) = v.get("tensor") {
                let parts = parts.as_array().filter(|p| p.len() == 2).ok_or_else(|| invalid(name, "tensor needs two spaces"))?;
                for p in parts {
                    let p = p.as_str().ok_or_else(|| invalid(name, "tensor factors are space names"))?;
                    if !self.spaces.contains_key(p) {
                        return Err(dangling("space", p));
                    }
                }
            } else {
                let g = str_field(v, "group", name)?;
                if !self.groups.contains_key(g) {
                    return Err(dangling("group", g));
                }
            }
        }
        for (name, v) in &self.maps {
            for key in ["src", "dst"] {
                let s = str_field(v, key, name)?;
                if !self.spaces.contains_key(s) {
                    return Err(dangling("space", s));
                }
            }
        }
        for (name, v) in &self.objects {
            let s = str_field(v, "space", name)?;
            if !self.spaces.contains_key(s) {
                return Err(dangling("space", s));
            }
            let i = str_field(v, "instance", name)?;
            if !self.instances.contains_key(i) {
                return Err(dangling("instance", i));
            }
        }
        for (name, v) in &self.morphisms {
            for key in ["src", "dst"] {
                let o = str_field(v, key, name)?;
                if !self.objects.contains_key(o) {
                    return Err(dangling("object", o));
                }
            }
            if let Some(m) = v.get("map") {
                let m = m.as_str().ok_or_else(|| invalid(name, "map is a map name"))?;
                if !self.maps.contains_key(m) {
                    return Err(dangling("map", m));
                }
            }
        }
        Ok(())
    }

    /// Overrides the given options with the scenario's seed, counts,
    /// shapes and declared instances.
    pub fn suite_options(&self, mut opts: SuiteOptions) -> Result<SuiteOptions, ScenarioError> {
        if let Some(seed) = self.seed {
            opts.seed = seed;
            opts.seed_source = "scenario".into();
        }
        if let Some(k) = self.instances_per_law {
            opts.instances = k;
        }
        if !self.shapes.is_empty() {
            opts.shapes = self.shapes.iter().filter_map(|s| Shape::parse(s)).collect();
        }
        if !self.instances.is_empty() {
            opts.additive = self
                .instances
                .iter()
                .map(|(n, v)| InstanceSpec::parse(v, &group_named).map_err(|e| invalid(n, e)))
                .collect::<Result<_, _>>()?;
        }
        Ok(opts)
    }

    /// Runs every validator; see the module docs for the split between
    /// errors and violations.
    pub fn check(&self) -> Result<CheckReport, ScenarioError> {
        let mut out = Vec::new();
        let mut note = |kind: &str, name: &str, r: Result<(), (String, String)>| {
            let (status, class, message) = match r {
                Ok(()) => ("ok", None, None),
                Err((c, m)) if c == "blocked" => ("blocked", None, Some(m)),
                Err((c, m)) => ("violation", Some(c), Some(m)),
            };
            out.push(CheckEntry {
                kind: kind.into(),
                name: name.into(),
                status: status.into(),
                class,
                message,
            });
        };

        let mut groups = BTreeMap::new();
        for (name, v) in &self.groups {
            match parse_group(name, v)? {
                Ok(g) => {
                    groups.insert(name.clone(), Arc::new(g));
                    note("group", name, Ok(()));
                }
                Err(e) => note("group", name, Err((e.class().into(), e.to_string()))),
            }
        }

        let mut spaces: BTreeMap<String, Option<Arc<BornCoarseSpace>>> = BTreeMap::new();
        for name in self.spaces.keys() {
            let r = self.build_space(name, &groups, &mut spaces, &mut BTreeSet::new())?;
            note("space", name, r.map(|_| ()));
        }
        let ready = |n: &str| spaces.get(n).cloned().flatten();

        let mut instances = BTreeMap::new();
        for (name, v) in &self.instances {
            let spec = InstanceSpec::parse(v, &|g| groups.get(g).cloned().or_else(|| group_named(g)))
                .map_err(|e| invalid(name, e))?;
            instances.insert(name.clone(), spec);
            note("instance", name, Ok(()));
        }

        let mut maps = BTreeMap::new();
        for (name, v) in &self.maps {
            let (src, dst) = (str_field(v, "src", name)?, str_field(v, "dst", name)?);
            let r = match (ready(src), ready(dst)) {
                (Some(x), Some(y)) => {
                    let term = MapTerm::parse(v.get("term").ok_or_else(|| invalid(name, "map without term"))?, x.ambient(), y.ambient())
                        .map_err(|e| invalid(name, e))?;
                    match morphism_check(term, x, y) {
                        Ok(f) => {
                            maps.insert(name.clone(), f);
                            Ok(())
                        }
                        Err(e) => Err((e.class().to_string(), e.to_string())),
                    }
                }
                _ => Err(blocked("space")),
            };
            note("map", name, r);
        }

        // Objects and morphisms are typed by their instance, so each
        // instance gets its own pass.
        let mut typed = Vec::new();
        for (iname, spec) in &instances {
            let found = with_instance!(spec, |cat| self.check_typed(&cat, iname, &ready, &maps)?);
            typed.extend(found);
        }
        typed.sort_by(|a, b| (a.0 == "morphism", &a.1).cmp(&(b.0 == "morphism", &b.1)));
        for (kind, name, r) in typed {
            note(kind, &name, r);
        }
        Ok(CheckReport { format_version: FORMAT_VERSION, declarations: out })
    }

    #[allow(clippy::type_complexity)]
    fn check_typed<A: AdditiveCategory>(
        &self,
        cat: &A,
        iname: &str,
        ready: &dyn Fn(&str) -> Option<Arc<BornCoarseSpace>>,
        maps: &BTreeMap<String, SpaceMorphism>,
    ) -> Result<Vec<(&'static str, String, Result<(), (String, String)>)>, ScenarioError> {
        let mut out = Vec::new();
        let mut objects: BTreeMap<&str, Arc<ControlledObject<A>>> = BTreeMap::new();
        for (name, v) in self.objects.iter().filter(|(_, v)| v["instance"] == iname) {
            let r = match ready(v["space"].as_str().unwrap_or_default()) {
                Some(space) => {
                    let (fibers, rho) = ControlledObject::parse_parts(cat, &space, v).map_err(|e| invalid(name, e))?;
                    match obj_check(cat, space, fibers, rho) {
                        Ok(m) => {
                            objects.insert(name, Arc::new(m));
                            Ok(())
                        }
                        Err(e) => Err((e.class().to_string(), e.to_string())),
                    }
                }
                None => Err(blocked("space")),
            };
            out.push(("object", name.clone(), r));
        }
        for (name, v) in &self.morphisms {
            let (src, dst) = (str_field(v, "src", name)?, str_field(v, "dst", name)?);
            if self.objects[src]["instance"] != iname {
                continue;
            }
            if self.objects[dst]["instance"] != iname {
                return Err(invalid(name, "source and target use different instances"));
            }
            let (m, n) = match (objects.get(src), objects.get(dst)) {
                (Some(m), Some(n)) => (m.clone(), n.clone()),
                _ => {
                    out.push(("morphism", name.clone(), Err(blocked("object"))));
                    continue;
                }
            };
            let r = match v.get("map").and_then(Value::as_str) {
                None => {
                    let entries = crate::controlled::ControlledMorphism::<A>::parse_entries(cat, m.space(), v)
                        .map_err(|e| invalid(name, e))?;
                    mor_check(cat, m, n, entries).map(|_| ())
                }
                Some(f) => match maps.get(f) {
                    Some(f) => {
                        let entries = entry_blocks(cat, &m, &n, v).map_err(|e| invalid(name, e))?;
                        groth_check(cat, f.clone(), m, n, entries).map(|_| ())
                    }
                    None => {
                        out.push(("morphism", name.clone(), Err(blocked("map"))));
                        continue;
                    }
                },
            };
            out.push(("morphism", name.clone(), r.map_err(|e| (e.class().to_string(), e.to_string()))));
        }
        Ok(out)
    }

    fn build_space(
        &self,
        name: &str,
        groups: &BTreeMap<String, Arc<FiniteGroup>>,
        done: &mut BTreeMap<String, Option<Arc<BornCoarseSpace>>>,
        visiting: &mut BTreeSet<String>,
    ) -> Result<Result<Arc<BornCoarseSpace>, (String, String)>, ScenarioError> {
        if let Some(s) = done.get(name) {
            return Ok(s.clone().ok_or_else(|| blocked("space")));
        }
        if !visiting.insert(name.to_string()) {
            return Err(invalid(name, "tensor declarations form a cycle"));
        }
        let v = &self.spaces[name];
        let r = if let Some(parts) = v.get("tensor").and_then(Value::as_array) {
            let a = self.build_space(parts[0].as_str().unwrap(), groups, done, visiting)?;
            let b = self.build_space(parts[1].as_str().unwrap(), groups, done, visiting)?;
            match (a, b) {
                (Ok(a), Ok(b)) => space_tensor(&a, &b).map(Arc::new).map_err(|e| (e.class().to_string(), e.to_string())),
                _ => Err(blocked("space")),
            }
        } else {
            match groups.get(str_field(v, "group", name)?) {
                Some(g) => explicit_space(name, v, g)?,
                None => Err(blocked("group")),
            }
        };
        visiting.remove(name);
        done.insert(name.to_string(), r.as_ref().ok().cloned());
        Ok(r)
    }
}

fn blocked(on: &str) -> (String, String) {
    ("blocked".into(), format!("depends on a rejected {on}"))
}

/// `{"builtin": "Z2"}` or an explicit table.
fn parse_group(name: &str, v: &Value) -> Result<Result<FiniteGroup, crate::error::GroupError>, ScenarioError> {
    if let Some(b) = v.get("builtin") {
        let b = b.as_str().ok_or_else(|| invalid(name, "builtin is a group name"))?;
        let g = group_named(b).ok_or_else(|| invalid(name, format!("unknown built-in group {b:?}")))?;
        return Ok(Ok((*g).clone()));
    }
    let labels: Vec<String> = serde_json::from_value(v.get("elements").cloned().unwrap_or(Value::Null))
        .map_err(|_| invalid(name, "elements must be a list of labels"))?;
    let mult: Vec<Vec<u32>> = serde_json::from_value(v.get("mult").cloned().unwrap_or(Value::Null))
        .map_err(|_| invalid(name, "mult must be a table of indices"))?;
    let unit = v.get("unit").and_then(Value::as_u64).ok_or_else(|| invalid(name, "missing unit"))? as u32;
    let inv: Vec<u32> = serde_json::from_value(v.get("inv").cloned().unwrap_or(Value::Null))
        .map_err(|_| invalid(name, "inv must be a list of indices"))?;
    Ok(FiniteGroup::check(labels, mult, unit, inv))
}

fn explicit_space(
    name: &str,
    v: &Value,
    group: &Arc<FiniteGroup>,
) -> Result<Result<Arc<BornCoarseSpace>, (String, String)>, ScenarioError> {
    let violation = |class: &str, msg: String| Ok(Err((class.to_string(), msg)));
    if let Some(f) = v.get("fixture") {
        let f = f.as_str().ok_or_else(|| invalid(name, "fixture is a shape name"))?;
        let shape = Shape::parse(f).ok_or_else(|| invalid(name, format!("unknown fixture {f:?}")))?;
        let builtin = group_named(&group_label(group)).filter(|b| **b == **group && group.order() <= 3);
        if builtin.is_none() {
            return Err(invalid(name, "fixture spaces need a built-in cyclic group of order at most 3"));
        }
        return Ok(Ok(shape.build(group)));
    }
    let set = match v.get("set").and_then(|s| s.get("kind")).and_then(Value::as_str) {
        Some("finite") => {
            let labels: Vec<String> = serde_json::from_value(v["set"].get("labels").cloned().unwrap_or(Value::Null))
                .map_err(|_| invalid(name, "finite set needs labels"))?;
            match AmbientSet::finite(labels) {
                Ok(s) => s,
                Err(e) => return Err(invalid(name, e.to_string())),
            }
        }
        Some("int_line") => AmbientSet::IntLine,
        _ => return Err(invalid(name, "set must be finite or int_line")),
    };
    let action_v = v.get("action").ok_or_else(|| invalid(name, "missing action"))?;
    let kind = match action_v.get("kind").and_then(Value::as_str) {
        Some("trivial") => None,
        Some("table") => Some(ActionKind::Table(
            serde_json::from_value(action_v.get("table").cloned().unwrap_or(Value::Null))
                .map_err(|_| invalid(name, "table action needs a table"))?,
        )),
        Some("affine") => Some(ActionKind::Affine(
            serde_json::from_value(action_v.get("maps").cloned().unwrap_or(Value::Null))
                .map_err(|_| invalid(name, "affine action needs maps"))?,
        )),
        _ => return Err(invalid(name, "action kind must be trivial, table or affine")),
    };
    let action = match kind {
        None => GAction::trivial(group.clone(), set.clone()),
        Some(k) => match GAction::check(group.clone(), set.clone(), k) {
            Ok(a) => a,
            Err(e) => return violation(e.class(), e.to_string()),
        },
    };
    let coarse_v = v.get("coarse").ok_or_else(|| invalid(name, "missing coarse structure"))?;
    let coarse = match coarse_v.get("kind").and_then(Value::as_str) {
        Some("whole") => Ok(CoarseStructure::whole(&action)),
        Some("discrete") => Ok(CoarseStructure::discrete(&action)),
        Some("metric") => CoarseStructure::metric(&action),
        Some("generated") => {
            let gens = coarse_v
                .get("generators")
                .and_then(Value::as_array)
                .ok_or_else(|| invalid(name, "generated structure needs generators"))?
                .iter()
                .map(|e| Entourage::parse(&set, e))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| invalid(name, e))?;
            CoarseStructure::generated_finite(&action, gens)
        }
        _ => return Err(invalid(name, "coarse kind must be whole, discrete, metric or generated")),
    };
    let mut coarse = match coarse {
        Ok(c) => c,
        Err(e) => return violation(e.class(), e.to_string()),
    };
    if let Some(b) = v.get("search_bound") {
        coarse = coarse.with_search_bound(b.as_u64().ok_or_else(|| invalid(name, "search_bound is an integer"))?);
    }
    let born = match v.get("bornology").and_then(Value::as_str) {
        Some("all") => Bornology::AllSubsets,
        Some("finite") => Bornology::FiniteSubsets,
        _ => return Err(invalid(name, "bornology must be all or finite")),
    };
    match BornCoarseSpace::new(coarse, born) {
        Ok(s) => Ok(Ok(Arc::new(s))),
        Err(e) => violation(e.class(), e.to_string()),
    }
}

/// Block entries `to ∈ dst`, `from ∈ src` of a total morphism.
fn entry_blocks<A: AdditiveCategory>(
    cat: &A,
    src: &ControlledObject<A>,
    dst: &ControlledObject<A>,
    v: &Value,
) -> Result<BTreeMap<(crate::set::Point, crate::set::Point), A::Mor>, String> {
    crate::controlled::parse_entry_table(cat, dst.space(), src.space(), v)
}

/// The first object emitted for `seed` on the four-point space with the
/// swap action of `Z/2`, over `Z/2` matrices, wrapped as a scenario that
/// `check` accepts.
pub fn fixture_scenario(seed: u64) -> Value {
    let group = group_named("Z2").unwrap();
    let space = Shape::Whole4.build(&group);
    let cat = MatCat::new(IntMod::new(2).unwrap());
    let mut gen = Generator::new(seed, "fixture", 0, GenParams::default());
    let params = gen.params;
    let m = gen.object(&cat, &space, params.max_points, params.max_rank);
    let mut object = m.to_json(&cat);
    object["space"] = json!("X");
    object["instance"] = json!("A");
    json!({
        "format_version": FORMAT_VERSION,
        "seed": seed,
        "groups": {"G": {"builtin": "Z2"}},
        "spaces": {"X": {"fixture": "whole4", "group": "G"}},
        "instances": {"A": {"instance": "mat", "ring": {"kind": "mod", "n": 2}}},
        "objects": {"M": object},
    })
}
