//! Symbolic entourages: subsets of `X × X` with decidable membership and
//! exact finite thickenings.

use std::collections::BTreeSet;
use std::fmt;

use serde_json::{json, Value};

use crate::error::SpaceError;
use crate::group::{GAction, GroupElem};
use crate::set::{AmbientSet, Point};

pub type PairSet = BTreeSet<(Point, Point)>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Entourage {
    FinitePairs(PairSet),
    Diagonal,
    /// `{(x, y) : |x − y| ≤ r}` on the integer line.
    MetricBall(u64),
    Product(Box<Entourage>, Box<Entourage>),
    Union(Vec<Entourage>),
    Whole,
    /// `U ∘ V` kept unevaluated when no closed form applies.
    Composite(Box<Entourage>, Box<Entourage>),
}

/// Half-width of the window scanned when both factors of a composite have
/// infinite thickenings.
const FALLBACK_WINDOW: i64 = 256;

impl Entourage {
    pub fn product(a: Entourage, b: Entourage) -> Self {
        Entourage::Product(Box::new(a), Box::new(b))
    }

    pub fn validate(&self, amb: &AmbientSet) -> Result<(), SpaceError> {
        let bad = || SpaceError::ShapeMismatch(self.to_string());
        match self {
            Entourage::FinitePairs(ps) => {
                if ps.iter().all(|(x, y)| amb.contains(x) && amb.contains(y)) {
                    Ok(())
                } else {
                    Err(bad())
                }
            }
            Entourage::Diagonal | Entourage::Whole => Ok(()),
            Entourage::MetricBall(_) => match amb {
                AmbientSet::IntLine => Ok(()),
                _ => Err(bad()),
            },
            Entourage::Product(a, b) => match amb {
                AmbientSet::Pair(x, y) => {
                    a.validate(x)?;
                    b.validate(y)
                }
                _ => Err(bad()),
            },
            Entourage::Union(us) => us.iter().try_for_each(|u| u.validate(amb)),
            Entourage::Composite(u, v) => {
                u.validate(amb)?;
                v.validate(amb)
            }
        }
    }

    pub fn contains(&self, amb: &AmbientSet, x: &Point, y: &Point) -> bool {
        match self {
            Entourage::FinitePairs(ps) => ps.contains(&(x.clone(), y.clone())),
            Entourage::Diagonal => x == y,
            Entourage::MetricBall(r) => match (x, y) {
                (Point::Int(a), Point::Int(b)) => a.abs_diff(*b) <= *r,
                _ => false,
            },
            Entourage::Product(a, b) => match (amb, x, y) {
                (AmbientSet::Pair(sa, sb), Point::Pair(x1, x2), Point::Pair(y1, y2)) => {
                    a.contains(sa, x1, y1) && b.contains(sb, x2, y2)
                }
                _ => false,
            },
            Entourage::Union(us) => us.iter().any(|u| u.contains(amb, x, y)),
            Entourage::Whole => amb.contains(x) && amb.contains(y),
            Entourage::Composite(u, v) => {
                // ∃z: (x,z) ∈ U and (z,y) ∈ V
                let single_y = BTreeSet::from([y.clone()]);
                if let Some(zs) = v.thicken(amb, &single_y) {
                    return zs.iter().any(|z| u.contains(amb, x, z));
                }
                let single_x = BTreeSet::from([x.clone()]);
                if let Some(zs) = u.invert().thicken(amb, &single_x) {
                    return zs.iter().any(|z| v.contains(amb, z, y));
                }
                window(amb, x, y).iter().any(|z| u.contains(amb, x, z) && v.contains(amb, z, y))
            }
        }
    }

    /// `U[B] = {x : ∃y ∈ B, (x, y) ∈ U}`, or `None` if it is infinite.
    pub fn thicken(&self, amb: &AmbientSet, b: &BTreeSet<Point>) -> Option<BTreeSet<Point>> {
        if b.is_empty() {
            return Some(BTreeSet::new());
        }
        match self {
            Entourage::FinitePairs(ps) => Some(ps.iter().filter(|(_, y)| b.contains(y)).map(|(x, _)| x.clone()).collect()),
            Entourage::Diagonal => Some(b.clone()),
            Entourage::MetricBall(r) => {
                let r = *r as i64;
                let mut out = BTreeSet::new();
                for p in b {
                    if let Point::Int(n) = p {
                        out.extend((n - r..=n + r).map(Point::Int));
                    }
                }
                Some(out)
            }
            Entourage::Product(u, v) => {
                let (sa, sb) = match amb {
                    AmbientSet::Pair(sa, sb) => (sa, sb),
                    _ => return Some(BTreeSet::new()),
                };
                let mut out = BTreeSet::new();
                for p in b {
                    if let Point::Pair(p1, p2) = p {
                        let l = u.thicken(sa, &BTreeSet::from([(**p1).clone()]))?;
                        let r = v.thicken(sb, &BTreeSet::from([(**p2).clone()]))?;
                        for x in &l {
                            for y in &r {
                                out.insert(Point::pair(x.clone(), y.clone()));
                            }
                        }
                    }
                }
                Some(out)
            }
            Entourage::Union(us) => {
                let mut out = BTreeSet::new();
                for u in us {
                    out.extend(u.thicken(amb, b)?);
                }
                Some(out)
            }
            Entourage::Whole => amb.points().map(|ps| ps.into_iter().collect()),
            Entourage::Composite(u, v) => u.thicken(amb, &v.thicken(amb, b)?),
        }
    }

    pub fn invert(&self) -> Entourage {
        match self {
            Entourage::FinitePairs(ps) => Entourage::FinitePairs(ps.iter().map(|(x, y)| (y.clone(), x.clone())).collect()),
            Entourage::Diagonal | Entourage::MetricBall(_) | Entourage::Whole => self.clone(),
            Entourage::Product(a, b) => Entourage::product(a.invert(), b.invert()),
            Entourage::Union(us) => Entourage::Union(us.iter().map(Entourage::invert).collect()),
            Entourage::Composite(u, v) => Entourage::Composite(Box::new(v.invert()), Box::new(u.invert())),
        }
    }

    /// `U ∘ V = {(x, z) : ∃y, (x, y) ∈ U, (y, z) ∈ V}`, in closed form where possible.
    pub fn compose(&self, other: &Entourage, amb: &AmbientSet) -> Entourage {
        use Entourage::*;
        match (self, other) {
            (Diagonal, v) => v.clone(),
            (u, Diagonal) => u.clone(),
            (MetricBall(r), MetricBall(s)) => MetricBall(r + s),
            (Union(us), v) => Union(us.iter().map(|u| u.compose(v, amb)).collect()),
            (u, Union(vs)) => Union(vs.iter().map(|v| u.compose(v, amb)).collect()),
            (Product(a1, b1), Product(a2, b2)) => match amb {
                AmbientSet::Pair(sa, sb) => Entourage::product(a1.compose(a2, sa), b1.compose(b2, sb)),
                _ => Composite(Box::new(self.clone()), Box::new(other.clone())),
            },
            (Whole, Whole) => Whole,
            (FinitePairs(ps), v) => {
                // z ranges over V⁻¹[{y}] for each (x, y)
                let vi = v.invert();
                let mut out = PairSet::new();
                for (x, y) in ps {
                    match vi.thicken(amb, &BTreeSet::from([y.clone()])) {
                        Some(zs) => out.extend(zs.into_iter().map(|z| (x.clone(), z))),
                        None => return Composite(Box::new(self.clone()), Box::new(other.clone())),
                    }
                }
                FinitePairs(out)
            }
            (u, FinitePairs(ps)) => {
                let mut out = PairSet::new();
                for (y, z) in ps {
                    match u.thicken(amb, &BTreeSet::from([y.clone()])) {
                        Some(xs) => out.extend(xs.into_iter().map(|x| (x, z.clone()))),
                        None => return Composite(Box::new(self.clone()), Box::new(other.clone())),
                    }
                }
                FinitePairs(out)
            }
            _ => Composite(Box::new(self.clone()), Box::new(other.clone())),
        }
    }

    /// The translate `gU = {(g·x, g·y) : (x, y) ∈ U}`.
    pub fn translate(&self, action: &GAction, g: GroupElem) -> Entourage {
        match self {
            Entourage::FinitePairs(ps) => {
                Entourage::FinitePairs(ps.iter().map(|(x, y)| (action.act(g, x), action.act(g, y))).collect())
            }
            // affine maps with ε = ±1 are isometries
            Entourage::Diagonal | Entourage::MetricBall(_) | Entourage::Whole => self.clone(),
            Entourage::Product(a, b) => {
                let (l, r) = (action.at(&[0]).unwrap(), action.at(&[1]).unwrap());
                Entourage::product(a.translate(l, g), b.translate(r, g))
            }
            Entourage::Union(us) => Entourage::Union(us.iter().map(|u| u.translate(action, g)).collect()),
            Entourage::Composite(u, v) => {
                Entourage::Composite(Box::new(u.translate(action, g)), Box::new(v.translate(action, g)))
            }
        }
    }

    /// Paths of atomic coordinates along which this entourage has infinite
    /// thickenings of finite sets.
    pub fn unbounded_leaves(&self, amb: &AmbientSet) -> BTreeSet<Vec<u8>> {
        fn walk(e: &Entourage, amb: &AmbientSet, prefix: &mut Vec<u8>, out: &mut BTreeSet<Vec<u8>>) {
            match e {
                Entourage::Whole => {
                    for leaf in amb.leaf_paths() {
                        if !amb.at(&leaf).unwrap().is_finite() {
                            let mut p = prefix.clone();
                            p.extend(leaf);
                            out.insert(p);
                        }
                    }
                }
                Entourage::Product(a, b) => {
                    if let AmbientSet::Pair(sa, sb) = amb {
                        prefix.push(0);
                        walk(a, sa, prefix, out);
                        prefix.pop();
                        prefix.push(1);
                        walk(b, sb, prefix, out);
                        prefix.pop();
                    }
                }
                Entourage::Union(us) => us.iter().for_each(|u| walk(u, amb, prefix, out)),
                Entourage::Composite(u, v) => {
                    walk(u, amb, prefix, out);
                    walk(v, amb, prefix, out);
                }
                _ => {}
            }
        }
        let mut out = BTreeSet::new();
        walk(self, amb, &mut Vec::new(), &mut out);
        out
    }

    pub fn to_json(&self, amb: &AmbientSet) -> Value {
        match self {
            Entourage::FinitePairs(ps) => json!({
                "kind": "finite_pairs",
                "pairs": ps.iter().map(|(x, y)| json!([amb.render(x), amb.render(y)])).collect::<Vec<_>>(),
            }),
            Entourage::Diagonal => json!({"kind": "diagonal"}),
            Entourage::MetricBall(r) => json!({"kind": "metric_ball", "r": r}),
            Entourage::Product(a, b) => {
                let (sa, sb) = match amb {
                    AmbientSet::Pair(sa, sb) => (&**sa, &**sb),
                    _ => (amb, amb),
                };
                json!({"kind": "product", "left": a.to_json(sa), "right": b.to_json(sb)})
            }
            Entourage::Union(us) => json!({"kind": "union", "parts": us.iter().map(|u| u.to_json(amb)).collect::<Vec<_>>()}),
            Entourage::Whole => json!({"kind": "whole"}),
            Entourage::Composite(u, v) => json!({"kind": "composite", "left": u.to_json(amb), "right": v.to_json(amb)}),
        }
    }

    pub fn parse(amb: &AmbientSet, v: &Value) -> Result<Entourage, String> {
        let kind = v.get("kind").and_then(Value::as_str).ok_or("entourage without kind")?;
        let sub = |key: &str, a: &AmbientSet| -> Result<Entourage, String> {
            Entourage::parse(a, v.get(key).ok_or_else(|| format!("missing {key}"))?)
        };
        let e = match kind {
            "finite_pairs" => {
                let mut ps = PairSet::new();
                for p in v.get("pairs").and_then(Value::as_array).ok_or("missing pairs")? {
                    let arr = p.as_array().filter(|a| a.len() == 2).ok_or("pair must have two points")?;
                    let x = amb.parse(&arr[0]).map_err(|e| e.to_string())?;
                    let y = amb.parse(&arr[1]).map_err(|e| e.to_string())?;
                    ps.insert((x, y));
                }
                Entourage::FinitePairs(ps)
            }
            "diagonal" => Entourage::Diagonal,
            "metric_ball" => Entourage::MetricBall(v.get("r").and_then(Value::as_u64).ok_or("missing radius")?),
            "product" => match amb {
                AmbientSet::Pair(sa, sb) => Entourage::product(sub("left", sa)?, sub("right", sb)?),
                _ => return Err("product entourage on a non-product set".into()),
            },
            "union" => Entourage::Union(
                v.get("parts")
                    .and_then(Value::as_array)
                    .ok_or("missing parts")?
                    .iter()
                    .map(|p| Entourage::parse(amb, p))
                    .collect::<Result<_, _>>()?,
            ),
            "whole" => Entourage::Whole,
            "composite" => Entourage::Composite(Box::new(sub("left", amb)?), Box::new(sub("right", amb)?)),
            other => return Err(format!("unknown entourage kind {other:?}")),
        };
        e.validate(amb).map_err(|e| e.to_string())?;
        Ok(e)
    }
}

fn window(amb: &AmbientSet, x: &Point, y: &Point) -> Vec<Point> {
    match (amb, x, y) {
        (AmbientSet::IntLine, Point::Int(a), Point::Int(b)) => {
            let lo = a.min(b) - FALLBACK_WINDOW;
            let hi = a.max(b) + FALLBACK_WINDOW;
            (lo..=hi).map(Point::Int).collect()
        }
        (AmbientSet::Pair(sa, sb), Point::Pair(x1, x2), Point::Pair(y1, y2)) => {
            let l = window(sa, x1, y1);
            let r = window(sb, x2, y2);
            l.iter().flat_map(|p| r.iter().map(move |q| Point::pair(p.clone(), q.clone()))).collect()
        }
        _ => amb.points().unwrap_or_default(),
    }
}

impl fmt::Display for Entourage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entourage::FinitePairs(ps) => {
                write!(f, "{{")?;
                for (i, (x, y)) in ps.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "({x},{y})")?;
                }
                write!(f, "}}")
            }
            Entourage::Diagonal => write!(f, "Diagonal"),
            Entourage::MetricBall(r) => write!(f, "MetricBall({r})"),
            Entourage::Product(a, b) => write!(f, "{a}×{b}"),
            Entourage::Union(us) => {
                write!(f, "Union[")?;
                for (i, u) in us.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{u}")?;
                }
                write!(f, "]")
            }
            Entourage::Whole => write!(f, "Whole"),
            Entourage::Composite(u, v) => write!(f, "({u})∘({v})"),
        }
    }
}

pub fn ent_invert(u: &Entourage) -> Entourage {
    u.invert()
}

pub fn ent_compose(u: &Entourage, v: &Entourage, amb: &AmbientSet) -> Entourage {
    u.compose(v, amb)
}

pub fn ent_thicken(u: &Entourage, amb: &AmbientSet, b: &BTreeSet<Point>) -> Option<BTreeSet<Point>> {
    u.thicken(amb, b)
}

/// `GU = ⋃_g gU`, with repeated translates dropped.
pub fn ent_saturate(action: &GAction, u: &Entourage) -> Entourage {
    let mut parts: Vec<Entourage> = Vec::new();
    for g in action.group().elements() {
        let t = u.translate(action, g);
        if !parts.contains(&t) {
            parts.push(t);
        }
    }
    if parts.len() == 1 {
        parts.pop().unwrap()
    } else if parts.iter().all(|p| matches!(p, Entourage::FinitePairs(_))) {
        Entourage::FinitePairs(
            parts
                .into_iter()
                .flat_map(|p| match p {
                    Entourage::FinitePairs(ps) => ps,
                    _ => unreachable!(),
                })
                .collect(),
        )
    } else {
        Entourage::Union(parts)
    }
}

/// G-saturation of a finite set of pairs under the diagonal action.
pub fn saturate_pairs(action: &GAction, pairs: &PairSet) -> PairSet {
    let mut out = PairSet::new();
    for g in action.group().elements() {
        for (x, y) in pairs {
            out.insert((action.act(g, x), action.act(g, y)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{ActionKind, FiniteGroup};
    use std::sync::Arc;

    fn ints(v: &[i64]) -> BTreeSet<Point> {
        v.iter().map(|&n| Point::Int(n)).collect()
    }

    fn pairs(v: &[(u32, u32)]) -> Entourage {
        Entourage::FinitePairs(v.iter().map(|&(a, b)| (Point::Label(a), Point::Label(b))).collect())
    }

    fn negation() -> GAction {
        GAction::check(
            Arc::new(FiniteGroup::cyclic(2)),
            AmbientSet::IntLine,
            ActionKind::Affine(vec![(1, 0), (-1, 0)]),
        )
        .unwrap()
    }

    #[test]
    fn metric_ball_is_symmetric() {
        assert_eq!(Entourage::MetricBall(3).invert(), Entourage::MetricBall(3));
        assert_eq!(pairs(&[(0, 1)]).invert(), pairs(&[(1, 0)]));
    }

    #[test]
    fn metric_composition_against_chains() {
        let amb = AmbientSet::IntLine;
        let c = Entourage::MetricBall(2).compose(&Entourage::MetricBall(3), &amb);
        let brute = |x: i64, z: i64| (-10..=10).any(|y: i64| x.abs_diff(y) <= 2 && y.abs_diff(z) <= 3);
        assert!(c.contains(&amb, &Point::Int(0), &Point::Int(5)));
        assert!(!c.contains(&amb, &Point::Int(0), &Point::Int(6)));
        for x in -5..=5 {
            for z in -5..=5 {
                assert_eq!(c.contains(&amb, &Point::Int(x), &Point::Int(z)), brute(x, z));
            }
        }
    }

    #[test]
    fn finite_pairs_join() {
        let amb = AmbientSet::numbered(3);
        assert_eq!(pairs(&[(0, 1)]).compose(&pairs(&[(1, 2)]), &amb), pairs(&[(0, 2)]));
        let u = pairs(&[(0, 1), (2, 2)]);
        assert_eq!(Entourage::Diagonal.compose(&u, &amb), u);
    }

    #[test]
    fn thickenings() {
        let amb = AmbientSet::IntLine;
        assert_eq!(Entourage::Diagonal.thicken(&amb, &ints(&[4])), Some(ints(&[4])));
        assert_eq!(Entourage::MetricBall(1).thicken(&amb, &ints(&[0])), Some(ints(&[-1, 0, 1])));
        let fin = AmbientSet::numbered(3);
        let u = pairs(&[(0, 1), (2, 1)]);
        let got = u.thicken(&fin, &BTreeSet::from([Point::Label(1)])).unwrap();
        assert_eq!(got, BTreeSet::from([Point::Label(0), Point::Label(2)]));
        assert_eq!(Entourage::Whole.thicken(&amb, &ints(&[0])), None);
    }

    #[test]
    fn product_thickening_is_a_square() {
        let amb = AmbientSet::pair(AmbientSet::IntLine, AmbientSet::IntLine);
        let u = Entourage::product(Entourage::MetricBall(2), Entourage::MetricBall(2));
        let b = BTreeSet::from([Point::pair(Point::Int(0), Point::Int(0))]);
        let t = u.thicken(&amb, &b).unwrap();
        assert_eq!(t.len(), 25);
        assert!(t.contains(&Point::pair(Point::Int(-2), Point::Int(2))));
    }

    #[test]
    fn saturation_under_negation() {
        let a = negation();
        let u = Entourage::FinitePairs(BTreeSet::from([(Point::Int(1), Point::Int(2))]));
        let s = ent_saturate(&a, &u);
        let want = Entourage::FinitePairs(BTreeSet::from([
            (Point::Int(1), Point::Int(2)),
            (Point::Int(-1), Point::Int(-2)),
        ]));
        assert_eq!(s, want);
        assert_eq!(ent_saturate(&a, &s), s);
    }

    #[test]
    fn json_round_trip() {
        let amb = AmbientSet::pair(AmbientSet::numbered(2), AmbientSet::IntLine);
        let u = Entourage::Union(vec![
            Entourage::product(Entourage::Whole, Entourage::MetricBall(3)),
            Entourage::FinitePairs(BTreeSet::from([(
                Point::pair(Point::Label(0), Point::Int(1)),
                Point::pair(Point::Label(1), Point::Int(-1)),
            )])),
        ]);
        assert_eq!(Entourage::parse(&amb, &u.to_json(&amb)).unwrap(), u);
        assert!(Entourage::parse(&AmbientSet::numbered(2), &json!({"kind": "metric_ball", "r": 1})).is_err());
    }
}
