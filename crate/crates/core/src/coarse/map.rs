//! Maps between G-bornological coarse spaces.
//!
//! A [`MapTerm`] is the user-facing syntax. Every term is normalized to a
//! [`MapNf`]: a tree matching the target's product shape whose leaves read a
//! single atomic coordinate of the source and apply one atomic operation.
//! Two maps with the same source and target are equal iff their normal forms
//! are equal, and controlledness and properness are decided leaf by leaf.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use super::entourage::{Entourage, PairSet};
use super::structure::{space_tensor, BornCoarseSpace, Cofinal};
use crate::error::MapError;
use crate::group::ActionKind;
use crate::set::{AmbientSet, Point};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MapTerm {
    Identity,
    /// Image indices of a map between finite sets.
    Table(Vec<u32>),
    /// `x ↦ a·x + b` on the integer line.
    Affine { a: i64, b: i64 },
    /// `(x, y) ↦ (f x, g y)`.
    PairMap(Box<MapTerm>, Box<MapTerm>),
    Proj1,
    Proj2,
    Const(Point),
    /// `parts[0] ∘ parts[1] ∘ …`, applied right to left.
    Compose(Vec<MapTerm>),
    /// `((x, y), z) ↦ (x, (y, z))`.
    Assoc,
    /// `(x, (y, z)) ↦ ((x, y), z)`.
    AssocInv,
    /// `(x, y) ↦ (y, x)`.
    Swap,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LeafOp {
    Id,
    Table(Vec<u32>),
    Affine(i64, i64),
    Const(Point),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MapNf {
    Tuple(Box<MapNf>, Box<MapNf>),
    /// Reads the source coordinate at `path`; constant leaves use the empty path.
    Leaf { path: Vec<u8>, op: LeafOp },
}

impl LeafOp {
    fn apply(&self, p: &Point) -> Point {
        match (self, p) {
            (LeafOp::Id, _) => p.clone(),
            (LeafOp::Table(t), Point::Label(i)) => Point::Label(t[*i as usize]),
            (LeafOp::Affine(a, b), Point::Int(x)) => Point::Int(a * x + b),
            (LeafOp::Const(c), _) => c.clone(),
            _ => panic!("leaf operation applied to a point of the wrong shape"),
        }
    }

    /// `self ∘ inner`.
    fn after(&self, inner: &LeafOp) -> LeafOp {
        match (self, inner) {
            (op, LeafOp::Const(c)) => LeafOp::Const(op.apply(c)),
            (LeafOp::Const(c), _) => LeafOp::Const(c.clone()),
            (LeafOp::Id, x) | (x, LeafOp::Id) => x.clone(),
            (LeafOp::Table(t), LeafOp::Table(s)) => LeafOp::Table(s.iter().map(|&i| t[i as usize]).collect()),
            (LeafOp::Affine(a, b), LeafOp::Affine(c, d)) => LeafOp::Affine(a * c, a * d + b),
            _ => panic!("leaf operations of incompatible shapes"),
        }
    }
}

impl MapNf {
    /// Identity on the coordinate at `prefix`, expanded down to atoms.
    pub fn eta(amb: &AmbientSet, prefix: Vec<u8>) -> MapNf {
        match amb {
            AmbientSet::Pair(a, b) => {
                let mut l = prefix.clone();
                l.push(0);
                let mut r = prefix;
                r.push(1);
                MapNf::Tuple(Box::new(MapNf::eta(a, l)), Box::new(MapNf::eta(b, r)))
            }
            _ => MapNf::Leaf { path: prefix, op: LeafOp::Id },
        }
    }

    pub fn constant(amb: &AmbientSet, p: &Point) -> MapNf {
        match (amb, p) {
            (AmbientSet::Pair(a, b), Point::Pair(x, y)) => {
                MapNf::Tuple(Box::new(MapNf::constant(a, x)), Box::new(MapNf::constant(b, y)))
            }
            _ => MapNf::Leaf {
                path: Vec::new(),
                op: LeafOp::Const(p.clone()),
            },
        }
    }

    fn tuple(a: MapNf, b: MapNf) -> MapNf {
        MapNf::Tuple(Box::new(a), Box::new(b))
    }

    fn prefixed(self, step: u8) -> MapNf {
        match self {
            MapNf::Tuple(a, b) => MapNf::tuple(a.prefixed(step), b.prefixed(step)),
            MapNf::Leaf { op: LeafOp::Const(c), .. } => MapNf::Leaf {
                path: Vec::new(),
                op: LeafOp::Const(c),
            },
            MapNf::Leaf { mut path, op } => {
                path.insert(0, step);
                MapNf::Leaf { path, op }
            }
        }
    }

    pub fn apply(&self, x: &Point) -> Point {
        match self {
            MapNf::Tuple(a, b) => Point::pair(a.apply(x), b.apply(x)),
            MapNf::Leaf { path, op } => match op {
                LeafOp::Const(c) => c.clone(),
                _ => op.apply(x.at(path).expect("normal form path outside the source")),
            },
        }
    }

    fn at(&self, path: &[u8]) -> Option<&MapNf> {
        let mut cur = self;
        for &s in path {
            cur = match (cur, s) {
                (MapNf::Tuple(a, _), 0) => a,
                (MapNf::Tuple(_, b), 1) => b,
                _ => return None,
            };
        }
        Some(cur)
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &MapNf) -> MapNf {
        match self {
            MapNf::Tuple(a, b) => MapNf::tuple(a.after(inner), b.after(inner)),
            MapNf::Leaf { op: LeafOp::Const(c), .. } => MapNf::Leaf {
                path: Vec::new(),
                op: LeafOp::Const(c.clone()),
            },
            MapNf::Leaf { path, op } => match inner.at(path) {
                Some(MapNf::Leaf { path: p2, op: op2 }) => {
                    let op = op.after(op2);
                    let path = if matches!(op, LeafOp::Const(_)) { Vec::new() } else { p2.clone() };
                    MapNf::Leaf { path, op }
                }
                // an identity leaf reading a non-atomic coordinate copies a subtree
                Some(sub) if *op == LeafOp::Id => sub.clone(),
                _ => panic!("normal forms of incompatible shapes"),
            },
        }
    }

    /// Canonical leaf operations: identity tables and `x ↦ x` become `Id`,
    /// constant tables, `a = 0` affine maps, and anything reading a
    /// one-point coordinate become `Const`.
    pub fn simplify(self, src: &AmbientSet) -> MapNf {
        match self {
            MapNf::Tuple(a, b) => MapNf::tuple(a.simplify(src), b.simplify(src)),
            MapNf::Leaf { path, op } => {
                let op = match op {
                    LeafOp::Table(t) if t.iter().enumerate().all(|(i, &v)| v as usize == i) => LeafOp::Id,
                    LeafOp::Table(t) if !t.is_empty() && t.iter().all(|&v| v == t[0]) => LeafOp::Const(Point::Label(t[0])),
                    LeafOp::Affine(1, 0) => LeafOp::Id,
                    LeafOp::Affine(0, b) => LeafOp::Const(Point::Int(b)),
                    op => op,
                };
                let op = match (&op, src.at(&path)) {
                    (LeafOp::Const(_), _) => op,
                    (_, Some(AmbientSet::Finite(ls))) if ls.len() == 1 => LeafOp::Const(op.apply(&Point::Label(0))),
                    _ => op,
                };
                let path = if matches!(op, LeafOp::Const(_)) { Vec::new() } else { path };
                MapNf::Leaf { path, op }
            }
        }
    }

    /// Leaves with the target coordinate path they produce.
    pub fn leaves(&self) -> Vec<(Vec<u8>, &Vec<u8>, &LeafOp)> {
        fn walk<'a>(nf: &'a MapNf, prefix: &mut Vec<u8>, out: &mut Vec<(Vec<u8>, &'a Vec<u8>, &'a LeafOp)>) {
            match nf {
                MapNf::Tuple(a, b) => {
                    prefix.push(0);
                    walk(a, prefix, out);
                    prefix.pop();
                    prefix.push(1);
                    walk(b, prefix, out);
                    prefix.pop();
                }
                MapNf::Leaf { path, op } => out.push((prefix.clone(), path, op)),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    fn typecheck(&self, src: &AmbientSet, dst: &AmbientSet) -> Result<(), MapError> {
        let bad = |why: &str| MapError::ShapeMismatch(why.to_string());
        match (self, dst) {
            (MapNf::Tuple(a, b), AmbientSet::Pair(da, db)) => {
                a.typecheck(src, da)?;
                b.typecheck(src, db)
            }
            (MapNf::Tuple(..), _) => Err(bad("tuple into an atomic set")),
            (MapNf::Leaf { op: LeafOp::Const(c), .. }, _) => {
                if dst.contains(c) {
                    Ok(())
                } else {
                    Err(bad("constant outside the target"))
                }
            }
            (MapNf::Leaf { path, op }, _) => {
                let s = src.at(path).ok_or_else(|| bad("path outside the source"))?;
                match (op, s, dst) {
                    (LeafOp::Id, AmbientSet::IntLine, AmbientSet::IntLine) => Ok(()),
                    (LeafOp::Id, AmbientSet::Finite(a), AmbientSet::Finite(b)) if a.len() <= b.len() => Ok(()),
                    (LeafOp::Table(t), AmbientSet::Finite(a), AmbientSet::Finite(b))
                        if t.len() == a.len() && t.iter().all(|&v| (v as usize) < b.len()) =>
                    {
                        Ok(())
                    }
                    (LeafOp::Affine(..), AmbientSet::IntLine, AmbientSet::IntLine) => Ok(()),
                    _ => Err(bad("leaf operation does not fit its coordinates")),
                }
            }
        }
    }
}

fn infer_dst(term: &MapTerm, src: &AmbientSet) -> Option<AmbientSet> {
    match (term, src) {
        (MapTerm::Identity, _) => Some(src.clone()),
        (MapTerm::Affine { .. }, AmbientSet::IntLine) => Some(AmbientSet::IntLine),
        (MapTerm::PairMap(f, g), AmbientSet::Pair(a, b)) => Some(AmbientSet::pair(infer_dst(f, a)?, infer_dst(g, b)?)),
        (MapTerm::Proj1, AmbientSet::Pair(a, _)) => Some((**a).clone()),
        (MapTerm::Proj2, AmbientSet::Pair(_, b)) => Some((**b).clone()),
        (MapTerm::Swap, AmbientSet::Pair(a, b)) => Some(AmbientSet::pair((**b).clone(), (**a).clone())),
        (MapTerm::Assoc, AmbientSet::Pair(ab, c)) => match &**ab {
            AmbientSet::Pair(a, b) => Some(AmbientSet::pair((**a).clone(), AmbientSet::pair((**b).clone(), (**c).clone()))),
            _ => None,
        },
        (MapTerm::AssocInv, AmbientSet::Pair(a, bc)) => match &**bc {
            AmbientSet::Pair(b, c) => Some(AmbientSet::pair(AmbientSet::pair((**a).clone(), (**b).clone()), (**c).clone())),
            _ => None,
        },
        (MapTerm::Compose(parts), _) => {
            let mut cur = src.clone();
            for t in parts.iter().rev() {
                cur = infer_dst(t, &cur)?;
            }
            Some(cur)
        }
        _ => None,
    }
}

impl MapTerm {
    /// Normal form of this term as a map `src → dst`.
    pub fn normalize(&self, src: &AmbientSet, dst: &AmbientSet) -> Result<MapNf, MapError> {
        let nf = self.raw_nf(src, dst)?;
        nf.typecheck(src, dst)?;
        Ok(nf.simplify(src))
    }

    fn raw_nf(&self, src: &AmbientSet, dst: &AmbientSet) -> Result<MapNf, MapError> {
        let bad = |why: &str| MapError::ShapeMismatch(format!("{self}: {why}"));
        let pair_of = |s: &AmbientSet| -> Result<(AmbientSet, AmbientSet), MapError> {
            match s {
                AmbientSet::Pair(a, b) => Ok(((**a).clone(), (**b).clone())),
                _ => Err(bad("expected a product")),
            }
        };
        let expect = |want: AmbientSet| -> Result<(), MapError> {
            if want == *dst {
                Ok(())
            } else {
                Err(bad("target does not match"))
            }
        };
        Ok(match self {
            MapTerm::Identity => {
                expect(src.clone())?;
                MapNf::eta(src, Vec::new())
            }
            MapTerm::Table(t) => MapNf::Leaf {
                path: Vec::new(),
                op: LeafOp::Table(t.clone()),
            },
            MapTerm::Affine { a, b } => MapNf::Leaf {
                path: Vec::new(),
                op: LeafOp::Affine(*a, *b),
            },
            MapTerm::PairMap(f, g) => {
                let (a, b) = pair_of(src)?;
                let (c, d) = pair_of(dst)?;
                MapNf::tuple(f.raw_nf(&a, &c)?.prefixed(0), g.raw_nf(&b, &d)?.prefixed(1))
            }
            MapTerm::Proj1 => {
                let (a, _) = pair_of(src)?;
                expect(a.clone())?;
                MapNf::eta(&a, vec![0])
            }
            MapTerm::Proj2 => {
                let (_, b) = pair_of(src)?;
                expect(b.clone())?;
                MapNf::eta(&b, vec![1])
            }
            MapTerm::Const(p) => {
                if !dst.contains(p) {
                    return Err(bad("constant outside the target"));
                }
                MapNf::constant(dst, p)
            }
            MapTerm::Assoc | MapTerm::AssocInv | MapTerm::Swap => {
                expect(infer_dst(self, src).ok_or_else(|| bad("source has the wrong shape"))?)?;
                match self {
                    MapTerm::Assoc => {
                        let (ab, c) = pair_of(src)?;
                        let (a, b) = pair_of(&ab)?;
                        MapNf::tuple(
                            MapNf::eta(&a, vec![0, 0]),
                            MapNf::tuple(MapNf::eta(&b, vec![0, 1]), MapNf::eta(&c, vec![1])),
                        )
                    }
                    MapTerm::AssocInv => {
                        let (a, bc) = pair_of(src)?;
                        let (b, c) = pair_of(&bc)?;
                        MapNf::tuple(
                            MapNf::tuple(MapNf::eta(&a, vec![0]), MapNf::eta(&b, vec![1, 0])),
                            MapNf::eta(&c, vec![1, 1]),
                        )
                    }
                    _ => {
                        let (a, b) = pair_of(src)?;
                        MapNf::tuple(MapNf::eta(&b, vec![1]), MapNf::eta(&a, vec![0]))
                    }
                }
            }
            MapTerm::Compose(parts) => {
                if parts.is_empty() {
                    return MapTerm::Identity.raw_nf(src, dst);
                }
                let mut cur = src.clone();
                let mut acc = MapNf::eta(src, Vec::new());
                for (k, t) in parts.iter().enumerate().rev() {
                    let next = if k == 0 {
                        dst.clone()
                    } else {
                        infer_dst(t, &cur).ok_or_else(|| bad("cannot infer an intermediate set"))?
                    };
                    let nf = t.raw_nf(&cur, &next)?;
                    nf.typecheck(&cur, &next)?;
                    acc = nf.after(&acc);
                    cur = next;
                }
                acc
            }
        })
    }

    pub fn to_json(&self, src: &AmbientSet, dst: &AmbientSet) -> Value {
        let halves = |s: &AmbientSet| match s {
            AmbientSet::Pair(a, b) => ((**a).clone(), (**b).clone()),
            _ => (s.clone(), s.clone()),
        };
        match self {
            MapTerm::Identity => json!({"kind": "identity"}),
            MapTerm::Table(t) => json!({"kind": "table", "table": t}),
            MapTerm::Affine { a, b } => json!({"kind": "affine", "a": a, "b": b}),
            MapTerm::PairMap(f, g) => {
                let ((a, b), (c, d)) = (halves(src), halves(dst));
                json!({"kind": "pair", "left": f.to_json(&a, &c), "right": g.to_json(&b, &d)})
            }
            MapTerm::Proj1 => json!({"kind": "proj1"}),
            MapTerm::Proj2 => json!({"kind": "proj2"}),
            MapTerm::Const(p) => json!({"kind": "const", "point": dst.render(p)}),
            MapTerm::Compose(parts) => {
                json!({"kind": "compose", "parts": parts.iter().map(|p| p.to_string()).collect::<Vec<_>>()})
            }
            MapTerm::Assoc => json!({"kind": "assoc"}),
            MapTerm::AssocInv => json!({"kind": "assoc_inv"}),
            MapTerm::Swap => json!({"kind": "swap"}),
        }
    }

    pub fn parse(v: &Value, src: &AmbientSet, dst: &AmbientSet) -> Result<MapTerm, String> {
        let kind = v.get("kind").and_then(Value::as_str).ok_or("map without kind")?;
        let halves = |s: &AmbientSet| match s {
            AmbientSet::Pair(a, b) => Ok(((**a).clone(), (**b).clone())),
            _ => Err("pair map on a non-product set".to_string()),
        };
        Ok(match kind {
            "identity" => MapTerm::Identity,
            "table" => {
                if let Some(images) = v.get("images").and_then(Value::as_array) {
                    let mut t = Vec::new();
                    for im in images {
                        match dst.parse(im).map_err(|e| e.to_string())? {
                            Point::Label(i) => t.push(i),
                            _ => return Err("table image is not a label".into()),
                        }
                    }
                    MapTerm::Table(t)
                } else {
                    let t = v.get("table").and_then(Value::as_array).ok_or("table without images")?;
                    MapTerm::Table(
                        t.iter()
                            .map(|x| x.as_u64().map(|n| n as u32).ok_or("table entries must be indices"))
                            .collect::<Result<_, _>>()?,
                    )
                }
            }
            "affine" => MapTerm::Affine {
                a: v.get("a").and_then(Value::as_i64).ok_or("affine without a")?,
                b: v.get("b").and_then(Value::as_i64).unwrap_or(0),
            },
            "pair" => {
                let ((a, b), (c, d)) = (halves(src)?, halves(dst)?);
                MapTerm::PairMap(
                    Box::new(MapTerm::parse(v.get("left").ok_or("missing left")?, &a, &c)?),
                    Box::new(MapTerm::parse(v.get("right").ok_or("missing right")?, &b, &d)?),
                )
            }
            "proj1" => MapTerm::Proj1,
            "proj2" => MapTerm::Proj2,
            "const" => MapTerm::Const(dst.parse(v.get("point").ok_or("missing point")?).map_err(|e| e.to_string())?),
            "assoc" => MapTerm::Assoc,
            "assoc_inv" => MapTerm::AssocInv,
            "swap" => MapTerm::Swap,
            other => return Err(format!("unknown map kind {other:?}")),
        })
    }
}

impl fmt::Display for MapTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapTerm::Identity => write!(f, "id"),
            MapTerm::Table(t) => write!(f, "Table{t:?}"),
            MapTerm::Affine { a, b } => write!(f, "x↦{a}x{b:+}"),
            MapTerm::PairMap(a, b) => write!(f, "({a})×({b})"),
            MapTerm::Proj1 => write!(f, "Proj1"),
            MapTerm::Proj2 => write!(f, "Proj2"),
            MapTerm::Const(p) => write!(f, "Const({p})"),
            MapTerm::Compose(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, "∘")?;
                    }
                    write!(f, "({p})")?;
                }
                Ok(())
            }
            MapTerm::Assoc => write!(f, "Assoc"),
            MapTerm::AssocInv => write!(f, "AssocInv"),
            MapTerm::Swap => write!(f, "Swap"),
        }
    }
}

/// Control certificate: `(f×f)(cofinal_src(i)) ⊆ cofinal_dst(scale·i + offset)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct IndexMap {
    pub scale: u64,
    pub offset: u64,
}

impl IndexMap {
    pub fn at(&self, i: u64) -> u64 {
        self.scale * i + self.offset
    }

    fn join(self, other: IndexMap) -> IndexMap {
        IndexMap {
            scale: self.scale.max(other.scale),
            offset: self.offset.max(other.offset),
        }
    }
}

/// A certified equivariant, controlled and proper map.
#[derive(Clone, Debug)]
pub struct SpaceMorphism {
    term: MapTerm,
    nf: MapNf,
    src: Arc<BornCoarseSpace>,
    dst: Arc<BornCoarseSpace>,
    control: IndexMap,
    /// For each source coordinate whose bounded sets must be finite, the
    /// target coordinate that pins it down.
    proper: Vec<(Vec<u8>, Vec<u8>)>,
}

impl PartialEq for SpaceMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.nf == other.nf
            && (Arc::ptr_eq(&self.src, &other.src) || self.src == other.src)
            && (Arc::ptr_eq(&self.dst, &other.dst) || self.dst == other.dst)
    }
}

/// The relation of the source on one atomic coordinate, as far as
/// controlledness is concerned.
enum LeafRel {
    Metric,
    OnlyDiagonal,
    Pairs(PairSet),
    Everything,
}

fn leaf_rel(c: &Cofinal, amb: &AmbientSet) -> Result<LeafRel, MapError> {
    match c {
        Cofinal::Metric => Ok(LeafRel::Metric),
        Cofinal::Fixed(e) => match amb.points() {
            Some(pts) => {
                let mut ps = PairSet::new();
                for x in &pts {
                    for y in &pts {
                        if x != y && e.contains(amb, x, y) {
                            ps.insert((x.clone(), y.clone()));
                        }
                    }
                }
                Ok(if ps.is_empty() { LeafRel::OnlyDiagonal } else { LeafRel::Pairs(ps) })
            }
            None => match e {
                Entourage::Diagonal => Ok(LeafRel::OnlyDiagonal),
                Entourage::Whole => Ok(LeafRel::Everything),
                Entourage::FinitePairs(ps) => Ok(LeafRel::Pairs(ps.iter().filter(|(x, y)| x != y).cloned().collect())),
                Entourage::Union(us) => {
                    let mut all = PairSet::new();
                    for u in us {
                        match leaf_rel(&Cofinal::Fixed(u.clone()), amb)? {
                            LeafRel::OnlyDiagonal => {}
                            LeafRel::Pairs(ps) => all.extend(ps),
                            other => return Ok(other),
                        }
                    }
                    Ok(if all.is_empty() { LeafRel::OnlyDiagonal } else { LeafRel::Pairs(all) })
                }
                _ => Err(MapError::ShapeMismatch(format!("unsupported cofinal entourage {e}"))),
            },
        },
        Cofinal::Product(..) => Err(MapError::ShapeMismatch("cofinal family is not atomic".into())),
    }
}

fn affine_of(op: &LeafOp) -> (i64, i64) {
    match op {
        LeafOp::Affine(a, b) => (*a, *b),
        _ => (1, 0),
    }
}

fn check_equivariance(nf: &MapNf, src: &BornCoarseSpace, dst: &BornCoarseSpace) -> Result<(), MapError> {
    let group = src.group();
    for (dpath, spath, op) in nf.leaves() {
        let da = dst.action().at(&dpath).unwrap();
        let fail = |g, point: String| MapError::NotEquivariant {
            g: group.label(g).to_string(),
            point,
        };
        if let LeafOp::Const(c) = op {
            for g in group.elements() {
                if da.act(g, c) != *c {
                    return Err(fail(g, c.to_string()));
                }
            }
            continue;
        }
        let sa = src.action().at(spath).unwrap();
        match (sa.kind(), da.kind()) {
            (ActionKind::Affine(sm), ActionKind::Affine(dm)) => {
                let (a, b) = affine_of(op);
                for g in group.elements() {
                    let (e1, t1) = sm[g.index()];
                    let (e2, t2) = dm[g.index()];
                    if a * e1 != e2 * a || a * t1 + b != e2 * b + t2 {
                        return Err(fail(g, "0".into()));
                    }
                }
            }
            _ => {
                let pts = sa.set().points().ok_or_else(|| MapError::ShapeMismatch("leaf kinds".into()))?;
                for g in group.elements() {
                    for x in &pts {
                        if op.apply(&sa.act(g, x)) != da.act(g, &op.apply(x)) {
                            return Err(fail(g, sa.set().render(x).to_string()));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn check_control(nf: &MapNf, src: &BornCoarseSpace, dst: &BornCoarseSpace) -> Result<IndexMap, MapError> {
    let mut cert = IndexMap::default();
    for (dpath, spath, op) in nf.leaves() {
        if matches!(op, LeafOp::Const(_)) {
            continue;
        }
        let s_amb = src.ambient().at(spath).unwrap();
        let d_amb = dst.ambient().at(&dpath).unwrap();
        let s_cof = src.coarse().cofinal().at_leaf(spath).ok_or_else(|| MapError::ShapeMismatch("source cofinal".into()))?;
        let d_cof = dst.coarse().cofinal().at_leaf(&dpath).ok_or_else(|| MapError::ShapeMismatch("target cofinal".into()))?;
        let witness = |e: Entourage| MapError::NotControlled { entourage: e.to_string() };
        let rel = leaf_rel(s_cof, s_amb)?;
        let leaf_cert = match (rel, d_cof) {
            (_, Cofinal::Fixed(Entourage::Whole)) => IndexMap::default(),
            (LeafRel::OnlyDiagonal, _) => IndexMap::default(),
            (LeafRel::Metric, Cofinal::Metric) => IndexMap {
                scale: affine_of(op).0.unsigned_abs(),
                offset: 0,
            },
            (LeafRel::Metric, _) => return Err(witness(Entourage::MetricBall(1))),
            (LeafRel::Everything, _) => return Err(witness(Entourage::Whole)),
            (LeafRel::Pairs(ps), Cofinal::Metric) => {
                let mut off = 0;
                for (x, y) in &ps {
                    match (op.apply(x), op.apply(y)) {
                        (Point::Int(a), Point::Int(b)) => off = off.max(a.abs_diff(b)),
                        _ => return Err(MapError::ShapeMismatch("metric target".into())),
                    }
                }
                IndexMap { scale: 0, offset: off }
            }
            (LeafRel::Pairs(ps), Cofinal::Fixed(e)) => {
                for (x, y) in &ps {
                    if !e.contains(d_amb, &op.apply(x), &op.apply(y)) {
                        return Err(witness(Entourage::FinitePairs(PairSet::from([(x.clone(), y.clone())]))));
                    }
                }
                IndexMap::default()
            }
            (LeafRel::Pairs(_), Cofinal::Product(..)) => {
                return Err(MapError::ShapeMismatch("target cofinal is not atomic".into()))
            }
        };
        cert = cert.join(leaf_cert);
    }
    Ok(cert)
}

fn check_proper(nf: &MapNf, src: &BornCoarseSpace, dst: &BornCoarseSpace) -> Result<Vec<(Vec<u8>, Vec<u8>)>, MapError> {
    let s_flags = src.finite_leaves();
    let d_leaves = dst.ambient().leaf_paths();
    let d_flags = dst.finite_leaves();
    let d_finite: BTreeSet<&Vec<u8>> = d_leaves.iter().zip(&d_flags).filter(|(_, &f)| f).map(|(p, _)| p).collect();
    let leaves = nf.leaves();
    let mut cert = Vec::new();
    for (spath, &must_be_finite) in src.ambient().leaf_paths().iter().zip(&s_flags) {
        if !must_be_finite {
            continue;
        }
        let pinned = leaves.iter().find(|(dpath, p, op)| {
            *p == spath && d_finite.contains(dpath) && matches!(op, LeafOp::Id | LeafOp::Affine(..))
        });
        match pinned {
            Some((dpath, ..)) => cert.push((spath.clone(), dpath.clone())),
            None => {
                let base = src.ambient().base_point().unwrap();
                return Err(MapError::NotProper {
                    bounded: format!("{{{}}}", nf.apply(&base)),
                });
            }
        }
    }
    Ok(cert)
}

/// Certifies `term` as a morphism `src → dst`.
pub fn morphism_check(term: MapTerm, src: Arc<BornCoarseSpace>, dst: Arc<BornCoarseSpace>) -> Result<SpaceMorphism, MapError> {
    if src.group() != dst.group() {
        return Err(MapError::ShapeMismatch("source and target carry different groups".into()));
    }
    let nf = term.normalize(src.ambient(), dst.ambient())?;
    certify(term, nf, src, dst)
}

fn certify(term: MapTerm, nf: MapNf, src: Arc<BornCoarseSpace>, dst: Arc<BornCoarseSpace>) -> Result<SpaceMorphism, MapError> {
    check_equivariance(&nf, &src, &dst)?;
    let control = check_control(&nf, &src, &dst)?;
    let proper = check_proper(&nf, &src, &dst)?;
    Ok(SpaceMorphism {
        term,
        nf,
        src,
        dst,
        control,
        proper,
    })
}

impl SpaceMorphism {
    pub fn identity(space: Arc<BornCoarseSpace>) -> SpaceMorphism {
        morphism_check(MapTerm::Identity, space.clone(), space).expect("identity is a morphism")
    }

    pub fn term(&self) -> &MapTerm {
        &self.term
    }

    pub fn nf(&self) -> &MapNf {
        &self.nf
    }

    pub fn src(&self) -> &Arc<BornCoarseSpace> {
        &self.src
    }

    pub fn dst(&self) -> &Arc<BornCoarseSpace> {
        &self.dst
    }

    pub fn control(&self) -> IndexMap {
        self.control
    }

    pub fn proper_cert(&self) -> &[(Vec<u8>, Vec<u8>)] {
        &self.proper
    }

    pub fn apply(&self, x: &Point) -> Point {
        self.nf.apply(x)
    }

    pub fn is_identity(&self) -> bool {
        self.nf == MapNf::eta(self.src.ambient(), Vec::new()) && *self.src == *self.dst
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &SpaceMorphism) -> Result<SpaceMorphism, MapError> {
        if !(Arc::ptr_eq(&inner.dst, &self.src) || *inner.dst == *self.src) {
            return Err(MapError::NotComposable);
        }
        let mut parts = Vec::new();
        for t in [&self.term, &inner.term] {
            match t {
                MapTerm::Compose(ps) => parts.extend(ps.iter().cloned()),
                MapTerm::Identity => {}
                other => parts.push(other.clone()),
            }
        }
        let term = match parts.len() {
            0 => MapTerm::Identity,
            1 => parts.pop().unwrap(),
            _ => MapTerm::Compose(parts),
        };
        let nf = self.nf.after(&inner.nf).simplify(inner.src.ambient());
        certify(term, nf, inner.src.clone(), self.dst.clone())
    }

    /// `f ⊗ g : X ⊗ Y → X′ ⊗ Y′`.
    pub fn tensor(&self, other: &SpaceMorphism) -> Result<SpaceMorphism, MapError> {
        let src = Arc::new(space_tensor(&self.src, &other.src)?);
        let dst = Arc::new(space_tensor(&self.dst, &other.dst)?);
        self.tensor_between(other, src, dst)
    }

    /// As [`SpaceMorphism::tensor`], reusing already built product spaces.
    pub fn tensor_between(
        &self,
        other: &SpaceMorphism,
        src: Arc<BornCoarseSpace>,
        dst: Arc<BornCoarseSpace>,
    ) -> Result<SpaceMorphism, MapError> {
        let term = MapTerm::PairMap(Box::new(self.term.clone()), Box::new(other.term.clone()));
        let nf = MapNf::tuple(self.nf.clone().prefixed(0), other.nf.clone().prefixed(1)).simplify(src.ambient());
        certify(term, nf, src, dst)
    }

    /// Preimage of a point inside a finite subset of the source.
    pub fn fiber<'a>(&self, y: &Point, among: impl IntoIterator<Item = &'a Point>) -> Vec<Point> {
        among.into_iter().filter(|x| self.apply(x) == *y).cloned().collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "term": self.term.to_json(self.src.ambient(), self.dst.ambient()),
            "display": self.term.to_string(),
            "control": {"scale": self.control.scale, "offset": self.control.offset},
        })
    }
}

impl fmt::Display for SpaceMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.term)
    }
}

/// The associator `(X ⊗ X′) ⊗ X″ → X ⊗ (X′ ⊗ X″)`, the unitor `∗ ⊗ X → X`,
/// and the symmetry `X ⊗ X′ → X′ ⊗ X`.
pub fn space_constraints(
    x: &Arc<BornCoarseSpace>,
    y: &Arc<BornCoarseSpace>,
    z: &Arc<BornCoarseSpace>,
) -> Result<(SpaceMorphism, SpaceMorphism, SpaceMorphism), MapError> {
    let xy = space_tensor(x, y)?;
    let assoc_src = Arc::new(space_tensor(&xy, z)?);
    let assoc_dst = Arc::new(space_tensor(x, &space_tensor(y, z)?)?);
    let assoc = morphism_check(MapTerm::Assoc, assoc_src, assoc_dst)?;
    let pt = BornCoarseSpace::point(x.group().clone());
    let unitor = morphism_check(MapTerm::Proj2, Arc::new(space_tensor(&pt, x)?), x.clone())?;
    let symm = morphism_check(MapTerm::Swap, Arc::new(xy), Arc::new(space_tensor(y, x)?))?;
    Ok((assoc, unitor, symm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coarse::structure::{Bornology, CoarseStructure};
    use crate::group::{FiniteGroup, GAction};

    fn trivial_line(born: Bornology) -> Arc<BornCoarseSpace> {
        let act = GAction::trivial(Arc::new(FiniteGroup::trivial()), AmbientSet::IntLine);
        Arc::new(BornCoarseSpace::new(CoarseStructure::metric(&act).unwrap(), born).unwrap())
    }

    #[test]
    fn affine_doubling_is_a_morphism_with_scale_two() {
        let z = trivial_line(Bornology::FiniteSubsets);
        let f = morphism_check(MapTerm::Affine { a: 2, b: 1 }, z.clone(), z.clone()).unwrap();
        assert_eq!(f.control(), IndexMap { scale: 2, offset: 0 });
        for r in 0..4i64 {
            for x in -6..=6i64 {
                for d in -r..=r {
                    let (fx, fy) = (f.apply(&Point::Int(x)), f.apply(&Point::Int(x + d)));
                    assert!(fx.as_int().unwrap().abs_diff(fy.as_int().unwrap()) <= f.control().at(r as u64));
                }
            }
        }
    }

    #[test]
    fn projection_off_a_finite_bornology_is_not_proper() {
        let z = trivial_line(Bornology::FiniteSubsets);
        let zz = Arc::new(space_tensor(&z, &z).unwrap());
        let err = morphism_check(MapTerm::Proj1, zz, z).unwrap_err();
        assert!(matches!(err, MapError::NotProper { .. }), "{err}");
    }

    #[test]
    fn constant_to_the_point() {
        let g = Arc::new(FiniteGroup::trivial());
        let act = GAction::trivial(g.clone(), AmbientSet::numbered(3));
        let x = Arc::new(BornCoarseSpace::new(CoarseStructure::whole(&act), Bornology::AllSubsets).unwrap());
        let pt = Arc::new(BornCoarseSpace::point(g));
        assert!(morphism_check(MapTerm::Const(Point::Label(0)), x, pt).is_ok());
    }

    #[test]
    fn constraints_are_morphisms_and_swap_is_involutive() {
        let z = trivial_line(Bornology::FiniteSubsets);
        let (assoc, unitor, symm) = space_constraints(&z, &z, &z).unwrap();
        assert!(!assoc.is_identity());
        assert_eq!(unitor.term(), &MapTerm::Proj2);
        let back = morphism_check(MapTerm::Swap, symm.dst().clone(), symm.src().clone()).unwrap();
        assert!(back.compose(&symm).unwrap().is_identity());
        let p = Point::pair(Point::pair(Point::Int(1), Point::Int(2)), Point::Int(3));
        assert_eq!(assoc.apply(&p), Point::pair(Point::Int(1), Point::pair(Point::Int(2), Point::Int(3))));
        assert_eq!(assoc.control(), IndexMap { scale: 1, offset: 0 });
    }

    #[test]
    fn metric_into_discrete_is_not_controlled() {
        let act = GAction::trivial(Arc::new(FiniteGroup::trivial()), AmbientSet::IntLine);
        let z = trivial_line(Bornology::FiniteSubsets);
        let d = Arc::new(BornCoarseSpace::new(CoarseStructure::discrete(&act), Bornology::FiniteSubsets).unwrap());
        let err = morphism_check(MapTerm::Identity, z, d).unwrap_err();
        assert!(matches!(err, MapError::NotControlled { .. }));
    }

    #[test]
    fn normal_forms_identify_equal_maps() {
        let z = trivial_line(Bornology::AllSubsets);
        let f = morphism_check(MapTerm::Affine { a: 1, b: 3 }, z.clone(), z.clone()).unwrap();
        let g = morphism_check(MapTerm::Affine { a: 1, b: -3 }, z.clone(), z.clone()).unwrap();
        assert!(f.compose(&g).unwrap().is_identity());
        let zz = Arc::new(space_tensor(&z, &z).unwrap());
        let via_terms = morphism_check(
            MapTerm::Compose(vec![MapTerm::Swap, MapTerm::Swap]),
            zz.clone(),
            zz.clone(),
        )
        .unwrap();
        assert!(via_terms.is_identity());
    }
}
