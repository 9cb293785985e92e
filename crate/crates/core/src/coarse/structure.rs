//! Coarse structures presented by cofinal families, bornologies, and
//! G-bornological coarse spaces.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use super::entourage::{saturate_pairs, Entourage, PairSet};
use crate::error::SpaceError;
use crate::group::{FiniteGroup, GAction};
use crate::set::{AmbientSet, Point};

/// Default largest cofinal index tried by [`coarse_member`].
pub const DEFAULT_SEARCH_BOUND: u64 = 64;

/// A monotone family `i ↦ cofinal(i)` of invariant entourages.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Cofinal {
    /// The same entourage at every index.
    Fixed(Entourage),
    /// `i ↦ MetricBall(i)` on the integer line.
    Metric,
    Product(Box<Cofinal>, Box<Cofinal>),
}

impl Cofinal {
    pub fn at(&self, i: u64) -> Entourage {
        match self {
            Cofinal::Fixed(e) => e.clone(),
            Cofinal::Metric => Entourage::MetricBall(i),
            Cofinal::Product(a, b) => Entourage::product(a.at(i), b.at(i)),
        }
    }

    /// Closure witness `c(i, j)` with `cofinal(i) ∘ cofinal(j) ⊆ cofinal(c(i, j))`.
    pub fn compose_index(&self, i: u64, j: u64) -> u64 {
        match self {
            Cofinal::Fixed(_) => 0,
            Cofinal::Metric => i + j,
            Cofinal::Product(a, b) => a.compose_index(i, j).max(b.compose_index(i, j)),
        }
    }

    /// Closure witness `v(i)` for inversion.
    pub fn invert_index(&self, i: u64) -> u64 {
        match self {
            Cofinal::Fixed(_) => 0,
            Cofinal::Metric => i,
            Cofinal::Product(a, b) => a.invert_index(i).max(b.invert_index(i)),
        }
    }

    /// Closure witness `s(i)` for G-saturation.
    pub fn saturate_index(&self, i: u64) -> u64 {
        match self {
            Cofinal::Fixed(_) => 0,
            Cofinal::Metric => i,
            Cofinal::Product(a, b) => a.saturate_index(i).max(b.saturate_index(i)),
        }
    }

    /// Least `i` with `(x, y) ∈ cofinal(i)`, if any.
    pub fn min_index(&self, amb: &AmbientSet, x: &Point, y: &Point) -> Option<u64> {
        match (self, amb, x, y) {
            (Cofinal::Fixed(e), ..) => e.contains(amb, x, y).then_some(0),
            (Cofinal::Metric, _, Point::Int(a), Point::Int(b)) => Some(a.abs_diff(*b)),
            (Cofinal::Product(ca, cb), AmbientSet::Pair(sa, sb), Point::Pair(x1, x2), Point::Pair(y1, y2)) => {
                Some(ca.min_index(sa, x1, y1)?.max(cb.min_index(sb, x2, y2)?))
            }
            _ => None,
        }
    }

    /// Sub-family governing the atomic coordinate at `path`.
    pub fn at_leaf(&self, path: &[u8]) -> Option<&Cofinal> {
        let mut cur = self;
        for &s in path {
            cur = match (cur, s) {
                (Cofinal::Product(a, _), 0) => a,
                (Cofinal::Product(_, b), 1) => b,
                _ => return None,
            };
        }
        Some(cur)
    }

    fn to_json(&self, amb: &AmbientSet) -> Value {
        match self {
            Cofinal::Fixed(e) => json!({"kind": "fixed", "entourage": e.to_json(amb)}),
            Cofinal::Metric => json!({"kind": "metric"}),
            Cofinal::Product(a, b) => {
                let (sa, sb) = match amb {
                    AmbientSet::Pair(sa, sb) => (&**sa, &**sb),
                    _ => (amb, amb),
                };
                json!({"kind": "product", "left": a.to_json(sa), "right": b.to_json(sb)})
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoarseStructure {
    action: GAction,
    generators: Vec<Entourage>,
    cofinal: Cofinal,
    search_bound: u64,
}

/// Outcome of a coarse-membership query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    /// Contained in `cofinal(i)`.
    Member(u64),
    NotMember,
    /// Would need index `needed`, beyond the search bound.
    SearchBoundExceeded { bound: u64, needed: u64 },
}

impl Membership {
    pub fn into_result(self) -> Result<bool, SpaceError> {
        match self {
            Membership::Member(_) => Ok(true),
            Membership::NotMember => Ok(false),
            Membership::SearchBoundExceeded { bound, needed } => Err(SpaceError::SearchBoundExceeded { bound, needed }),
        }
    }
}

fn union_find_closure(points: &[Point], pairs: &PairSet) -> PairSet {
    let idx: BTreeMap<&Point, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut parent: Vec<usize> = (0..points.len()).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for (x, y) in pairs {
        let (a, b) = (find(&mut parent, idx[x]), find(&mut parent, idx[y]));
        parent[a] = b;
    }
    let roots: Vec<usize> = (0..points.len()).map(|i| find(&mut parent, i)).collect();
    let mut out = PairSet::new();
    for (i, x) in points.iter().enumerate() {
        for (j, y) in points.iter().enumerate() {
            if roots[i] == roots[j] {
                out.insert((x.clone(), y.clone()));
            }
        }
    }
    out
}

impl CoarseStructure {
    /// The coarse structure on a finite G-set generated by `generators`.
    ///
    /// On a finite set every coarse structure has a largest entourage, the
    /// G-invariant equivalence relation generated by the generators, so the
    /// cofinal family is constant.
    pub fn generated_finite(action: &GAction, generators: Vec<Entourage>) -> Result<Self, SpaceError> {
        let amb = action.set();
        let points = amb
            .points()
            .ok_or_else(|| SpaceError::ShapeMismatch("generated structure on an infinite set".into()))?;
        let mut pairs = PairSet::new();
        for g in &generators {
            g.validate(amb)?;
            for x in &points {
                for y in &points {
                    if g.contains(amb, x, y) {
                        pairs.insert((x.clone(), y.clone()));
                    }
                }
            }
        }
        let closure = union_find_closure(&points, &saturate_pairs(action, &pairs));
        let top = if closure.len() == points.len() * points.len() {
            Entourage::Whole
        } else if closure.len() == points.len() {
            Entourage::Diagonal
        } else {
            Entourage::FinitePairs(closure)
        };
        Ok(CoarseStructure {
            action: action.clone(),
            generators,
            cofinal: Cofinal::Fixed(top),
            search_bound: DEFAULT_SEARCH_BOUND,
        })
    }

    pub fn discrete(action: &GAction) -> Self {
        CoarseStructure {
            action: action.clone(),
            generators: vec![Entourage::Diagonal],
            cofinal: Cofinal::Fixed(Entourage::Diagonal),
            search_bound: DEFAULT_SEARCH_BOUND,
        }
    }

    /// The maximal structure. On the integer line this is allowed so that
    /// incompatible candidates can be built and rejected by [`compat_check`].
    pub fn whole(action: &GAction) -> Self {
        CoarseStructure {
            action: action.clone(),
            generators: vec![Entourage::Whole],
            cofinal: Cofinal::Fixed(Entourage::Whole),
            search_bound: DEFAULT_SEARCH_BOUND,
        }
    }

    /// The metric structure on the integer line.
    pub fn metric(action: &GAction) -> Result<Self, SpaceError> {
        if *action.set() != AmbientSet::IntLine {
            return Err(SpaceError::ShapeMismatch("metric structure needs the integer line".into()));
        }
        Ok(CoarseStructure {
            action: action.clone(),
            generators: vec![Entourage::MetricBall(1)],
            cofinal: Cofinal::Metric,
            search_bound: DEFAULT_SEARCH_BOUND,
        })
    }

    pub fn with_search_bound(mut self, bound: u64) -> Self {
        self.search_bound = bound;
        self
    }

    pub fn product(a: &CoarseStructure, b: &CoarseStructure) -> Self {
        let mut generators = Vec::new();
        for u in &a.generators {
            for v in &b.generators {
                generators.push(Entourage::product(u.clone(), v.clone()));
            }
        }
        CoarseStructure {
            action: GAction::product(&a.action, &b.action),
            generators,
            cofinal: Cofinal::Product(Box::new(a.cofinal.clone()), Box::new(b.cofinal.clone())),
            search_bound: a.search_bound.max(b.search_bound),
        }
    }

    pub fn ambient(&self) -> &AmbientSet {
        self.action.set()
    }

    pub fn action(&self) -> &GAction {
        &self.action
    }

    pub fn generators(&self) -> &[Entourage] {
        &self.generators
    }

    pub fn cofinal(&self) -> &Cofinal {
        &self.cofinal
    }

    pub fn search_bound(&self) -> u64 {
        self.search_bound
    }

    pub fn to_json(&self) -> Value {
        json!({
            "generators": self.generators.iter().map(|g| g.to_json(self.ambient())).collect::<Vec<_>>(),
            "cofinal": self.cofinal.to_json(self.ambient()),
            "search_bound": self.search_bound,
        })
    }
}

/// Decides `V ∈ C` for a finite set of pairs `V`.
pub fn coarse_member(c: &CoarseStructure, v: &PairSet) -> Membership {
    let mut needed = 0;
    for (x, y) in v {
        match c.cofinal.min_index(c.ambient(), x, y) {
            Some(i) => needed = needed.max(i),
            None => return Membership::NotMember,
        }
    }
    if needed > c.search_bound {
        Membership::SearchBoundExceeded {
            bound: c.search_bound,
            needed,
        }
    } else {
        Membership::Member(needed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Bornology {
    AllSubsets,
    FiniteSubsets,
    /// Generated by products `B × B′` of bounded sets of the factors.
    Product(Box<Bornology>, Box<Bornology>),
}

impl Bornology {
    /// For each atomic coordinate (in `leaf_paths` order): must the
    /// projection of a bounded set to it be finite?
    pub fn finite_leaves(&self, amb: &AmbientSet) -> Vec<bool> {
        amb.leaf_paths()
            .iter()
            .map(|p| {
                let leaf_infinite = !amb.at(p).unwrap().is_finite();
                leaf_infinite && self.restricts(p)
            })
            .collect()
    }

    fn restricts(&self, path: &[u8]) -> bool {
        match self {
            Bornology::AllSubsets => false,
            Bornology::FiniteSubsets => true,
            Bornology::Product(a, b) => match path.split_first() {
                Some((0, rest)) => a.restricts(rest),
                Some((1, rest)) => b.restricts(rest),
                _ => false,
            },
        }
    }

    /// Canonical form: `AllSubsets` / `FiniteSubsets` when the leaf flags
    /// allow it.
    pub fn normalize(&self, amb: &AmbientSet) -> Bornology {
        let flags = self.finite_leaves(amb);
        let infinite: Vec<bool> = amb.leaf_paths().iter().map(|p| !amb.at(p).unwrap().is_finite()).collect();
        if !flags.iter().any(|&f| f) {
            return Bornology::AllSubsets;
        }
        if flags == infinite {
            return Bornology::FiniteSubsets;
        }
        match (self, amb) {
            (Bornology::Product(a, b), AmbientSet::Pair(sa, sb)) => {
                Bornology::Product(Box::new(a.normalize(sa)), Box::new(b.normalize(sb)))
            }
            _ => self.clone(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Bornology::AllSubsets => json!("all"),
            Bornology::FiniteSubsets => json!("finite"),
            Bornology::Product(a, b) => json!({"product": [a.to_json(), b.to_json()]}),
        }
    }
}

impl fmt::Display for Bornology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bornology::AllSubsets => write!(f, "AllSubsets"),
            Bornology::FiniteSubsets => write!(f, "FiniteSubsets"),
            Bornology::Product(a, b) => write!(f, "({a}⊗{b})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BornCoarseSpace {
    coarse: CoarseStructure,
    born: Bornology,
}

/// What [`compat_check`] looked at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatReport {
    pub indices_checked: Vec<u64>,
    pub sets_checked: usize,
    pub certified_symbolically: bool,
}

impl BornCoarseSpace {
    /// Validates compatibility of the two structures.
    pub fn new(coarse: CoarseStructure, born: Bornology) -> Result<Self, SpaceError> {
        let born = born.normalize(coarse.ambient());
        let space = BornCoarseSpace { coarse, born };
        compat_check(&space, 4)?;
        Ok(space)
    }

    /// The one-point space `∗` for `group`.
    pub fn point(group: Arc<FiniteGroup>) -> Self {
        let action = GAction::trivial(group, AmbientSet::point());
        BornCoarseSpace {
            coarse: CoarseStructure::whole(&action),
            born: Bornology::AllSubsets,
        }
    }

    pub fn ambient(&self) -> &AmbientSet {
        self.coarse.ambient()
    }

    pub fn action(&self) -> &GAction {
        self.coarse.action()
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.coarse.action().group()
    }

    pub fn coarse(&self) -> &CoarseStructure {
        &self.coarse
    }

    pub fn bornology(&self) -> &Bornology {
        &self.born
    }

    pub fn finite_leaves(&self) -> Vec<bool> {
        self.born.finite_leaves(self.ambient())
    }

    pub fn with_search_bound(&self, bound: u64) -> Self {
        let mut s = self.clone();
        s.coarse.search_bound = bound;
        s
    }

    pub fn is_point(&self) -> bool {
        matches!(self.ambient(), AmbientSet::Finite(ls) if ls.len() == 1)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "set": self.ambient().to_json(),
            "action": self.action().to_json(),
            "coarse": self.coarse.to_json(),
            "bornology": self.born.to_json(),
        })
    }
}

/// Checks that thickenings of bounded sets by cofinal entourages stay
/// bounded. Finite coordinates never obstruct; an infinite coordinate whose
/// bounded sets must be finite needs every cofinal entourage to have finite
/// thickenings along it. That is decided symbolically and then confirmed on
/// up to `budget` indices by thickening finite sample sets.
pub fn compat_check(space: &BornCoarseSpace, budget: u64) -> Result<CompatReport, SpaceError> {
    let amb = space.ambient();
    let leaves = amb.leaf_paths();
    let flags = space.finite_leaves();
    let restricted: BTreeSet<Vec<u8>> = leaves.iter().zip(&flags).filter(|(_, &f)| f).map(|(p, _)| p.clone()).collect();
    let indices: Vec<u64> = {
        let top = budget.min(space.coarse.search_bound);
        let mut v: Vec<u64> = (0..=top.min(3)).collect();
        if top > 3 {
            v.push(top);
        }
        v
    };
    let samples: Vec<BTreeSet<Point>> = {
        let base = amb.base_point().into_iter().collect::<BTreeSet<_>>();
        let mut v = vec![base.clone()];
        if let Some(p) = amb.base_point() {
            let mut two = base;
            two.insert(space.action().act(space.group().elements().last().unwrap(), &p));
            v.push(two);
        }
        v
    };
    let mut sets_checked = 0;
    for &i in &indices {
        let u = space.coarse.cofinal.at(i);
        let bad: Vec<_> = u.unbounded_leaves(amb).intersection(&restricted).cloned().collect();
        if !bad.is_empty() {
            let b = samples[0].iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",");
            return Err(SpaceError::NotCompatible {
                entourage: u.to_string(),
                bounded: format!("{{{b}}}"),
            });
        }
        for b in &samples {
            sets_checked += 1;
            if !restricted.is_empty() && u.thicken(amb, b).is_none() {
                return Err(SpaceError::NotCompatible {
                    entourage: u.to_string(),
                    bounded: b.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(","),
                });
            }
        }
    }
    Ok(CompatReport {
        indices_checked: indices,
        sets_checked,
        certified_symbolically: true,
    })
}

/// `X ⊗ X′`: product set with the diagonal action, the product coarse
/// structure and the product bornology.
pub fn space_tensor(x: &BornCoarseSpace, y: &BornCoarseSpace) -> Result<BornCoarseSpace, SpaceError> {
    if x.group() != y.group() {
        return Err(SpaceError::GroupMismatch);
    }
    let coarse = CoarseStructure::product(&x.coarse, &y.coarse);
    let born = Bornology::Product(Box::new(x.born.clone()), Box::new(y.born.clone())).normalize(coarse.ambient());
    Ok(BornCoarseSpace { coarse, born })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::ActionKind;

    fn z2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2))
    }

    fn line(action_eps: i64) -> GAction {
        GAction::check(z2(), AmbientSet::IntLine, ActionKind::Affine(vec![(1, 0), (action_eps, 0)])).unwrap()
    }

    fn pairs_of(v: &[(i64, i64)]) -> PairSet {
        v.iter().map(|&(a, b)| (Point::Int(a), Point::Int(b))).collect()
    }

    #[test]
    fn metric_membership_uses_max_gap() {
        let c = CoarseStructure::metric(&line(-1)).unwrap();
        assert_eq!(coarse_member(&c, &pairs_of(&[(0, 7), (3, 1)])), Membership::Member(7));
        let tight = c.clone().with_search_bound(5);
        assert_eq!(
            coarse_member(&tight, &pairs_of(&[(0, 7)])),
            Membership::SearchBoundExceeded { bound: 5, needed: 7 }
        );
    }

    #[test]
    fn discrete_membership() {
        let c = CoarseStructure::discrete(&line(1));
        assert_eq!(coarse_member(&c, &pairs_of(&[(0, 1)])), Membership::NotMember);
        assert_eq!(coarse_member(&c, &pairs_of(&[(4, 4), (-2, -2)])), Membership::Member(0));
        assert_eq!(coarse_member(&c, &PairSet::new()), Membership::Member(0));
    }

    #[test]
    fn generated_finite_structure_is_the_invariant_equivalence_closure() {
        let z3 = Arc::new(FiniteGroup::cyclic(3));
        let shift = GAction::check(
            z3,
            AmbientSet::numbered(6),
            ActionKind::Table(vec![
                vec![0, 1, 2, 3, 4, 5],
                vec![1, 2, 0, 4, 5, 3],
                vec![2, 0, 1, 5, 3, 4],
            ]),
        )
        .unwrap();
        let gen = Entourage::FinitePairs(BTreeSet::from([(Point::Label(0), Point::Label(1))]));
        let c = CoarseStructure::generated_finite(&shift, vec![gen]).unwrap();
        let l = |a, b| (Point::Label(a), Point::Label(b));
        assert_eq!(coarse_member(&c, &BTreeSet::from([l(0, 2)])), Membership::Member(0));
        assert_eq!(coarse_member(&c, &BTreeSet::from([l(0, 3)])), Membership::NotMember);
    }

    #[test]
    fn compatibility() {
        let metric = CoarseStructure::metric(&line(-1)).unwrap();
        assert!(BornCoarseSpace::new(metric, Bornology::FiniteSubsets).is_ok());
        let whole = CoarseStructure::whole(&line(-1));
        let err = BornCoarseSpace::new(whole.clone(), Bornology::FiniteSubsets).unwrap_err();
        assert!(matches!(err, SpaceError::NotCompatible { .. }));
        assert!(BornCoarseSpace::new(whole, Bornology::AllSubsets).is_ok());
        let fin = GAction::trivial(z2(), AmbientSet::numbered(3));
        assert!(BornCoarseSpace::new(CoarseStructure::whole(&fin), Bornology::AllSubsets).is_ok());
    }

    #[test]
    fn tensor_bornology_flags() {
        let metric = CoarseStructure::metric(&line(-1)).unwrap();
        let zf = BornCoarseSpace::new(metric.clone(), Bornology::FiniteSubsets).unwrap();
        let za = BornCoarseSpace::new(metric, Bornology::AllSubsets).unwrap();
        let ff = space_tensor(&zf, &zf).unwrap();
        assert_eq!(*ff.bornology(), Bornology::FiniteSubsets);
        let fa = space_tensor(&zf, &za).unwrap();
        assert_eq!(fa.finite_leaves(), vec![true, false]);
        let pt = BornCoarseSpace::point(z2());
        let pf = space_tensor(&pt, &zf).unwrap();
        assert_eq!(*pf.bornology(), Bornology::FiniteSubsets);
    }

    #[test]
    fn product_cofinal_membership() {
        let metric = CoarseStructure::metric(&line(-1)).unwrap();
        let zf = BornCoarseSpace::new(metric, Bornology::FiniteSubsets).unwrap();
        let t = space_tensor(&zf, &zf).unwrap();
        let p = |a, b| Point::pair(Point::Int(a), Point::Int(b));
        let v = BTreeSet::from([(p(0, 0), p(2, -3))]);
        assert_eq!(coarse_member(t.coarse(), &v), Membership::Member(3));
    }
}
