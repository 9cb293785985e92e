//! Finite table-presented groups and their actions on ambient sets.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::GroupError;
use crate::set::{AmbientSet, Point};

/// Index of an element in a [`FiniteGroup`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElem(pub u32);

impl GroupElem {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    labels: Vec<String>,
    mult: Vec<Vec<u32>>,
    unit: u32,
    inv: Vec<u32>,
}

impl FiniteGroup {
    /// Validates a multiplication table. `mult[a][b]` is the index of `a·b`.
    pub fn check(
        labels: Vec<String>,
        mult: Vec<Vec<u32>>,
        unit: u32,
        inv: Vec<u32>,
    ) -> Result<Self, GroupError> {
        let n = labels.len();
        let closed = n > 0
            && mult.len() == n
            && mult.iter().all(|row| row.len() == n && row.iter().all(|&c| (c as usize) < n))
            && inv.len() == n
            && inv.iter().all(|&c| (c as usize) < n)
            && (unit as usize) < n;
        if !closed {
            return Err(GroupError::NotClosed);
        }
        for a in 0..n {
            if mult[unit as usize][a] as usize != a || mult[a][unit as usize] as usize != a {
                return Err(GroupError::NoIdentity);
            }
        }
        for a in 0..n {
            let b = inv[a] as usize;
            if mult[a][b] != unit || mult[b][a] != unit {
                return Err(GroupError::NoInverse(labels[a].clone()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = mult[a][b] as usize;
                for c in 0..n {
                    let bc = mult[b][c] as usize;
                    if mult[ab][c] != mult[a][bc] {
                        return Err(GroupError::NotAssociative(
                            labels[a].clone(),
                            labels[b].clone(),
                            labels[c].clone(),
                        ));
                    }
                }
            }
        }
        Ok(FiniteGroup { labels, mult, unit, inv })
    }

    pub fn trivial() -> Self {
        FiniteGroup {
            labels: vec!["e".into()],
            mult: vec![vec![0]],
            unit: 0,
            inv: vec![0],
        }
    }

    /// Cyclic group Z/n with elements `e, g, g2, ...`.
    pub fn cyclic(n: u32) -> Self {
        assert!(n > 0);
        let labels = (0..n)
            .map(|k| match k {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g{k}"),
            })
            .collect();
        let mult = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let inv = (0..n).map(|a| (n - a) % n).collect();
        FiniteGroup { labels, mult, unit: 0, inv }
    }

    /// Symmetric group on three letters, elements as permutation tables.
    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [1, 0, 2],
            [0, 2, 1],
            [2, 1, 0],
            [1, 2, 0],
            [2, 0, 1],
        ];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap() as u32;
        let mult = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| idx([a[b[0]], a[b[1]], a[b[2]]]))
                    .collect()
            })
            .collect();
        let inv = perms
            .iter()
            .map(|a| {
                let mut r = [0; 3];
                for (i, &ai) in a.iter().enumerate() {
                    r[ai] = i;
                }
                idx(r)
            })
            .collect();
        let labels = perms.iter().map(|p| format!("{}{}{}", p[0], p[1], p[2])).collect();
        FiniteGroup { labels, mult, unit: 0, inv }
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElem> + Clone {
        (0..self.labels.len() as u32).map(GroupElem)
    }

    pub fn unit(&self) -> GroupElem {
        GroupElem(self.unit)
    }

    pub fn mul(&self, a: GroupElem, b: GroupElem) -> GroupElem {
        GroupElem(self.mult[a.index()][b.index()])
    }

    pub fn inv(&self, a: GroupElem) -> GroupElem {
        GroupElem(self.inv[a.index()])
    }

    pub fn label(&self, a: GroupElem) -> &str {
        &self.labels[a.index()]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn element(&self, label: &str) -> Option<GroupElem> {
        self.labels.iter().position(|l| l == label).map(|i| GroupElem(i as u32))
    }

    pub fn is_trivial(&self) -> bool {
        self.labels.len() == 1
    }

    pub fn to_json(&self) -> Value {
        json!({"elements": self.labels, "mult": self.mult, "unit": self.unit, "inv": self.inv})
    }
}

/// How each group element acts on an ambient set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ActionKind {
    /// `table[g][i]` is the image of label `i` under `g`.
    Table(Vec<Vec<u32>>),
    /// `x ↦ eps·x + t` per group element.
    Affine(Vec<(i64, i64)>),
    /// Componentwise action on a product.
    Pair(Box<GAction>, Box<GAction>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GAction {
    group: Arc<FiniteGroup>,
    set: AmbientSet,
    kind: ActionKind,
}

impl GAction {
    /// Validates an action: every `act(g)` is a bijection, `act(e) = id`
    /// and `act(g)∘act(h) = act(gh)`.
    pub fn check(group: Arc<FiniteGroup>, set: AmbientSet, kind: ActionKind) -> Result<Self, GroupError> {
        let n = group.order();
        match (&set, &kind) {
            (AmbientSet::Finite(ls), ActionKind::Table(t)) => {
                if t.len() != n {
                    return Err(GroupError::ShapeMismatch("table rows".into()));
                }
                for (g, row) in t.iter().enumerate() {
                    if row.len() != ls.len() || row.iter().any(|&v| v as usize >= ls.len()) {
                        return Err(GroupError::ShapeMismatch(format!("table row {g}")));
                    }
                    let distinct: BTreeSet<_> = row.iter().collect();
                    if distinct.len() != row.len() {
                        return Err(GroupError::NotBijective(group.labels[g].clone()));
                    }
                }
            }
            (AmbientSet::IntLine, ActionKind::Affine(maps)) => {
                if maps.len() != n {
                    return Err(GroupError::ShapeMismatch("affine map count".into()));
                }
                for (g, &(eps, _)) in maps.iter().enumerate() {
                    if eps != 1 && eps != -1 {
                        return Err(GroupError::NotBijective(group.labels[g].clone()));
                    }
                }
            }
            (AmbientSet::Pair(a, b), ActionKind::Pair(x, y)) => {
                if x.set != **a || y.set != **b || *x.group != *group || *y.group != *group {
                    return Err(GroupError::ShapeMismatch("pair components".into()));
                }
            }
            _ => return Err(GroupError::ShapeMismatch("action kind vs ambient".into())),
        }
        let action = GAction { group, set, kind };
        action.check_laws()?;
        Ok(action)
    }

    fn check_laws(&self) -> Result<(), GroupError> {
        let g_ = &self.group;
        match &self.kind {
            ActionKind::Table(t) => {
                let e = g_.unit().index();
                if let Some(i) = t[e].iter().enumerate().position(|(i, &v)| v as usize != i) {
                    return Err(GroupError::NotAnAction {
                        g: g_.label(g_.unit()).into(),
                        h: g_.label(g_.unit()).into(),
                        witness: self.set.render(&Point::Label(i as u32)).to_string(),
                    });
                }
                for g in g_.elements() {
                    for h in g_.elements() {
                        let gh = g_.mul(g, h);
                        for i in 0..t[0].len() {
                            let lhs = t[g.index()][t[h.index()][i] as usize];
                            if lhs != t[gh.index()][i] {
                                return Err(GroupError::NotAnAction {
                                    g: g_.label(g).into(),
                                    h: g_.label(h).into(),
                                    witness: self.set.render(&Point::Label(i as u32)).to_string(),
                                });
                            }
                        }
                    }
                }
            }
            ActionKind::Affine(maps) => {
                if maps[g_.unit().index()] != (1, 0) {
                    return Err(GroupError::NotAnAction {
                        g: g_.label(g_.unit()).into(),
                        h: g_.label(g_.unit()).into(),
                        witness: "1".into(),
                    });
                }
                for g in g_.elements() {
                    for h in g_.elements() {
                        let (e1, t1) = maps[g.index()];
                        let (e2, t2) = maps[h.index()];
                        // g(h(x)) = e1(e2 x + t2) + t1
                        let composed = (e1 * e2, e1 * t2 + t1);
                        if composed != maps[g_.mul(g, h).index()] {
                            return Err(GroupError::NotAnAction {
                                g: g_.label(g).into(),
                                h: g_.label(h).into(),
                                witness: "0".into(),
                            });
                        }
                    }
                }
            }
            ActionKind::Pair(a, b) => {
                a.check_laws()?;
                b.check_laws()?;
            }
        }
        Ok(())
    }

    pub fn trivial(group: Arc<FiniteGroup>, set: AmbientSet) -> Self {
        let n = group.order();
        let kind = match &set {
            AmbientSet::Finite(ls) => ActionKind::Table(vec![(0..ls.len() as u32).collect(); n]),
            AmbientSet::IntLine => ActionKind::Affine(vec![(1, 0); n]),
            AmbientSet::Pair(a, b) => ActionKind::Pair(
                Box::new(GAction::trivial(group.clone(), (**a).clone())),
                Box::new(GAction::trivial(group.clone(), (**b).clone())),
            ),
        };
        GAction { group, set, kind }
    }

    /// Componentwise action of the same group on the product of the two sets.
    pub fn product(a: &GAction, b: &GAction) -> Self {
        GAction {
            group: a.group.clone(),
            set: AmbientSet::pair(a.set.clone(), b.set.clone()),
            kind: ActionKind::Pair(Box::new(a.clone()), Box::new(b.clone())),
        }
    }

    /// `g·(x, y) = (g·x, g·y)` on `X × X`.
    pub fn diagonal(&self) -> Self {
        GAction::product(self, self)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn set(&self) -> &AmbientSet {
        &self.set
    }

    pub fn kind(&self) -> &ActionKind {
        &self.kind
    }

    pub fn act(&self, g: GroupElem, p: &Point) -> Point {
        match (&self.kind, p) {
            (ActionKind::Table(t), Point::Label(i)) => Point::Label(t[g.index()][*i as usize]),
            (ActionKind::Affine(m), Point::Int(x)) => {
                let (e, t) = m[g.index()];
                Point::Int(e * x + t)
            }
            (ActionKind::Pair(a, b), Point::Pair(x, y)) => Point::pair(a.act(g, x), b.act(g, y)),
            _ => panic!("point {p} does not belong to the acted-on set"),
        }
    }

    /// Action restricted to the coordinate at `path`.
    pub fn at(&self, path: &[u8]) -> Option<&GAction> {
        let mut cur = self;
        for &step in path {
            cur = match (&cur.kind, step) {
                (ActionKind::Pair(a, _), 0) => a,
                (ActionKind::Pair(_, b), 1) => b,
                _ => return None,
            };
        }
        Some(cur)
    }

    pub fn orbit(&self, p: &Point) -> BTreeSet<Point> {
        self.group.elements().map(|g| self.act(g, p)).collect()
    }

    pub fn stabilizer(&self, p: &Point) -> Vec<GroupElem> {
        self.group.elements().filter(|&g| self.act(g, p) == *p).collect()
    }

    pub fn is_trivial(&self) -> bool {
        match &self.kind {
            ActionKind::Table(t) => t.iter().all(|row| row.iter().enumerate().all(|(i, &v)| v as usize == i)),
            ActionKind::Affine(m) => m.iter().all(|&a| a == (1, 0)),
            ActionKind::Pair(a, b) => a.is_trivial() && b.is_trivial(),
        }
    }

    /// Do two actions on atomic sets agree as maps for the element `g`?
    pub fn same_element_action(&self, other: &GAction, g: GroupElem) -> bool {
        match (&self.kind, &other.kind) {
            (ActionKind::Table(a), ActionKind::Table(b)) => a[g.index()] == b[g.index()],
            (ActionKind::Affine(a), ActionKind::Affine(b)) => a[g.index()] == b[g.index()],
            (ActionKind::Pair(a1, a2), ActionKind::Pair(b1, b2)) => {
                a1.same_element_action(b1, g) && a2.same_element_action(b2, g)
            }
            _ => false,
        }
    }

    pub fn to_json(&self) -> Value {
        match &self.kind {
            ActionKind::Table(t) => json!({"kind": "table", "table": t}),
            ActionKind::Affine(m) => json!({"kind": "affine", "maps": m}),
            ActionKind::Pair(a, b) => json!({"kind": "pair", "left": a.to_json(), "right": b.to_json()}),
        }
    }
}

pub fn orbit(action: &GAction, p: &Point) -> BTreeSet<Point> {
    action.orbit(p)
}

pub fn diagonal_action(action: &GAction) -> GAction {
    action.diagonal()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2))
    }

    #[test]
    fn z2_table_is_a_group() {
        let g = FiniteGroup::check(
            vec!["e".into(), "g".into()],
            vec![vec![0, 1], vec![1, 0]],
            0,
            vec![0, 1],
        );
        assert!(g.is_ok());
    }

    #[test]
    fn idempotent_non_identity_has_no_inverse() {
        let g = FiniteGroup::check(
            vec!["e".into(), "g".into()],
            vec![vec![0, 1], vec![1, 1]],
            0,
            vec![0, 1],
        );
        assert_eq!(g.unwrap_err(), GroupError::NoInverse("g".into()));
    }

    #[test]
    fn s3_table_passes_exhaustive_associativity() {
        let s3 = FiniteGroup::symmetric3();
        let again = FiniteGroup::check(s3.labels.clone(), s3.mult.clone(), s3.unit, s3.inv.clone());
        assert_eq!(again.unwrap(), s3);
        // non-abelian
        let a = GroupElem(1);
        let b = GroupElem(2);
        assert_ne!(s3.mul(a, b), s3.mul(b, a));
    }

    #[test]
    fn broken_tables_detected() {
        assert_eq!(
            FiniteGroup::check(vec!["e".into()], vec![vec![3]], 0, vec![0]).unwrap_err(),
            GroupError::NotClosed
        );
        let no_id = FiniteGroup::check(
            vec!["a".into(), "b".into()],
            vec![vec![1, 0], vec![0, 1]],
            0,
            vec![0, 1],
        );
        assert_eq!(no_id.unwrap_err(), GroupError::NoIdentity);
    }

    #[test]
    fn negation_on_the_line_is_an_action() {
        let a = GAction::check(z2(), AmbientSet::IntLine, ActionKind::Affine(vec![(1, 0), (-1, 0)])).unwrap();
        assert_eq!(a.act(GroupElem(1), &Point::Int(5)), Point::Int(-5));
        let orb: Vec<_> = a.orbit(&Point::Int(3)).into_iter().collect();
        assert_eq!(orb, vec![Point::Int(-3), Point::Int(3)]);
    }

    #[test]
    fn translation_of_finite_order_is_rejected() {
        let r = GAction::check(z2(), AmbientSet::IntLine, ActionKind::Affine(vec![(1, 0), (1, 1)]));
        assert!(matches!(r, Err(GroupError::NotAnAction { .. })));
    }

    #[test]
    fn identity_table_for_g_breaks_composition() {
        // g acts as the swap but e is also given a swap: act(e) ≠ id
        let r = GAction::check(
            z2(),
            AmbientSet::finite(["a", "b"]).unwrap(),
            ActionKind::Table(vec![vec![1, 0], vec![1, 0]]),
        );
        assert!(matches!(r, Err(GroupError::NotAnAction { .. })));
    }

    #[test]
    fn cyclic_shift_on_three_points() {
        let z3 = Arc::new(FiniteGroup::cyclic(3));
        let a = GAction::check(
            z3,
            AmbientSet::numbered(3),
            ActionKind::Table(vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]),
        )
        .unwrap();
        assert_eq!(a.orbit(&Point::Label(0)).len(), 3);
        let d = a.diagonal();
        assert!(GAction::check(d.group.clone(), d.set.clone(), d.kind.clone()).is_ok());
        let p = Point::pair(Point::Label(0), Point::Label(2));
        assert_eq!(d.act(GroupElem(1), &p), Point::pair(Point::Label(1), Point::Label(0)));
    }

    #[test]
    fn non_bijective_table() {
        let r = GAction::check(
            z2(),
            AmbientSet::numbered(2),
            ActionKind::Table(vec![vec![0, 1], vec![0, 0]]),
        );
        assert_eq!(r.unwrap_err(), GroupError::NotBijective("g".into()));
    }
}
