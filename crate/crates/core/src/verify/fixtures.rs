//! Named groups and spaces used by the default suites.

use std::fmt;
use std::sync::Arc;

use crate::coarse::{space_tensor, BornCoarseSpace, Bornology, CoarseStructure, Entourage, PairSet};
use crate::group::{ActionKind, FiniteGroup, GAction};
use crate::set::{AmbientSet, Point};

/// Looks up one of the built-in groups: `trivial`, `Z2`, `Z3`, `S3`.
pub fn group_named(name: &str) -> Option<Arc<FiniteGroup>> {
    match name {
        "trivial" | "Z1" | "1" => Some(Arc::new(FiniteGroup::trivial())),
        "S3" => Some(Arc::new(FiniteGroup::symmetric3())),
        _ => {
            let n: u32 = name.strip_prefix('Z')?.trim_start_matches('/').parse().ok()?;
            (n >= 1).then(|| Arc::new(FiniteGroup::cyclic(n)))
        }
    }
}

pub fn group_label(group: &FiniteGroup) -> String {
    match group.order() {
        1 => "trivial".into(),
        n => format!("Z{n}"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    /// Four labels, maximal coarse structure.
    Whole4,
    /// Six labels, coarse structure generated by two classes of three.
    Classes6,
    /// Integer line, metric coarse structure, finite bounded sets.
    LineMetric,
    /// Integer line, discrete coarse structure, all subsets bounded.
    LineDiscrete,
    Point,
    Tensor(Box<Shape>, Box<Shape>),
}

impl Shape {
    pub fn tensor(a: Shape, b: Shape) -> Shape {
        Shape::Tensor(Box::new(a), Box::new(b))
    }

    /// `a*b*c` parses left-nested.
    pub fn parse(s: &str) -> Option<Shape> {
        let mut parts = s.split('*').map(str::trim);
        let first = Shape::atom(parts.next()?)?;
        parts.try_fold(first, |acc, p| Some(Shape::tensor(acc, Shape::atom(p)?)))
    }

    fn atom(s: &str) -> Option<Shape> {
        Some(match s {
            "whole4" => Shape::Whole4,
            "classes6" => Shape::Classes6,
            "line_metric" => Shape::LineMetric,
            "line_discrete" => Shape::LineDiscrete,
            "point" => Shape::Point,
            _ => return None,
        })
    }

    pub fn has_line(&self) -> bool {
        match self {
            Shape::LineMetric | Shape::LineDiscrete => true,
            Shape::Tensor(a, b) => a.has_line() || b.has_line(),
            _ => false,
        }
    }

    pub fn is_tensor(&self) -> bool {
        matches!(self, Shape::Tensor(..))
    }

    /// Builds the space for a cyclic group of order at most 3.
    pub fn build(&self, group: &Arc<FiniteGroup>) -> Arc<BornCoarseSpace> {
        Arc::new(self.build_inner(group))
    }

    fn build_inner(&self, group: &Arc<FiniteGroup>) -> BornCoarseSpace {
        let n = group.order();
        assert!(n <= 3, "fixtures cover groups of order at most 3");
        // Element k of a cyclic group acts as the k-th power of one generator.
        let table = |generator: &[u32]| -> ActionKind {
            let mut rows = vec![(0..generator.len() as u32).collect::<Vec<_>>()];
            for k in 1..n {
                let prev: &Vec<u32> = &rows[k - 1];
                rows.push(prev.iter().map(|&i| generator[i as usize]).collect());
            }
            ActionKind::Table(rows)
        };
        let checked = |set: AmbientSet, kind: ActionKind| GAction::check(group.clone(), set, kind).expect("fixture action");
        match self {
            Shape::Whole4 => {
                let generator: &[u32] = match n {
                    2 => &[1, 0, 3, 2],
                    3 => &[0, 2, 3, 1],
                    _ => &[0, 1, 2, 3],
                };
                let action = checked(AmbientSet::numbered(4), table(generator));
                BornCoarseSpace::new(CoarseStructure::whole(&action), Bornology::AllSubsets).unwrap()
            }
            Shape::Classes6 => {
                let generator: &[u32] = match n {
                    2 => &[3, 4, 5, 0, 1, 2],
                    3 => &[1, 2, 0, 4, 5, 3],
                    _ => &[0, 1, 2, 3, 4, 5],
                };
                let action = checked(AmbientSet::numbered(6), table(generator));
                let l = |i: u32| Point::Label(i);
                let pairs: PairSet = [(0, 1), (1, 2), (3, 4), (4, 5)].into_iter().map(|(a, b)| (l(a), l(b))).collect();
                let coarse = CoarseStructure::generated_finite(&action, vec![Entourage::FinitePairs(pairs)]).unwrap();
                BornCoarseSpace::new(coarse, Bornology::AllSubsets).unwrap()
            }
            Shape::LineMetric | Shape::LineDiscrete => {
                let maps = (0..n).map(|k| if n == 2 && k == 1 { (-1, 0) } else { (1, 0) }).collect();
                let action = checked(AmbientSet::IntLine, ActionKind::Affine(maps));
                if *self == Shape::LineMetric {
                    BornCoarseSpace::new(CoarseStructure::metric(&action).unwrap(), Bornology::FiniteSubsets).unwrap()
                } else {
                    BornCoarseSpace::new(CoarseStructure::discrete(&action), Bornology::AllSubsets).unwrap()
                }
            }
            Shape::Point => BornCoarseSpace::point(group.clone()),
            Shape::Tensor(a, b) => space_tensor(&a.build_inner(group), &b.build_inner(group)).unwrap(),
        }
    }

    /// Targets that generated maps out of this shape aim at.
    pub fn map_targets(&self) -> Vec<Shape> {
        match self {
            Shape::Whole4 | Shape::Classes6 => vec![Shape::Whole4, Shape::Classes6, Shape::Point, self.clone()],
            Shape::Point => vec![Shape::Whole4, Shape::Point],
            Shape::LineMetric => vec![Shape::LineMetric],
            Shape::LineDiscrete => vec![Shape::LineDiscrete, Shape::LineMetric, Shape::Point],
            Shape::Tensor(a, b) => {
                let mut out = Vec::new();
                for ta in a.map_targets() {
                    for tb in b.map_targets() {
                        out.push(Shape::tensor(ta.clone(), tb));
                    }
                }
                out.extend(b.map_targets());
                out
            }
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Whole4 => write!(f, "whole4"),
            Shape::Classes6 => write!(f, "classes6"),
            Shape::LineMetric => write!(f, "line_metric"),
            Shape::LineDiscrete => write!(f, "line_discrete"),
            Shape::Point => write!(f, "point"),
            Shape::Tensor(a, b) => write!(f, "{a}*{b}"),
        }
    }
}

/// The base shapes suites sample from.
pub fn default_shapes() -> Vec<Shape> {
    vec![
        Shape::Whole4,
        Shape::Classes6,
        Shape::LineMetric,
        Shape::LineDiscrete,
        Shape::tensor(Shape::Whole4, Shape::LineMetric),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_builds_for_every_group() {
        for g in ["trivial", "Z2", "Z3"] {
            let group = group_named(g).unwrap();
            for s in default_shapes().into_iter().chain([Shape::Point]) {
                let space = s.build(&group);
                assert_eq!(space.group().order(), group.order());
            }
        }
    }

    #[test]
    fn shape_names_round_trip() {
        for s in default_shapes() {
            assert_eq!(Shape::parse(&s.to_string()), Some(s));
        }
    }

    #[test]
    fn z3_fixes_the_first_label_of_whole4() {
        let space = Shape::Whole4.build(&group_named("Z3").unwrap());
        assert_eq!(space.action().stabilizer(&Point::Label(0)).len(), 3);
        assert_eq!(space.action().orbit(&Point::Label(1)).len(), 3);
    }
}
