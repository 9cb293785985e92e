//! Ambient sets and their points.
//!
//! Points carry their shape: a point of a finite set is an index into the
//! set's label list, a point of the integer line is an `i64`, and a point of
//! a binary product is a pair of points. The derived `Ord` is the total order
//! used for every chosen biproduct: label order, integer order, and
//! lexicographic order on pairs.

use std::collections::BTreeSet;
use std::fmt;

use serde_json::{json, Value};

use crate::error::SetError;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    Label(u32),
    Int(i64),
    Pair(Box<Point>, Box<Point>),
}

impl Point {
    pub fn pair(a: Point, b: Point) -> Point {
        Point::Pair(Box::new(a), Box::new(b))
    }

    pub fn first(&self) -> Option<&Point> {
        match self {
            Point::Pair(a, _) => Some(a),
            _ => None,
        }
    }

    pub fn second(&self) -> Option<&Point> {
        match self {
            Point::Pair(_, b) => Some(b),
            _ => None,
        }
    }

    /// The coordinate reached by following `path` (0 = first, 1 = second).
    pub fn at(&self, path: &[u8]) -> Option<&Point> {
        let mut cur = self;
        for &step in path {
            cur = match (cur, step) {
                (Point::Pair(a, _), 0) => a,
                (Point::Pair(_, b), 1) => b,
                _ => return None,
            };
        }
        Some(cur)
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Point::Int(n) => Some(*n),
            _ => None,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Label(i) => write!(f, "#{i}"),
            Point::Int(n) => write!(f, "{n}"),
            Point::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AmbientSet {
    Finite(Vec<String>),
    IntLine,
    Pair(Box<AmbientSet>, Box<AmbientSet>),
}

impl AmbientSet {
    pub fn finite<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self, SetError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(SetError::DuplicateLabel(l.clone()));
            }
        }
        Ok(AmbientSet::Finite(labels))
    }

    /// Finite set with labels `"0"`, `"1"`, ...
    pub fn numbered(n: usize) -> Self {
        AmbientSet::Finite((0..n).map(|i| i.to_string()).collect())
    }

    pub fn point() -> Self {
        AmbientSet::Finite(vec!["*".to_string()])
    }

    pub fn pair(a: AmbientSet, b: AmbientSet) -> Self {
        AmbientSet::Pair(Box::new(a), Box::new(b))
    }

    pub fn contains(&self, p: &Point) -> bool {
        match (self, p) {
            (AmbientSet::Finite(ls), Point::Label(i)) => (*i as usize) < ls.len(),
            (AmbientSet::IntLine, Point::Int(_)) => true,
            (AmbientSet::Pair(a, b), Point::Pair(x, y)) => a.contains(x) && b.contains(y),
            _ => false,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            AmbientSet::Finite(_) => true,
            AmbientSet::IntLine => false,
            AmbientSet::Pair(a, b) => a.is_finite() && b.is_finite(),
        }
    }

    pub fn is_atomic(&self) -> bool {
        !matches!(self, AmbientSet::Pair(..))
    }

    /// All points in order, if the set is finite.
    pub fn points(&self) -> Option<Vec<Point>> {
        match self {
            AmbientSet::Finite(ls) => Some((0..ls.len() as u32).map(Point::Label).collect()),
            AmbientSet::IntLine => None,
            AmbientSet::Pair(a, b) => {
                let pa = a.points()?;
                let pb = b.points()?;
                let mut out = Vec::with_capacity(pa.len() * pb.len());
                for x in &pa {
                    for y in &pb {
                        out.push(Point::pair(x.clone(), y.clone()));
                    }
                }
                Some(out)
            }
        }
    }

    /// Sub-ambient at a coordinate path.
    pub fn at(&self, path: &[u8]) -> Option<&AmbientSet> {
        let mut cur = self;
        for &step in path {
            cur = match (cur, step) {
                (AmbientSet::Pair(a, _), 0) => a,
                (AmbientSet::Pair(_, b), 1) => b,
                _ => return None,
            };
        }
        Some(cur)
    }

    /// Paths of the atomic coordinates, left to right.
    pub fn leaf_paths(&self) -> Vec<Vec<u8>> {
        fn walk(s: &AmbientSet, prefix: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
            match s {
                AmbientSet::Pair(a, b) => {
                    prefix.push(0);
                    walk(a, prefix, out);
                    prefix.pop();
                    prefix.push(1);
                    walk(b, prefix, out);
                    prefix.pop();
                }
                _ => out.push(prefix.clone()),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    /// Some fixed member, used to build witnesses.
    pub fn base_point(&self) -> Option<Point> {
        match self {
            AmbientSet::Finite(ls) if ls.is_empty() => None,
            AmbientSet::Finite(_) => Some(Point::Label(0)),
            AmbientSet::IntLine => Some(Point::Int(0)),
            AmbientSet::Pair(a, b) => Some(Point::pair(a.base_point()?, b.base_point()?)),
        }
    }

    pub fn render(&self, p: &Point) -> Value {
        match (self, p) {
            (AmbientSet::Finite(ls), Point::Label(i)) => match ls.get(*i as usize) {
                Some(l) => Value::String(l.clone()),
                None => json!(format!("#{i}")),
            },
            (AmbientSet::Pair(a, b), Point::Pair(x, y)) => json!([a.render(x), b.render(y)]),
            (_, Point::Int(n)) => json!(n),
            (_, Point::Label(i)) => json!(format!("#{i}")),
            (_, Point::Pair(x, y)) => json!([x.to_string(), y.to_string()]),
        }
    }

    pub fn parse(&self, v: &Value) -> Result<Point, SetError> {
        match (self, v) {
            (AmbientSet::Finite(ls), Value::String(s)) => ls
                .iter()
                .position(|l| l == s)
                .map(|i| Point::Label(i as u32))
                .ok_or_else(|| SetError::UnknownPoint(s.clone())),
            (AmbientSet::IntLine, Value::Number(n)) => n
                .as_i64()
                .map(Point::Int)
                .ok_or_else(|| SetError::UnknownPoint(n.to_string())),
            (AmbientSet::Pair(a, b), Value::Array(xs)) if xs.len() == 2 => {
                Ok(Point::pair(a.parse(&xs[0])?, b.parse(&xs[1])?))
            }
            _ => Err(SetError::ShapeMismatch(v.to_string())),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            AmbientSet::Finite(ls) => json!({"kind": "finite", "labels": ls}),
            AmbientSet::IntLine => json!({"kind": "int_line"}),
            AmbientSet::Pair(a, b) => json!({"kind": "pair", "left": a.to_json(), "right": b.to_json()}),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_labels_rejected() {
        assert!(AmbientSet::finite(["a", "b", "a"]).is_err());
    }

    #[test]
    fn pair_points_are_lexicographic() {
        let s = AmbientSet::pair(AmbientSet::numbered(2), AmbientSet::numbered(2));
        let pts = s.points().unwrap();
        let mut sorted = pts.clone();
        sorted.sort();
        assert_eq!(pts, sorted);
        assert_eq!(pts.len(), 4);
    }

    #[test]
    fn render_parse_round_trip() {
        let s = AmbientSet::pair(AmbientSet::finite(["a", "b"]).unwrap(), AmbientSet::IntLine);
        let p = Point::pair(Point::Label(1), Point::Int(-3));
        assert_eq!(s.parse(&s.render(&p)).unwrap(), p);
        assert!(!s.contains(&Point::Int(0)));
    }
}
