//! The incidence-structure model: points carry text labels, lines are
//! ascending triples of point indices, and any two points share at most one
//! line.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{AbelianGroup, GroupElem};

pub type Point = usize;
pub type Line = [Point; 3];

const NONE: u32 = u32::MAX;

/// How point labels are to be read.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LabelKind {
    Plain,
    /// Every label is `base|weight` with the weight in this group.
    Product(AbelianGroup),
}

/// A weighted point `(base, weight)`, rendered as `base|weight`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProductLabel {
    pub base: String,
    pub weight: GroupElem,
}

impl ProductLabel {
    pub fn render(&self, group: &AbelianGroup) -> String {
        format!("{}|{}", self.base, group.render(&self.weight))
    }

    /// Splits at the last `|`, so bases may themselves be product labels.
    pub fn parse(label: &str, group: &AbelianGroup) -> Result<Self> {
        let (base, weight) = label.rsplit_once('|').ok_or_else(|| {
            Error::InvalidParameter(format!("label `{label}` is not of the form base|weight"))
        })?;
        Ok(ProductLabel {
            base: base.to_string(),
            weight: group.parse_elem(weight)?,
        })
    }
}

/// One broken invariant of a would-be partial Steiner triple system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DuplicateLabel { label: String, first: Point, second: Point },
    IndexOutOfRange { line: usize, index: usize },
    DegenerateLine { line: usize, points: [usize; 3] },
    DuplicateLine { first: usize, second: usize },
    PairOnTwoLines { pair: (Point, Point), lines: (usize, usize) },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateLabel { label, first, second } => {
                write!(f, "duplicate label `{label}` at points {first} and {second}")
            }
            Violation::IndexOutOfRange { line, index } => {
                write!(f, "line #{line} uses point index {index} out of range")
            }
            Violation::DegenerateLine { line, points } => {
                write!(f, "degenerate line #{line} {points:?}")
            }
            Violation::DuplicateLine { first, second } => {
                write!(f, "lines #{first} and #{second} coincide")
            }
            Violation::PairOnTwoLines { pair, lines } => write!(
                f,
                "pair ({}, {}) lies on lines #{} and #{}",
                pair.0, pair.1, lines.0, lines.1
            ),
        }
    }
}

/// Every violated invariant of the raw data; empty iff it is a valid PSTS.
pub fn validate(points: &[String], lines: &[[usize; 3]]) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut seen: HashMap<&str, Point> = HashMap::new();
    for (i, label) in points.iter().enumerate() {
        if let Some(&first) = seen.get(label.as_str()) {
            out.push(Violation::DuplicateLabel {
                label: label.clone(),
                first,
                second: i,
            });
        } else {
            seen.insert(label, i);
        }
    }

    let v = points.len();
    let mut line_ids: HashMap<[usize; 3], usize> = HashMap::new();
    let mut pair_owner: HashMap<(Point, Point), usize> = HashMap::new();
    for (li, raw) in lines.iter().enumerate() {
        if let Some(&index) = raw.iter().find(|&&p| p >= v) {
            out.push(Violation::IndexOutOfRange { line: li, index });
            continue;
        }
        let mut t = *raw;
        t.sort_unstable();
        if t[0] == t[1] || t[1] == t[2] {
            out.push(Violation::DegenerateLine { line: li, points: *raw });
            continue;
        }
        if let Some(&first) = line_ids.get(&t) {
            out.push(Violation::DuplicateLine { first, second: li });
            continue;
        }
        line_ids.insert(t, li);
        for pair in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
            match pair_owner.get(&pair) {
                Some(&other) => out.push(Violation::PairOnTwoLines {
                    pair,
                    lines: (other, li),
                }),
                None => {
                    pair_owner.insert(pair, li);
                }
            }
        }
    }
    out
}

/// `(v_r, b_3)` parameters. `r` is present only for degree-regular structures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigParams {
    pub v: usize,
    pub b: usize,
    pub k: usize,
    pub r: Option<usize>,
    pub regular: bool,
}

/// An immutable partial Steiner triple system.
#[derive(Clone)]
pub struct IncidenceStructure {
    name: String,
    points: Vec<String>,
    lines: Vec<Line>,
    label_kind: LabelKind,
    index: HashMap<String, Point>,
    // v*v tables: third point of a collinear pair, and the line holding it.
    third: Vec<u32>,
    line_of: Vec<u32>,
    lines_through: Vec<Vec<usize>>,
    neighbors: Vec<Vec<Point>>,
}

impl PartialEq for IncidenceStructure {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.points == other.points
            && self.lines == other.lines
            && self.label_kind == other.label_kind
    }
}

impl Eq for IncidenceStructure {}

impl fmt::Debug for IncidenceStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IncidenceStructure")
            .field("name", &self.name)
            .field("v", &self.points.len())
            .field("b", &self.lines.len())
            .field("label_kind", &self.label_kind)
            .finish()
    }
}

impl IncidenceStructure {
    /// Validates and normalizes: every triple is sorted, the line list too.
    pub fn new(
        name: impl Into<String>,
        points: Vec<String>,
        lines: Vec<[usize; 3]>,
        label_kind: LabelKind,
    ) -> Result<Self> {
        let violations = validate(&points, &lines);
        if !violations.is_empty() {
            return Err(Error::InvalidStructure(violations));
        }
        if let LabelKind::Product(group) = &label_kind {
            for label in &points {
                ProductLabel::parse(label, group)?;
            }
        }
        let mut lines: Vec<Line> = lines
            .into_iter()
            .map(|mut t| {
                t.sort_unstable();
                t
            })
            .collect();
        lines.sort_unstable();

        let v = points.len();
        let mut third = vec![NONE; v * v];
        let mut line_of = vec![NONE; v * v];
        let mut lines_through = vec![Vec::new(); v];
        let mut neighbors = vec![Vec::new(); v];
        for (li, &[a, b, c]) in lines.iter().enumerate() {
            for (p, q, r) in [(a, b, c), (a, c, b), (b, c, a)] {
                third[p * v + q] = r as u32;
                third[q * v + p] = r as u32;
                line_of[p * v + q] = li as u32;
                line_of[q * v + p] = li as u32;
                neighbors[p].push(q);
                neighbors[q].push(p);
            }
            for p in [a, b, c] {
                lines_through[p].push(li);
            }
        }
        for n in &mut neighbors {
            n.sort_unstable();
        }
        let index = points.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Ok(Self {
            name: name.into(),
            points,
            lines,
            label_kind,
            index,
            third,
            line_of,
            lines_through,
            neighbors,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(&self, name: impl Into<String>) -> Self {
        let mut s = self.clone();
        s.name = name.into();
        s
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn label_kind(&self) -> &LabelKind {
        &self.label_kind
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }

    pub fn label(&self, p: Point) -> &str {
        &self.points[p]
    }

    pub fn point_by_label(&self, label: &str) -> Option<Point> {
        self.index.get(label).copied()
    }

    pub fn degree(&self, p: Point) -> usize {
        self.lines_through[p].len()
    }

    pub fn lines_through(&self, p: Point) -> &[usize] {
        &self.lines_through[p]
    }

    /// Points collinear with `p`, ascending.
    pub fn neighbors(&self, p: Point) -> &[Point] {
        &self.neighbors[p]
    }

    fn check_index(&self, p: Point) -> Result<()> {
        if p < self.points.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: p,
                len: self.points.len(),
            })
        }
    }

    /// The partial operation: `p` for `p == q`, the third point of the line
    /// through distinct collinear `p, q`, and `None` (undefined) otherwise.
    pub fn third_point(&self, p: Point, q: Point) -> Result<Option<Point>> {
        self.check_index(p)?;
        self.check_index(q)?;
        Ok(if p == q { Some(p) } else { self.third(p, q) })
    }

    /// Third point of the line through distinct `p`, `q`; no bounds checks.
    #[inline]
    pub fn third(&self, p: Point, q: Point) -> Option<Point> {
        let t = self.third[p * self.points.len() + q];
        (t != NONE).then_some(t as Point)
    }

    #[inline]
    pub fn collinear(&self, p: Point, q: Point) -> bool {
        p != q && self.third[p * self.points.len() + q] != NONE
    }

    /// Index into [`lines`](Self::lines) of the line through distinct `p`, `q`.
    #[inline]
    pub fn line_through(&self, p: Point, q: Point) -> Option<usize> {
        let t = self.line_of[p * self.points.len() + q];
        (t != NONE).then_some(t as usize)
    }

    pub fn is_line(&self, p: Point, q: Point, r: Point) -> bool {
        p != q && self.third(p, q) == Some(r)
    }

    pub fn params(&self) -> ConfigParams {
        let v = self.num_points();
        let degrees: HashSet<usize> = (0..v).map(|p| self.degree(p)).collect();
        let regular = degrees.len() <= 1;
        let r = if regular {
            Some(degrees.into_iter().next().unwrap_or(0))
        } else {
            None
        };
        ConfigParams {
            v,
            b: self.num_lines(),
            k: 3,
            r,
            regular,
        }
    }

    /// Sorted degree sequence.
    pub fn degree_multiset(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.num_points()).map(|p| self.degree(p)).collect();
        d.sort_unstable();
        d
    }

    /// Components of the collinearity graph, each ascending, ordered by
    /// smallest member.
    pub fn connected_components(&self) -> Vec<Vec<Point>> {
        let v = self.num_points();
        let mut comp = vec![usize::MAX; v];
        let mut out = Vec::new();
        for start in 0..v {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut i = 0;
            while i < members.len() {
                let p = members[i];
                i += 1;
                for &q in &self.neighbors[p] {
                    if comp[q] == usize::MAX {
                        comp[q] = id;
                        members.push(q);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// Smallest superset of `seed` closed under the third-point operation.
    pub fn subspace_closure(&self, seed: &[Point]) -> Result<Vec<Point>> {
        for &p in seed {
            self.check_index(p)?;
        }
        let v = self.num_points();
        let mut inside = vec![false; v];
        let mut members: Vec<Point> = Vec::new();
        for &p in seed {
            if !inside[p] {
                inside[p] = true;
                members.push(p);
            }
        }
        // each new member is paired with every earlier one exactly once
        let mut next = 0;
        while next < members.len() {
            let p = members[next];
            for i in 0..next {
                if let Some(r) = self.third(p, members[i]) {
                    if !inside[r] {
                        inside[r] = true;
                        members.push(r);
                    }
                }
            }
            next += 1;
        }
        members.sort_unstable();
        Ok(members)
    }

    /// Substructure on `pts` (in the given order) with every line of `self`
    /// contained in it.
    pub fn induced(&self, name: impl Into<String>, pts: &[Point]) -> Result<Self> {
        let mut pos = vec![usize::MAX; self.num_points()];
        for (i, &p) in pts.iter().enumerate() {
            self.check_index(p)?;
            pos[p] = i;
        }
        let lines = self
            .lines
            .iter()
            .filter(|l| l.iter().all(|&p| pos[p] != usize::MAX))
            .map(|l| [pos[l[0]], pos[l[1]], pos[l[2]]])
            .collect();
        let points = pts.iter().map(|&p| self.points[p].clone()).collect();
        Self::new(name, points, lines, self.label_kind.clone())
    }

    /// Same points and lines with the label kind dropped to plain.
    pub fn to_plain(&self) -> Self {
        let mut s = self.clone();
        s.label_kind = LabelKind::Plain;
        s
    }

    /// Replaces the labels; lines keep their indices.
    pub fn relabeled(&self, labels: Vec<String>, kind: LabelKind) -> Result<Self> {
        if labels.len() != self.num_points() {
            return Err(Error::InvalidParameter(format!(
                "{} labels for {} points",
                labels.len(),
                self.num_points()
            )));
        }
        Self::new(self.name.clone(), labels, self.lines.clone(), kind)
    }

    pub fn product_group(&self) -> Result<&AbelianGroup> {
        match &self.label_kind {
            LabelKind::Product(g) => Ok(g),
            LabelKind::Plain => Err(Error::NotProductLabeled(self.name.clone())),
        }
    }

    pub fn product_label(&self, p: Point) -> Result<ProductLabel> {
        let group = self.product_group()?;
        ProductLabel::parse(&self.points[p], group)
    }

    /// Lines as sorted label triples, sorted.
    pub fn label_lines(&self) -> Vec<[&str; 3]> {
        let mut out: Vec<[&str; 3]> = self
            .lines
            .iter()
            .map(|l| {
                let mut t = [self.label(l[0]), self.label(l[1]), self.label(l[2])];
                t.sort_unstable();
                t
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Equality as labeled structures: same label set, same label triples,
    /// point order and name ignored.
    pub fn same_labeled(&self, other: &Self) -> bool {
        let mut a: Vec<&String> = self.points.iter().collect();
        let mut b: Vec<&String> = other.points.iter().collect();
        a.sort();
        b.sort();
        a == b && self.label_lines() == other.label_lines()
    }

    /// True iff every pair of distinct points lies on exactly one line.
    pub fn is_linear_space(&self) -> bool {
        let v = self.num_points();
        3 * self.num_lines() == v * (v.saturating_sub(1)) / 2
    }

    /// Counts of points per degree, keyed by degree.
    pub fn degree_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for p in 0..self.num_points() {
            *h.entry(self.degree(p)).or_insert(0) += 1;
        }
        h
    }
}
