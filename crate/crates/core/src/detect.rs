//! Subconfiguration search and the property predicates built on it.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::catalog::{self, split_call};
use crate::constructions::{poly_triangle, quotient_by_base, Perm3};
use crate::error::{Error, Result};
use crate::search::Matcher;
use crate::structure::{IncidenceStructure, LabelKind, Line, Point};
use crate::triangle::{derived_triangle, triangles, veblen_triangles, Derived, Triangle};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pattern {
    Veblen,
    Fano,
    Desargues,
    Miter,
    Pappus,
    Poly(usize, Perm3),
    K4Closure,
    Custom(IncidenceStructure),
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Veblen => write!(f, "veblen"),
            Pattern::Fano => write!(f, "fano"),
            Pattern::Desargues => write!(f, "desargues"),
            Pattern::Miter => write!(f, "miter"),
            Pattern::Pappus => write!(f, "pappus"),
            Pattern::Poly(m, g) => write!(f, "poly({m},{g})"),
            Pattern::K4Closure => write!(f, "k4closure"),
            Pattern::Custom(s) => write!(f, "custom({})", s.name()),
        }
    }
}

impl FromStr for Pattern {
    type Err = Error;

    /// Named patterns; any catalog name is accepted as a custom pattern.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        Ok(match lower.as_str() {
            "veblen" | "pasch" => Pattern::Veblen,
            "fano" => Pattern::Fano,
            "desargues" => Pattern::Desargues,
            "miter" | "mitre" => Pattern::Miter,
            "pappus" => Pattern::Pappus,
            "k4closure" | "k4-closure" => Pattern::K4Closure,
            _ => match split_call(&lower) {
                Some(("poly", args)) => {
                    let (m, g) = args
                        .split_once(',')
                        .ok_or_else(|| Error::InvalidParameter(format!("expected poly(m,gamma), got `{s}`")))?;
                    let m = m
                        .trim()
                        .parse()
                        .map_err(|_| Error::InvalidParameter(format!("bad m in `{s}`")))?;
                    Pattern::poly(m, g.trim().parse()?)?
                }
                _ => Pattern::Custom(catalog::catalog_by_name(&lower)?),
            },
        })
    }
}

impl Pattern {
    /// `poly(m, gamma)`; only the three class representatives are patterns.
    pub fn poly(m: usize, gamma: Perm3) -> Result<Self> {
        if m < 3 {
            return Err(Error::InvalidParameter(format!("poly pattern needs m >= 3, got {m}")));
        }
        if ![Perm3::ID, Perm3::TAU1, Perm3::SIGMA0].contains(&gamma) {
            return Err(Error::InvalidParameter(format!(
                "poly pattern takes gamma in {{id, tau1, sigma0}}, got {gamma}"
            )));
        }
        Ok(Pattern::Poly(m, gamma))
    }

    /// The pattern as a structure. The K4 closure is a family, not a single
    /// structure, and has none.
    pub fn instance(&self) -> Option<IncidenceStructure> {
        match self {
            Pattern::Veblen => catalog::veblen().ok(),
            Pattern::Fano => catalog::pg(2).ok().map(|s| s.with_name("fano")),
            Pattern::Desargues => Some(desargues()),
            Pattern::Miter => catalog::miter().ok(),
            Pattern::Pappus => catalog::pappus().ok(),
            Pattern::Poly(m, g) => poly_triangle(*m, *g).ok(),
            Pattern::K4Closure => None,
            Pattern::Custom(s) => Some(s.clone()),
        }
    }
}

/// Two triangles `a b c`, `a' b' c'` perspective from `O`, with focuses
/// `f_ab`, `f_ac`, `f_bc` on a line. Point order matches the roles reported
/// by the structured search.
pub fn desargues() -> IncidenceStructure {
    let labels = ["O", "a", "a'", "b", "b'", "c", "c'", "f_ab", "f_ac", "f_bc"];
    let lines = vec![
        [0, 1, 2],
        [0, 3, 4],
        [0, 5, 6],
        [1, 3, 7],
        [2, 4, 7],
        [1, 5, 8],
        [2, 6, 8],
        [3, 5, 9],
        [4, 6, 9],
        [7, 8, 9],
    ];
    IncidenceStructure::new(
        "desargues",
        labels.iter().map(|s| s.to_string()).collect(),
        lines,
        LabelKind::Plain,
    )
    .expect("desargues configuration is a PSTS")
}

/// One occurrence of a pattern.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubconfigHit {
    /// Image points, ascending.
    pub points: Vec<Point>,
    /// Matched host lines, ascending.
    pub lines: Vec<Line>,
    /// `role_map[i]` is the image of pattern point `i`; the lexicographically
    /// least among the maps producing this occurrence.
    pub role_map: Vec<Point>,
}

type HitKey = (Vec<Point>, Vec<Line>);

fn hit_key(host: &IncidenceStructure, pattern_lines: &[Line], map: &[Point]) -> HitKey {
    let mut points = map.to_vec();
    points.sort_unstable();
    let mut lines: Vec<Line> = pattern_lines
        .iter()
        .map(|l| {
            let mut t = [map[l[0]], map[l[1]], map[l[2]]];
            t.sort_unstable();
            debug_assert!(host.is_line(t[0], t[1], t[2]));
            t
        })
        .collect();
    lines.sort_unstable();
    (points, lines)
}

/// Collects distinct occurrences. Maps must arrive in ascending order so the
/// first map seen for a key is the least.
#[derive(Default)]
struct Hits {
    found: BTreeMap<HitKey, Vec<Point>>,
}

impl Hits {
    fn offer(&mut self, key: HitKey, map: &[Point]) {
        match self.found.get_mut(&key) {
            Some(best) if map < best.as_slice() => *best = map.to_vec(),
            Some(_) => {}
            None => {
                self.found.insert(key, map.to_vec());
            }
        }
    }

    fn len(&self) -> usize {
        self.found.len()
    }

    fn into_hits(self) -> Vec<SubconfigHit> {
        self.found
            .into_iter()
            .map(|((points, lines), role_map)| SubconfigHit { points, lines, role_map })
            .collect()
    }
}

/// Occurrences of `pattern` in `host`, each reported once, sorted by image.
/// With a `limit` the search stops after that many distinct occurrences.
pub fn find_subconfig(host: &IncidenceStructure, pattern: &Pattern, limit: Option<usize>) -> Vec<SubconfigHit> {
    match pattern {
        Pattern::Desargues => desargues_hits(host, limit),
        Pattern::K4Closure => k4_closure_hits(host, limit),
        other => {
            let inst = other.instance().expect("pattern has an instance");
            find_embedded(host, &inst, limit)
        }
    }
}

/// Generic occurrences of an explicit pattern structure.
pub fn find_embedded(host: &IncidenceStructure, pattern: &IncidenceStructure, limit: Option<usize>) -> Vec<SubconfigHit> {
    let matcher = Matcher::embeddings(pattern, host);
    let mut hits = Hits::default();
    match limit {
        None => {
            for map in matcher.all() {
                hits.offer(hit_key(host, pattern.lines(), &map), &map);
            }
        }
        Some(k) => {
            if k == 0 {
                return Vec::new();
            }
            matcher.for_each(|map| {
                hits.offer(hit_key(host, pattern.lines(), map), map);
                if hits.len() >= k {
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            });
        }
    }
    hits.into_hits()
}

/// Perspective triangle pairs: center `o`, three distinct lines through it,
/// `tri[k]` and `tri2[k]` the other two points of line `k`.
fn for_each_perspective<F>(s: &IncidenceStructure, mut visit: F) -> ControlFlow<()>
where
    F: FnMut(Point, [Point; 3], [Point; 3]) -> ControlFlow<()>,
{
    for o in 0..s.num_points() {
        let through: Vec<[Point; 2]> = s
            .lines_through(o)
            .iter()
            .map(|&li| {
                let l = s.lines()[li];
                let mut it = l.iter().copied().filter(|&x| x != o);
                [it.next().unwrap(), it.next().unwrap()]
            })
            .collect();
        let n = through.len();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    // fixing the orientation of line i avoids listing each
                    // pair twice with the triangles swapped
                    for flip in 0..4u8 {
                        let (bj, bk) = (flip & 1, flip >> 1 & 1);
                        let t1 = [through[i][0], through[j][bj as usize], through[k][bk as usize]];
                        let t2 = [through[i][1], through[j][1 - bj as usize], through[k][1 - bk as usize]];
                        visit(o, t1, t2)?;
                    }
                }
            }
        }
    }
    ControlFlow::Continue(())
}

/// Focuses `[f_ab, f_ac, f_bc]` when all three exist.
fn focuses(s: &IncidenceStructure, t1: [Point; 3], t2: [Point; 3]) -> Option<[Point; 3]> {
    let focus = |x: usize, y: usize| {
        let f = s.third(t1[x], t1[y])?;
        (s.third(t2[x], t2[y]) == Some(f)).then_some(f)
    };
    Some([focus(0, 1)?, focus(0, 2)?, focus(1, 2)?])
}

fn desargues_hits(host: &IncidenceStructure, limit: Option<usize>) -> Vec<SubconfigHit> {
    let pattern = desargues();
    let mut hits = Hits::default();
    if limit == Some(0) {
        return Vec::new();
    }
    let _ = for_each_perspective(host, |o, t1, t2| {
        let Some(f) = focuses(host, t1, t2) else {
            return ControlFlow::Continue(());
        };
        if !host.is_line(f[0], f[1], f[2]) {
            return ControlFlow::Continue(());
        }
        let map = [o, t1[0], t2[0], t1[1], t2[1], t1[2], t2[2], f[0], f[1], f[2]];
        let mut sorted = map;
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return ControlFlow::Continue(());
        }
        // the search fixes the order of the three lines through the center;
        // offering every reordering and swap keeps the least role map
        let key = hit_key(host, pattern.lines(), &map);
        for [x, y, z] in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            for (u, w) in [(t1, t2), (t2, t1)] {
                let f_of = |i: usize, j: usize| f[match (i.min(j), i.max(j)) {
                    (0, 1) => 0,
                    (0, 2) => 1,
                    _ => 2,
                }];
                let image = [o, u[x], w[x], u[y], w[y], u[z], w[z], f_of(x, y), f_of(x, z), f_of(y, z)];
                hits.offer(key.clone(), &image);
            }
        }
        match limit {
            Some(k) if hits.len() >= k => ControlFlow::Break(()),
            _ => ControlFlow::Continue(()),
        }
    });
    hits.into_hits()
}

/// Quadrangles: four pairwise collinear points, no three on a line, each
/// ascending, in ascending order.
pub fn quadrangles(s: &IncidenceStructure) -> Vec<[Point; 4]> {
    let mut out = Vec::new();
    for p in 0..s.num_points() {
        let up: Vec<Point> = s.neighbors(p).iter().copied().filter(|&q| q > p).collect();
        for (i, &q) in up.iter().enumerate() {
            let pq = s.third(p, q);
            for (j, &r) in up.iter().enumerate().skip(i + 1) {
                if !s.collinear(q, r) || pq == Some(r) {
                    continue;
                }
                let pr = s.third(p, r);
                let qr = s.third(q, r);
                for &t in &up[j + 1..] {
                    if s.collinear(q, t)
                        && s.collinear(r, t)
                        && pq != Some(t)
                        && pr != Some(t)
                        && qr != Some(t)
                    {
                        out.push([p, q, r, t]);
                    }
                }
            }
        }
    }
    out
}

/// A quadrangle whose six edge third points are distinct, new, and carry a
/// Veblen configuration. The role map lists the quadrangle (ascending)
/// followed by the third points on edges 01, 02, 03, 12, 13, 23.
fn k4_closure_hits(host: &IncidenceStructure, limit: Option<usize>) -> Vec<SubconfigHit> {
    let mut hits = Hits::default();
    if limit == Some(0) {
        return Vec::new();
    }
    const EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    for q in quadrangles(host) {
        let mut map = [0; 10];
        map[..4].copy_from_slice(&q);
        for (e, &(x, y)) in EDGES.iter().enumerate() {
            map[4 + e] = host.third(q[x], q[y]).expect("quadrangle edges are lines");
        }
        let mut sorted = map;
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        let thirds = &map[4..];
        let mut inner: Vec<Line> = Vec::new();
        for a in 0..6 {
            for b in a + 1..6 {
                if let Some(c) = host.third(thirds[a], thirds[b]) {
                    if let Some(cp) = thirds.iter().position(|&x| x == c) {
                        if cp > b {
                            let mut l = [thirds[a], thirds[b], c];
                            l.sort_unstable();
                            inner.push(l);
                        }
                    }
                }
            }
        }
        let veblen = inner.len() == 4
            && thirds
                .iter()
                .all(|&x| inner.iter().filter(|l| l.contains(&x)).count() == 2);
        if !veblen {
            continue;
        }
        let mut lines: Vec<Line> = EDGES
            .iter()
            .enumerate()
            .map(|(e, &(x, y))| {
                let mut l = [q[x], q[y], map[4 + e]];
                l.sort_unstable();
                l
            })
            .chain(inner)
            .collect();
        lines.sort_unstable();
        hits.offer((sorted.to_vec(), lines), &map);
        if limit.is_some_and(|k| hits.len() >= k) {
            break;
        }
    }
    hits.into_hits()
}

/// Properties checked by [`check_property`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Property {
    PaschFree,
    Moufangian,
    AntiFano,
    AntiDesargues,
    MiterFree,
    AntiPolypappian(usize),
    PappusDiagonals,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Property::PaschFree => write!(f, "pasch-free"),
            Property::Moufangian => write!(f, "moufangian"),
            Property::AntiFano => write!(f, "anti-fano"),
            Property::AntiDesargues => write!(f, "anti-desargues"),
            Property::MiterFree => write!(f, "miter-free"),
            Property::AntiPolypappian(m) => write!(f, "anti-{m}-polypappian"),
            Property::PappusDiagonals => write!(f, "pappus-diagonals"),
        }
    }
}

impl FromStr for Property {
    type Err = Error;

    /// Accepts the display names; `anti-m-polypappian(4)` is accepted for
    /// `anti-4-polypappian`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let bad = || Error::InvalidParameter(format!("unknown property `{s}`"));
        Ok(match lower.as_str() {
            "pasch-free" | "veblen-free" => Property::PaschFree,
            "moufangian" => Property::Moufangian,
            "anti-fano" => Property::AntiFano,
            "anti-desargues" => Property::AntiDesargues,
            "miter-free" => Property::MiterFree,
            "pappus-diagonals" => Property::PappusDiagonals,
            _ => {
                let m = if let Some(("anti-m-polypappian", arg)) = split_call(&lower) {
                    arg
                } else {
                    lower
                        .strip_prefix("anti-")
                        .and_then(|r| r.strip_suffix("-polypappian"))
                        .ok_or_else(bad)?
                };
                let m: usize = m.parse().map_err(|_| bad())?;
                if m < 3 {
                    return Err(Error::InvalidParameter(format!("anti-m-polypappian needs m >= 3, got {m}")));
                }
                Property::AntiPolypappian(m)
            }
        })
    }
}

/// Why a property fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Witness {
    /// A triangle whose derived set is (pasch-free) or is not (moufangian) a line.
    Triangle { points: [Point; 3], derived: Derived },
    /// A quadrangle with collinear diagonal points.
    Quadrangle { points: [Point; 4], diagonals: [Point; 3] },
    /// Perspective triangles with collinear focuses.
    Perspective {
        center: Point,
        first: [Point; 3],
        second: [Point; 3],
        focuses: [Point; 3],
    },
    /// Triangle `{apex, b, c}` satisfying the miter identity at `apex`.
    Miter { apex: Point, b: Point, c: Point },
    /// An occurrence of a forbidden pattern.
    Subconfig { pattern: String, hit: SubconfigHit },
    /// Hexagon `p1..p6` on lines `{p1,p3,p5}`, `{p2,p4,p6}` whose diagonal
    /// points are not collinear.
    Hexagon { points: [Point; 6], diagonals: [Point; 3] },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl PropertyReport {
    fn from_witness(witness: Option<Witness>) -> Self {
        PropertyReport {
            holds: witness.is_none(),
            witness,
        }
    }
}

pub fn check_property(s: &IncidenceStructure, prop: Property) -> PropertyReport {
    PropertyReport::from_witness(match prop {
        Property::PaschFree => veblen_triangles(s).first().map(|t| Witness::Triangle {
            points: t.points(),
            derived: derived_triangle(s, t).expect("listed triangle"),
        }),
        Property::Moufangian => triangles(s).into_iter().find_map(|t| {
            let d = derived_triangle(s, &t).expect("listed triangle");
            (!matches!(d, Derived::Line(_))).then_some(Witness::Triangle {
                points: t.points(),
                derived: d,
            })
        }),
        Property::AntiFano => fano_witness(s),
        Property::AntiDesargues => desargues_witness(s),
        Property::MiterFree => miter_witness(s),
        Property::AntiPolypappian(m) => polypappian_witness(s, m),
        Property::PappusDiagonals => hexagon_witness(s),
    })
}

fn fano_witness(s: &IncidenceStructure) -> Option<Witness> {
    quadrangles(s).into_iter().find_map(|q| {
        let diag = |a: usize, b: usize, c: usize, d: usize| {
            let x = s.third(q[a], q[b])?;
            (s.third(q[c], q[d]) == Some(x)).then_some(x)
        };
        let d = [diag(0, 1, 2, 3)?, diag(0, 2, 1, 3)?, diag(0, 3, 1, 2)?];
        s.is_line(d[0], d[1], d[2]).then_some(Witness::Quadrangle {
            points: q,
            diagonals: d,
        })
    })
}

fn desargues_witness(s: &IncidenceStructure) -> Option<Witness> {
    let mut found = None;
    let _ = for_each_perspective(s, |o, t1, t2| {
        let is_tri = |t: [Point; 3]| crate::triangle::is_triangle(s, t[0], t[1], t[2]);
        if !is_tri(t1) || !is_tri(t2) {
            return ControlFlow::Continue(());
        }
        match focuses(s, t1, t2) {
            Some(f) if s.is_line(f[0], f[1], f[2]) => {
                found = Some(Witness::Perspective {
                    center: o,
                    first: t1,
                    second: t2,
                    focuses: f,
                });
                ControlFlow::Break(())
            }
            _ => ControlFlow::Continue(()),
        }
    });
    found
}

/// Whether triangle `{a, b, c}` satisfies `a*(b*c) = (a*b)*(a*c)`.
pub fn miter_identity(s: &IncidenceStructure, a: Point, b: Point, c: Point) -> bool {
    let lhs = s.third(b, c).and_then(|bc| s.third(a, bc));
    let rhs = match (s.third(a, b), s.third(a, c)) {
        (Some(ab), Some(ac)) => s.third(ab, ac),
        _ => None,
    };
    lhs.is_some() && lhs == rhs
}

fn miter_witness(s: &IncidenceStructure) -> Option<Witness> {
    triangles(s).into_iter().find_map(|t| {
        let [x, y, z] = t.points();
        [(x, y, z), (y, x, z), (z, x, y)]
            .into_iter()
            .find(|&(a, b, c)| miter_identity(s, a, b, c))
            .map(|(apex, b, c)| Witness::Miter { apex, b, c })
    })
}

/// The `Pi^k_gamma` patterns forbidden for anti-m-polypappian structures.
pub fn polypappian_patterns(m: usize) -> Vec<Pattern> {
    let mut out = Vec::new();
    for k in 3..=m {
        if m.is_multiple_of(k) {
            out.push(Pattern::Poly(k, Perm3::ID));
        }
        if m.is_multiple_of(2 * k) {
            out.push(Pattern::Poly(k, Perm3::SIGMA0));
        }
        if m.is_multiple_of(3 * k) {
            out.push(Pattern::Poly(k, Perm3::TAU1));
        }
    }
    out
}

fn polypappian_witness(s: &IncidenceStructure, m: usize) -> Option<Witness> {
    polypappian_patterns(m).into_iter().find_map(|p| {
        find_subconfig(s, &p, Some(1)).into_iter().next().map(|hit| Witness::Subconfig {
            pattern: p.to_string(),
            hit,
        })
    })
}

fn hexagon_witness(s: &IncidenceStructure) -> Option<Witness> {
    let lines = s.lines();
    let perms: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    for (i, l1) in lines.iter().enumerate() {
        for l2 in &lines[i + 1..] {
            if l1.iter().any(|x| l2.contains(x)) {
                continue;
            }
            // p1 = l1[0] fixes the rotation of the hexagon
            for pa in perms.iter().filter(|p| p[0] == 0) {
                for pb in &perms {
                    let p = [l1[pa[0]], l2[pb[0]], l1[pa[1]], l2[pb[1]], l1[pa[2]], l2[pb[2]]];
                    let meet = |a: usize, b: usize, c: usize, d: usize| {
                        let x = s.third(p[a], p[b])?;
                        (s.third(p[c], p[d]) == Some(x)).then_some(x)
                    };
                    let diag = (|| Some([meet(0, 1, 3, 4)?, meet(1, 2, 4, 5)?, meet(2, 3, 5, 0)?]))();
                    if let Some(d) = diag {
                        if !s.is_line(d[0], d[1], d[2]) {
                            return Some(Witness::Hexagon {
                                points: p,
                                diagonals: d,
                            });
                        }
                    }
                }
            }
        }
    }
    None
}

/// The cases of the triangle taxonomy in a weaved structure. Weights are
/// written `(i,i,i)` and so on; "over a line" means the base points form a
/// line of the base.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TriangleType {
    /// `(i,i,i)` over a base triangle.
    Level,
    /// `(i,i,i)` over a base line.
    LevelOnLine,
    /// `(i,i,i-1)` over a base line.
    DropOnLine,
    /// `(i,i,i-1)` over a base triangle.
    Drop,
    /// `(i,i,i+1)` over a base triangle.
    Rise,
    /// `(i,i+1,i+2)` over a base triangle; only for m = 3.
    SpreadTriangle,
    /// `(i,i+1,i+2)` over a base line; only for m = 3.
    SpreadLine,
}

impl TriangleType {
    /// Position 1..=7 in the taxonomy.
    pub fn clause(self) -> usize {
        self as usize + 1
    }

    pub fn tag(self) -> &'static str {
        match self {
            TriangleType::Level => "1",
            TriangleType::LevelOnLine => "2",
            TriangleType::DropOnLine => "31",
            TriangleType::Drop => "3",
            TriangleType::Rise => "4",
            TriangleType::SpreadTriangle => "1:3",
            TriangleType::SpreadLine => "2:3",
        }
    }
}

/// A weaved structure seen through its labels: the base and, per point, its
/// base point and weight in `C_m`.
#[derive(Clone, Debug)]
pub struct WeaveView {
    pub base: IncidenceStructure,
    pub m: usize,
    pub fiber: Vec<(Point, usize)>,
}

impl WeaveView {
    pub fn new(host: &IncidenceStructure) -> Result<Self> {
        let group = host.product_group()?;
        let m = group
            .as_cyclic()
            .ok_or_else(|| Error::NotProductLabeled(format!("{} is not labeled over a cyclic group", host.name())))?
            as usize;
        let base = quotient_by_base(host)?;
        let fiber = (0..host.num_points())
            .map(|p| {
                let l = host.product_label(p)?;
                let a = base.point_by_label(&l.base).expect("quotient keeps every base label");
                Ok((a, l.weight.coords()[0] as usize))
            })
            .collect::<Result<_>>()?;
        Ok(WeaveView { base, m, fiber })
    }

    /// Point of the host with base point `a` and weight `i`, if labeled so.
    pub fn point(&self, host: &IncidenceStructure, a: Point, i: usize) -> Option<Point> {
        let label = format!("{}|{}", self.base.label(a), i % self.m);
        host.point_by_label(&label)
    }

    pub fn classify(&self, host: &IncidenceStructure, t: &Triangle) -> Result<TriangleType> {
        let pts = t.points();
        if pts.iter().any(|&p| p >= host.num_points()) || !crate::triangle::is_triangle(host, pts[0], pts[1], pts[2]) {
            return Err(Error::NotATriangle(pts));
        }
        let [(a, i), (b, j), (c, k)] = pts.map(|p| self.fiber[p]);
        let on_line = self.base.is_line(a, b, c);
        let m = self.m;
        let w = [i, j, k];
        let pick = |line: TriangleType, tri: TriangleType| if on_line { line } else { tri };
        if i == j && j == k {
            return Ok(pick(TriangleType::LevelOnLine, TriangleType::Level));
        }
        // the weight held by two points and the odd one out
        let pair = if i == j {
            Some((i, k))
        } else if i == k {
            Some((i, j))
        } else if j == k {
            Some((j, i))
        } else {
            None
        };
        let ty = match pair {
            Some((x, y)) if y == (x + m - 1) % m => pick(TriangleType::DropOnLine, TriangleType::Drop),
            Some((x, y)) if y == (x + 1) % m && !on_line => TriangleType::Rise,
            None if m == 3 => pick(TriangleType::SpreadLine, TriangleType::SpreadTriangle),
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "triangle {pts:?} with weights {w:?} fits no case of the taxonomy"
                )))
            }
        };
        Ok(ty)
    }
}

pub fn classify_triangle(host: &IncidenceStructure, t: &Triangle) -> Result<TriangleType> {
    WeaveView::new(host)?.classify(host, t)
}

/// Counts of every triangle type in a weaved structure.
pub fn triangle_census(host: &IncidenceStructure) -> Result<BTreeMap<TriangleType, usize>> {
    let view = WeaveView::new(host)?;
    let mut out = BTreeMap::new();
    for t in triangles(host) {
        *out.entry(view.classify(host, &t)?).or_insert(0) += 1;
    }
    Ok(out)
}

/// Whether the six points of `hit` are `(a,i), (b,i), (c,i+1), (a*c,i),
/// (b*c,i), (a*b,i+1)` for a base triangle `{a,b,c}` whose derived set is a
/// line.
pub fn matches_veblen_template(host: &IncidenceStructure, view: &WeaveView, points: &[Point]) -> bool {
    if points.len() != 6 {
        return false;
    }
    let mut want: Vec<Point> = points.to_vec();
    want.sort_unstable();
    let base = &view.base;
    for &x in points {
        for &y in points {
            for &z in points {
                if x >= y || z == x || z == y {
                    continue;
                }
                let ((a, i), (b, i2), (c, k)) = (view.fiber[x], view.fiber[y], view.fiber[z]);
                if i != i2 || k != (i + 1) % view.m {
                    continue;
                }
                let Ok(t) = Triangle::new(base, a, b, c) else {
                    continue;
                };
                if !matches!(derived_triangle(base, &t), Ok(Derived::Line(_))) {
                    continue;
                }
                let tpl = (|| {
                    Some(vec![
                        x,
                        y,
                        z,
                        view.point(host, base.third(a, c)?, i)?,
                        view.point(host, base.third(b, c)?, i)?,
                        view.point(host, base.third(a, b)?, i + 1)?,
                    ])
                })();
                if let Some(mut tpl) = tpl {
                    tpl.sort_unstable();
                    if tpl == want {
                        return true;
                    }
                }
            }
        }
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VeblenCensus {
    pub hits: usize,
    pub conforming: usize,
    /// Veblen subconfigurations of the base.
    pub base_veblens: usize,
}

impl VeblenCensus {
    pub fn conforms(&self) -> bool {
        self.hits == self.conforming
    }
}

pub fn veblen_census(host: &IncidenceStructure) -> Result<VeblenCensus> {
    let view = WeaveView::new(host)?;
    let hits = find_subconfig(host, &Pattern::Veblen, None);
    let conforming = hits
        .iter()
        .filter(|h| matches_veblen_template(host, &view, &h.points))
        .count();
    Ok(VeblenCensus {
        hits: hits.len(),
        conforming,
        base_veblens: veblen_triangles(&view.base).len() / 4,
    })
}

pub fn veblen_census_conforms(host: &IncidenceStructure) -> Result<bool> {
    Ok(veblen_census(host)?.conforms())
}

/// Number of occurrences of each named pattern, for reports.
pub fn pattern_counts(host: &IncidenceStructure, patterns: &[Pattern]) -> HashMap<String, usize> {
    patterns
        .iter()
        .map(|p| (p.to_string(), find_subconfig(host, p, None).len()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{ag, grassmannian, pappus, pg, veblen};
    use crate::constructions::weave;
    use itertools::Itertools;

    /// Occurrences by brute force: every injective map of the pattern,
    /// deduplicated by image.
    fn brute_occurrences(host: &IncidenceStructure, pattern: &IncidenceStructure) -> usize {
        let mut seen = std::collections::BTreeSet::new();
        for map in (0..host.num_points()).permutations(pattern.num_points()) {
            if pattern.lines().iter().all(|l| host.is_line(map[l[0]], map[l[1]], map[l[2]])) {
                seen.insert(hit_key(host, pattern.lines(), &map));
            }
        }
        seen.len()
    }

    #[test]
    fn veblen_hits_against_brute_force() {
        let v = veblen().unwrap();
        for host in [v.clone(), pg(2).unwrap(), pappus().unwrap()] {
            let hits = find_subconfig(&host, &Pattern::Veblen, None);
            assert_eq!(hits.len(), brute_occurrences(&host, &v), "{}", host.name());
            assert_eq!(hits.len(), veblen_triangles(&host).len() / 4);
        }
        assert_eq!(find_subconfig(&v, &Pattern::Veblen, None).len(), 1);
    }

    #[test]
    fn hits_are_embeddings_and_limit_is_respected() {
        let host = pg(3).unwrap();
        let v = veblen().unwrap();
        let hits = find_subconfig(&host, &Pattern::Veblen, None);
        assert_eq!(hits.len(), 105);
        for h in &hits {
            for l in v.lines() {
                assert!(host.is_line(h.role_map[l[0]], h.role_map[l[1]], h.role_map[l[2]]));
            }
        }
        assert_eq!(find_subconfig(&host, &Pattern::Veblen, Some(5)).len(), 5);
    }

    #[test]
    fn structured_desargues_agrees_with_generic() {
        let g5 = grassmannian(5).unwrap();
        let d = desargues();
        for host in [g5.clone(), weave(&g5, 3).unwrap(), pg(3).unwrap()] {
            let structured = find_subconfig(&host, &Pattern::Desargues, None);
            let generic = find_embedded(&host, &d, None);
            assert_eq!(structured, generic, "{}", host.name());
        }
        assert_eq!(find_subconfig(&g5, &Pattern::Desargues, None).len(), 1);
    }

    #[test]
    fn k4_closures_by_brute_force() {
        // every quadrangle of PG(3,2) spans a solid: 4 points in general
        // position, and their pairwise sums carry a Veblen
        let host = pg(3).unwrap();
        let mut closures = std::collections::BTreeSet::new();
        for q in (1..16usize).combinations(4) {
            let spans_solid = (0..16).all(|mask: usize| {
                let sum = (0..4).filter(|b| mask >> b & 1 == 1).fold(0, |acc, b| acc ^ q[b]);
                mask == 0 || sum != 0
            });
            if spans_solid {
                let mut set: Vec<usize> = q.iter().map(|x| x - 1).collect();
                set.extend(q.iter().tuple_combinations().map(|(a, b)| (a ^ b) - 1));
                set.sort_unstable();
                closures.insert(set);
            }
        }
        let hits = find_subconfig(&host, &Pattern::K4Closure, None);
        let found: std::collections::BTreeSet<_> = hits.iter().map(|h| h.points.clone()).collect();
        assert_eq!(hits.len(), found.len());
        assert_eq!(found, closures);
        assert!(!find_subconfig(&grassmannian(5).unwrap(), &Pattern::K4Closure, None).is_empty());
    }

    #[test]
    fn predicates_on_small_structures() {
        let v = veblen().unwrap();
        assert!(check_property(&v, Property::Moufangian).holds);
        let p = check_property(&pappus().unwrap(), Property::Moufangian);
        assert!(!p.holds && matches!(p.witness, Some(Witness::Triangle { .. })));
        assert!(check_property(&v, Property::AntiPolypappian(4)).holds);
        assert!(!check_property(&pg(2).unwrap(), Property::AntiFano).holds);
        assert!(check_property(&ag(2).unwrap(), Property::AntiFano).holds);
        assert!(!check_property(&grassmannian(5).unwrap(), Property::AntiDesargues).holds);
        assert!(!check_property(&crate::catalog::miter().unwrap(), Property::MiterFree).holds);
        assert!(check_property(&pappus().unwrap(), Property::PappusDiagonals).holds);
        assert!(!check_property(&pappus().unwrap(), Property::AntiPolypappian(3)).holds);
    }

    #[test]
    fn property_names_round_trip() {
        for p in [
            Property::PaschFree,
            Property::Moufangian,
            Property::AntiFano,
            Property::AntiDesargues,
            Property::MiterFree,
            Property::AntiPolypappian(6),
            Property::PappusDiagonals,
        ] {
            assert_eq!(p.to_string().parse::<Property>().unwrap(), p);
        }
        assert_eq!("anti-m-polypappian(4)".parse::<Property>().unwrap(), Property::AntiPolypappian(4));
        assert!("anti-2-polypappian".parse::<Property>().is_err());
        assert_eq!("poly(4,tau1)".parse::<Pattern>().unwrap(), Pattern::Poly(4, Perm3::TAU1));
        assert!("poly(4,tau2)".parse::<Pattern>().is_err());
        assert!(matches!("ag(2)".parse::<Pattern>().unwrap(), Pattern::Custom(_)));
    }

    #[test]
    fn polypappian_pattern_sets() {
        assert_eq!(polypappian_patterns(4), vec![Pattern::Poly(4, Perm3::ID)]);
        assert_eq!(
            polypappian_patterns(6),
            vec![
                Pattern::Poly(3, Perm3::ID),
                Pattern::Poly(3, Perm3::SIGMA0),
                Pattern::Poly(6, Perm3::ID)
            ]
        );
        assert!(polypappian_patterns(9).contains(&Pattern::Poly(3, Perm3::TAU1)));
    }

    #[test]
    fn taxonomy_in_small_weaves() {
        let host = weave(&crate::catalog::single_line().unwrap(), 4).unwrap();
        let census = triangle_census(&host).unwrap();
        assert!(census.keys().all(|t| t.clause() <= 5));
        let view = WeaveView::new(&host).unwrap();
        let level = Triangle::new(
            &host,
            view.point(&host, 0, 0).unwrap(),
            view.point(&host, 1, 0).unwrap(),
            view.point(&host, 2, 0).unwrap(),
        )
        .unwrap();
        assert_eq!(view.classify(&host, &level).unwrap(), TriangleType::LevelOnLine);
        let drop = Triangle::new(
            &host,
            view.point(&host, 0, 1).unwrap(),
            view.point(&host, 1, 1).unwrap(),
            view.point(&host, 2, 0).unwrap(),
        )
        .unwrap();
        assert_eq!(view.classify(&host, &drop).unwrap().tag(), "31");
    }

    #[test]
    fn census_template() {
        let host = weave(&veblen().unwrap(), 4).unwrap();
        let c = veblen_census(&host).unwrap();
        assert!(c.conforms());
        assert_eq!(c.hits, 3 * 4 * c.base_veblens);
    }
}
