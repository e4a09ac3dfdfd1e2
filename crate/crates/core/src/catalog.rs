//! Named structures: the single line, Veblen, Pappus, AG(n,3), PG(n,2), slit
//! spaces, combinatorial Grassmannians, the miter and the Möbius 8_3.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::groups::{AbelianGroup, GroupElem};
use crate::structure::{IncidenceStructure, LabelKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Catalog {
    SingleLine,
    Veblen,
    Pappus,
    Ag(usize),
    Pg(usize),
    Slit(usize),
    Grassmannian(usize),
    Miter,
    Mobius83,
}

impl fmt::Display for Catalog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Catalog::SingleLine => write!(f, "single-line"),
            Catalog::Veblen => write!(f, "veblen"),
            Catalog::Pappus => write!(f, "pappus"),
            Catalog::Ag(n) => write!(f, "ag({n})"),
            Catalog::Pg(n) => write!(f, "pg({n})"),
            Catalog::Slit(n) => write!(f, "slit({n})"),
            Catalog::Grassmannian(n) => write!(f, "grassmannian({n})"),
            Catalog::Miter => write!(f, "miter"),
            Catalog::Mobius83 => write!(f, "mobius-8_3"),
        }
    }
}

/// Splits `name(arg)` into its parts.
pub(crate) fn split_call(s: &str) -> Option<(&str, &str)> {
    let s = s.trim();
    let open = s.find('(')?;
    let inner = s[open + 1..].strip_suffix(')')?;
    Some((s[..open].trim(), inner.trim()))
}

impl FromStr for Catalog {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let unknown = || Error::UnknownCatalog(s.to_string());
        if let Some((head, arg)) = split_call(&lower) {
            let n: usize = arg.parse().map_err(|_| unknown())?;
            return match head {
                "ag" => Ok(Catalog::Ag(n)),
                "pg" => Ok(Catalog::Pg(n)),
                "slit" => Ok(Catalog::Slit(n)),
                "grassmannian" | "gras" => Ok(Catalog::Grassmannian(n)),
                _ => Err(unknown()),
            };
        }
        match lower.as_str() {
            "single-line" | "line" => Ok(Catalog::SingleLine),
            "veblen" | "pasch" => Ok(Catalog::Veblen),
            "pappus" => Ok(Catalog::Pappus),
            "miter" | "mitre" => Ok(Catalog::Miter),
            "mobius-8_3" | "mobius" => Ok(Catalog::Mobius83),
            _ => Err(unknown()),
        }
    }
}

pub fn catalog(name: Catalog) -> Result<IncidenceStructure> {
    match name {
        Catalog::SingleLine => single_line(),
        Catalog::Veblen => veblen(),
        Catalog::Pappus => pappus(),
        Catalog::Ag(n) => ag(n),
        Catalog::Pg(n) => pg(n),
        Catalog::Slit(n) => slit(n),
        Catalog::Grassmannian(n) => grassmannian(n),
        Catalog::Miter => miter(),
        Catalog::Mobius83 => mobius_8_3(),
    }
}

/// Parses and builds in one go, e.g. `catalog_by_name("ag(2)")`.
pub fn catalog_by_name(name: &str) -> Result<IncidenceStructure> {
    catalog(name.parse()?)
}

fn from_labels(name: &str, labels: &[&str], lines: &[[&str; 3]]) -> Result<IncidenceStructure> {
    let points: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
    let pos = |l: &str| labels.iter().position(|&x| x == l).expect("label in list");
    let lines = lines.iter().map(|t| [pos(t[0]), pos(t[1]), pos(t[2])]).collect();
    IncidenceStructure::new(name, points, lines, LabelKind::Plain)
}

pub fn single_line() -> Result<IncidenceStructure> {
    from_labels("single-line", &["a", "b", "c"], &[["a", "b", "c"]])
}

/// Points `a, b, c, d, p, q`; the non-collinear pairs are `{a,d}`, `{b,c}`,
/// `{p,q}`.
pub fn veblen() -> Result<IncidenceStructure> {
    from_labels(
        "veblen",
        &["a", "b", "c", "d", "p", "q"],
        &[["a", "b", "p"], ["a", "c", "q"], ["b", "d", "q"], ["c", "d", "p"]],
    )
}

/// Points `A1..A3` and `B1..B3` on two lines; `Cij` is the meet of `Ai Bj`
/// and `Aj Bi`; the three `C` points are collinear.
pub fn pappus() -> Result<IncidenceStructure> {
    from_labels(
        "pappus",
        &["A1", "A2", "A3", "B1", "B2", "B3", "C12", "C13", "C23"],
        &[
            ["A1", "A2", "A3"],
            ["B1", "B2", "B3"],
            ["C12", "C13", "C23"],
            ["A1", "B2", "C12"],
            ["A2", "B1", "C12"],
            ["A1", "B3", "C13"],
            ["A3", "B1", "C13"],
            ["A2", "B3", "C23"],
            ["A3", "B2", "C23"],
        ],
    )
}

fn ag_points(n: usize) -> (AbelianGroup, Vec<GroupElem>) {
    let g = AbelianGroup::new(vec![3; n]).expect("n >= 1");
    let els = g.elements();
    (g, els)
}

/// Lines `{u, v, 2u+2v}` over `C_3^n`, as index triples into `elements()`.
fn ag_lines(g: &AbelianGroup, els: &[GroupElem]) -> Vec<[usize; 3]> {
    let mut lines = Vec::new();
    for (i, u) in els.iter().enumerate() {
        for (j, v) in els.iter().enumerate().skip(i + 1) {
            let w = g.scalar_mul(2, &g.add_unchecked(u, v)).unwrap();
            let k = g.index_of(&w);
            if k > j {
                lines.push([i, j, k]);
            }
        }
    }
    lines
}

/// AG(n,3) on `C_3^n`.
pub fn ag(n: usize) -> Result<IncidenceStructure> {
    if n == 0 {
        return Err(Error::InvalidParameter("ag(n) needs n >= 1".into()));
    }
    let (g, els) = ag_points(n);
    let labels = els.iter().map(|e| g.render(e)).collect();
    IncidenceStructure::new(format!("ag({n})"), labels, ag_lines(&g, &els), LabelKind::Plain)
}

/// AG(n,3) without the lines parallel to the hyperplane `x_n = 0`.
pub fn slit(n: usize) -> Result<IncidenceStructure> {
    if n == 0 {
        return Err(Error::InvalidParameter("slit(n) needs n >= 1".into()));
    }
    let (g, els) = ag_points(n);
    let labels = els.iter().map(|e| g.render(e)).collect();
    let lines = ag_lines(&g, &els)
        .into_iter()
        .filter(|&[i, j, _]| els[i].coords()[n - 1] != els[j].coords()[n - 1])
        .collect();
    IncidenceStructure::new(format!("slit({n})"), labels, lines, LabelKind::Plain)
}

/// PG(n,2): non-zero vectors of GF(2)^(n+1) as bit strings, lines `{u, v, u+v}`.
pub fn pg(n: usize) -> Result<IncidenceStructure> {
    if n == 0 || n > 12 {
        return Err(Error::InvalidParameter("pg(n) needs 1 <= n <= 12".into()));
    }
    let count = (1usize << (n + 1)) - 1;
    let labels = (1..=count).map(|x| format!("{:0width$b}", x, width = n + 1)).collect();
    let mut lines = Vec::new();
    for u in 1..=count {
        for v in u + 1..=count {
            let w = u ^ v;
            if w > v {
                lines.push([u - 1, v - 1, w - 1]);
            }
        }
    }
    IncidenceStructure::new(format!("pg({n})"), labels, lines, LabelKind::Plain)
}

/// G(X,2) for `|X| = n`: 2-subsets as points, 3-subsets as lines.
pub fn grassmannian(n: usize) -> Result<IncidenceStructure> {
    if n < 3 {
        return Err(Error::InvalidParameter("grassmannian(n) needs n >= 3".into()));
    }
    let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    let labels = pairs.iter().map(|(i, j)| format!("{{{i},{j}}}")).collect();
    let pos = |a: usize, b: usize| pairs.iter().position(|&p| p == (a, b)).unwrap();
    let lines = (0..n)
        .tuple_combinations()
        .map(|(i, j, k)| [pos(i, j), pos(i, k), pos(j, k)])
        .collect();
    IncidenceStructure::new(format!("grassmannian({n})"), labels, lines, LabelKind::Plain)
}

/// The 7 points of a triangle `a, b, c` with `a*(b*c) = (a*b)*(a*c)`, and
/// the five lines that identity forces.
pub fn miter() -> Result<IncidenceStructure> {
    from_labels(
        "miter",
        &["a", "b", "c", "a*b", "a*c", "b*c", "a*(b*c)"],
        &[
            ["a", "b", "a*b"],
            ["a", "c", "a*c"],
            ["b", "c", "b*c"],
            ["a", "b*c", "a*(b*c)"],
            ["a*b", "a*c", "a*(b*c)"],
        ],
    )
}

/// AG(2,3) with the point `(0,0)` and its four lines removed.
pub fn mobius_8_3() -> Result<IncidenceStructure> {
    let plane = ag(2)?;
    let keep: Vec<usize> = (1..plane.num_points()).collect();
    Ok(plane.induced("mobius-8_3", &keep)?.with_name("mobius-8_3"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangle::{is_moufangian, satisfies_moufang_identity, triangles, veblen_triangles};

    fn counts(s: &IncidenceStructure) -> (usize, Option<usize>, usize) {
        let p = s.params();
        (p.v, p.r, p.b)
    }

    #[test]
    fn parameters() {
        assert_eq!(counts(&single_line().unwrap()), (3, Some(1), 1));
        assert_eq!(counts(&veblen().unwrap()), (6, Some(2), 4));
        assert_eq!(counts(&pappus().unwrap()), (9, Some(3), 9));
        assert_eq!(counts(&ag(2).unwrap()), (9, Some(4), 12));
        assert_eq!(counts(&ag(3).unwrap()), (27, Some(13), 117));
        assert_eq!(counts(&pg(2).unwrap()), (7, Some(3), 7));
        assert_eq!(counts(&pg(3).unwrap()), (15, Some(7), 35));
        assert_eq!(counts(&slit(2).unwrap()), (9, Some(3), 9));
        assert_eq!(counts(&slit(3).unwrap()), (27, Some(9), 81));
        assert_eq!(counts(&grassmannian(4).unwrap()), (6, Some(2), 4));
        assert_eq!(counts(&grassmannian(5).unwrap()), (10, Some(3), 10));
        assert_eq!(counts(&mobius_8_3().unwrap()), (8, Some(3), 8));
        let m = miter().unwrap();
        assert_eq!((m.num_points(), m.num_lines()), (7, 5));
        assert_eq!(m.degree_multiset(), vec![2, 2, 2, 2, 2, 2, 3]);
    }

    #[test]
    fn ag2_is_linear() {
        let s = ag(2).unwrap();
        assert!(s.is_linear_space());
        assert!(ag(3).unwrap().is_linear_space());
        assert!(pg(3).unwrap().is_linear_space());
    }

    #[test]
    fn triangle_spans_ag2() {
        let s = ag(2).unwrap();
        for t in triangles(&s) {
            assert_eq!(s.subspace_closure(&t.points()).unwrap().len(), 9);
        }
    }

    #[test]
    fn miter_satisfies_its_identity() {
        let s = miter().unwrap();
        let i = |l: &str| s.point_by_label(l).unwrap();
        let (a, b, c) = (i("a"), i("b"), i("c"));
        let lhs = s.third(a, s.third(b, c).unwrap());
        let rhs = s.third(s.third(a, b).unwrap(), s.third(a, c).unwrap());
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, Some(i("a*(b*c)")));
    }

    #[test]
    fn moufang_formulations_agree_on_catalog() {
        let names = [
            "single-line", "veblen", "pappus", "ag(2)", "pg(2)", "pg(3)", "slit(2)",
            "grassmannian(5)", "miter", "mobius-8_3",
        ];
        for name in names {
            let s = catalog_by_name(name).unwrap();
            assert_eq!(is_moufangian(&s).0, satisfies_moufang_identity(&s), "{name}");
        }
        assert!(is_moufangian(&pg(3).unwrap()).0);
        assert!(is_moufangian(&grassmannian(5).unwrap()).0);
        assert!(!is_moufangian(&ag(2).unwrap()).0);
        assert!(!is_moufangian(&pappus().unwrap()).0);
    }

    #[test]
    fn veblen_counts() {
        // each Veblen configuration holds four triangles deriving a line
        assert_eq!(veblen_triangles(&veblen().unwrap()).len(), 4);
        assert_eq!(veblen_triangles(&grassmannian(5).unwrap()).len(), 4 * 5);
        assert_eq!(veblen_triangles(&pg(3).unwrap()).len(), 4 * 105);
        assert!(veblen_triangles(&ag(2).unwrap()).is_empty());
    }

    #[test]
    fn names_round_trip() {
        for name in ["single-line", "veblen", "pappus", "ag(3)", "pg(2)", "slit(2)", "grassmannian(5)", "miter", "mobius-8_3"] {
            let c: Catalog = name.parse().unwrap();
            assert_eq!(c.to_string(), name);
        }
        assert!("ag(x)".parse::<Catalog>().is_err());
        assert!("nothing".parse::<Catalog>().is_err());
        assert!(catalog_by_name("ag(0)").is_err());
        assert!(catalog_by_name("grassmannian(2)").is_err());
    }
}
