//! Isomorphisms, embeddings and automorphism groups, and the product
//! automorphisms `f x tau_u : (a,i) -> (f(a), i+u)` of weaved structures.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::detect::WeaveView;
use crate::error::{Error, Result};
use crate::search::{point_invariants, refine_colors, Matcher};
use crate::structure::{IncidenceStructure, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MorphismKind {
    Isomorphism,
    Embedding,
    Automorphism,
}

/// A point map; `map[p]` is the image of `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Morphism {
    pub kind: MorphismKind,
    pub map: Vec<Point>,
}

impl Morphism {
    pub fn identity(n: usize) -> Self {
        Morphism {
            kind: MorphismKind::Automorphism,
            map: (0..n).collect(),
        }
    }

    pub fn apply(&self, p: Point) -> Point {
        self.map[p]
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &Morphism) -> Morphism {
        Morphism {
            kind: if self.kind == other.kind { self.kind } else { MorphismKind::Embedding },
            map: other.map.iter().map(|&p| self.map[p]).collect(),
        }
    }

    /// Inverse of a bijection.
    pub fn inverse(&self) -> Result<Morphism> {
        let n = self.map.len();
        let mut inv = vec![usize::MAX; n];
        for (p, &q) in self.map.iter().enumerate() {
            if q >= n || inv[q] != usize::MAX {
                return Err(Error::InvalidParameter("map is not a bijection".into()));
            }
            inv[q] = p;
        }
        Ok(Morphism { kind: self.kind, map: inv })
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(p, &q)| p == q)
    }

    /// Injective and sends every line of `a` onto a line of `b`.
    pub fn is_embedding(&self, a: &IncidenceStructure, b: &IncidenceStructure) -> bool {
        if self.map.len() != a.num_points() || self.map.iter().any(|&q| q >= b.num_points()) {
            return false;
        }
        let mut seen = vec![false; b.num_points()];
        for &q in &self.map {
            if std::mem::replace(&mut seen[q], true) {
                return false;
            }
        }
        a.lines()
            .iter()
            .all(|l| b.is_line(self.map[l[0]], self.map[l[1]], self.map[l[2]]))
    }

    /// An embedding that is onto the points and the lines of `b`.
    pub fn is_isomorphism(&self, a: &IncidenceStructure, b: &IncidenceStructure) -> bool {
        a.num_points() == b.num_points() && a.num_lines() == b.num_lines() && self.is_embedding(a, b)
    }
}

/// Invariants that any isomorphism preserves; structures with different
/// fingerprints are not isomorphic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fingerprint {
    pub v: usize,
    pub b: usize,
    pub degrees: Vec<usize>,
    pub triangles: usize,
    pub veblens: usize,
    /// Sorted per-point (degree, triangles, veblen triangles).
    pub point_invariants: Vec<(usize, usize, usize)>,
}

pub fn fingerprint(s: &IncidenceStructure) -> Fingerprint {
    let mut inv = point_invariants(s);
    let triangles = inv.iter().map(|x| x.1).sum::<usize>() / 3;
    let veblens = inv.iter().map(|x| x.2).sum::<usize>() / 12;
    inv.sort_unstable();
    Fingerprint {
        v: s.num_points(),
        b: s.num_lines(),
        degrees: s.degree_multiset(),
        triangles,
        veblens,
        point_invariants: inv,
    }
}

/// A witness isomorphism `a -> b`, the least one in the search order.
pub fn isomorphism(a: &IncidenceStructure, b: &IncidenceStructure) -> Option<Morphism> {
    if a.num_points() != b.num_points() || a.num_lines() != b.num_lines() || a.degree_multiset() != b.degree_multiset() {
        return None;
    }
    if fingerprint(a) != fingerprint(b) {
        return None;
    }
    let colors = refine_colors(a, b)?;
    Matcher::isomorphisms(a, b, colors).first().map(|map| Morphism {
        kind: MorphismKind::Isomorphism,
        map,
    })
}

pub fn are_isomorphic(a: &IncidenceStructure, b: &IncidenceStructure) -> bool {
    isomorphism(a, b).is_some()
}

/// A line-preserving injection `a -> b`.
pub fn embedding(a: &IncidenceStructure, b: &IncidenceStructure) -> Option<Morphism> {
    Matcher::embeddings(a, b).first().map(|map| Morphism {
        kind: MorphismKind::Embedding,
        map,
    })
}

/// Largest structure whose automorphisms are enumerated.
pub const MAX_AUT_POINTS: usize = 128;
/// Largest automorphism group enumerated element by element.
pub const MAX_AUT_ORDER: usize = 2_000_000;

/// Every automorphism, sorted by map.
pub fn automorphisms(s: &IncidenceStructure) -> Result<Vec<Morphism>> {
    if s.num_points() > MAX_AUT_POINTS {
        return Err(Error::SizeCap(format!(
            "{} has {} points; automorphisms are enumerated up to {MAX_AUT_POINTS}",
            s.name(),
            s.num_points()
        )));
    }
    let colors = refine_colors(s, s).expect("a structure refines like itself");
    let all = Matcher::isomorphisms(s, s, colors)
        .all_bounded(MAX_AUT_ORDER)
        .ok_or_else(|| Error::SizeCap(format!("|Aut({})| exceeds {MAX_AUT_ORDER}", s.name())))?;
    Ok(all
        .into_iter()
        .map(|map| Morphism {
            kind: MorphismKind::Automorphism,
            map,
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutGroup {
    pub generators: Vec<Morphism>,
    pub order: usize,
}

/// Subgroup generated by `gens`, by breadth-first multiplication.
pub fn closure(n: usize, gens: &[Morphism]) -> HashSet<Vec<Point>> {
    let id: Vec<Point> = (0..n).collect();
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y: Vec<Point> = x.iter().map(|&p| g.map[p]).collect();
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

/// Generators picked greedily: scanning the sorted elements, keep each one
/// outside the group generated so far.
fn greedy_generators(n: usize, elements: &[Morphism]) -> Vec<Morphism> {
    let mut gens: Vec<Morphism> = Vec::new();
    let mut span = closure(n, &gens);
    for g in elements {
        if !span.contains(&g.map) {
            gens.push(g.clone());
            span = closure(n, &gens);
            if span.len() == elements.len() {
                break;
            }
        }
    }
    gens
}

pub fn automorphism_group(s: &IncidenceStructure) -> Result<AutGroup> {
    let all = automorphisms(s)?;
    let generators = greedy_generators(s.num_points(), &all);
    debug_assert_eq!(closure(s.num_points(), &generators).len(), all.len());
    Ok(AutGroup {
        generators,
        order: all.len(),
    })
}

fn require_automorphism(s: &IncidenceStructure, f: &Morphism, what: &str) -> Result<()> {
    if f.is_isomorphism(s, s) {
        Ok(())
    } else {
        Err(Error::NotAnAutomorphism(format!("{what} is not an automorphism of {}", s.name())))
    }
}

/// `f x tau_u` on a weaved structure, for `f` an automorphism of the base.
pub fn product_automorphism(s: &IncidenceStructure, f: &Morphism, u: usize) -> Result<Morphism> {
    let view = WeaveView::new(s)?;
    product_automorphism_in(s, &view, f, u)
}

fn product_automorphism_in(s: &IncidenceStructure, view: &WeaveView, f: &Morphism, u: usize) -> Result<Morphism> {
    require_automorphism(&view.base, f, "base map")?;
    let map = (0..s.num_points())
        .map(|p| {
            let (a, i) = view.fiber[p];
            view.point(s, f.map[a], i + u).ok_or_else(|| {
                Error::NotProductLabeled(format!("{} lacks the point over {} at weight {}", s.name(), f.map[a], i + u))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let out = Morphism {
        kind: MorphismKind::Automorphism,
        map,
    };
    require_automorphism(s, &out, "product map")?;
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Decomposition {
    /// `F = f x tau_u`.
    Product { f: Morphism, u: usize },
    /// `F` is not of product form. `alpha` is the induced map of the base
    /// when `F` permutes the fibers.
    NotProduct { alpha: Option<Morphism> },
}

/// Splits an automorphism of a weaved structure into `(f, u)` when it has
/// product form. The base map is read off the fibers and the shift off the
/// weights, then the whole map is compared.
pub fn decompose_automorphism(s: &IncidenceStructure, big_f: &Morphism) -> Result<Decomposition> {
    let view = WeaveView::new(s)?;
    decompose_in(s, &view, big_f)
}

fn decompose_in(s: &IncidenceStructure, view: &WeaveView, big_f: &Morphism) -> Result<Decomposition> {
    require_automorphism(s, big_f, "map")?;
    let nb = view.base.num_points();
    let mut alpha = vec![usize::MAX; nb];
    for p in 0..s.num_points() {
        let (a, _) = view.fiber[p];
        let (fa, _) = view.fiber[big_f.map[p]];
        if alpha[a] == usize::MAX {
            alpha[a] = fa;
        } else if alpha[a] != fa {
            return Ok(Decomposition::NotProduct { alpha: None });
        }
    }
    let alpha = Morphism {
        kind: MorphismKind::Automorphism,
        map: alpha,
    };
    if !alpha.is_isomorphism(&view.base, &view.base) {
        return Ok(Decomposition::NotProduct { alpha: None });
    }
    let m = view.m;
    let (_, w0) = view.fiber[0];
    let (_, fw0) = view.fiber[big_f.map[0]];
    let u = (fw0 + m - w0) % m;
    let product = (0..s.num_points()).all(|p| {
        let (a, i) = view.fiber[p];
        view.fiber[big_f.map[p]] == (alpha.map[a], (i + u) % m)
    });
    Ok(if product {
        Decomposition::Product { f: alpha, u }
    } else {
        Decomposition::NotProduct { alpha: Some(alpha) }
    })
}

/// Outcome of comparing `Aut` of a weaved structure with the product group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductReport {
    pub m: usize,
    pub base_order: usize,
    pub order: usize,
    /// Automorphisms of product form.
    pub products: usize,
    /// Every automorphism permutes the sets `L x C_m`, `L` a base line.
    pub permutes_line_fibers: bool,
}

impl ProductReport {
    /// `Aut` is exactly the product group.
    pub fn is_product(&self) -> bool {
        self.order == self.m * self.base_order && self.products == self.order
    }
}

pub fn product_report(s: &IncidenceStructure) -> Result<ProductReport> {
    let view = WeaveView::new(s)?;
    let base_order = automorphisms(&view.base)?.len();
    let all = automorphisms(s)?;
    let mut products = 0;
    for f in &all {
        if let Decomposition::Product { .. } = decompose_in(s, &view, f)? {
            products += 1;
        }
    }
    // L x C_m as sorted point sets
    let line_sets: HashSet<Vec<Point>> = view
        .base
        .lines()
        .iter()
        .map(|l| {
            let mut set: Vec<Point> = (0..s.num_points()).filter(|&p| l.contains(&view.fiber[p].0)).collect();
            set.sort_unstable();
            set
        })
        .collect();
    let permutes_line_fibers = all.iter().all(|f| {
        line_sets.iter().all(|set| {
            let mut image: Vec<Point> = set.iter().map(|&p| f.map[p]).collect();
            image.sort_unstable();
            line_sets.contains(&image)
        })
    });
    Ok(ProductReport {
        m: view.m,
        base_order,
        order: all.len(),
        products,
        permutes_line_fibers,
    })
}

/// On `weave(3, veblen)`: fixes the `p`, `q` fibers by `i -> -i` and the
/// `a, b, c, d` fibers by `i -> 1 - i`.
pub fn veblen_m3_exception(s: &IncidenceStructure) -> Result<Morphism> {
    let view = WeaveView::new(s)?;
    if view.m != 3 {
        return Err(Error::InvalidParameter(format!("expected weights in C_3, got C_{}", view.m)));
    }
    let map = (0..s.num_points())
        .map(|p| {
            let (a, i) = view.fiber[p];
            let j = match view.base.label(a) {
                "p" | "q" => (3 - i) % 3,
                "a" | "b" | "c" | "d" => (4 - i) % 3,
                other => return Err(Error::InvalidParameter(format!("unexpected base point `{other}`"))),
            };
            Ok(view.point(s, a, j).expect("fiber point exists"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Morphism {
        kind: MorphismKind::Automorphism,
        map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{pappus, single_line, veblen};
    use crate::constructions::{convolve, poly_triangle, weave, Perm3};
    use crate::groups::AbelianGroup;
    use itertools::Itertools;

    fn brute_automorphisms(s: &IncidenceStructure) -> usize {
        (0..s.num_points())
            .permutations(s.num_points())
            .filter(|p| {
                Morphism {
                    kind: MorphismKind::Automorphism,
                    map: p.clone(),
                }
                .is_isomorphism(s, s)
            })
            .count()
    }

    #[test]
    fn small_groups_match_brute_force() {
        for s in [single_line().unwrap(), veblen().unwrap(), pappus().unwrap()] {
            let g = automorphism_group(&s).unwrap();
            assert_eq!(g.order, brute_automorphisms(&s), "{}", s.name());
            assert_eq!(closure(s.num_points(), &g.generators).len(), g.order);
        }
        assert_eq!(automorphism_group(&veblen().unwrap()).unwrap().order, 24);
        assert_eq!(automorphism_group(&pappus().unwrap()).unwrap().order, 108);
    }

    #[test]
    fn isomorphism_witnesses() {
        let a = weave(&single_line().unwrap(), 3).unwrap();
        let b = poly_triangle(3, Perm3::ID).unwrap();
        let f = isomorphism(&a, &b).unwrap();
        assert!(f.is_isomorphism(&a, &b));
        assert!(f.inverse().unwrap().is_isomorphism(&b, &a));
        let c3 = AbelianGroup::cyclic(3);
        let v = veblen().unwrap();
        assert!(are_isomorphic(&weave(&v, 3).unwrap(), &convolve(&v, &c3, &c3.zero()).unwrap()));
        assert!(isomorphism(&v, &v).unwrap().is_identity());
        assert!(isomorphism(&poly_triangle(3, Perm3::TAU1).unwrap(), &poly_triangle(3, Perm3::SIGMA0).unwrap()).is_none());
    }

    #[test]
    fn product_maps_compose() {
        let s = weave(&veblen().unwrap(), 4).unwrap();
        let base_auts = automorphisms(&veblen().unwrap()).unwrap();
        let (f, g) = (&base_auts[5], &base_auts[17]);
        let fu = product_automorphism(&s, f, 1).unwrap();
        let gv = product_automorphism(&s, g, 2).unwrap();
        assert_eq!(fu.compose(&gv), product_automorphism(&s, &f.compose(g), 3).unwrap());
        assert_eq!(
            decompose_automorphism(&s, &fu).unwrap(),
            Decomposition::Product { f: f.clone(), u: 1 }
        );
        assert!(product_automorphism(&s, &Morphism::identity(6), 0).unwrap().is_identity());
    }

    #[test]
    fn exceptional_map_is_not_a_product() {
        let s = weave(&veblen().unwrap(), 3).unwrap();
        let f = veblen_m3_exception(&s).unwrap();
        assert!(f.is_isomorphism(&s, &s));
        match decompose_automorphism(&s, &f).unwrap() {
            Decomposition::NotProduct { alpha: Some(a) } => assert!(a.is_identity()),
            other => panic!("unexpected {other:?}"),
        }
    }
}
