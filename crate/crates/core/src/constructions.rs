//! Product constructions over a base partial Steiner triple system.
//!
//! All products label the point `(a, w)` as `a|w` and order points base-major,
//! so `quotient_by_base` recovers the base with its original point order.
//!
//! * weaving: for every base line `{a, b, c}` and `i` in `C_m`, the lines
//!   `{(a,i), (b,i), (c,i+1)}` in all three rotations;
//! * epsilon-weaving: the same with `i + eps` in place of `i + 1`;
//! * convolution with an abelian group `G`: `{(x,α), (y,β), (z,γ)}` with
//!   `α + β + γ = eps`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::anticlique::noncollinearity_classes;
use crate::error::{Error, Result};
use crate::groups::{AbelianGroup, GroupElem};
use crate::structure::{IncidenceStructure, LabelKind, ProductLabel};

/// `(a, i)` index in a base-major product with `k` weights per base point.
#[inline]
fn at(a: usize, i: usize, k: usize) -> usize {
    a * k + i
}

fn product_labels(base: &IncidenceStructure, group: &AbelianGroup) -> Vec<String> {
    let els = group.elements();
    base.points()
        .iter()
        .flat_map(|a| {
            els.iter().map(move |w| {
                ProductLabel {
                    base: a.clone(),
                    weight: w.clone(),
                }
                .render(group)
            })
        })
        .collect()
}

fn check_m(m: usize) -> Result<()> {
    if m < 3 {
        return Err(Error::InvalidParameter(format!("weaving needs m >= 3, got {m}")));
    }
    Ok(())
}

/// The configuration m-weaved from `base`.
pub fn weave(base: &IncidenceStructure, m: usize) -> Result<IncidenceStructure> {
    check_m(m)?;
    weave_lines(base, m, 1, format!("weave({m},{})", base.name()))
}

/// Weaving with the weight pattern `(i, i, i + eps)`. Rejects `eps` whose
/// order in `C_m` is below 3, where the line family stops being partial
/// Steiner.
pub fn weave_eps(base: &IncidenceStructure, m: usize, eps: u64) -> Result<IncidenceStructure> {
    check_m(m)?;
    let group = AbelianGroup::cyclic(m as u64);
    let e = group.int(eps as i64);
    let order = group.element_order(&e)?;
    if order < 3 {
        return Err(Error::InvalidParameter(format!(
            "eps = {eps} has order {order} in C_{m}; weaving needs order >= 3"
        )));
    }
    let name = if e == group.int(1) {
        format!("weave({m},{})", base.name())
    } else {
        format!("weave_eps({m},{},{})", e.coords()[0], base.name())
    };
    weave_lines(base, m, e.coords()[0] as usize, name)
}

fn weave_lines(base: &IncidenceStructure, m: usize, eps: usize, name: String) -> Result<IncidenceStructure> {
    let group = AbelianGroup::cyclic(m as u64);
    let mut lines = Vec::with_capacity(3 * m * base.num_lines());
    for &[a, b, c] in base.lines() {
        for i in 0..m {
            let up = (i + eps) % m;
            lines.push([at(a, i, m), at(b, i, m), at(c, up, m)]);
            lines.push([at(a, i, m), at(c, i, m), at(b, up, m)]);
            lines.push([at(b, i, m), at(c, i, m), at(a, up, m)]);
        }
    }
    IncidenceStructure::new(name, product_labels(base, &group), lines, LabelKind::Product(group))
}

/// The convolution of `base` with `group` at `eps`.
pub fn convolve(base: &IncidenceStructure, group: &AbelianGroup, eps: &GroupElem) -> Result<IncidenceStructure> {
    if !group.contains(eps) {
        return Err(Error::GroupMismatch {
            elem: format!("{:?}", eps.coords()),
            group: group.to_string(),
        });
    }
    let els = group.elements();
    let g = els.len();
    let mut lines = Vec::with_capacity(g * g * base.num_lines());
    for &[x, y, z] in base.lines() {
        for alpha in &els {
            for beta in &els {
                let ab = group.add_unchecked(alpha, beta);
                let gamma = group.sub(eps, &ab)?;
                lines.push([
                    at(x, group.index_of(alpha), g),
                    at(y, group.index_of(beta), g),
                    at(z, group.index_of(&gamma), g),
                ]);
            }
        }
    }
    let name = format!("convolve({},{},{})", base.name(), group, group.render(eps));
    IncidenceStructure::new(name, product_labels(base, group), lines, LabelKind::Product(group.clone()))
}

/// A permutation of `C_3`, `map[x]` being the image of `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm3(pub [usize; 3]);

impl Perm3 {
    pub const ID: Perm3 = Perm3([0, 1, 2]);
    pub const TAU1: Perm3 = Perm3([1, 2, 0]);
    pub const TAU2: Perm3 = Perm3([2, 0, 1]);
    pub const SIGMA0: Perm3 = Perm3([0, 2, 1]);
    pub const SIGMA1: Perm3 = Perm3([2, 1, 0]);
    pub const SIGMA2: Perm3 = Perm3([1, 0, 2]);

    pub const ALL: [Perm3; 6] = [
        Perm3::ID,
        Perm3::TAU1,
        Perm3::TAU2,
        Perm3::SIGMA0,
        Perm3::SIGMA1,
        Perm3::SIGMA2,
    ];

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn name(&self) -> &'static str {
        match self.0 {
            [0, 1, 2] => "id",
            [1, 2, 0] => "tau1",
            [2, 0, 1] => "tau2",
            [0, 2, 1] => "sigma0",
            [2, 1, 0] => "sigma1",
            _ => "sigma2",
        }
    }

    pub fn is_translation(&self) -> bool {
        matches!(self.name(), "tau1" | "tau2")
    }

    pub fn is_reflection(&self) -> bool {
        self.name().starts_with("sigma")
    }
}

impl fmt::Display for Perm3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Perm3 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Perm3::ALL
            .into_iter()
            .find(|p| p.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidParameter(format!("unknown permutation `{s}` of C_3")))
    }
}

/// `m` cyclically inscribed triangles on `C_3 x C_m` closing through `gamma`.
pub fn poly_triangle(m: usize, gamma: Perm3) -> Result<IncidenceStructure> {
    if m < 3 {
        return Err(Error::InvalidParameter(format!("poly_triangle needs m >= 3, got {m}")));
    }
    let group = AbelianGroup::cyclic(m as u64);
    let labels = (0..3)
        .flat_map(|a| (0..m).map(move |i| format!("{a}|{i}")))
        .collect();
    let mut lines = Vec::with_capacity(3 * m);
    for i in 0..m {
        for c in 0..3 {
            let (a, b) = ((c + 1) % 3, (c + 2) % 3);
            let top = if i + 1 < m { at(c, i + 1, m) } else { at(gamma.apply(c), 0, m) };
            lines.push([at(a, i, m), at(b, i, m), top]);
        }
    }
    IncidenceStructure::new(format!("poly({m},{gamma})"), labels, lines, LabelKind::Product(group))
}

/// Collapses every fiber `{a} x G` to `a`.
pub fn quotient_by_base(s: &IncidenceStructure) -> Result<IncidenceStructure> {
    s.product_group()?;
    let mut bases: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut image = Vec::with_capacity(s.num_points());
    for p in 0..s.num_points() {
        let base = s.product_label(p)?.base;
        let next = bases.len();
        let id = *index.entry(base.clone()).or_insert_with(|| {
            bases.push(base);
            next
        });
        image.push(id);
    }
    let mut lines = BTreeSet::new();
    for l in s.lines() {
        let mut t = [image[l[0]], image[l[1]], image[l[2]]];
        t.sort_unstable();
        let distinct = 1 + usize::from(t[0] != t[1]) + usize::from(t[1] != t[2]);
        if distinct < 3 {
            return Err(Error::NotACongruence {
                line: *l,
                image: distinct,
            });
        }
        lines.insert(t);
    }
    let name = format!("quotient({})", s.name());
    IncidenceStructure::new(name, bases, lines.into_iter().collect(), LabelKind::Plain)
}

/// Adds each class of the non-collinearity relation as a new line. The
/// relation must be an equivalence whose classes all have 3 points, and the
/// result must be a linear space.
pub fn linear_completion(s: &IncidenceStructure) -> Result<IncidenceStructure> {
    let classes = noncollinearity_classes(s)
        .ok_or_else(|| Error::NoLinearCompletion("non-collinearity is not an equivalence".into()))?;
    if let Some(bad) = classes.iter().find(|c| c.len() != 3) {
        return Err(Error::NoLinearCompletion(format!(
            "class {bad:?} has {} points, expected 3",
            bad.len()
        )));
    }
    let mut lines: Vec<[usize; 3]> = s.lines().to_vec();
    lines.extend(classes.iter().map(|c| [c[0], c[1], c[2]]));
    let out = IncidenceStructure::new(
        format!("completion({})", s.name()),
        s.points().to_vec(),
        lines,
        s.label_kind().clone(),
    )?;
    if !out.is_linear_space() {
        return Err(Error::NoLinearCompletion("result is not a linear space".into()));
    }
    Ok(out)
}

/// Points `C_3^n x C_3`; lines are the fibers `{(x,0),(x,1),(x,2)}` and
/// `{(x,i), (y,i), (2(x+y), i+1)}` for `x != y`.
pub fn bose(n: usize) -> Result<IncidenceStructure> {
    if n == 0 {
        return Err(Error::InvalidParameter("bose(n) needs n >= 1".into()));
    }
    let vectors = AbelianGroup::new(vec![3; n])?;
    let levels = AbelianGroup::cyclic(3);
    let els = vectors.elements();
    let labels = els
        .iter()
        .flat_map(|x| (0..3).map(move |i| (x, i)))
        .map(|(x, i)| format!("{}|{i}", vectors.render(x)))
        .collect();
    let mut lines = Vec::new();
    for x in 0..els.len() {
        lines.push([at(x, 0, 3), at(x, 1, 3), at(x, 2, 3)]);
    }
    for (xi, x) in els.iter().enumerate() {
        for (yi, y) in els.iter().enumerate().skip(xi + 1) {
            let z = vectors.scalar_mul(2, &vectors.add_unchecked(x, y))?;
            let zi = vectors.index_of(&z);
            for i in 0..3 {
                lines.push([at(xi, i, 3), at(yi, i, 3), at(zi, (i + 1) % 3, 3)]);
            }
        }
    }
    IncidenceStructure::new(format!("bose({n})"), labels, lines, LabelKind::Product(levels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{ag, catalog_by_name, pg, single_line, veblen};

    #[test]
    fn weave_parameters() {
        let s = weave(&single_line().unwrap(), 5).unwrap();
        let p = s.params();
        assert_eq!((p.v, p.r, p.b), (15, Some(3), 15));
        let s = weave(&ag(2).unwrap(), 3).unwrap();
        let p = s.params();
        assert_eq!((p.v, p.r, p.b), (27, Some(12), 108));
    }

    #[test]
    fn weave_rejects_small_m() {
        assert!(weave(&single_line().unwrap(), 2).is_err());
        assert!(poly_triangle(2, Perm3::ID).is_err());
    }

    #[test]
    fn weave_eps_one_is_weave() {
        let base = veblen().unwrap();
        assert_eq!(weave_eps(&base, 5, 1).unwrap(), weave(&base, 5).unwrap());
        assert_eq!(weave_eps(&base, 5, 6).unwrap(), weave(&base, 5).unwrap());
    }

    #[test]
    fn weave_eps_order_two_rejected() {
        let base = single_line().unwrap();
        assert!(matches!(weave_eps(&base, 4, 2), Err(Error::InvalidParameter(_))));
        assert!(weave_eps(&base, 6, 3).is_err());
        assert!(weave_eps(&base, 6, 0).is_err());
    }

    #[test]
    fn weave_eps_components() {
        let s = weave_eps(&single_line().unwrap(), 6, 2).unwrap();
        assert_eq!(s.connected_components().len(), 2);
    }

    #[test]
    fn collinearity_rule() {
        // (a,i) ~ (b,j) iff a ~ b in the base and j - i in {-1, 0, 1}
        let base = ag(2).unwrap();
        for m in [3, 4, 5] {
            let s = weave(&base, m).unwrap();
            for p in 0..s.num_points() {
                for q in 0..s.num_points() {
                    if p == q {
                        continue;
                    }
                    let (a, i) = (p / m, p % m);
                    let (b, j) = (q / m, q % m);
                    let close = (j + m - i) % m;
                    let expect = base.collinear(a, b) && (close == 0 || close == 1 || close == m - 1);
                    assert_eq!(s.collinear(p, q), expect, "m={m} p={p} q={q}");
                }
            }
        }
    }

    #[test]
    fn convolve_parameters() {
        let c4 = AbelianGroup::cyclic(4);
        let s = convolve(&single_line().unwrap(), &c4, &c4.zero()).unwrap();
        let p = s.params();
        assert_eq!((p.v, p.r, p.b), (12, Some(4), 16));
        let g: AbelianGroup = "c3^2".parse().unwrap();
        let s = convolve(&ag(2).unwrap(), &g, &g.elem(&[1, 2]).unwrap()).unwrap();
        let p = s.params();
        assert_eq!((p.v, p.r, p.b), (81, Some(36), 81 * 12));
        assert!(convolve(&ag(2).unwrap(), &g, &c4.zero()).is_err());
    }

    #[test]
    fn trivial_group_convolution_is_base() {
        let c1 = AbelianGroup::cyclic(1);
        let base = pg(3).unwrap();
        let s = convolve(&base, &c1, &c1.zero()).unwrap();
        assert_eq!(s.lines(), base.lines());
        assert_eq!(s.label(5), format!("{}|0", base.label(5)));
    }

    #[test]
    fn poly_triangle_shape() {
        for m in 3..7 {
            for g in Perm3::ALL {
                let s = poly_triangle(m, g).unwrap();
                let p = s.params();
                assert_eq!((p.v, p.r, p.b), (3 * m, Some(3), 3 * m));
            }
        }
        assert_eq!(poly_triangle(4, Perm3::ID).unwrap().lines(), weave(&single_line().unwrap(), 4).unwrap().lines());
    }

    #[test]
    fn perm_names() {
        for p in Perm3::ALL {
            assert_eq!(p.name().parse::<Perm3>().unwrap(), p);
        }
        assert!(Perm3::TAU1.is_translation());
        assert!(Perm3::SIGMA0.is_reflection());
        // sigma0 is x -> -x
        for x in 0..3 {
            assert_eq!(Perm3::SIGMA0.apply(x), (3 - x) % 3);
            assert_eq!(Perm3::TAU1.apply(x), (x + 1) % 3);
        }
    }

    #[test]
    fn quotient_recovers_base() {
        for name in ["veblen", "pappus", "pg(3)", "ag(2)"] {
            let base = catalog_by_name(name).unwrap();
            for m in [3, 4] {
                let q = quotient_by_base(&weave(&base, m).unwrap()).unwrap();
                assert_eq!(q.points(), base.points());
                assert_eq!(q.lines(), base.lines());
            }
        }
        let c3 = AbelianGroup::cyclic(3);
        let conv = convolve(&ag(2).unwrap(), &c3, &c3.int(1)).unwrap();
        assert!(quotient_by_base(&conv).unwrap().same_labeled(&ag(2).unwrap()));
        assert!(matches!(quotient_by_base(&ag(2).unwrap()), Err(Error::NotProductLabeled(_))));
    }

    #[test]
    fn quotient_rejects_collapsing_lines() {
        let c3 = AbelianGroup::cyclic(3);
        let fibre = IncidenceStructure::new(
            "fibre",
            vec!["a|0".into(), "a|1".into(), "a|2".into()],
            vec![[0, 1, 2]],
            LabelKind::Product(c3),
        )
        .unwrap();
        assert!(matches!(quotient_by_base(&fibre), Err(Error::NotACongruence { image: 1, .. })));
    }

    #[test]
    fn completion_of_weaved_ag2() {
        let w = weave(&ag(2).unwrap(), 3).unwrap();
        let c = linear_completion(&w).unwrap();
        assert_eq!((c.num_points(), c.num_lines()), (27, 117));
        assert!(c.is_linear_space());
        // added lines are exactly the fibers {a} x C_3
        let added: Vec<_> = c.lines().iter().filter(|l| !w.lines().contains(l)).collect();
        assert_eq!(added.len(), 9);
        for l in added {
            assert_eq!((l[0] / 3, l[0] % 3), (l[2] / 3, 0));
            assert_eq!(l[1], l[0] + 1);
            assert_eq!(l[2], l[0] + 2);
        }
        assert!(matches!(
            linear_completion(&weave(&ag(2).unwrap(), 4).unwrap()),
            Err(Error::NoLinearCompletion(_))
        ));
    }

    #[test]
    fn bose_matches_completion() {
        for n in [1, 2] {
            let b = bose(n).unwrap();
            let c = linear_completion(&weave(&ag(n).unwrap(), 3).unwrap()).unwrap();
            assert_eq!(b.points(), c.points());
            assert_eq!(b.lines(), c.lines());
        }
        assert!(bose(0).is_err());
    }
}
