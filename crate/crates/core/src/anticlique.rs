//! Anti-cliques (sets of pairwise non-collinear points) and anti-clique
//! hyperplanes.

use crate::structure::{IncidenceStructure, Point};

#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn full(n: usize) -> Self {
        let mut b = Self::empty(n);
        for i in 0..n {
            b.insert(i);
        }
        b
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn and_not(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & !b).collect())
    }

    fn count_and(&self, other: &Bits) -> u32 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a & b).count_ones()).sum()
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            (0..64).filter(move |b| word >> b & 1 == 1).map(move |b| w * 64 + b)
        })
    }
}

/// Bron–Kerbosch with pivoting on the non-collinearity graph.
fn bron_kerbosch(adj: &[Bits], r: &mut Vec<Point>, mut p: Bits, mut x: Bits, out: &mut Vec<Vec<Point>>) {
    if p.is_empty() {
        if x.is_empty() {
            let mut clique = r.clone();
            clique.sort_unstable();
            out.push(clique);
        }
        return;
    }
    let pivot = p
        .iter()
        .chain(x.iter())
        .max_by_key(|&u| adj[u].count_and(&p))
        .unwrap();
    let candidates: Vec<Point> = p.and_not(&adj[pivot]).iter().collect();
    for v in candidates {
        r.push(v);
        bron_kerbosch(adj, r, p.and(&adj[v]), x.and(&adj[v]), out);
        r.pop();
        p.remove(v);
        x.insert(v);
    }
}

/// All inclusion-maximal anti-cliques, each ascending, sorted.
pub fn maximal_anticliques(s: &IncidenceStructure) -> Vec<Vec<Point>> {
    let v = s.num_points();
    let adj: Vec<Bits> = (0..v)
        .map(|p| {
            let mut b = Bits::empty(v);
            for q in 0..v {
                if q != p && !s.collinear(p, q) {
                    b.insert(q);
                }
            }
            b
        })
        .collect();
    let mut out = Vec::new();
    if v > 0 {
        bron_kerbosch(&adj, &mut Vec::new(), Bits::full(v), Bits::empty(v), &mut out);
    }
    out.sort();
    out
}

pub fn is_anticlique(s: &IncidenceStructure, set: &[Point]) -> bool {
    set.iter()
        .enumerate()
        .all(|(i, &p)| set[i + 1..].iter().all(|&q| p != q && !s.collinear(p, q)))
}

/// `set` is an anti-clique meeting every line in exactly one point.
pub fn is_anticlique_hyperplane(s: &IncidenceStructure, set: &[Point]) -> bool {
    let v = s.num_points();
    if set.iter().any(|&p| p >= v) || !is_anticlique(s, set) {
        return false;
    }
    let mut inside = Bits::empty(v);
    for &p in set {
        inside.insert(p);
    }
    s.lines()
        .iter()
        .all(|l| l.iter().filter(|&&p| inside.contains(p)).count() == 1)
}

/// Every anti-clique hyperplane, found among the maximal anti-cliques (a
/// hyperplane that is an anti-clique is maximal: each outside point lies on
/// a line through a member).
pub fn anticlique_hyperplanes(s: &IncidenceStructure) -> Vec<Vec<Point>> {
    maximal_anticliques(s)
        .into_iter()
        .filter(|h| is_anticlique_hyperplane(s, h))
        .collect()
}

/// Whether non-collinearity (with each point related to itself) is an
/// equivalence relation; returns its classes when it is.
pub fn noncollinearity_classes(s: &IncidenceStructure) -> Option<Vec<Vec<Point>>> {
    let v = s.num_points();
    let mut class_of = vec![usize::MAX; v];
    let mut classes: Vec<Vec<Point>> = Vec::new();
    for p in 0..v {
        if class_of[p] != usize::MAX {
            continue;
        }
        let class: Vec<Point> = (0..v).filter(|&q| q == p || !s.collinear(p, q)).collect();
        for &q in &class {
            if class_of[q] != usize::MAX {
                return None;
            }
            class_of[q] = classes.len();
        }
        if !is_anticlique(s, &class) {
            return None;
        }
        classes.push(class);
    }
    Some(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::LabelKind;

    fn s(v: usize, lines: Vec<[usize; 3]>) -> IncidenceStructure {
        let pts = (0..v).map(|i| i.to_string()).collect();
        IncidenceStructure::new("t", pts, lines, LabelKind::Plain).unwrap()
    }

    /// Exhaustive oracle over all subsets.
    fn brute_maximal(st: &IncidenceStructure) -> Vec<Vec<Point>> {
        let v = st.num_points();
        let anti: Vec<Vec<Point>> = (0u32..1 << v)
            .map(|mask| (0..v).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>())
            .filter(|set| is_anticlique(st, set))
            .collect();
        let mut out: Vec<Vec<Point>> = anti
            .iter()
            .filter(|a| {
                !anti
                    .iter()
                    .any(|b| b.len() > a.len() && a.iter().all(|x| b.contains(x)))
            })
            .cloned()
            .collect();
        out.sort();
        out
    }

    #[test]
    fn matches_exhaustive_oracle() {
        let veblen = s(6, vec![[0, 1, 4], [0, 2, 5], [1, 3, 5], [2, 3, 4]]);
        assert_eq!(maximal_anticliques(&veblen), brute_maximal(&veblen));
        assert_eq!(maximal_anticliques(&veblen), vec![vec![0, 3], vec![1, 2], vec![4, 5]]);
        let mixed = s(8, vec![[0, 1, 2], [2, 3, 4], [4, 5, 6], [0, 5, 7]]);
        assert_eq!(maximal_anticliques(&mixed), brute_maximal(&mixed));
    }

    #[test]
    fn veblen_noncollinear_pair_is_hyperplane() {
        let veblen = s(6, vec![[0, 1, 4], [0, 2, 5], [1, 3, 5], [2, 3, 4]]);
        assert!(is_anticlique_hyperplane(&veblen, &[4, 5]));
        assert!(!is_anticlique_hyperplane(&veblen, &[4]));
        assert!(!is_anticlique_hyperplane(&veblen, &[0, 1]));
        assert_eq!(anticlique_hyperplanes(&veblen).len(), 3);
        let classes = noncollinearity_classes(&veblen).unwrap();
        assert_eq!(classes, vec![vec![0, 3], vec![1, 2], vec![4, 5]]);
    }

    #[test]
    fn non_equivalence_detected() {
        // 0 is non-collinear with 3 and 4, but 3 and 4 are collinear
        let st = s(5, vec![[0, 1, 2], [1, 3, 4]]);
        assert!(noncollinearity_classes(&st).is_none());
    }
}
