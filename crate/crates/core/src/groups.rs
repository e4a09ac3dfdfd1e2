//! Finite abelian groups given as direct products of cyclic groups.
//!
//! Elements are coordinate vectors reduced modulo each factor. The textual
//! group syntax is `c3`, `c4`, `c3^2`, `c3xc4`; single-factor elements render
//! as a bare integer, everything else as `(c1,...,ck)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `C_{m1} x ... x C_{mk}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    moduli: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElem {
    coords: Vec<u64>,
}

impl GroupElem {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }
}

impl AbelianGroup {
    pub fn new(moduli: Vec<u64>) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::InvalidParameter("group needs at least one factor".into()));
        }
        if moduli.contains(&0) {
            return Err(Error::InvalidParameter("cyclic factor of order 0".into()));
        }
        Ok(Self { moduli })
    }

    pub fn cyclic(m: u64) -> Self {
        Self::new(vec![m]).expect("cyclic group of order 0")
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn order(&self) -> u64 {
        self.moduli.iter().product()
    }

    /// `Some(m)` when the group is a single cyclic factor `C_m`.
    pub fn as_cyclic(&self) -> Option<u64> {
        (self.moduli.len() == 1).then(|| self.moduli[0])
    }

    pub fn zero(&self) -> GroupElem {
        GroupElem {
            coords: vec![0; self.moduli.len()],
        }
    }

    /// Element with the given coordinates, reduced modulo each factor.
    pub fn elem(&self, coords: &[i64]) -> Result<GroupElem> {
        if coords.len() != self.moduli.len() {
            return Err(Error::GroupMismatch {
                elem: format!("{coords:?}"),
                group: self.to_string(),
            });
        }
        let coords = coords
            .iter()
            .zip(&self.moduli)
            .map(|(&c, &m)| c.rem_euclid(m as i64) as u64)
            .collect();
        Ok(GroupElem { coords })
    }

    /// Shorthand for cyclic groups.
    pub fn int(&self, value: i64) -> GroupElem {
        let m = self.as_cyclic().expect("int() needs a cyclic group");
        GroupElem {
            coords: vec![value.rem_euclid(m as i64) as u64],
        }
    }

    pub fn contains(&self, a: &GroupElem) -> bool {
        a.coords.len() == self.moduli.len()
            && a.coords.iter().zip(&self.moduli).all(|(c, m)| c < m)
    }

    fn check(&self, a: &GroupElem) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::GroupMismatch {
                elem: format!("{:?}", a.coords),
                group: self.to_string(),
            })
        }
    }

    pub fn add(&self, a: &GroupElem, b: &GroupElem) -> Result<GroupElem> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, b))
    }

    pub(crate) fn add_unchecked(&self, a: &GroupElem, b: &GroupElem) -> GroupElem {
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .zip(&self.moduli)
            .map(|((x, y), m)| (x + y) % m)
            .collect();
        GroupElem { coords }
    }

    pub fn neg(&self, a: &GroupElem) -> Result<GroupElem> {
        self.check(a)?;
        let coords = a
            .coords
            .iter()
            .zip(&self.moduli)
            .map(|(x, m)| (m - x) % m)
            .collect();
        Ok(GroupElem { coords })
    }

    pub fn sub(&self, a: &GroupElem, b: &GroupElem) -> Result<GroupElem> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    pub fn scalar_mul(&self, n: i64, a: &GroupElem) -> Result<GroupElem> {
        self.check(a)?;
        let coords = a
            .coords
            .iter()
            .zip(&self.moduli)
            .map(|(&x, &m)| ((n.rem_euclid(m as i64) as u64) * x) % m)
            .collect();
        Ok(GroupElem { coords })
    }

    /// Least `n >= 1` with `n * a = 0`.
    pub fn element_order(&self, a: &GroupElem) -> Result<u64> {
        self.check(a)?;
        Ok(a.coords
            .iter()
            .zip(&self.moduli)
            .map(|(&x, &m)| m / gcd(x, m))
            .fold(1, lcm))
    }

    /// All elements, coordinates in lexicographic order.
    pub fn elements(&self) -> Vec<GroupElem> {
        let mut out = vec![self.zero()];
        for (k, &m) in self.moduli.iter().enumerate() {
            out = out
                .into_iter()
                .flat_map(|e| {
                    (0..m).map(move |c| {
                        let mut e = e.clone();
                        e.coords[k] = c;
                        e
                    })
                })
                .collect();
        }
        out.sort();
        out
    }

    /// Position of `a` in [`elements`](Self::elements).
    pub fn index_of(&self, a: &GroupElem) -> usize {
        a.coords
            .iter()
            .zip(&self.moduli)
            .fold(0usize, |acc, (&c, &m)| acc * m as usize + c as usize)
    }

    pub fn render(&self, a: &GroupElem) -> String {
        if a.coords.len() == 1 {
            a.coords[0].to_string()
        } else {
            let parts: Vec<String> = a.coords.iter().map(u64::to_string).collect();
            format!("({})", parts.join(","))
        }
    }

    pub fn parse_elem(&self, s: &str) -> Result<GroupElem> {
        let bad = || Error::GroupMismatch {
            elem: s.to_string(),
            group: self.to_string(),
        };
        let s = s.trim();
        let tuple = s.strip_prefix('(').and_then(|t| t.strip_suffix(')'));
        let coords: Vec<u64> = if let Some(inner) = tuple {
            inner
                .split(',')
                .map(|t| t.trim().parse::<u64>().map_err(|_| bad()))
                .collect::<Result<_>>()?
        } else {
            vec![s.parse::<u64>().map_err(|_| bad())?]
        };
        let e = GroupElem { coords };
        if self.contains(&e) && tuple.is_some() == (self.moduli.len() > 1) {
            Ok(e)
        } else {
            Err(bad())
        }
    }
}

/// Unit multipliers of `Z_m`; each `u` stands for the automorphism `x -> u*x`.
/// The trivial group `C_1` has only the identity, reported as `[0]`.
pub fn cyclic_automorphisms(m: u64) -> Vec<u64> {
    if m == 1 {
        return vec![0];
    }
    (1..m).filter(|&u| gcd(u, m) == 1).collect()
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let all_equal = self.moduli.windows(2).all(|w| w[0] == w[1]);
        if all_equal && self.moduli.len() > 1 {
            write!(f, "c{}^{}", self.moduli[0], self.moduli.len())
        } else {
            let parts: Vec<String> = self.moduli.iter().map(|m| format!("c{m}")).collect();
            write!(f, "{}", parts.join("x"))
        }
    }
}

impl FromStr for AbelianGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("bad group `{s}` (expected e.g. c3, c3^2, c3xc4)"));
        let mut moduli = Vec::new();
        for factor in s.trim().to_ascii_lowercase().split('x') {
            let body = factor.strip_prefix('c').ok_or_else(bad)?;
            let (m, k) = match body.split_once('^') {
                Some((m, k)) => (m, k.parse::<usize>().map_err(|_| bad())?),
                None => (body, 1),
            };
            let m = m.parse::<u64>().map_err(|_| bad())?;
            if m == 0 || k == 0 {
                return Err(bad());
            }
            moduli.extend(std::iter::repeat_n(m, k));
        }
        AbelianGroup::new(moduli)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cyclic_addition() {
        let c3 = AbelianGroup::cyclic(3);
        assert_eq!(c3.add(&c3.int(2), &c3.int(2)).unwrap(), c3.int(1));
    }

    #[test]
    fn product_addition() {
        let g: AbelianGroup = "c3^2".parse().unwrap();
        let a = g.elem(&[1, 2]).unwrap();
        let b = g.elem(&[2, 2]).unwrap();
        assert_eq!(g.add(&a, &b).unwrap(), g.elem(&[0, 1]).unwrap());
        assert_eq!(g.render(&g.add(&a, &b).unwrap()), "(0,1)");
    }

    #[test]
    fn element_orders() {
        let c6 = AbelianGroup::cyclic(6);
        assert_eq!(c6.element_order(&c6.int(2)).unwrap(), 3);
        assert_eq!(c6.element_order(&c6.zero()).unwrap(), 1);
        let g: AbelianGroup = "c3xc3".parse().unwrap();
        assert_eq!(g.element_order(&g.elem(&[1, 0]).unwrap()).unwrap(), 3);
        let h: AbelianGroup = "c4xc6".parse().unwrap();
        assert_eq!(h.element_order(&h.elem(&[1, 2]).unwrap()).unwrap(), 12);
    }

    #[test]
    fn units() {
        assert_eq!(cyclic_automorphisms(3), vec![1, 2]);
        assert_eq!(cyclic_automorphisms(4), vec![1, 3]);
        assert_eq!(cyclic_automorphisms(1), vec![0]);
        assert_eq!(cyclic_automorphisms(9), vec![1, 2, 4, 5, 7, 8]);
    }

    #[test]
    fn mismatched_group() {
        let c3 = AbelianGroup::cyclic(3);
        let c4 = AbelianGroup::cyclic(4);
        assert!(c3.add(&c3.int(1), &c4.int(3)).is_err());
        let g: AbelianGroup = "c3^2".parse().unwrap();
        assert!(g.add(&g.zero(), &c3.int(1)).is_err());
    }

    #[test]
    fn group_syntax() {
        for (text, moduli, shown) in [
            ("c3", vec![3], "c3"),
            ("c4", vec![4], "c4"),
            ("c3^2", vec![3, 3], "c3^2"),
            ("c3xc4", vec![3, 4], "c3xc4"),
            ("C2xc2", vec![2, 2], "c2^2"),
        ] {
            let g: AbelianGroup = text.parse().unwrap();
            assert_eq!(g.moduli(), moduli.as_slice());
            assert_eq!(g.to_string(), shown);
        }
        for bad in ["", "3", "c0", "c3^0", "cx", "c3y4"] {
            assert!(bad.parse::<AbelianGroup>().is_err(), "{bad}");
        }
    }

    #[test]
    fn render_parse() {
        let c5 = AbelianGroup::cyclic(5);
        assert_eq!(c5.parse_elem("4").unwrap(), c5.int(4));
        assert!(c5.parse_elem("5").is_err());
        assert!(c5.parse_elem("(4)").is_err());
        let g: AbelianGroup = "c2xc3".parse().unwrap();
        let e = g.parse_elem("(1,2)").unwrap();
        assert_eq!(g.render(&e), "(1,2)");
        assert!(g.parse_elem("1").is_err());
    }

    #[test]
    fn elements_are_indexed() {
        let g: AbelianGroup = "c2xc3".parse().unwrap();
        let els = g.elements();
        assert_eq!(els.len(), 6);
        for (i, e) in els.iter().enumerate() {
            assert_eq!(g.index_of(e), i);
        }
    }

    fn group_and_elems() -> impl Strategy<Value = (AbelianGroup, Vec<i64>, Vec<i64>, Vec<i64>)> {
        prop::collection::vec(1u64..7, 1..4).prop_flat_map(|moduli| {
            let k = moduli.len();
            (
                Just(AbelianGroup::new(moduli).unwrap()),
                prop::collection::vec(-20i64..20, k),
                prop::collection::vec(-20i64..20, k),
                prop::collection::vec(-20i64..20, k),
            )
        })
    }

    proptest! {
        #[test]
        fn group_axioms((g, a, b, c) in group_and_elems()) {
            let (a, b, c) = (g.elem(&a).unwrap(), g.elem(&b).unwrap(), g.elem(&c).unwrap());
            prop_assert_eq!(g.add(&a, &b).unwrap(), g.add(&b, &a).unwrap());
            let ab_c = g.add(&g.add(&a, &b).unwrap(), &c).unwrap();
            let a_bc = g.add(&a, &g.add(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            prop_assert_eq!(g.add(&a, &g.neg(&a).unwrap()).unwrap(), g.zero());
            let n = g.element_order(&a).unwrap();
            prop_assert_eq!(g.order() % n, 0);
            prop_assert_eq!(g.scalar_mul(n as i64, &a).unwrap(), g.zero());
            for k in 1..n {
                prop_assert_ne!(g.scalar_mul(k as i64, &a).unwrap(), g.zero());
            }
        }

        #[test]
        fn units_are_bijections_fixing_zero(m in 1u64..30) {
            for u in cyclic_automorphisms(m) {
                let mut image: Vec<u64> = (0..m).map(|x| (u * x) % m).collect();
                prop_assert_eq!(image[0], 0);
                image.sort();
                prop_assert_eq!(image, (0..m).collect::<Vec<_>>());
            }
        }
    }
}
