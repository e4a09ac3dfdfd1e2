//! Backtracking search for line-preserving injections `pattern -> host`.
//!
//! Pattern points are placed one at a time in a precomputed order. A point
//! that completes a pattern line with two placed points is forced to the
//! host's third point; otherwise it is drawn from the host neighbours of a
//! placed collinear point. In induced mode non-collinear pairs must stay
//! non-collinear, which together with equal sizes makes every solution an
//! isomorphism.

use std::collections::HashMap;
use std::ops::ControlFlow;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::structure::{IncidenceStructure, Point};
use crate::triangle::{triangles, veblen_triangles};

#[derive(Clone, Debug)]
struct Step {
    point: Point,
    forced: Option<(usize, usize)>,
    anchor: Option<usize>,
    /// Pairs of earlier positions that form a pattern line with this point.
    line_checks: Vec<(usize, usize)>,
    collinear: Vec<usize>,
    noncollinear: Vec<usize>,
}

pub(crate) struct Matcher<'a> {
    pattern: &'a IncidenceStructure,
    host: &'a IncidenceStructure,
    steps: Vec<Step>,
    induced: bool,
    colors: Option<(Vec<u32>, Vec<u32>)>,
    /// Host points grouped by color, for roots in colored searches.
    host_by_color: HashMap<u32, Vec<Point>>,
}

impl<'a> Matcher<'a> {
    /// Weak embeddings: pattern lines map onto host lines, nothing else.
    pub(crate) fn embeddings(pattern: &'a IncidenceStructure, host: &'a IncidenceStructure) -> Self {
        Self::build(pattern, host, false, None)
    }

    /// Isomorphisms restricted to color-preserving maps.
    pub(crate) fn isomorphisms(
        pattern: &'a IncidenceStructure,
        host: &'a IncidenceStructure,
        colors: (Vec<u32>, Vec<u32>),
    ) -> Self {
        Self::build(pattern, host, true, Some(colors))
    }

    fn build(
        pattern: &'a IncidenceStructure,
        host: &'a IncidenceStructure,
        induced: bool,
        colors: Option<(Vec<u32>, Vec<u32>)>,
    ) -> Self {
        let mut host_by_color: HashMap<u32, Vec<Point>> = HashMap::new();
        if let Some((_, hc)) = &colors {
            for (p, &c) in hc.iter().enumerate() {
                host_by_color.entry(c).or_default().push(p);
            }
        }
        let steps = plan(pattern, colors.as_ref().map(|(pc, _)| (pc.as_slice(), &host_by_color)));
        Matcher {
            pattern,
            host,
            steps,
            induced,
            colors,
            host_by_color,
        }
    }

    fn root_candidates(&self, step: &Step) -> Vec<Point> {
        match &self.colors {
            Some((pc, _)) => self
                .host_by_color
                .get(&pc[step.point])
                .cloned()
                .unwrap_or_default(),
            None => (0..self.host.num_points()).collect(),
        }
    }

    fn admissible(&self, step: &Step, cand: Point, map: &[Point], used: &[bool]) -> bool {
        if used[cand] {
            return false;
        }
        let h = self.host;
        let pd = self.pattern.degree(step.point);
        let hd = h.degree(cand);
        if self.induced {
            if pd != hd {
                return false;
            }
        } else if hd < pd {
            return false;
        }
        if let Some((pc, hc)) = &self.colors {
            if pc[step.point] != hc[cand] {
                return false;
            }
        }
        if !step.collinear.iter().all(|&j| h.collinear(map[j], cand)) {
            return false;
        }
        if !step
            .line_checks
            .iter()
            .all(|&(j, k)| h.third(map[j], map[k]) == Some(cand))
        {
            return false;
        }
        if self.induced && step.noncollinear.iter().any(|&j| h.collinear(map[j], cand)) {
            return false;
        }
        true
    }

    fn extend<F>(&self, depth: usize, map: &mut Vec<Point>, used: &mut [bool], visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[Point]) -> ControlFlow<()>,
    {
        if depth == self.steps.len() {
            let mut out = vec![0; self.steps.len()];
            for (pos, step) in self.steps.iter().enumerate() {
                out[step.point] = map[pos];
            }
            return visit(&out);
        }
        let step = &self.steps[depth];
        let mut try_one = |cand: Point, map: &mut Vec<Point>, used: &mut [bool]| {
            if !self.admissible(step, cand, map, used) {
                return ControlFlow::Continue(());
            }
            map.push(cand);
            used[cand] = true;
            let r = self.extend(depth + 1, map, used, visit);
            used[cand] = false;
            map.pop();
            r
        };
        if let Some((j, k)) = step.forced {
            match self.host.third(map[j], map[k]) {
                Some(cand) => try_one(cand, map, used),
                None => ControlFlow::Continue(()),
            }
        } else if let Some(j) = step.anchor {
            let anchor = map[j];
            for &cand in self.host.neighbors(anchor) {
                try_one(cand, map, used)?;
            }
            ControlFlow::Continue(())
        } else {
            for cand in self.root_candidates(step) {
                try_one(cand, map, used)?;
            }
            ControlFlow::Continue(())
        }
    }

    fn sizes_fit(&self) -> bool {
        let (p, h) = (self.pattern, self.host);
        if self.induced {
            p.num_points() == h.num_points() && p.num_lines() == h.num_lines()
        } else {
            p.num_points() <= h.num_points() && p.num_lines() <= h.num_lines()
        }
    }

    /// Visits solutions in canonical order (candidates ascending at each
    /// level) until `visit` breaks. Each solution maps pattern point `i` to
    /// `sol[i]`.
    pub(crate) fn for_each<F>(&self, mut visit: F)
    where
        F: FnMut(&[Point]) -> ControlFlow<()>,
    {
        if !self.sizes_fit() {
            return;
        }
        if self.steps.is_empty() {
            let _ = visit(&[]);
            return;
        }
        let mut map = Vec::with_capacity(self.steps.len());
        let mut used = vec![false; self.host.num_points()];
        let _ = self.extend(0, &mut map, &mut used, &mut visit);
    }

    pub(crate) fn first(&self) -> Option<Vec<Point>> {
        let mut found = None;
        self.for_each(|sol| {
            found = Some(sol.to_vec());
            ControlFlow::Break(())
        });
        found
    }

    /// All solutions, splitting the search across root candidates. The
    /// result is sorted, so it does not depend on scheduling.
    pub(crate) fn all(&self) -> Vec<Vec<Point>> {
        self.all_bounded(usize::MAX).expect("unbounded enumeration")
    }

    /// Like [`all`](Self::all), but gives up with `None` once more than `cap`
    /// solutions exist.
    pub(crate) fn all_bounded(&self, cap: usize) -> Option<Vec<Vec<Point>>> {
        if !self.sizes_fit() {
            return Some(Vec::new());
        }
        if self.steps.is_empty() {
            return Some(vec![Vec::new()]);
        }
        let count = AtomicUsize::new(0);
        let roots = self.root_candidates(&self.steps[0]);
        let mut out: Vec<Vec<Point>> = roots
            .par_iter()
            .flat_map_iter(|&root| {
                let mut sols = Vec::new();
                let mut map = Vec::with_capacity(self.steps.len());
                let mut used = vec![false; self.host.num_points()];
                let step = &self.steps[0];
                if self.admissible(step, root, &map, &used) {
                    map.push(root);
                    used[root] = true;
                    let _ = self.extend(1, &mut map, &mut used, &mut |sol: &[Point]| {
                        if count.fetch_add(1, Ordering::Relaxed) >= cap {
                            return ControlFlow::Break(());
                        }
                        sols.push(sol.to_vec());
                        ControlFlow::Continue(())
                    });
                }
                sols
            })
            .collect();
        if count.load(Ordering::Relaxed) > cap {
            return None;
        }
        out.sort_unstable();
        Some(out)
    }
}

/// Greedy placement order: forced points first, then points with the most
/// placed collinear partners, then higher degree.
fn plan(pattern: &IncidenceStructure, colors: Option<(&[u32], &HashMap<u32, Vec<Point>>)>) -> Vec<Step> {
    let v = pattern.num_points();
    let mut pos = vec![usize::MAX; v];
    let mut steps: Vec<Step> = Vec::with_capacity(v);
    for _ in 0..v {
        let placed = |p: Point| pos[p] != usize::MAX;
        let mut best: Option<(Point, (bool, usize, i64, usize))> = None;
        for p in (0..v).filter(|&p| !placed(p)) {
            let forced = pattern.lines_through(p).iter().any(|&li| {
                pattern.lines()[li].iter().all(|&x| x == p || placed(x))
            });
            let links = pattern.neighbors(p).iter().filter(|&&q| placed(q)).count();
            // among roots in colored searches prefer small color classes
            let rarity = match colors {
                Some((pc, by_color)) if links == 0 => {
                    -(by_color.get(&pc[p]).map_or(0, Vec::len) as i64)
                }
                _ => 0,
            };
            let score = (forced, links, rarity, pattern.degree(p));
            if best.as_ref().is_none_or(|(_, b)| score > *b) {
                best = Some((p, score));
            }
        }
        let (p, _) = best.expect("unplaced point remains");
        let mut step = Step {
            point: p,
            forced: None,
            anchor: None,
            line_checks: Vec::new(),
            collinear: Vec::new(),
            noncollinear: Vec::new(),
        };
        for &li in pattern.lines_through(p) {
            let others: Vec<Point> = pattern.lines()[li].iter().copied().filter(|&x| x != p).collect();
            if others.iter().all(|&x| placed(x)) {
                step.line_checks.push((pos[others[0]], pos[others[1]]));
            }
        }
        step.forced = step.line_checks.first().copied();
        for q in (0..v).filter(|&q| q != p && placed(q)) {
            if pattern.collinear(p, q) {
                step.collinear.push(pos[q]);
            } else {
                step.noncollinear.push(pos[q]);
            }
        }
        step.anchor = step.collinear.first().copied();
        pos[p] = steps.len();
        steps.push(step);
    }
    steps
}

/// Per-point invariants: degree, triangles through the point, and triangles
/// through it whose derived set is a line.
pub(crate) fn point_invariants(s: &IncidenceStructure) -> Vec<(usize, usize, usize)> {
    let mut tri = vec![0; s.num_points()];
    for t in triangles(s) {
        for p in t.points() {
            tri[p] += 1;
        }
    }
    let mut veb = vec![0; s.num_points()];
    for t in veblen_triangles(s) {
        for p in t.points() {
            veb[p] += 1;
        }
    }
    (0..s.num_points()).map(|p| (s.degree(p), tri[p], veb[p])).collect()
}

type ColorKey = (u32, Vec<u64>);

fn histogram(colors: &[u32]) -> HashMap<u32, usize> {
    let mut h = HashMap::new();
    for &c in colors {
        *h.entry(c).or_insert(0) += 1;
    }
    h
}

/// Joint color refinement of two structures. Starts from
/// [`point_invariants`] and refines by the colors of the other two points on
/// each line through a point. Returns `None` as soon as the color
/// histograms differ, which proves the structures non-isomorphic.
pub(crate) fn refine_colors(a: &IncidenceStructure, b: &IncidenceStructure) -> Option<(Vec<u32>, Vec<u32>)> {
    let mut names: HashMap<(usize, usize, usize), u32> = HashMap::new();
    let mut initial = |s: &IncidenceStructure| -> Vec<u32> {
        point_invariants(s)
            .into_iter()
            .map(|inv| {
                let next = names.len() as u32;
                *names.entry(inv).or_insert(next)
            })
            .collect()
    };
    let mut ca = initial(a);
    let mut cb = if std::ptr::eq(a, b) { ca.clone() } else { initial(b) };
    if histogram(&ca) != histogram(&cb) {
        return None;
    }
    let mut classes = histogram(&ca).len();
    loop {
        let mut names: HashMap<ColorKey, u32> = HashMap::new();
        let mut step = |s: &IncidenceStructure, c: &[u32]| -> Vec<u32> {
            (0..s.num_points())
                .map(|p| {
                    let mut sig: Vec<u64> = s
                        .lines_through(p)
                        .iter()
                        .map(|&li| {
                            let mut o = s.lines()[li].iter().filter(|&&x| x != p).map(|&x| c[x] as u64);
                            let (x, y) = (o.next().unwrap(), o.next().unwrap());
                            (x.min(y) << 32) | x.max(y)
                        })
                        .collect();
                    sig.sort_unstable();
                    let next = names.len() as u32;
                    *names.entry((c[p], sig)).or_insert(next)
                })
                .collect()
        };
        let na = step(a, &ca);
        let nb = step(b, &cb);
        if histogram(&na) != histogram(&nb) {
            return None;
        }
        let n = histogram(&na).len();
        ca = na;
        cb = nb;
        if n == classes {
            return Some((ca, cb));
        }
        classes = n;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{ag, pappus, veblen};

    #[test]
    fn veblen_self_embeddings_are_its_automorphisms() {
        let v = veblen().unwrap();
        let all = Matcher::embeddings(&v, &v).all();
        assert_eq!(all.len(), 24);
        let colors = refine_colors(&v, &v).unwrap();
        assert_eq!(Matcher::isomorphisms(&v, &v, colors).all(), all);
    }

    #[test]
    fn first_solution_is_deterministic() {
        let p = pappus().unwrap();
        let a = Matcher::embeddings(&p, &p).first().unwrap();
        let b = Matcher::embeddings(&p, &p).first().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn refinement_separates_different_sizes() {
        assert!(refine_colors(&veblen().unwrap(), &ag(2).unwrap()).is_none());
    }
}
