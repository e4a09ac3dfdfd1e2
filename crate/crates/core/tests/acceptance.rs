//! Acceptance suite. Each criterion runs the library check of the same name
//! and an oracle computed here by brute force, within a wall-clock bound.
//! One `PASS`/`FAIL` line is printed per criterion (`--nocapture` to see them).

use std::collections::{BTreeSet, HashSet};
use std::time::{Duration, Instant};

use itertools::Itertools;

use psts::catalog::{ag, catalog_by_name, grassmannian, pappus, single_line, veblen};
use psts::constructions::{bose, convolve, linear_completion, poly_triangle, weave, weave_eps, Perm3};
use psts::morphisms::automorphisms;
use psts::triangle::triangles;
use psts::verify::{run_check, Status};
use psts::{AbelianGroup, IncidenceStructure, Point};

type Oracle = Result<(), String>;

fn criterion(n: usize, id: &str, bound: Duration, oracle: impl FnOnce() -> Oracle) {
    let start = Instant::now();
    let report = run_check(id).expect("known check id");
    let extra = oracle();
    let elapsed = start.elapsed();
    let mut problems: Vec<String> = report.details.iter().filter(|d| d.starts_with("FAILED")).cloned().collect();
    if report.status != Status::Pass && problems.is_empty() {
        problems.push(format!("status {:?}", report.status));
    }
    if let Err(e) = extra {
        problems.push(format!("oracle: {e}"));
    }
    if elapsed > bound {
        problems.push(format!("took {elapsed:?}, bound {bound:?}"));
    }
    let tag = if problems.is_empty() { "PASS" } else { "FAIL" };
    println!("{tag} criterion {n}: {id} ({} ms)", elapsed.as_millis());
    assert!(problems.is_empty(), "criterion {n} ({id}):\n{}", problems.join("\n"));
}

fn ensure(ok: bool, msg: impl Into<String>) -> Oracle {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn line_set(s: &IncidenceStructure, map: &[Point]) -> BTreeSet<[Point; 3]> {
    s.lines()
        .iter()
        .map(|l| {
            let mut t = [map[l[0]], map[l[1]], map[l[2]]];
            t.sort_unstable();
            t
        })
        .collect()
}

/// Isomorphism test by trying every bijection.
fn brute_iso(a: &IncidenceStructure, b: &IncidenceStructure) -> bool {
    if a.num_points() != b.num_points() || a.num_lines() != b.num_lines() {
        return false;
    }
    let target = line_set(b, &(0..b.num_points()).collect::<Vec<_>>());
    (0..a.num_points())
        .permutations(a.num_points())
        .any(|p| line_set(a, &p) == target)
}

fn brute_aut_order(s: &IncidenceStructure) -> usize {
    let target = line_set(s, &(0..s.num_points()).collect::<Vec<_>>());
    (0..s.num_points())
        .permutations(s.num_points())
        .filter(|p| line_set(s, p) == target)
        .count()
}

/// Veblen configurations as sets of four pairwise meeting lines on six points.
fn brute_veblen_count(s: &IncidenceStructure) -> usize {
    let lines = s.lines();
    let meet = |x: usize, y: usize| lines[x].iter().any(|p| lines[y].contains(p));
    (0..lines.len())
        .combinations(4)
        .filter(|c| {
            c.iter().tuple_combinations().all(|(&x, &y)| meet(x, y))
                && c.iter().flat_map(|&x| lines[x]).collect::<HashSet<_>>().len() == 6
        })
        .count()
}

/// Lines of the m-weave written out from the definition, as label triples.
fn woven_lines(base: &IncidenceStructure, m: usize) -> BTreeSet<BTreeSet<String>> {
    let mut out = BTreeSet::new();
    for l in base.lines() {
        let names = l.map(|p| base.label(p).to_string());
        for rot in 0..3 {
            let (x, y, z) = (&names[rot], &names[(rot + 1) % 3], &names[(rot + 2) % 3]);
            for i in 0..m {
                out.insert(BTreeSet::from([
                    format!("{x}|{i}"),
                    format!("{y}|{i}"),
                    format!("{z}|{}", (i + 1) % m),
                ]));
            }
        }
    }
    out
}

fn label_lines(s: &IncidenceStructure) -> BTreeSet<BTreeSet<String>> {
    s.label_lines()
        .into_iter()
        .map(|l| l.iter().map(|x| x.to_string()).collect())
        .collect()
}

fn closure_by_iteration(s: &IncidenceStructure, seed: &[Point]) -> BTreeSet<Point> {
    let mut set: BTreeSet<Point> = seed.iter().copied().collect();
    loop {
        let mut grown = set.clone();
        for (&p, &q) in set.iter().tuple_combinations() {
            if let Some(r) = s.third(p, q) {
                grown.insert(r);
            }
        }
        if grown.len() == set.len() {
            return set;
        }
        set = grown;
    }
}

fn pt(s: &IncidenceStructure, label: &str) -> Point {
    s.point_by_label(label).unwrap_or_else(|| panic!("no point {label}"))
}

#[test]
fn criterion_01_pappus_identifications() {
    criterion(1, "pappus-identifications", Duration::from_secs(1), || {
        let w = weave(&single_line().unwrap(), 3).unwrap();
        ensure(brute_iso(&w, &pappus().unwrap()), "weave(3, line) vs pappus")?;
        ensure(brute_iso(&w, &poly_triangle(3, Perm3::ID).unwrap()), "vs poly(3, id)")
    });
}

#[test]
fn criterion_02_parameter_law() {
    criterion(2, "parameter-law", Duration::from_secs(5), || {
        for name in ["veblen", "pappus", "ag(2)", "grassmannian(5)", "miter"] {
            let base = catalog_by_name(name).unwrap();
            for m in 3..=5 {
                let w = weave(&base, m).unwrap();
                ensure(label_lines(&w) == woven_lines(&base, m), format!("weave({m}, {name}) lines"))?;
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_03_collinearity_and_triangles() {
    criterion(3, "collinearity-and-triangles", Duration::from_secs(30), || {
        let w = weave(&ag(2).unwrap(), 4).unwrap();
        let brute = (0..w.num_points())
            .tuple_combinations()
            .filter(|&(p, q, r)| w.collinear(p, q) && w.collinear(q, r) && w.collinear(p, r) && !w.is_line(p, q, r))
            .count();
        ensure(brute == triangles(&w).len(), format!("{brute} triangles by scan"))
    });
}

#[test]
fn criterion_04_pasch_free_preservation() {
    criterion(4, "pasch-free-preservation", Duration::from_secs(60), || {
        let w = weave(&ag(2).unwrap(), 3).unwrap();
        ensure(brute_veblen_count(&w) == 0, "weave(3, ag(2)) has a Veblen by line scan")
    });
}

#[test]
fn criterion_05_absence_theorems() {
    criterion(5, "absence-theorems", Duration::from_secs(600), || {
        // an AG(2,3) inside would put 12 lines on 9 points
        let w = weave(&veblen().unwrap(), 3).unwrap();
        let dense = (0..w.num_points()).combinations(9).any(|pts| {
            let set: HashSet<_> = pts.iter().copied().collect();
            w.lines().iter().filter(|l| l.iter().all(|p| set.contains(p))).count() >= 12
        });
        ensure(!dense, "a 9-point set of weave(3, veblen) carries 12 lines")
    });
}

#[test]
fn criterion_06_veblen_census() {
    criterion(6, "veblen-census", Duration::from_secs(60), || {
        let n = brute_veblen_count(&weave(&veblen().unwrap(), 4).unwrap());
        ensure(n == 12, format!("weave(4, veblen) has {n} Veblens by line scan"))
    });
}

#[test]
fn criterion_07_convolution_facts() {
    criterion(7, "convolution-facts", Duration::from_secs(120), || {
        let t = single_line().unwrap();
        let c2 = AbelianGroup::cyclic(2);
        let a = convolve(&t, &c2, &c2.int(0)).unwrap();
        let b = convolve(&t, &c2, &c2.int(1)).unwrap();
        ensure(brute_iso(&a, &b), "line conv C2 with eps 0 and 1")?;
        let c3 = AbelianGroup::cyclic(3);
        let w = weave(&t, 3).unwrap();
        ensure(brute_iso(&w, &convolve(&t, &c3, &c3.int(1)).unwrap()), "weave(3, line) vs eps 1")?;
        ensure(brute_iso(&w, &convolve(&t, &c3, &c3.int(2)).unwrap()), "weave(3, line) vs eps 2")
    });
}

#[test]
fn criterion_08_hyperplane_theorems() {
    criterion(8, "hyperplane-theorems", Duration::from_secs(120), || {
        // anti-clique hyperplanes of the Veblen configuration by subset scan
        let v = veblen().unwrap();
        let hyper: Vec<Vec<Point>> = (0..v.num_points())
            .powerset()
            .filter(|h| {
                h.iter().tuple_combinations().all(|(&p, &q)| !v.collinear(p, q))
                    && v.lines().iter().all(|l| l.iter().filter(|p| h.contains(p)).count() == 1)
            })
            .collect();
        let pq = vec![pt(&v, "p"), pt(&v, "q")];
        ensure(hyper.contains(&pq), format!("{{p, q}} not among {hyper:?}"))
    });
}

#[test]
fn criterion_09_grassmannian_separation() {
    criterion(9, "grassmannian-separation", Duration::from_secs(60), || {
        // parameters alone do not tell the two apart
        let g = grassmannian(5).unwrap();
        let c3 = AbelianGroup::cyclic(3);
        let (w, c) = (weave(&g, 3).unwrap(), convolve(&g, &c3, &c3.zero()).unwrap());
        ensure(w.params() == c.params(), "parameters differ")
    });
}

#[test]
fn criterion_10_automorphism_theorem() {
    criterion(10, "automorphism-theorem", Duration::from_secs(300), || {
        ensure(brute_aut_order(&veblen().unwrap()) == 24, "|Aut(veblen)|")?;
        ensure(brute_aut_order(&pappus().unwrap()) == 108, "|Aut(pappus)|")?;
        let n = automorphisms(&weave(&veblen().unwrap(), 4).unwrap()).unwrap().len();
        ensure(n == 4 * 24, format!("|Aut(weave(4, veblen))| = {n}"))
    });
}

#[test]
fn criterion_11_m3_exception() {
    criterion(11, "m3-exception", Duration::from_secs(30), || {
        let s = weave(&veblen().unwrap(), 3).unwrap();
        let map: Vec<Point> = (0..s.num_points())
            .map(|p| {
                let (a, i) = s.label(p).split_once('|').unwrap();
                let i: usize = i.parse().unwrap();
                let j = if a == "p" || a == "q" { (3 - i) % 3 } else { (4 - i) % 3 };
                pt(&s, &format!("{a}|{j}"))
            })
            .collect();
        let all = (0..s.num_points()).collect::<Vec<_>>();
        ensure(line_set(&s, &map) == line_set(&s, &all), "table map is not an automorphism")?;
        // a product with identity base part shifts every fiber by one amount
        let shifts: HashSet<usize> = (0..s.num_points())
            .map(|p| {
                let i: usize = s.label(p).split_once('|').unwrap().1.parse().unwrap();
                let j: usize = s.label(map[p]).split_once('|').unwrap().1.parse().unwrap();
                (j + 3 - i) % 3
            })
            .collect();
        ensure(shifts.len() > 1, "table map is a translation")
    });
}

#[test]
fn criterion_12_quotient_and_completion() {
    criterion(12, "quotient-and-completion", Duration::from_secs(120), || {
        let w = weave(&ag(2).unwrap(), 3).unwrap();
        for a in 0..9 {
            let fiber: Vec<Point> = (0..3).map(|i| a * 3 + i).collect();
            let anti = fiber.iter().tuple_combinations().all(|(&p, &q)| !w.collinear(p, q));
            let maximal = (0..w.num_points())
                .filter(|p| !fiber.contains(p))
                .all(|p| fiber.iter().any(|&q| w.collinear(p, q)));
            ensure(anti && maximal, format!("fiber {a} is not a maximal anti-clique"))?;
        }
        let done = linear_completion(&w).unwrap();
        let pairs = (0..27).tuple_combinations().all(|(p, q)| done.collinear(p, q));
        ensure(pairs && done.num_lines() == 27 * 26 / 6, "completion is not a Steiner triple system")
    });
}

#[test]
fn criterion_13_bose_equivalence() {
    criterion(13, "bose-equivalence", Duration::from_secs(30), || {
        let b = bose(2).unwrap();
        ensure(b.num_points() == 27 && b.num_lines() == 117 && b.is_linear_space(), "bose(2) parameters")?;
        ensure(brute_iso(&bose(1).unwrap(), &ag(2).unwrap()), "bose(1) vs ag(2)")
    });
}

#[test]
fn criterion_14_non_embeddability() {
    criterion(14, "non-embeddability", Duration::from_secs(120), || {
        let w = weave(&ag(2).unwrap(), 3).unwrap();
        let seed = [pt(&w, "(0,0)|0"), pt(&w, "(1,0)|0"), pt(&w, "(0,1)|0")];
        let closed = closure_by_iteration(&w, &seed);
        ensure(closed.len() == 27, format!("closure by iteration has {} points", closed.len()))
    });
}

#[test]
fn criterion_15_eps_weaving_components() {
    criterion(15, "eps-weaving-components", Duration::from_secs(10), || {
        let t = single_line().unwrap();
        let s = weave_eps(&t, 6, 2).unwrap();
        let target = weave(&t, 3).unwrap();
        for comp in s.connected_components() {
            let part = s.induced("part", &comp).unwrap();
            ensure(brute_iso(&part, &target), "component is not weave(3, line)")?;
        }
        Ok(())
    });
}

#[test]
fn criterion_16_poly_triangle_classes() {
    criterion(16, "poly-triangle-classes", Duration::from_secs(60), || {
        let all: Vec<IncidenceStructure> = Perm3::ALL.iter().map(|&g| poly_triangle(3, g).unwrap()).collect();
        let mut reps: Vec<&IncidenceStructure> = Vec::new();
        for s in &all {
            if !reps.iter().any(|r| brute_iso(r, s)) {
                reps.push(s);
            }
        }
        ensure(reps.len() == 3, format!("{} classes among poly(3, .)", reps.len()))
    });
}
