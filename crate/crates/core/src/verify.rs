//! The verification suite: one check per claim about weaved structures,
//! each with a time budget.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::anticlique::{anticlique_hyperplanes, is_anticlique_hyperplane, maximal_anticliques, noncollinearity_classes};
use crate::catalog::{self, ag, grassmannian, mobius_8_3, pappus, pg, single_line, slit, veblen};
use crate::constructions::{bose, convolve, linear_completion, poly_triangle, quotient_by_base, weave, weave_eps, Perm3};
use crate::detect::{check_property, find_subconfig, veblen_census, Pattern, Property, TriangleType, WeaveView};
use crate::error::{Error, Result};
use crate::groups::{cyclic_automorphisms, AbelianGroup};
use crate::morphisms::{
    automorphisms, decompose_automorphism, embedding, isomorphism, product_report, veblen_m3_exception, Decomposition,
    Morphism, MorphismKind,
};
use crate::structure::{IncidenceStructure, Point};
use crate::triangle::{derived_triangle, triangles, veblen_triangles, Derived, Triangle};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: &'static str,
    pub claim: &'static str,
    pub status: Status,
    pub details: Vec<String>,
    pub elapsed_ms: u128,
    pub budget_ms: u128,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifyReport {
    pub results: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.status == Status::Pass)
    }

    pub fn to_junit(&self) -> String {
        let esc = |s: &str| {
            s.replace('&', "&amp;")
                .replace('<', "&lt;")
                .replace('>', "&gt;")
                .replace('"', "&quot;")
        };
        let failures = self.results.iter().filter(|r| r.status == Status::Fail).count();
        let skipped = self.results.iter().filter(|r| r.status == Status::Skip).count();
        let total: u128 = self.results.iter().map(|r| r.elapsed_ms).sum();
        let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            out,
            "<testsuite name=\"psts-verify\" tests=\"{}\" failures=\"{failures}\" skipped=\"{skipped}\" time=\"{:.3}\">",
            self.results.len(),
            total as f64 / 1000.0
        );
        for r in &self.results {
            let _ = write!(
                out,
                "  <testcase classname=\"verify\" name=\"{}\" time=\"{:.3}\">",
                esc(r.id),
                r.elapsed_ms as f64 / 1000.0
            );
            let body = esc(&r.details.join("\n"));
            match r.status {
                Status::Pass => {
                    let _ = write!(out, "<system-out>{body}</system-out>");
                }
                Status::Fail => {
                    let _ = write!(out, "<failure message=\"{}\">{body}</failure>", esc(r.claim));
                }
                Status::Skip => out.push_str("<skipped/>"),
            }
            out.push_str("</testcase>\n");
        }
        out.push_str("</testsuite>\n");
        out
    }
}

/// Collects notes and failed expectations of one check.
#[derive(Default)]
pub struct Ctx {
    details: Vec<String>,
    failed: bool,
}

impl Ctx {
    fn note(&mut self, msg: impl Into<String>) {
        self.details.push(msg.into());
    }

    fn expect(&mut self, ok: bool, msg: impl Into<String>) {
        let msg = msg.into();
        if ok {
            self.details.push(format!("ok: {msg}"));
        } else {
            self.failed = true;
            self.details.push(format!("FAILED: {msg}"));
        }
    }

    fn expect_eq<T: PartialEq + std::fmt::Debug>(&mut self, got: T, want: T, what: &str) {
        let ok = got == want;
        self.expect(ok, format!("{what}: got {got:?}, expected {want:?}"));
    }
}

type CheckFn = fn(&mut Ctx) -> Result<()>;

pub struct CheckInfo {
    pub id: &'static str,
    pub claim: &'static str,
    pub budget: Duration,
    run: CheckFn,
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

pub static CHECKS: &[CheckInfo] = &[
    CheckInfo {
        id: "pappus-identifications",
        claim: "weave(3, line) = poly(3, id) = line conv C3 = slit(2) = Pappus",
        budget: secs(1),
        run: pappus_identifications,
    },
    CheckInfo {
        id: "parameter-law",
        claim: "weave(m, M) is (mv, 3r, 3mb); M conv G is (gv, gr, g^2 b)",
        budget: secs(5),
        run: parameter_law,
    },
    CheckInfo {
        id: "collinearity-and-triangles",
        claim: "collinearity rule and the seven triangle types of a weave",
        budget: secs(30),
        run: collinearity_and_triangles,
    },
    CheckInfo {
        id: "pasch-free-preservation",
        claim: "Pasch-free bases give Pasch-free weaves",
        budget: secs(60),
        run: pasch_free_preservation,
    },
    CheckInfo {
        id: "absence-theorems",
        claim: "weaves contain no Fano, Desargues, miter, K4 closure (m > 3), AG(2,3) or Moebius 8_3",
        budget: secs(600),
        run: absence_theorems,
    },
    CheckInfo {
        id: "veblen-census",
        claim: "every Veblen of a weave is (a,i),(b,i),(c,i+1),(a*c,i),(b*c,i),(a*b,i+1)",
        budget: secs(60),
        run: veblen_census_check,
    },
    CheckInfo {
        id: "convolution-facts",
        claim: "convolution isomorphisms in eps and commutation with weaving",
        budget: secs(120),
        run: convolution_facts,
    },
    CheckInfo {
        id: "hyperplane-theorems",
        claim: "an anti-clique hyperplane makes weave(3, M) a convolution and lifts to weaves",
        budget: secs(120),
        run: hyperplane_theorems,
    },
    CheckInfo {
        id: "grassmannian-separation",
        claim: "weave(3, G(5,2)) is not G(5,2) conv C3",
        budget: secs(60),
        run: grassmannian_separation,
    },
    CheckInfo {
        id: "automorphism-theorem",
        claim: "Aut(weave(m, M)) = Aut(M) x C_m for m > 3",
        budget: secs(300),
        run: automorphism_theorem,
    },
    CheckInfo {
        id: "m3-exception",
        claim: "weave(3, veblen) has a non-product automorphism",
        budget: secs(30),
        run: m3_exception,
    },
    CheckInfo {
        id: "quotient-and-completion",
        claim: "fibers form a congruence; weave(3, AG(2,3)) has a unique linear completion",
        budget: secs(120),
        run: quotient_and_completion,
    },
    CheckInfo {
        id: "bose-equivalence",
        claim: "the Bose construction over C3^n is the completion of weave(3, AG(n,3))",
        budget: secs(30),
        run: bose_equivalence,
    },
    CheckInfo {
        id: "non-embeddability",
        claim: "weave(3, AG(2,3)) has a triangle spanning more than a plane",
        budget: secs(120),
        run: non_embeddability,
    },
    CheckInfo {
        id: "eps-weaving-components",
        claim: "eps-weaving splits into copies of weave(order(eps), M)",
        budget: secs(10),
        run: eps_weaving_components,
    },
    CheckInfo {
        id: "poly-triangle-classes",
        claim: "the six poly(4, gamma) form three classes; weaves inherit poly subconfigurations",
        budget: secs(60),
        run: poly_triangle_classes,
    },
];

pub fn check_info(id: &str) -> Result<&'static CheckInfo> {
    CHECKS
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::UnknownCheck(id.to_string()))
}

pub fn run_check(id: &str) -> Result<CheckResult> {
    let info = check_info(id)?;
    let mut ctx = Ctx::default();
    let start = Instant::now();
    let outcome = (info.run)(&mut ctx);
    let elapsed = start.elapsed();
    if let Err(e) = outcome {
        ctx.expect(false, format!("error: {e}"));
    }
    if elapsed > info.budget {
        ctx.expect(false, format!("took {elapsed:?}, budget {:?}", info.budget));
    }
    Ok(CheckResult {
        id: info.id,
        claim: info.claim,
        status: if ctx.failed { Status::Fail } else { Status::Pass },
        details: ctx.details,
        elapsed_ms: elapsed.as_millis(),
        budget_ms: info.budget.as_millis(),
    })
}

/// Runs the named checks, or all of them for an empty scope. Unknown ids are
/// rejected before anything runs.
pub fn run_suite(scope: &[&str]) -> Result<VerifyReport> {
    let ids: Vec<&str> = if scope.is_empty() {
        CHECKS.iter().map(|c| c.id).collect()
    } else {
        for id in scope {
            check_info(id)?;
        }
        scope.to_vec()
    };
    let results = ids.into_iter().map(run_check).collect::<Result<_>>()?;
    Ok(VerifyReport { results })
}

fn iso_ok(ctx: &mut Ctx, a: &IncidenceStructure, b: &IncidenceStructure) {
    let w = isomorphism(a, b);
    let ok = w.as_ref().is_some_and(|f| f.is_isomorphism(a, b));
    ctx.expect(ok, format!("{} ~ {}", a.name(), b.name()));
}

fn c(m: u64) -> AbelianGroup {
    AbelianGroup::cyclic(m)
}

fn pappus_identifications(ctx: &mut Ctx) -> Result<()> {
    let t = single_line()?;
    let w = weave(&t, 3)?;
    iso_ok(ctx, &w, &pappus()?);
    iso_ok(ctx, &w, &poly_triangle(3, Perm3::ID)?);
    iso_ok(ctx, &w, &convolve(&t, &c(3), &c(3).zero())?);
    iso_ok(ctx, &w, &slit(2)?);
    Ok(())
}

pub fn parameter_corpus() -> Result<Vec<IncidenceStructure>> {
    [
        "single-line",
        "veblen",
        "pappus",
        "ag(2)",
        "ag(3)",
        "pg(2)",
        "pg(3)",
        "slit(2)",
        "slit(3)",
        "grassmannian(5)",
        "grassmannian(6)",
        "miter",
        "mobius-8_3",
    ]
    .iter()
    .map(|n| catalog::catalog_by_name(n))
    .collect()
}

fn parameter_law(ctx: &mut Ctx) -> Result<()> {
    let groups = [c(2), c(3), c(4), AbelianGroup::new(vec![2, 2])?, c(9), AbelianGroup::new(vec![3, 3])?];
    let mut checked = 0;
    for base in parameter_corpus()? {
        let (v, b) = (base.num_points(), base.num_lines());
        for m in 3..=5 {
            let w = weave(&base, m)?;
            let view = WeaveView::new(&w)?;
            let degrees_ok = (0..w.num_points()).all(|p| w.degree(p) == 3 * base.degree(view.fiber[p].0));
            let ok = w.num_points() == m * v && w.num_lines() == 3 * m * b && degrees_ok;
            ctx.expect(ok, format!("weave({m}, {}): v={} b={}", base.name(), w.num_points(), w.num_lines()));
            checked += 1;
        }
        for g in &groups {
            let n = g.order() as usize;
            for eps in [g.zero(), g.elements()[1].clone()] {
                let s = convolve(&base, g, &eps)?;
                let view_degrees = (0..s.num_points()).all(|p| s.degree(p) == n * base.degree(p / n));
                let ok = s.num_points() == n * v && s.num_lines() == n * n * b && view_degrees;
                if !ok {
                    ctx.expect(false, format!("{}: v={} b={}", s.name(), s.num_points(), s.num_lines()));
                }
                checked += 1;
            }
        }
    }
    ctx.expect(true, format!("{checked} products have the predicted parameters"));
    Ok(())
}

/// Checks the type of each triangle of a weave against what its
/// derived set is.
fn taxonomy(ctx: &mut Ctx, host: &IncidenceStructure) -> Result<BTreeMap<TriangleType, usize>> {
    let view = WeaveView::new(host)?;
    let m = view.m;
    let mut census = BTreeMap::new();
    let mut bad = Vec::new();
    for t in triangles(host) {
        let ty = view.classify(host, &t)?;
        *census.entry(ty).or_insert(0) += 1;
        let d = derived_triangle(host, &t)?;
        let is_line = matches!(d, Derived::Line(_));
        let is_tri = matches!(d, Derived::Triangle(_));
        let base_derived_line = || {
            let [a, b, c] = t.points().map(|p| view.fiber[p].0);
            Triangle::new(&view.base, a, b, c)
                .ok()
                .is_some_and(|bt| matches!(derived_triangle(&view.base, &bt), Ok(Derived::Line(_))))
        };
        let ok = match ty {
            TriangleType::Level | TriangleType::LevelOnLine => !is_line,
            TriangleType::DropOnLine => !is_line && (m == 3) == is_tri,
            TriangleType::Drop => !is_line && (m == 3 || !is_tri),
            TriangleType::Rise => is_line == base_derived_line(),
            TriangleType::SpreadTriangle | TriangleType::SpreadLine => m == 3,
        };
        if !ok {
            bad.push((t, ty));
        }
    }
    ctx.expect(
        bad.is_empty(),
        format!("{}: derived sets match the taxonomy ({} exceptions)", host.name(), bad.len()),
    );
    Ok(census)
}

fn series_union(s: &IncidenceStructure, t: &Triangle, steps: usize) -> Option<Vec<Point>> {
    let mut union: Vec<Point> = t.points().to_vec();
    let mut cur = *t;
    for _ in 0..steps {
        match derived_triangle(s, &cur).ok()? {
            Derived::Triangle(n) => {
                union.extend(n.points());
                cur = n;
            }
            _ => return None,
        }
    }
    union.sort_unstable();
    union.dedup();
    Some(union)
}

fn collinearity_and_triangles(ctx: &mut Ctx) -> Result<()> {
    let base = ag(2)?;
    let w = weave(&base, 4)?;
    let view = WeaveView::new(&w)?;
    let mut mismatches = 0;
    for p in 0..w.num_points() {
        for q in 0..w.num_points() {
            if p == q {
                continue;
            }
            let ((a, i), (b, j)) = (view.fiber[p], view.fiber[q]);
            let near = j == i || j == (i + 1) % 4 || (j + 1) % 4 == i;
            let rule = a != b && base.collinear(a, b) && near;
            if rule != w.collinear(p, q) {
                mismatches += 1;
            }
        }
    }
    ctx.expect_eq(mismatches, 0, "weave(4, ag(2)) pairs violating the collinearity rule");

    for m in [4, 5] {
        for base in [ag(2)?, veblen()?, pappus()?] {
            let host = weave(&base, m)?;
            let census = taxonomy(ctx, &host)?;
            let spread = census.keys().any(|t| t.clause() >= 6);
            ctx.expect(!spread, format!("{}: no spread triangles, census {census:?}", host.name()));
        }
    }
    for base in [ag(2)?, veblen()?, pappus()?] {
        let host = weave(&base, 3)?;
        taxonomy(ctx, &host)?;
        let view = WeaveView::new(&host)?;
        let all = triangles(&host);
        let mut level_unions = std::collections::HashSet::new();
        for t in &all {
            if view.classify(&host, t)? == TriangleType::LevelOnLine {
                if let Some(u) = series_union(&host, t, 2) {
                    level_unions.insert(u);
                }
            }
        }
        let mut spread = 0;
        let mut matched = 0;
        for t in &all {
            if view.classify(&host, t)? == TriangleType::SpreadLine {
                spread += 1;
                if series_union(&host, t, 2).is_some_and(|u| level_unions.contains(&u)) {
                    matched += 1;
                }
            }
        }
        ctx.expect(
            spread == matched,
            format!("{}: {matched} of {spread} spread-over-line triangles share a level series", host.name()),
        );
    }
    Ok(())
}

fn veblen_hits(host: &IncidenceStructure, limit: Option<usize>) -> usize {
    find_subconfig(host, &Pattern::Veblen, limit).len()
}

fn pasch_free_preservation(ctx: &mut Ctx) -> Result<()> {
    let plane = ag(2)?;
    ctx.expect(check_property(&plane, Property::PaschFree).holds, "ag(2) is Pasch-free");
    for m in [3, 4] {
        ctx.expect_eq(veblen_hits(&weave(&plane, m)?, None), 0, &format!("Veblens in weave({m}, ag(2))"));
    }
    let b2 = bose(2)?;
    ctx.expect(check_property(&b2, Property::PaschFree).holds, "bose(2) is Pasch-free");
    for m in [3, 4] {
        let host = weave(&b2, m)?;
        ctx.expect_eq(veblen_hits(&host, None), 0, &format!("Veblens in weave({m}, bose(2))"));
    }
    Ok(())
}

pub fn absence_corpus() -> Result<Vec<IncidenceStructure>> {
    Ok(vec![veblen()?, pappus()?, pg(3)?, grassmannian(5)?, ag(2)?])
}

fn absence_theorems(ctx: &mut Ctx) -> Result<()> {
    let patterns = [
        Pattern::Fano,
        Pattern::Desargues,
        Pattern::Miter,
        Pattern::Custom(ag(2)?),
        Pattern::Custom(mobius_8_3()?),
    ];
    for base in absence_corpus()? {
        for m in [3, 4] {
            let host = weave(&base, m)?;
            for p in &patterns {
                ctx.expect_eq(find_subconfig(&host, p, None).len(), 0, &format!("{p} in {}", host.name()));
            }
            let k4 = find_subconfig(&host, &Pattern::K4Closure, None).len();
            if m > 3 {
                ctx.expect_eq(k4, 0, &format!("k4closure in {}", host.name()));
            } else {
                ctx.note(format!("k4closure in {}: {k4}", host.name()));
            }
            for prop in [Property::AntiFano, Property::AntiDesargues, Property::MiterFree] {
                ctx.expect(check_property(&host, prop).holds, format!("{}: {prop}", host.name()));
            }
        }
    }
    Ok(())
}

fn veblen_census_check(ctx: &mut Ctx) -> Result<()> {
    for base in [veblen()?, pg(3)?] {
        let m = 4;
        let host = weave(&base, m)?;
        let census = veblen_census(&host)?;
        ctx.expect(
            census.conforms(),
            format!("{}: {} of {} Veblens fit the template", host.name(), census.conforming, census.hits),
        );
        ctx.expect_eq(census.hits, veblen_triangles(&host).len() / 4, "hits vs. triangle count / 4");
        ctx.expect_eq(census.hits, 3 * m * census.base_veblens, "hits vs. 3 m V(M)");
    }
    Ok(())
}

fn convolution_facts(ctx: &mut Ctx) -> Result<()> {
    let bases = [single_line()?, veblen()?];
    for base in &bases {
        let c2 = c(2);
        iso_ok(ctx, &convolve(base, &c2, &c2.int(0))?, &convolve(base, &c2, &c2.int(1))?);
        for n in [6u64, 9] {
            let g = c(n);
            let eps = g.int(1);
            let reference = convolve(base, &g, &eps)?;
            iso_ok(ctx, &reference, &convolve(base, &g, &g.int(1 + 3))?);
            for u in cyclic_automorphisms(n).into_iter().filter(|&u| u != 1) {
                iso_ok(ctx, &reference, &convolve(base, &g, &g.scalar_mul(u as i64, &eps)?)?);
            }
        }
    }
    for base in [single_line()?, veblen()?, ag(2)?] {
        let w = weave(&base, 3)?;
        iso_ok(ctx, &w, &convolve(&base, &c(3), &c(3).int(1))?);
        iso_ok(ctx, &w, &convolve(&base, &c(3), &c(3).int(2))?);
    }
    for base in &bases {
        for (m, g, e) in [(3, c(3), 0), (4, c(2), 1), (4, c(3), 1)] {
            let eps = g.int(e);
            let a = weave(&convolve(base, &g, &eps)?, m)?;
            let b = convolve(&weave(base, m)?, &g, &eps)?;
            iso_ok(ctx, &a, &b);
        }
        iso_ok(ctx, &weave(&weave(base, 4)?, 3)?, &weave(&weave(base, 3)?, 4)?);
    }
    Ok(())
}

/// The map fixing points outside `h` and shifting weights on `h` by `shift`.
fn hyperplane_shift(s: &IncidenceStructure, h: &[Point], group: &AbelianGroup, shift: i64) -> Morphism {
    let n = group.order() as usize;
    let els = group.elements();
    let d = group.int(shift);
    let map = (0..s.num_points())
        .map(|p| {
            let (a, i) = (p / n, p % n);
            if h.contains(&a) {
                a * n + group.index_of(&group.add(&els[i], &d).expect("same group"))
            } else {
                p
            }
        })
        .collect();
    Morphism {
        kind: MorphismKind::Isomorphism,
        map,
    }
}

fn hyperplane_theorems(ctx: &mut Ctx) -> Result<()> {
    let bases = [
        veblen()?,
        pappus()?,
        slit(2)?,
        poly_triangle(4, Perm3::SIGMA0)?,
        poly_triangle(4, Perm3::ID)?,
    ];
    let c3 = c(3);
    for base in &bases {
        let hs = anticlique_hyperplanes(base);
        let Some(h) = hs.first() else {
            ctx.expect(false, format!("{} has an anti-clique hyperplane", base.name()));
            continue;
        };
        let r_ok = base.params().r.is_none_or(|r| r * h.len() == base.num_lines());
        ctx.expect(r_ok, format!("{}: anti-clique hyperplane {h:?}, r|H| = b", base.name()));
        // explicit isomorphism between the eps = 1 and eps = 0 convolutions
        let from = convolve(base, &c3, &c3.int(1))?;
        let to = convolve(base, &c3, &c3.zero())?;
        let theta = hyperplane_shift(&from, h, &c3, -1);
        ctx.expect(theta.is_isomorphism(&from, &to), format!("{}: weight shift on H is an isomorphism", base.name()));
        iso_ok(ctx, &weave(base, 3)?, &to);
        for m in [3, 4, 5] {
            let w = weave(base, m)?;
            let view = WeaveView::new(&w)?;
            let lifted: Vec<Point> = (0..w.num_points()).filter(|&p| h.contains(&view.fiber[p].0)).collect();
            ctx.expect(
                is_anticlique_hyperplane(&w, &lifted),
                format!("H x C_{m} is an anti-clique hyperplane of {}", w.name()),
            );
        }
    }
    Ok(())
}

fn grassmannian_separation(ctx: &mut Ctx) -> Result<()> {
    let g5 = grassmannian(5)?;
    let w = weave(&g5, 3)?;
    let conv = convolve(&g5, &c(3), &c(3).zero())?;
    let dw = find_subconfig(&w, &Pattern::Desargues, None).len();
    let dc = find_subconfig(&conv, &Pattern::Desargues, None).len();
    ctx.expect(dw == 0 && dc > 0, format!("Desargues counts: weave {dw}, convolution {dc}"));
    ctx.expect(isomorphism(&w, &conv).is_none(), "no isomorphism found by search");
    Ok(())
}

fn brute_force_automorphisms(s: &IncidenceStructure) -> usize {
    use itertools::Itertools;
    (0..s.num_points())
        .permutations(s.num_points())
        .filter(|p| s.lines().iter().all(|l| s.is_line(p[l[0]], p[l[1]], p[l[2]])))
        .count()
}

fn automorphism_theorem(ctx: &mut Ctx) -> Result<()> {
    for (base, want) in [(veblen()?, 24), (pappus()?, 108)] {
        let brute = brute_force_automorphisms(&base);
        ctx.expect_eq(brute, want, &format!("|Aut({})| by brute force", base.name()));
        ctx.expect_eq(automorphisms(&base)?.len(), brute, &format!("|Aut({})| by search", base.name()));
    }
    for (base, m) in [(veblen()?, 4), (veblen()?, 5), (pappus()?, 4)] {
        let premise = base.is_connected()
            && (0..base.num_points()).all(|p| base.degree(p) > 1)
            && check_property(&base, Property::AntiPolypappian(m)).holds;
        ctx.expect(premise, format!("{} is connected, anti-{m}-polypappian, degrees > 1", base.name()));
        let rep = product_report(&weave(&base, m)?)?;
        ctx.expect(
            rep.is_product() && rep.permutes_line_fibers,
            format!(
                "weave({m}, {}): |Aut| = {} = {m} * {}, {} product maps, line fibers permuted: {}",
                base.name(),
                rep.order,
                rep.base_order,
                rep.products,
                rep.permutes_line_fibers
            ),
        );
    }
    Ok(())
}

fn m3_exception(ctx: &mut Ctx) -> Result<()> {
    let s = weave(&veblen()?, 3)?;
    let f = veblen_m3_exception(&s)?;
    ctx.expect(f.is_isomorphism(&s, &s), "the table map is an automorphism");
    match decompose_automorphism(&s, &f)? {
        Decomposition::NotProduct { alpha: Some(a) } => {
            ctx.expect(a.is_identity(), "induced base map is the identity, map is not a product")
        }
        other => ctx.expect(false, format!("unexpected decomposition {other:?}")),
    }
    let order = automorphisms(&s)?.len();
    ctx.expect(order > 72, format!("|Aut(weave(3, veblen))| = {order} > 72"));
    Ok(())
}

fn quotient_and_completion(ctx: &mut Ctx) -> Result<()> {
    let corpus = [
        single_line()?,
        veblen()?,
        pappus()?,
        ag(2)?,
        pg(3)?,
        grassmannian(5)?,
        slit(2)?,
        catalog::miter()?,
        mobius_8_3()?,
    ];
    for base in &corpus {
        for m in [3, 4, 5] {
            let q = quotient_by_base(&weave(base, m)?)?;
            ctx.expect(q.same_labeled(base), format!("quotient of weave({m}, {}) is the base", base.name()));
        }
    }
    let w = weave(&ag(2)?, 3)?;
    let view = WeaveView::new(&w)?;
    let mut fibers: Vec<Vec<Point>> = (0..view.base.num_points())
        .map(|a| (0..w.num_points()).filter(|&p| view.fiber[p].0 == a).collect())
        .collect();
    fibers.sort();
    ctx.expect(maximal_anticliques(&w) == fibers, "maximal anti-cliques of weave(3, ag(2)) are the 9 fibers");
    ctx.expect(
        noncollinearity_classes(&w).as_ref() == Some(&fibers),
        "non-collinearity is the fiber equivalence",
    );
    let done = linear_completion(&w)?;
    ctx.expect(
        done.is_linear_space() && done.num_lines() == 117,
        format!("completion is a linear space with {} lines", done.num_lines()),
    );
    ctx.expect(check_property(&done, Property::PaschFree).holds, "completion is Pasch-free");
    ctx.expect(embedding(&catalog::miter()?, &done).is_some(), "completion contains a miter");
    Ok(())
}

fn bose_equivalence(ctx: &mut Ctx) -> Result<()> {
    let b2 = bose(2)?;
    let done = linear_completion(&weave(&ag(2)?, 3)?)?;
    ctx.expect(
        b2.points() == done.points() && b2.lines() == done.lines(),
        "bose(2) equals the completion point for point and line for line",
    );
    iso_ok(ctx, &bose(1)?, &ag(2)?);
    Ok(())
}

fn non_embeddability(ctx: &mut Ctx) -> Result<()> {
    let plane = ag(2)?;
    let w = weave(&plane, 3)?;
    let g = AbelianGroup::new(vec![3, 3])?;
    let pt = |v: &[i64], i: usize| -> Result<Point> {
        let label = format!("{}|{i}", g.render(&g.elem(v)?));
        w.point_by_label(&label)
            .ok_or_else(|| Error::InvalidParameter(format!("missing point {label}")))
    };
    let (b, cc) = ([1i64, 0], [0i64, 1]);
    let lin = |x: i64, y: i64| [(x * b[0] + y * cc[0]).rem_euclid(3), (x * b[1] + y * cc[1]).rem_euclid(3)];
    let set = |pts: Vec<Point>| {
        let mut v = pts;
        v.sort_unstable();
        v
    };
    let delta = Triangle::new(&w, pt(&[0, 0], 0)?, pt(&b, 0)?, pt(&cc, 0)?)?;
    let want1 = set(vec![pt(&lin(2, 0), 1)?, pt(&lin(0, 2), 1)?, pt(&lin(2, 2), 1)?]);
    let want2 = set(vec![pt(&lin(1, 1), 2)?, pt(&lin(1, 2), 2)?, pt(&lin(2, 1), 2)?]);
    let d1 = match derived_triangle(&w, &delta)? {
        Derived::Triangle(t) => t,
        other => return Err(Error::InvalidParameter(format!("first derived set is {other:?}"))),
    };
    ctx.expect_eq(d1.points().to_vec(), want1.clone(), "first derived triangle");
    let d2 = match derived_triangle(&w, &d1)? {
        Derived::Triangle(t) => t,
        other => return Err(Error::InvalidParameter(format!("second derived set is {other:?}"))),
    };
    ctx.expect_eq(d2.points().to_vec(), want2, "second derived triangle");
    let x = w.third_point(pt(&cc, 0)?, pt(&lin(2, 0), 1)?)?;
    let expected = pt(&lin(1, 2), 0)?;
    let mut union: Vec<Point> = delta.points().iter().chain(&d1.points()).chain(&d2.points()).copied().collect();
    union.sort_unstable();
    ctx.expect(
        x == Some(expected) && !union.contains(&expected),
        format!("(c,0)*(2b,1) = {} lies outside the three triangles", w.label(expected)),
    );
    ctx.expect_eq(w.subspace_closure(&delta.points())?.len(), 27, "closure of the triangle");

    let done = linear_completion(&w)?;
    let space = ag(3)?;
    let space_max = triangles(&space)
        .iter()
        .map(|t| space.subspace_closure(&t.points()).map(|c| c.len()))
        .collect::<Result<Vec<_>>>()?;
    ctx.expect(
        space_max.iter().all(|&n| n == 9),
        format!("all {} triangle closures of ag(3) have 9 points", space_max.len()),
    );
    let big = done.subspace_closure(&delta.points())?.len();
    ctx.expect(big > 9, format!("a triangle of the completion closes to {big} points, so it is not ag(3)"));
    Ok(())
}

fn eps_weaving_components(ctx: &mut Ctx) -> Result<()> {
    let t = single_line()?;
    let s = weave_eps(&t, 6, 2)?;
    let comps = s.connected_components();
    ctx.expect_eq(comps.len(), 2, "components of weave_eps(6, 2, line)");
    let target = weave(&t, 3)?;
    for (k, comp) in comps.iter().enumerate() {
        iso_ok(ctx, &s.induced(format!("component {k}"), comp)?, &target);
    }
    Ok(())
}

fn poly_triangle_classes(ctx: &mut Ctx) -> Result<()> {
    for m in [3, 4] {
        let all: Vec<(Perm3, IncidenceStructure)> = Perm3::ALL
            .iter()
            .map(|&g| Ok((g, poly_triangle(m, g)?)))
            .collect::<Result<_>>()?;
        let mut classes: Vec<Vec<Perm3>> = Vec::new();
        let mut reps: Vec<&IncidenceStructure> = Vec::new();
        for (g, s) in &all {
            match reps.iter().position(|r| isomorphism(r, s).is_some()) {
                Some(k) => classes[k].push(*g),
                None => {
                    reps.push(s);
                    classes.push(vec![*g]);
                }
            }
        }
        let names: Vec<Vec<&str>> = classes.iter().map(|c| c.iter().map(|g| g.name()).collect()).collect();
        let separated = [Perm3::ID, Perm3::TAU1, Perm3::SIGMA0]
            .iter()
            .map(|g| classes.iter().position(|c| c.contains(g)))
            .collect::<std::collections::HashSet<_>>()
            .len()
            == 3;
        ctx.expect(classes.len() == 3 && separated, format!("poly({m}, .) classes {names:?}"));
    }
    let host = weave(&pappus()?, 4)?;
    let hit = find_subconfig(&host, &Pattern::Poly(3, Perm3::ID), Some(1));
    ctx.expect(!hit.is_empty(), "weave(4, pappus) contains poly(3, id)");
    Ok(())
}

/// Ids of all checks, in suite order.
pub fn check_ids() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.id).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scope_handling() {
        let rep = run_suite(&["pappus-identifications"]).unwrap();
        assert_eq!(rep.results.len(), 1);
        assert!(rep.all_passed(), "{:?}", rep.results[0].details);
        assert!(matches!(run_suite(&["bogus"]), Err(Error::UnknownCheck(_))));
        assert_eq!(check_ids().len(), 16);
        assert!(rep.to_junit().contains("name=\"pappus-identifications\""));
    }
}
