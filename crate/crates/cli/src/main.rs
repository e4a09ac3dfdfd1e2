use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use psts::anticlique::anticlique_hyperplanes;
use psts::catalog::catalog_by_name;
use psts::constructions::{bose, convolve, linear_completion, poly_triangle, quotient_by_base, weave, weave_eps, Perm3};
use psts::detect::{check_property, find_subconfig, triangle_census, Pattern, Property};
use psts::io::{from_json, from_text, to_dot, to_json, to_text, DotStyle};
use psts::morphisms::{automorphism_group, embedding, isomorphism, Morphism};
use psts::triangle::{triangles, veblen_triangles};
use psts::verify::{run_suite, Status, CHECKS};
use psts::{AbelianGroup, IncidenceStructure};

#[derive(Parser)]
#[command(name = "psts", version, about = "Partial Steiner triple systems: products, searches and automorphisms")]
struct Cli {
    /// Input structure (path or '-' for stdin)
    #[arg(long, short, global = true, default_value = "-")]
    input: String,
    /// Output destination (path or '-' for stdout)
    #[arg(long, short, global = true, default_value = "-")]
    output: String,
    /// Threads used by searches
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Stop after this many hits
    #[arg(long, global = true)]
    limit: Option<usize>,
    /// Accepted for compatibility; every command is deterministic
    #[arg(long, global = true)]
    seedless: bool,
    /// Structure output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Construct a structure
    #[command(subcommand)]
    Build(Build),
    /// Parameters and invariants of the input structure
    Analyze,
    /// Find occurrences of a pattern (veblen, fano, desargues, miter, pappus,
    /// poly(m,g), k4-closure or a catalog name)
    Detect { pattern: String },
    /// Test a property (pasch-free, moufangian, anti-fano, anti-desargues,
    /// miter-free, anti-m-polypappian(m), pappus-diagonals)
    Check { property: String },
    /// Isomorphism between two structures (paths or catalog names)
    Iso { a: String, b: String },
    /// Embedding of A into B (paths or catalog names)
    Embed { a: String, b: String },
    /// Automorphism group of the input structure
    Aut,
    /// Run the verification suite
    Verify {
        /// Check ids; all checks when empty
        ids: Vec<String>,
        /// Emit a JUnit XML report
        #[arg(long)]
        junit: bool,
        /// List the check ids and exit
        #[arg(long)]
        list: bool,
    },
    /// Export the input structure
    #[command(subcommand)]
    Export(Export),
}

#[derive(Clone, Subcommand)]
enum Build {
    /// weave(m, base); eps other than 1 gives the eps-weaving
    Weave {
        m: usize,
        #[arg(long, default_value_t = 1)]
        eps: u64,
        /// Catalog base; the input structure is used otherwise
        #[arg(long)]
        base: Option<String>,
    },
    /// base convolved with an abelian group
    Convolve {
        /// e.g. c3, c2xc2, c3^2
        #[arg(long)]
        group: String,
        /// e.g. 0, 1 or (1,0)
        #[arg(long, default_value = "0")]
        eps: String,
        #[arg(long)]
        base: Option<String>,
    },
    /// m triangles closing through gamma (id, tau1, tau2, sigma0, sigma1, sigma2)
    Poly { m: usize, gamma: String },
    /// Quotient of a product-labeled input by its fibers
    Quotient,
    /// Linear completion of the input
    Complete,
    /// Bose construction over C3^n
    Bose { n: usize },
    /// A catalog structure, e.g. veblen, ag(2), grassmannian(5)
    Catalog { name: String },
}

#[derive(Subcommand)]
enum Export {
    /// Graphviz rendering
    Dot {
        #[arg(long, value_enum, default_value_t = Style::Cliques)]
        style: Style,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Style {
    Cliques,
    LineNodes,
}

/// Outcome of a command that ran: success, or a negative answer.
enum Answer {
    Yes,
    No,
}

fn parse_structure(text: &str) -> Result<IncidenceStructure> {
    let parsed = if text.trim_start().starts_with('{') {
        from_json(text)
    } else {
        from_text(text)
    };
    Ok(parsed?)
}

fn read_input(path: &str) -> Result<IncidenceStructure> {
    let mut text = String::new();
    if path == "-" {
        io::stdin().read_to_string(&mut text).context("reading stdin")?;
    } else {
        text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    }
    parse_structure(&text).with_context(|| format!("parsing {path}"))
}

/// A path when it exists, a catalog name otherwise.
fn load(arg: &str) -> Result<IncidenceStructure> {
    if arg == "-" || Path::new(arg).exists() {
        read_input(arg)
    } else {
        catalog_by_name(arg).with_context(|| format!("`{arg}` is neither a file nor a catalog name"))
    }
}

fn write_output(path: &str, text: &str) -> Result<()> {
    if path == "-" {
        io::stdout().write_all(text.as_bytes())?;
    } else {
        fs::write(path, text).with_context(|| format!("writing {path}"))?;
    }
    Ok(())
}

fn render(s: &IncidenceStructure, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => to_json(s),
        Format::Text => to_text(s)?,
    })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn label_map(m: &Morphism, a: &IncidenceStructure, b: &IncidenceStructure) -> Value {
    let map: Map<String, Value> = m
        .map
        .iter()
        .enumerate()
        .map(|(p, &q)| (a.label(p).to_string(), Value::String(b.label(q).to_string())))
        .collect();
    Value::Object(map)
}

fn build(cmd: Build, cli: &Cli) -> Result<IncidenceStructure> {
    let base = |name: &Option<String>| match name {
        Some(n) => Ok(catalog_by_name(n)?),
        None => read_input(&cli.input),
    };
    Ok(match cmd {
        Build::Weave { m, eps, base: b } => {
            let b = base(&b)?;
            if eps == 1 {
                weave(&b, m)?
            } else {
                weave_eps(&b, m, eps)?
            }
        }
        Build::Convolve { group, eps, base: b } => {
            let g: AbelianGroup = group.parse()?;
            let e = g.parse_elem(&eps)?;
            convolve(&base(&b)?, &g, &e)?
        }
        Build::Poly { m, gamma } => poly_triangle(m, gamma.parse::<Perm3>()?)?,
        Build::Quotient => quotient_by_base(&read_input(&cli.input)?)?,
        Build::Complete => linear_completion(&read_input(&cli.input)?)?,
        Build::Bose { n } => bose(n)?,
        Build::Catalog { name } => catalog_by_name(&name)?,
    })
}

fn analyze(s: &IncidenceStructure) -> Value {
    let p = s.params();
    let tris = triangles(s);
    let hyperplanes = anticlique_hyperplanes(s);
    let mut out = json!({
        "name": s.name(),
        "points": s.num_points(),
        "lines": s.num_lines(),
        "degree": p.r,
        "degree_histogram": s.degree_histogram(),
        "components": s.connected_components().len(),
        "linear_space": s.is_linear_space(),
        "triangles": tris.len(),
        "veblen_configurations": veblen_triangles(s).len() / 4,
        "anticlique_hyperplanes": hyperplanes.len(),
    });
    if let Ok(census) = triangle_census(s) {
        let c: Map<String, Value> = census.into_iter().map(|(t, n)| (t.tag().to_string(), json!(n))).collect();
        out["triangle_types"] = Value::Object(c);
    }
    out
}

fn run(cli: Cli) -> Result<Answer> {
    if let Some(n) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .context("configuring worker threads")?;
    }
    let _ = cli.seedless;
    let out = cli.output.clone();
    match cli.cmd {
        Cmd::Build(ref b) => {
            let s = build(b.clone(), &cli)?;
            write_output(&out, &render(&s, cli.format)?)?;
            Ok(Answer::Yes)
        }
        Cmd::Analyze => {
            let s = read_input(&cli.input)?;
            write_output(&out, &pretty(&analyze(&s)))?;
            Ok(Answer::Yes)
        }
        Cmd::Detect { ref pattern } => {
            let s = read_input(&cli.input)?;
            let p: Pattern = pattern.parse()?;
            let hits = find_subconfig(&s, &p, cli.limit);
            let labeled: Vec<Value> = hits
                .iter()
                .map(|h| {
                    json!({
                        "points": h.points.iter().map(|&q| s.label(q)).collect::<Vec<_>>(),
                        "lines": h.lines.iter().map(|l| l.map(|q| s.label(q))).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let v = json!({"pattern": p.to_string(), "count": hits.len(), "hits": labeled});
            write_output(&out, &pretty(&v))?;
            Ok(if hits.is_empty() { Answer::No } else { Answer::Yes })
        }
        Cmd::Check { ref property } => {
            let s = read_input(&cli.input)?;
            let prop: Property = property.parse()?;
            let rep = check_property(&s, prop);
            let v = json!({"property": prop.to_string(), "holds": rep.holds, "witness": rep.witness});
            write_output(&out, &pretty(&v))?;
            Ok(if rep.holds { Answer::Yes } else { Answer::No })
        }
        Cmd::Iso { ref a, ref b } | Cmd::Embed { ref a, ref b } => {
            let iso = matches!(cli.cmd, Cmd::Iso { .. });
            let (sa, sb) = (load(a)?, load(b)?);
            let found = if iso { isomorphism(&sa, &sb) } else { embedding(&sa, &sb) };
            let v = match &found {
                Some(m) => json!({"found": true, "map": label_map(m, &sa, &sb)}),
                None => json!({"found": false}),
            };
            write_output(&out, &pretty(&v))?;
            Ok(if found.is_some() { Answer::Yes } else { Answer::No })
        }
        Cmd::Aut => {
            let s = read_input(&cli.input)?;
            let g = automorphism_group(&s)?;
            let gens: Vec<Value> = g.generators.iter().map(|m| label_map(m, &s, &s)).collect();
            let v = json!({"order": g.order, "generators": gens});
            write_output(&out, &pretty(&v))?;
            Ok(Answer::Yes)
        }
        Cmd::Verify { ref ids, junit, list } => {
            if list {
                let text: String = CHECKS.iter().map(|c| format!("{}\t{}\n", c.id, c.claim)).collect();
                write_output(&out, &text)?;
                return Ok(Answer::Yes);
            }
            let scope: Vec<&str> = ids.iter().map(String::as_str).collect();
            let report = run_suite(&scope)?;
            let text = if junit {
                report.to_junit()
            } else {
                report
                    .results
                    .iter()
                    .map(|r| {
                        let tag = match r.status {
                            Status::Pass => "PASS",
                            Status::Fail => "FAIL",
                            Status::Skip => "SKIP",
                        };
                        let mut line = format!("{tag} {} ({} ms): {}\n", r.id, r.elapsed_ms, r.claim);
                        if r.status == Status::Fail {
                            for d in &r.details {
                                line.push_str(&format!("    {d}\n"));
                            }
                        }
                        line
                    })
                    .collect()
            };
            write_output(&out, &text)?;
            Ok(if report.all_passed() { Answer::Yes } else { Answer::No })
        }
        Cmd::Export(Export::Dot { style }) => {
            let s = read_input(&cli.input)?;
            let style = match style {
                Style::Cliques => DotStyle::Cliques,
                Style::LineNodes => DotStyle::LineNodes,
            };
            write_output(&out, &to_dot(&s, style))?;
            Ok(Answer::Yes)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Answer::Yes) => ExitCode::SUCCESS,
        Ok(Answer::No) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
