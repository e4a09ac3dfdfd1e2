//! JSON and text formats, and DOT export.
//!
//! JSON: `{"name": .., "points": [..], "lines": [[i,j,k], ..]}` plus
//! `"group": "c3"` for product-labeled structures.
//!
//! Text: one line per row as three whitespace-separated labels, `#` starts a
//! comment. Labels are registered in order of first appearance unless a
//! `#points:` directive lists them; `#name:` and `#group:` set the name and
//! the label group.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::AbelianGroup;
use crate::structure::{validate, IncidenceStructure, LabelKind, Violation};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonStructure {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    group: Option<String>,
    points: Vec<String>,
    lines: Vec<[usize; 3]>,
}

/// 1-based line and column of byte offset `at`.
fn position(text: &str, at: usize) -> (usize, usize) {
    let before = &text[..at.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(before.len(), |nl| before.len() - nl - 1) + 1;
    (line, column)
}

fn kind_of(group: Option<&str>) -> Result<LabelKind> {
    Ok(match group {
        Some(g) => LabelKind::Product(g.parse::<AbelianGroup>()?),
        None => LabelKind::Plain,
    })
}

pub fn from_json(text: &str) -> Result<IncidenceStructure> {
    let raw: JsonStructure = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let violations = validate(&raw.points, &raw.lines);
    if let Some(Violation::DuplicateLabel { label, .. }) =
        violations.iter().find(|v| matches!(v, Violation::DuplicateLabel { .. }))
    {
        // point at the second occurrence of the label in the points array
        let quoted = serde_json::to_string(label).expect("string serializes");
        let start = text.find("\"points\"").unwrap_or(0);
        let at = text[start..]
            .match_indices(&quoted)
            .nth(1)
            .map_or(start, |(i, _)| start + i);
        let (line, column) = position(text, at);
        return Err(Error::Parse {
            line,
            column,
            message: format!("duplicate point label {quoted}"),
        });
    }
    if !violations.is_empty() {
        return Err(Error::InvalidStructure(violations));
    }
    let kind = kind_of(raw.group.as_deref())?;
    IncidenceStructure::new(raw.name, raw.points, raw.lines, kind)
}

/// Stable, diff-friendly rendering with one line per row.
pub fn to_json(s: &IncidenceStructure) -> String {
    let q = |x: &str| serde_json::to_string(x).expect("string serializes");
    let mut out = String::from("{\n");
    let _ = writeln!(out, "  \"name\": {},", q(s.name()));
    if let LabelKind::Product(g) = s.label_kind() {
        let _ = writeln!(out, "  \"group\": {},", q(&g.to_string()));
    }
    let points: Vec<String> = s.points().iter().map(|p| q(p)).collect();
    let _ = writeln!(out, "  \"points\": [{}],", points.join(", "));
    out.push_str("  \"lines\": [");
    for (i, l) in s.lines().iter().enumerate() {
        let sep = if i + 1 < s.num_lines() { "," } else { "" };
        let _ = write!(out, "\n    [{}, {}, {}]{sep}", l[0], l[1], l[2]);
    }
    if s.num_lines() > 0 {
        out.push_str("\n  ");
    }
    out.push_str("]\n}\n");
    out
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

pub fn from_text(text: &str) -> Result<IncidenceStructure> {
    let mut name = String::from("unnamed");
    let mut group: Option<String> = None;
    let mut points: Vec<String> = Vec::new();
    let mut index = std::collections::HashMap::new();
    let mut lines = Vec::new();
    for (ln, row) in text.lines().enumerate() {
        let ln = ln + 1;
        if let Some(hash) = row.find('#') {
            let directive = row[hash + 1..].trim_start();
            let col = hash + 2 + (row[hash + 1..].len() - directive.len());
            if let Some((key, value)) = directive.split_once(':') {
                let value = value.trim();
                match key.trim() {
                    "name" => name = value.to_string(),
                    "group" => group = Some(value.to_string()),
                    "points" => {
                        for label in value.split_whitespace() {
                            if index.insert(label.to_string(), points.len()).is_some() {
                                return Err(parse_error(ln, col, format!("duplicate point label `{label}`")));
                            }
                            points.push(label.to_string());
                        }
                    }
                    _ => {}
                }
            }
        }
        let body = row.split('#').next().unwrap_or("");
        let tokens: Vec<(usize, &str)> = body
            .split_whitespace()
            .map(|t| (t.as_ptr() as usize - body.as_ptr() as usize + 1, t))
            .collect();
        match tokens.len() {
            0 => continue,
            3 => {}
            n => {
                return Err(parse_error(
                    ln,
                    tokens[0].0,
                    format!("expected 3 point labels, found {n}"),
                ))
            }
        }
        let mut line = [0; 3];
        for (slot, (_, label)) in line.iter_mut().zip(&tokens) {
            *slot = *index.entry(label.to_string()).or_insert_with(|| {
                points.push(label.to_string());
                points.len() - 1
            });
        }
        lines.push(line);
    }
    let violations = validate(&points, &lines);
    if !violations.is_empty() {
        return Err(Error::InvalidStructure(violations));
    }
    IncidenceStructure::new(name, points, lines, kind_of(group.as_deref())?)
}

/// Text rendering. Fails when a label cannot be written as a token.
pub fn to_text(s: &IncidenceStructure) -> Result<String> {
    for label in s.points() {
        if label.is_empty() || label.contains(char::is_whitespace) || label.contains('#') {
            return Err(Error::InvalidParameter(format!(
                "label `{label}` cannot be written in the text format"
            )));
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "#name: {}", s.name());
    if let LabelKind::Product(g) = s.label_kind() {
        let _ = writeln!(out, "#group: {g}");
    }
    let _ = writeln!(out, "#points: {}", s.points().join(" "));
    for [a, b, c] in s.label_lines() {
        let _ = writeln!(out, "{a} {b} {c}");
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DotStyle {
    /// Each line drawn as a triangle of edges.
    #[default]
    Cliques,
    /// Each line drawn as a small node joined to its points.
    LineNodes,
}

pub fn to_dot(s: &IncidenceStructure, style: DotStyle) -> String {
    let q = |x: &str| format!("\"{}\"", x.replace('\\', "\\\\").replace('"', "\\\""));
    let mut out = String::new();
    let _ = writeln!(out, "graph {} {{", q(s.name()));
    let _ = writeln!(out, "  node [shape=circle];");
    for (i, label) in s.points().iter().enumerate() {
        let _ = writeln!(out, "  p{i} [label={}];", q(label));
    }
    for (li, l) in s.lines().iter().enumerate() {
        match style {
            DotStyle::Cliques => {
                let _ = writeln!(out, "  p{} -- p{} -- p{} -- p{};", l[0], l[1], l[2], l[0]);
            }
            DotStyle::LineNodes => {
                let _ = writeln!(out, "  l{li} [shape=point];");
                for p in l {
                    let _ = writeln!(out, "  l{li} -- p{p};");
                }
            }
        }
    }
    out.push_str("}\n");
    out
}
