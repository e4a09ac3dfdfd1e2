use thiserror::Error;

use crate::structure::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not a partial Steiner triple system: {}", join_violations(.0))]
    InvalidStructure(Vec<Violation>),

    #[error("point index {index} out of range (structure has {len} points)")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("points {0:?} do not form a triangle")]
    NotATriangle([usize; 3]),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown catalog structure `{0}`")]
    UnknownCatalog(String),

    #[error("structure `{0}` does not carry product labels")]
    NotProductLabeled(String),

    #[error("not a congruence: line {line:?} collapses to {image} base point(s)")]
    NotACongruence { line: [usize; 3], image: usize },

    #[error("no linear completion by non-collinearity classes: {0}")]
    NoLinearCompletion(String),

    #[error("group element {elem} does not belong to {group}")]
    GroupMismatch { elem: String, group: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("map is not an automorphism: {0}")]
    NotAnAutomorphism(String),

    #[error("size cap exceeded: {0}")]
    SizeCap(String),

    #[error("unknown check id `{0}`")]
    UnknownCheck(String),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
