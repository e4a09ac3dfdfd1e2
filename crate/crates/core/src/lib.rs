//! Partial Steiner triple systems and their product constructions.
//!
//! The crate models a partial Steiner triple system (PSTS) as an
//! [`IncidenceStructure`], builds weaving and convolution products over it,
//! searches for named subconfigurations, and computes isomorphisms,
//! embeddings and automorphism groups.

pub mod anticlique;
pub mod catalog;
pub mod constructions;
pub mod detect;
pub mod error;
pub mod groups;
pub mod io;
pub mod morphisms;

pub(crate) mod search;
pub mod structure;
pub mod triangle;
pub mod verify;

pub use error::{Error, Result};
pub use groups::{AbelianGroup, GroupElem};
pub use structure::{ConfigParams, IncidenceStructure, LabelKind, Line, Point, ProductLabel, Violation};
pub use triangle::{Derived, HaltReason, Triangle, TriangleSeries};
