//! Failure types for extraction and designation.

use geomcore::{GeomError, StandardClass};
use thiserror::Error;

/// Property extraction failed. Validation failures are data, not errors;
/// an error here means a geometric rule had nothing to measure.
#[derive(Debug, Error)]
pub enum ExtractError {
    /// A required geometric rule found no candidate faces.
    #[error("extraction rule {rule:?} found no candidate faces")]
    NoCandidates { rule: &'static str },
    #[error("measurement failed: {0}")]
    Geom(#[from] GeomError),
}

/// Designation could not be produced.
#[derive(Debug, Error)]
pub enum DesignateError {
    /// The property set is incomplete for the class.
    #[error("designating a {} needs the {property} property", .class.label())]
    MissingProperty { class: StandardClass, property: &'static str },
    /// No table row of any admissible standard matches within tolerance.
    #[error("no {family} size matches within ±{tolerance} mm; nearest: {}", .nearest.join(", "))]
    NoMatchingStandard { family: &'static str, tolerance: f64, nearest: Vec<String> },
    /// Non-standard parts carry no designation.
    #[error("{} parts carry no standard designation", .class.label())]
    Unsupported { class: StandardClass },
}

/// A designation string does not follow the documented grammar.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unknown standard {0:?}")]
    UnknownStandard(String),
    #[error("expected `<standard> - <size>[ - <strength>]`, got {0:?}")]
    BadShape(String),
    #[error("bad key form {0:?} (expected A or C)")]
    BadForm(String),
    #[error("bad size field {0:?}")]
    BadSize(String),
    #[error("bad strength class {0:?}")]
    BadStrength(String),
}
