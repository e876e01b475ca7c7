//! Rule-based validation of classifier decisions, property extraction from
//! analytic part models, and standard designation strings.
//!
//! The three stages compose into the back half of the recognition
//! pipeline: a decided class is first checked against the part's exact
//! boundary representation ([`validate`]), the class-applicable properties
//! are then measured or read from feature metadata
//! ([`extract_properties`]), and finally formatted as an exact designation
//! such as `ISO 4762 - M12x80 - 10.9` ([`designate`]).

mod designate;
mod error;
mod extract;
mod measure;
mod validate;

pub use designate::{designate, parse_designation, Designation, ParsedDesignation};
pub use error::{DesignateError, ExtractError, ParseError};
pub use extract::{extract_properties, StandardProperties};
pub use validate::{
    validate, Outcome, RequirementCheck, RequirementKind, ValidationReport,
    DIMENSION_TOLERANCE_MM,
};
