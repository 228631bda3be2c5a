//! SBML Level 2 Version 3 export and import.
//!
//! | SBML                    | model                                          |
//! |-------------------------|------------------------------------------------|
//! | listOfCompartmentTypes  | location kinds in use                          |
//! | listOfCompartments      | locations (`world` is the implicit root)       |
//! | listOfSpecies           | system equation instances                      |
//! | listOfParameters        | parameters, kinetic-law locals renamed         |
//! | listOfReactions         | derived reactions; kinetic laws are the rates  |
//! | listOfEvents            | time-triggered events                          |
//!
//! SBML has a single modifier role, so activators and inhibitors come back
//! as generic modifiers. [`sbml_canonical`] gives the exact image of a model
//! under export followed by import.
//!
//! Initial amounts are written as the `initialAmount` attribute of each
//! species. This is our choice of encoding; import also accepts amounts
//! given through `listOfInitialAssignments`.

mod canonical;
mod export;
mod import;
mod mathml;

use thiserror::Error;

use crate::analysis::Issue;

pub use canonical::sbml_canonical;
pub use export::{export_sbml, export_warnings};
pub use import::import_sbml;
pub use mathml::{expr_to_mathml, mathml_to_expr, MATHML_NS};

pub const SBML_L2V3_NS: &str = "http://www.sbml.org/sbml/level2/version3";
pub const SBML_TIME_URL: &str = "http://www.sbml.org/sbml/symbols/time";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SbmlError {
    #[error("malformed XML: {0}")]
    Xml(String),
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("{path}: reference to undeclared `{reference}`")]
    UnresolvedReference { reference: String, path: String },
    #[error("unsupported MathML construct <{0}>")]
    UnsupportedMathml(String),
    #[error("model has {} validation error(s)", .0.len())]
    ValidationFailed(Vec<Issue>),
}

impl SbmlError {
    pub(crate) fn schema(path: &str, message: impl Into<String>) -> Self {
        SbmlError::Schema {
            path: path.to_string(),
            message: message.into(),
        }
    }
}

pub(crate) fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}
