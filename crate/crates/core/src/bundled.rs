//! Models shipped with the crate.

use crate::model::Model;
use crate::parser::parse_model;

/// Seven age groups with susceptible, exposed, infected, recovered,
/// vaccine-protected and vaccinated-but-susceptible individuals.
pub const VARICELLA_SOURCE: &str = include_str!("../models/varicella.biopepa");

pub fn varicella() -> Model {
    parse_model(VARICELLA_SOURCE).expect("bundled model parses")
}
