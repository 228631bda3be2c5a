//! Validation, count summary and model diff.

mod diff;
mod validate;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::model::Model;

pub use diff::{diff_models, diff_models_with_tolerance, DiffReport, ParameterChange};
pub(crate) use validate::used_actions;
pub use validate::{validate, Issue, IssueKind, Severity};

/// Component counts, named after the SBML list elements they correspond to.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[allow(non_snake_case)]
pub struct SummaryCounts {
    pub nb_FunctionDefinitions: usize,
    pub nb_CompartmentTypes: usize,
    pub nb_Compartments: usize,
    pub nb_Species: usize,
    pub nb_Parameters: usize,
    pub nb_InitialAssignments: usize,
    pub nb_Rules: usize,
    pub nb_Reactions: usize,
}

impl SummaryCounts {
    pub fn fields(&self) -> [(&'static str, usize); 8] {
        [
            ("nb_FunctionDefinitions", self.nb_FunctionDefinitions),
            ("nb_CompartmentTypes", self.nb_CompartmentTypes),
            ("nb_Compartments", self.nb_Compartments),
            ("nb_Species", self.nb_Species),
            ("nb_Parameters", self.nb_Parameters),
            ("nb_InitialAssignments", self.nb_InitialAssignments),
            ("nb_Rules", self.nb_Rules),
            ("nb_Reactions", self.nb_Reactions),
        ]
    }
}

/// One `name : value` line per field.
impl fmt::Display for SummaryCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, value) in self.fields() {
            writeln!(f, "{name} : {value}")?;
        }
        Ok(())
    }
}

pub fn summarize(model: &Model) -> SummaryCounts {
    let kinds: BTreeSet<_> = model.locations.iter().map(|l| l.kind).collect();
    SummaryCounts {
        nb_FunctionDefinitions: 0,
        nb_CompartmentTypes: kinds.len(),
        nb_Compartments: model.locations.len(),
        nb_Species: model.system.len(),
        nb_Parameters: model.parameters.len(),
        nb_InitialAssignments: model.system.iter().filter(|i| i.initial_amount.is_some()).count(),
        nb_Rules: 0,
        nb_Reactions: used_actions(model).len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_model;

    #[test]
    fn empty_model_counts_are_zero() {
        assert_eq!(summarize(&Model::default()), SummaryCounts::default());
    }

    #[test]
    fn compartment_types_count_distinct_kinds() {
        let m = parse_model("location A : size = 1, type = compartment;\nlocation B : size = 2, type = compartment;")
            .unwrap();
        let s = summarize(&m);
        assert_eq!((s.nb_CompartmentTypes, s.nb_Compartments), (1, 2));
    }

    #[test]
    fn text_form_lists_the_eight_fields_in_order() {
        let m = parse_model("k = 1;\nr = k * S;\nS = (r,1) << S;\nS[3] <*> T").unwrap();
        let text = summarize(&m).to_string();
        assert_eq!(
            text,
            "nb_FunctionDefinitions : 0\nnb_CompartmentTypes : 0\nnb_Compartments : 0\nnb_Species : 2\n\
             nb_Parameters : 1\nnb_InitialAssignments : 1\nnb_Rules : 0\nnb_Reactions : 1\n"
        );
    }

    #[test]
    fn json_keys_keep_field_order() {
        let json = serde_json::to_string(&SummaryCounts::default()).unwrap();
        assert!(json.starts_with("{\"nb_FunctionDefinitions\":0,\"nb_CompartmentTypes\":0"));
    }
}
