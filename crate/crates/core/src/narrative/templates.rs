//! Every English string the narrative uses. Placeholders are `{name}`.

pub(crate) struct Templates {
    pub title: &'static str,
    pub summary_heading: &'static str,
    pub compartments: &'static str,
    pub species: &'static str,
    pub parameters: &'static str,
    pub reactions: &'static str,
    pub events: &'static str,
    pub problems: &'static str,

    pub compartment: &'static str,
    pub species_amount: &'static str,
    pub species_amount_one: &'static str,
    pub species_no_amount: &'static str,
    pub located: &'static str,
    pub parameter: &'static str,
    pub parameter_local: &'static str,

    pub reaction_intro: &'static str,
    pub consumes: &'static str,
    pub produces: &'static str,
    pub influenced_by: &'static str,
    pub at_rate: &'static str,
    pub undefined_rate: &'static str,
    pub participant: &'static str,

    pub event: &'static str,
    pub event_nothing: &'static str,
    pub assignment: &'static str,

    pub no_problems: &'static str,
    pub problem_prefix_warning: &'static str,
    pub the: &'static str,
}

pub(crate) const EN: Templates = Templates {
    title: "Model {name}",
    summary_heading: "Summary",
    compartments: "Compartments",
    species: "Species",
    parameters: "Parameters",
    reactions: "Reactions",
    events: "Events",
    problems: "Problems",

    compartment: "{name} is a {kind} inside {parent} with size {size}.",
    species_amount: "{species} starts with {amount} individuals.",
    species_amount_one: "{species} starts with 1 individual.",
    species_no_amount: "{species} has no initial amount and starts with 0 individuals.",
    located: "{species} in {location}",
    parameter: "Parameter {name} has value {value}.",
    parameter_local: "Parameter {name} has value {value} and belongs to reaction {reaction}.",

    reaction_intro: "Reaction {id}:",
    consumes: "consumes {list}",
    produces: "produces {list}",
    influenced_by: "influenced by {list}",
    at_rate: "at rate {law}",
    undefined_rate: "at an undefined rate",
    participant: "{stoichiometry} {species}",

    event: "Event {name} at time {time} sets {list}.",
    event_nothing: "Event {name} at time {time} changes nothing.",
    assignment: "{target} to {value}",

    no_problems: "No problems were found.",
    problem_prefix_warning: "Warning: ",
    the: "The ",
};

/// Substitutes `{key}` placeholders.
pub(crate) fn fill(template: &str, values: &[(&str, &str)]) -> String {
    let mut out = template.to_string();
    for (k, v) in values {
        out = out.replace(&format!("{{{k}}}"), v);
    }
    out
}
