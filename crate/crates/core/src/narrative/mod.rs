//! Plain-language report of a model for readers who do not write Bio-PEPA
//! or SBML.
//!
//! A [`NarrativeDoc`] is built once and rendered by a [`NarrativeRenderer`]
//! looked up by name in a [`RendererRegistry`]. The sentence wording is
//! our own; all of it lives in `templates.rs`.

mod render;
mod templates;

use std::fmt;
use std::str::FromStr;

use crate::analysis::{summarize, validate, Severity, SummaryCounts};
use crate::model::{derive_reactions_lenient, Model, ParameterOrigin, Reaction};
use crate::numfmt::shortest;

pub use render::{HtmlRenderer, MarkdownRenderer, NarrativeRenderer, PlainTextRenderer, RendererRegistry};
use templates::{fill, EN};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NarrativeFormat {
    PlainText,
    Markdown,
    Html,
}

impl NarrativeFormat {
    /// Registry name, which is also the file extension.
    pub fn name(self) -> &'static str {
        match self {
            NarrativeFormat::PlainText => "txt",
            NarrativeFormat::Markdown => "md",
            NarrativeFormat::Html => "html",
        }
    }
}

impl FromStr for NarrativeFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "txt" | "text" => Ok(NarrativeFormat::PlainText),
            "md" | "markdown" => Ok(NarrativeFormat::Markdown),
            "html" => Ok(NarrativeFormat::Html),
            other => Err(format!("unknown narrative format `{other}` (expected txt, md or html)")),
        }
    }
}

impl fmt::Display for NarrativeFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub heading: String,
    pub sentences: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NarrativeDoc {
    pub title: String,
    pub summary: SummaryCounts,
    pub sections: Vec<Section>,
    pub format: NarrativeFormat,
}

impl NarrativeDoc {
    pub fn section(&self, heading: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.heading == heading)
    }

    /// Renders with the built-in renderer for `self.format`.
    pub fn render(&self) -> String {
        RendererRegistry::with_defaults()
            .get(self.format.name())
            .expect("built-in renderers cover every format")
            .render(self)
    }
}

pub const COMPARTMENTS: &str = EN.compartments;
pub const SPECIES: &str = EN.species;
pub const PARAMETERS: &str = EN.parameters;
pub const REACTIONS: &str = EN.reactions;
pub const EVENTS: &str = EN.events;
pub const PROBLEMS: &str = EN.problems;

/// Builds the report. Models with validation errors are accepted; the
/// errors become sentences in the Problems section.
pub fn narrative_doc(model: &Model, format: NarrativeFormat) -> NarrativeDoc {
    let compartments = model
        .locations
        .iter()
        .map(|l| {
            let size = model
                .eval_constant(&l.size)
                .map(shortest)
                .unwrap_or_else(|_| l.size.to_string());
            fill(
                EN.compartment,
                &[
                    ("name", &l.name),
                    ("kind", l.kind.keyword()),
                    ("parent", l.parent.as_deref().unwrap_or(crate::model::ROOT_LOCATION)),
                    ("size", &size),
                ],
            )
        })
        .collect();

    let species = model
        .system
        .iter()
        .map(|i| {
            let who = place(&i.species, i.location.as_deref());
            match i.initial_amount {
                None => fill(EN.species_no_amount, &[("species", &who)]),
                Some(1.0) => fill(EN.species_amount_one, &[("species", &who)]),
                Some(a) => fill(EN.species_amount, &[("species", &who), ("amount", &shortest(a))]),
            }
        })
        .collect();

    let parameters = model
        .parameters
        .iter()
        .map(|p| {
            let value = shortest(p.value);
            match &p.origin {
                ParameterOrigin::Global => fill(EN.parameter, &[("name", &p.name), ("value", &value)]),
                ParameterOrigin::ReactionLocal { reaction } => fill(
                    EN.parameter_local,
                    &[("name", &p.name), ("value", &value), ("reaction", reaction)],
                ),
            }
        })
        .collect();

    let reactions = derive_reactions_lenient(model)
        .iter()
        .map(|(r, rated)| sentence(r, model, *rated))
        .collect();

    let events = model
        .events
        .iter()
        .map(|e| {
            let time = shortest(e.trigger_time);
            if e.assignments.is_empty() {
                return fill(EN.event_nothing, &[("name", &e.name), ("time", &time)]);
            }
            let list = e
                .assignments
                .iter()
                .map(|a| fill(EN.assignment, &[("target", &a.target), ("value", &a.value.to_string())]))
                .collect::<Vec<_>>()
                .join(", ");
            fill(EN.event, &[("name", &e.name), ("time", &time), ("list", &list)])
        })
        .collect();

    let issues = validate(model);
    let mut problems: Vec<String> = issues
        .iter()
        .map(|issue| {
            let mut text = issue.detail.replace('`', "");
            text = match text.strip_prefix("the ") {
                Some(rest) => format!("{}{rest}", EN.the),
                None => format!("{}{text}", EN.the),
            };
            text.push('.');
            if issue.severity == Severity::Warning {
                text.insert_str(0, EN.problem_prefix_warning);
            }
            text
        })
        .collect();
    if problems.is_empty() {
        problems.push(EN.no_problems.to_string());
    }

    let section = |heading: &str, sentences: Vec<String>| Section {
        heading: heading.to_string(),
        sentences,
    };
    NarrativeDoc {
        title: fill(EN.title, &[("name", &model.name)]),
        summary: summarize(model),
        sections: vec![
            section(EN.compartments, compartments),
            section(EN.species, species),
            section(EN.parameters, parameters),
            section(EN.reactions, reactions),
            section(EN.events, events),
            section(EN.problems, problems),
        ],
        format,
    }
}

/// The report as text in `format`.
pub fn narrate(model: &Model, format: NarrativeFormat) -> String {
    narrative_doc(model, format).render()
}

/// One sentence describing `reaction`, which must come from `model`.
pub fn narrate_reaction(reaction: &Reaction, model: &Model) -> String {
    sentence(reaction, model, true)
}

fn sentence(reaction: &Reaction, model: &Model, rated: bool) -> String {
    let mut clauses = Vec::new();
    let with_counts = |refs: &[(String, u32)]| {
        refs.iter()
            .map(|(gid, k)| {
                fill(
                    EN.participant,
                    &[("stoichiometry", &k.to_string()), ("species", &describe(gid, model))],
                )
            })
            .collect::<Vec<_>>()
            .join(", ")
    };
    if !reaction.reactants.is_empty() {
        clauses.push(fill(EN.consumes, &[("list", &with_counts(&reaction.reactants))]));
    }
    if !reaction.products.is_empty() {
        clauses.push(fill(EN.produces, &[("list", &with_counts(&reaction.products))]));
    }
    if !reaction.modifiers.is_empty() {
        let list = reaction
            .modifiers
            .iter()
            .map(|g| describe(g, model))
            .collect::<Vec<_>>()
            .join(", ");
        clauses.push(fill(EN.influenced_by, &[("list", &list)]));
    }
    clauses.push(if rated {
        fill(EN.at_rate, &[("law", &reaction.kinetic_law.to_string())])
    } else {
        EN.undefined_rate.to_string()
    });
    format!(
        "{} {}.",
        fill(EN.reaction_intro, &[("id", &reaction.id)]),
        clauses.join("; ")
    )
}

fn place(species: &str, location: Option<&str>) -> String {
    match location {
        Some(loc) => fill(EN.located, &[("species", species), ("location", loc)]),
        None => species.to_string(),
    }
}

/// `S in Age1` for a global id, falling back to the id itself.
fn describe(gid: &str, model: &Model) -> String {
    if let Some(i) = model.instance(gid) {
        return place(&i.species, i.location.as_deref());
    }
    let split = model.locations.iter().find_map(|l| {
        let species = gid.strip_suffix(l.name.as_str())?.strip_suffix('_')?;
        (!species.is_empty()).then(|| place(species, Some(&l.name)))
    });
    split.unwrap_or_else(|| gid.to_string())
}
