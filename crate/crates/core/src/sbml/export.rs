use std::collections::{BTreeSet, HashSet};

use crate::analysis::validate;
use crate::model::{derive_reactions, Binding, Expr, Model, Role, ROOT_LOCATION};
use crate::numfmt::{decimal, shortest};

use super::mathml::expr_to_mathml;
use super::{xml_escape, SbmlError, MATHML_NS, SBML_L2V3_NS, SBML_TIME_URL};

struct Writer {
    out: String,
    depth: usize,
}

impl Writer {
    fn line(&mut self, text: &str) {
        for _ in 0..self.depth {
            self.out.push_str("  ");
        }
        self.out.push_str(text);
        self.out.push('\n');
    }

    fn tag(name: &str, attrs: &[(&str, String)], empty: bool) -> String {
        let mut s = format!("<{name}");
        for (k, v) in attrs {
            s.push_str(&format!(" {k}=\"{}\"", xml_escape(v)));
        }
        s.push_str(if empty { "/>" } else { ">" });
        s
    }

    fn open(&mut self, name: &str, attrs: &[(&str, String)]) {
        self.line(&Self::tag(name, attrs, false));
        self.depth += 1;
    }

    fn empty(&mut self, name: &str, attrs: &[(&str, String)]) {
        self.line(&Self::tag(name, attrs, true));
    }

    fn close(&mut self, name: &str) {
        self.depth -= 1;
        self.line(&format!("</{name}>"));
    }

    fn math(&mut self, fragment: &str) {
        self.line(&format!("<math xmlns=\"{MATHML_NS}\">{fragment}</math>"));
    }
}

/// Species symbols are rewritten to global ids; everything else is kept.
fn to_global_ids(model: &Model, expr: &Expr) -> Expr {
    let table = model.symbols();
    expr.map_symbols(&|s| match table.resolve(s) {
        Some(Binding::Species(i)) => model.system[i].global_id(),
        _ => s.to_string(),
    })
}

/// Serializes `model` as SBML L2V3. The output is byte-stable.
pub fn export_sbml(model: &Model) -> Result<String, SbmlError> {
    let errors: Vec<_> = validate(model).into_iter().filter(|i| i.is_error()).collect();
    if !errors.is_empty() {
        return Err(SbmlError::ValidationFailed(errors));
    }
    let reactions = derive_reactions(model).expect("validated model has a rate for every action");

    let mut w = Writer {
        out: String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"),
        depth: 0,
    };
    w.open(
        "sbml",
        &[
            ("version", "3".into()),
            ("level", "2".into()),
            ("xmlns", SBML_L2V3_NS.into()),
        ],
    );
    w.open("model", &[("id", model.name.clone())]);

    let kinds: BTreeSet<_> = model.locations.iter().map(|l| l.kind).collect();
    if !kinds.is_empty() {
        w.open("listOfCompartmentTypes", &[]);
        for k in &kinds {
            w.empty("compartmentType", &[("id", k.type_id().into())]);
        }
        w.close("listOfCompartmentTypes");
    }

    if !model.locations.is_empty() {
        w.open("listOfCompartments", &[]);
        for l in &model.locations {
            let size = model.eval_constant(&l.size).expect("validated size");
            let mut attrs = vec![("id", l.name.clone())];
            if let Some(p) = &l.parent {
                attrs.push(("outside", p.clone()));
            }
            attrs.push(("size", decimal(size)));
            attrs.push(("compartmentType", l.kind.type_id().into()));
            w.empty("compartment", &attrs);
        }
        w.close("listOfCompartments");
    }

    if !model.system.is_empty() {
        w.open("listOfSpecies", &[]);
        for inst in &model.system {
            let mut attrs = vec![
                ("id", inst.global_id()),
                ("hasOnlySubstanceUnits", "true".into()),
                ("substanceUnits", "item".into()),
                (
                    "compartment",
                    inst.location.clone().unwrap_or_else(|| ROOT_LOCATION.into()),
                ),
                ("name", inst.species.clone()),
            ];
            if let Some(a) = inst.initial_amount {
                attrs.push(("initialAmount", decimal(a)));
            }
            w.empty("species", &attrs);
        }
        w.close("listOfSpecies");
    }

    if !model.parameters.is_empty() {
        let assigned: HashSet<&str> = model
            .events
            .iter()
            .flat_map(|e| e.assignments.iter().map(|a| a.target.as_str()))
            .collect();
        w.open("listOfParameters", &[]);
        for p in &model.parameters {
            let constant = !assigned.contains(p.name.as_str());
            w.empty(
                "parameter",
                &[
                    ("id", p.name.clone()),
                    ("value", decimal(p.value)),
                    ("constant", constant.to_string()),
                ],
            );
        }
        w.close("listOfParameters");
    }

    if !reactions.is_empty() {
        w.open("listOfReactions", &[]);
        for r in &reactions {
            w.open("reaction", &[("id", r.id.clone()), ("reversible", "false".into())]);
            for (list, refs) in [("listOfReactants", &r.reactants), ("listOfProducts", &r.products)] {
                if refs.is_empty() {
                    continue;
                }
                w.open(list, &[]);
                for (id, k) in refs {
                    w.empty(
                        "speciesReference",
                        &[("species", id.clone()), ("stoichiometry", k.to_string())],
                    );
                }
                w.close(list);
            }
            if !r.modifiers.is_empty() {
                w.open("listOfModifiers", &[]);
                for id in &r.modifiers {
                    w.empty("modifierSpeciesReference", &[("species", id.clone())]);
                }
                w.close("listOfModifiers");
            }
            w.open("kineticLaw", &[]);
            w.math(&expr_to_mathml(&to_global_ids(model, &r.kinetic_law)));
            w.close("kineticLaw");
            w.close("reaction");
        }
        w.close("listOfReactions");
    }

    if !model.events.is_empty() {
        w.open("listOfEvents", &[]);
        for e in &model.events {
            w.open("event", &[("id", e.name.clone())]);
            w.open("trigger", &[]);
            w.math(&format!(
                "<apply><geq/><csymbol encoding=\"text\" definitionURL=\"{SBML_TIME_URL}\">t</csymbol><cn>{}</cn></apply>",
                shortest(e.trigger_time)
            ));
            w.close("trigger");
            w.open("listOfEventAssignments", &[]);
            for a in &e.assignments {
                let target = match model.symbols().resolve(&a.target) {
                    Some(Binding::Species(i)) => model.system[i].global_id(),
                    _ => a.target.clone(),
                };
                w.open("eventAssignment", &[("variable", target)]);
                w.math(&expr_to_mathml(&to_global_ids(model, &a.value)));
                w.close("eventAssignment");
            }
            w.close("listOfEventAssignments");
            w.close("event");
        }
        w.close("listOfEvents");
    }

    w.close("model");
    w.close("sbml");
    Ok(w.out)
}

/// Information the SBML encoding cannot carry for this model.
pub fn export_warnings(model: &Model) -> Vec<String> {
    let mut out = Vec::new();
    for c in &model.species {
        for p in &c.prefixes {
            if matches!(p.role, Role::Activator | Role::Inhibitor) {
                out.push(format!(
                    "species `{}` is an {} of `{}`; SBML records it as a generic modifier",
                    c.name, p.role, p.action
                ));
            }
        }
    }
    for p in &model.parameters {
        if let crate::model::ParameterOrigin::ReactionLocal { reaction } = &p.origin {
            out.push(format!(
                "parameter `{}` local to `{reaction}` is exported as a global parameter",
                p.name
            ));
        }
    }
    out
}
