use std::collections::{HashMap, HashSet};

use roxmltree::{Document, Node};

use crate::model::{
    species_global_id, Assignment, BinOp, Event, Expr, Location, LocationKind, Model, Parameter, ParameterOrigin,
    Reaction, SpeciesInstance, DEFAULT_MODEL_NAME, ROOT_LOCATION,
};

use super::canonical::assemble;
use super::mathml::{math_element, node_to_expr};
use super::{SbmlError, SBML_L2V3_NS, SBML_TIME_URL};

fn child<'a, 'i>(node: Node<'a, 'i>, name: &str) -> Option<Node<'a, 'i>> {
    node.children().find(|n| n.is_element() && n.tag_name().name() == name)
}

fn children<'a, 'i>(node: Node<'a, 'i>, list: &str, item: &'static str) -> Vec<Node<'a, 'i>> {
    child(node, list)
        .map(|l| {
            l.children()
                .filter(|n| n.is_element() && n.tag_name().name() == item)
                .collect()
        })
        .unwrap_or_default()
}

fn required<'a>(node: Node<'a, '_>, attr: &str, path: &str) -> Result<&'a str, SbmlError> {
    node.attribute(attr)
        .ok_or_else(|| SbmlError::schema(path, format!("missing attribute `{attr}`")))
}

fn number(text: &str, attr: &str, path: &str) -> Result<f64, SbmlError> {
    text.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| SbmlError::schema(path, format!("`{attr}` is not a number: `{text}`")))
}

fn math_of(node: Node<'_, '_>, path: &str) -> Result<Expr, SbmlError> {
    let math = child(node, "math").ok_or_else(|| SbmlError::schema(path, "missing <math>"))?;
    math_element(math, &format!("{path}/math"))
}

/// Reads an SBML L2 document produced by [`super::export_sbml`] or a
/// compatible tool.
///
/// Species references that name no declared species are kept: their id is
/// split on a known compartment suffix, so the resulting model can be
/// validated and compared against a reference.
pub fn import_sbml(xml: &str) -> Result<Model, SbmlError> {
    let doc = Document::parse(xml).map_err(|e| SbmlError::Xml(e.to_string()))?;
    let root = doc.root_element();
    if root.tag_name().name() != "sbml" || root.tag_name().namespace() != Some(SBML_L2V3_NS) {
        return Err(SbmlError::schema(
            "sbml",
            format!("root must be <sbml> in namespace {SBML_L2V3_NS}"),
        ));
    }
    if root.attribute("level") != Some("2") {
        return Err(SbmlError::schema("sbml", "only SBML level 2 is supported"));
    }
    let model_node = child(root, "model").ok_or_else(|| SbmlError::schema("sbml", "missing <model>"))?;
    let name = model_node.attribute("id").unwrap_or(DEFAULT_MODEL_NAME).to_string();
    let base = "sbml/model";

    let declared_types: Option<HashSet<&str>> = child(model_node, "listOfCompartmentTypes").map(|_| {
        children(model_node, "listOfCompartmentTypes", "compartmentType")
            .into_iter()
            .filter_map(|n| n.attribute("id"))
            .collect()
    });

    let mut locations = Vec::new();
    for (k, n) in children(model_node, "listOfCompartments", "compartment")
        .into_iter()
        .enumerate()
    {
        let path = format!("{base}/listOfCompartments/compartment[{k}]");
        let id = required(n, "id", &path)?;
        if id == ROOT_LOCATION {
            continue;
        }
        let kind = match n.attribute("compartmentType") {
            Some(t) => {
                if declared_types.as_ref().is_some_and(|d| !d.contains(t)) {
                    return Err(SbmlError::UnresolvedReference {
                        reference: t.to_string(),
                        path,
                    });
                }
                if t == LocationKind::Membrane.type_id() {
                    LocationKind::Membrane
                } else {
                    LocationKind::Compartment
                }
            }
            None => LocationKind::Compartment,
        };
        let size = match n.attribute("size") {
            Some(s) => number(s, "size", &path)?,
            None => 1.0,
        };
        locations.push((
            path,
            Location {
                name: id.to_string(),
                parent: n.attribute("outside").map(str::to_string),
                size: Expr::num(size),
                kind,
            },
        ));
    }
    let loc_names: HashSet<String> = locations.iter().map(|(_, l)| l.name.clone()).collect();
    for (path, l) in &locations {
        if let Some(p) = &l.parent {
            if p != ROOT_LOCATION && !loc_names.contains(p) {
                return Err(SbmlError::UnresolvedReference {
                    reference: p.clone(),
                    path: path.clone(),
                });
            }
        }
    }
    let locations: Vec<Location> = locations.into_iter().map(|(_, l)| l).collect();

    let mut parameters = Vec::new();
    for (k, n) in children(model_node, "listOfParameters", "parameter")
        .into_iter()
        .enumerate()
    {
        let path = format!("{base}/listOfParameters/parameter[{k}]");
        let id = required(n, "id", &path)?;
        let value = number(required(n, "value", &path)?, "value", &path)?;
        parameters.push(Parameter::global(id, value));
    }

    let mut initial: HashMap<String, f64> = HashMap::new();
    for (k, n) in children(model_node, "listOfInitialAssignments", "initialAssignment")
        .into_iter()
        .enumerate()
    {
        let path = format!("{base}/listOfInitialAssignments/initialAssignment[{k}]");
        let symbol = required(n, "symbol", &path)?;
        let expr = math_of(n, &path)?;
        let value = expr
            .eval_with(&|s: &str| parameters.iter().find(|p: &&Parameter| p.name == s).map(|p| p.value))
            .map_err(|e| SbmlError::schema(&path, format!("initial assignment is not constant: {e}")))?;
        initial.insert(symbol.to_string(), value);
    }

    let mut system = Vec::new();
    let mut by_gid: HashMap<String, (String, Option<String>)> = HashMap::new();
    for (k, n) in children(model_node, "listOfSpecies", "species").into_iter().enumerate() {
        let path = format!("{base}/listOfSpecies/species[{k}]");
        let id = required(n, "id", &path)?;
        let compartment = required(n, "compartment", &path)?;
        let location = if compartment == ROOT_LOCATION {
            None
        } else if loc_names.contains(compartment) {
            Some(compartment)
        } else {
            return Err(SbmlError::UnresolvedReference {
                reference: compartment.to_string(),
                path,
            });
        };
        let species = match n.attribute("name") {
            Some(s) => s.to_string(),
            None => match location {
                Some(loc) => id
                    .strip_suffix(&format!("_{loc}"))
                    .ok_or_else(|| SbmlError::schema(&path, "missing attribute `name`"))?
                    .to_string(),
                None => id.to_string(),
            },
        };
        if species_global_id(&species, location) != id {
            return Err(SbmlError::schema(
                &path,
                format!("species id `{id}` does not match name `{species}` and compartment `{compartment}`"),
            ));
        }
        let amount = match n.attribute("initialAmount") {
            Some(a) => Some(number(a, "initialAmount", &path)?),
            None => initial.get(id).copied(),
        };
        by_gid.insert(id.to_string(), (species.clone(), location.map(str::to_string)));
        system.push(SpeciesInstance::new(species, location, amount));
    }

    let mut reactions = Vec::new();
    for (k, n) in children(model_node, "listOfReactions", "reaction")
        .into_iter()
        .enumerate()
    {
        let path = format!("{base}/listOfReactions/reaction[{k}]");
        let id = required(n, "id", &path)?.to_string();
        let refs = |list: &str| -> Result<Vec<(String, u32)>, SbmlError> {
            let mut out = Vec::new();
            for (j, r) in children(n, list, "speciesReference").into_iter().enumerate() {
                let rpath = format!("{path}/{list}/speciesReference[{j}]");
                let species = required(r, "species", &rpath)?;
                let stoich = match r.attribute("stoichiometry") {
                    Some(s) => {
                        let v = number(s, "stoichiometry", &rpath)?;
                        if v < 1.0 || v.fract() != 0.0 || v > u32::MAX as f64 {
                            return Err(SbmlError::schema(
                                &rpath,
                                format!("stoichiometry `{s}` is not a positive integer"),
                            ));
                        }
                        v as u32
                    }
                    None => 1,
                };
                out.push((species.to_string(), stoich));
            }
            Ok(out)
        };
        let reactants = refs("listOfReactants")?;
        let products = refs("listOfProducts")?;
        let mut modifiers = Vec::new();
        for (j, r) in children(n, "listOfModifiers", "modifierSpeciesReference")
            .into_iter()
            .enumerate()
        {
            let rpath = format!("{path}/listOfModifiers/modifierSpeciesReference[{j}]");
            modifiers.push(required(r, "species", &rpath)?.to_string());
        }

        let law_path = format!("{path}/kineticLaw");
        let law_node = child(n, "kineticLaw").ok_or_else(|| SbmlError::schema(&path, "missing <kineticLaw>"))?;
        let mut law = math_of(law_node, &law_path)?;
        let mut renames = HashMap::new();
        for (j, p) in children(law_node, "listOfParameters", "parameter")
            .into_iter()
            .enumerate()
        {
            let ppath = format!("{law_path}/listOfParameters/parameter[{j}]");
            let local = required(p, "id", &ppath)?;
            let value = number(required(p, "value", &ppath)?, "value", &ppath)?;
            let renamed = format!("{id}_{local}");
            renames.insert(local.to_string(), renamed.clone());
            parameters.push(Parameter {
                name: renamed,
                value,
                origin: ParameterOrigin::ReactionLocal { reaction: id.clone() },
            });
        }
        if !renames.is_empty() {
            law = law.map_symbols(&|s| renames.get(s).cloned().unwrap_or_else(|| s.to_string()));
        }
        reactions.push(Reaction {
            id,
            reactants,
            products,
            modifiers,
            kinetic_law: law,
        });
    }

    let mut events = Vec::new();
    for (k, n) in children(model_node, "listOfEvents", "event").into_iter().enumerate() {
        let path = format!("{base}/listOfEvents/event[{k}]");
        let id = required(n, "id", &path)?.to_string();
        let trigger_path = format!("{path}/trigger");
        let trigger = child(n, "trigger").ok_or_else(|| SbmlError::schema(&path, "missing <trigger>"))?;
        let trigger_time = time_trigger(trigger, &trigger_path)?;
        let mut assignments = Vec::new();
        for (j, a) in children(n, "listOfEventAssignments", "eventAssignment")
            .into_iter()
            .enumerate()
        {
            let apath = format!("{path}/listOfEventAssignments/eventAssignment[{j}]");
            assignments.push(Assignment {
                target: required(a, "variable", &apath)?.to_string(),
                value: math_of(a, &apath)?,
            });
        }
        events.push(Event {
            name: id,
            trigger_time,
            assignments,
        });
    }

    let split = |gid: &str| -> (String, Option<String>) {
        if let Some(found) = by_gid.get(gid) {
            return found.clone();
        }
        let best = locations
            .iter()
            .filter_map(|l| {
                let comp = gid.strip_suffix(l.name.as_str())?.strip_suffix('_')?;
                (!comp.is_empty()).then(|| (comp.to_string(), l.name.clone()))
            })
            .max_by_key(|(_, loc)| loc.len());
        match best {
            Some((comp, loc)) => (comp, Some(loc)),
            None => (gid.to_string(), None),
        }
    };
    Ok(assemble(
        name,
        locations.clone(),
        parameters,
        system,
        reactions,
        events,
        split,
    ))
}

/// Accepts exactly `t >= <number>`.
fn time_trigger(trigger: Node<'_, '_>, path: &str) -> Result<f64, SbmlError> {
    let bad = || SbmlError::schema(path, "trigger must have the form `time >= number`");
    let math = child(trigger, "math").ok_or_else(bad)?;
    let mut top = math.children().filter(Node::is_element);
    let apply = top.next().filter(|a| a.tag_name().name() == "apply").ok_or_else(bad)?;
    if top.next().is_some() {
        return Err(bad());
    }
    let parts: Vec<_> = apply.children().filter(Node::is_element).collect();
    let [op, time, value] = parts.as_slice() else {
        return Err(bad());
    };
    if op.tag_name().name() != "geq"
        || time.tag_name().name() != "csymbol"
        || time.attribute("definitionURL") != Some(SBML_TIME_URL)
    {
        return Err(bad());
    }
    match node_to_expr(*value, path).map_err(|_| bad())? {
        Expr::Number(t) => Ok(t),
        Expr::Binary {
            op: BinOp::Sub,
            lhs,
            rhs,
        } if *lhs == Expr::Number(0.0) => match *rhs {
            Expr::Number(t) => Ok(-t),
            _ => Err(bad()),
        },
        _ => Err(bad()),
    }
}
