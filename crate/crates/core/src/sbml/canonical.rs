use std::collections::HashMap;

use crate::model::{
    derive_reactions, Assignment, Binding, Event, Expr, FunctionalRate, Location, Model, Parameter, Prefix, Reaction,
    Role, SpeciesComponent, SpeciesInstance,
};

/// The model `import_sbml(export_sbml(model))` returns.
///
/// SBML keeps reactions rather than per-species prefixes, so the image has
/// components only for species that are placed in the system equation,
/// modifiers are generic, parameters are global, location sizes are
/// evaluated and prefixes are regrouped from the derived reactions.
pub fn sbml_canonical(model: &Model) -> Model {
    let table = model.symbols();
    let global = |e: &Expr| {
        e.map_symbols(&|s| match table.resolve(s) {
            Some(Binding::Species(i)) => model.system[i].global_id(),
            _ => s.to_string(),
        })
    };
    let reactions: Vec<Reaction> = derive_reactions(model)
        .unwrap_or_default()
        .into_iter()
        .map(|r| Reaction {
            kinetic_law: global(&r.kinetic_law),
            ..r
        })
        .collect();
    let locations = model
        .locations
        .iter()
        .map(|l| Location {
            size: Expr::num(model.eval_constant(&l.size).unwrap_or(f64::NAN)),
            ..l.clone()
        })
        .collect();
    let parameters = model
        .parameters
        .iter()
        .map(|p| Parameter::global(p.name.clone(), p.value))
        .collect();
    let system: Vec<SpeciesInstance> = model
        .system
        .iter()
        .map(|i| SpeciesInstance::new(i.species.clone(), i.location.as_deref(), i.initial_amount))
        .collect();
    let by_gid: HashMap<String, (String, Option<String>)> = system
        .iter()
        .map(|i| (i.global_id(), (i.species.clone(), i.location.clone())))
        .collect();
    let events = model
        .events
        .iter()
        .map(|e| Event {
            name: e.name.clone(),
            trigger_time: e.trigger_time,
            assignments: e
                .assignments
                .iter()
                .map(|a| Assignment {
                    target: match table.resolve(&a.target) {
                        Some(Binding::Species(i)) => model.system[i].global_id(),
                        _ => a.target.clone(),
                    },
                    value: global(&a.value),
                })
                .collect(),
        })
        .collect();
    assemble(
        model.name.clone(),
        locations,
        parameters,
        system,
        reactions,
        events,
        |gid| by_gid.get(gid).cloned().unwrap_or_else(|| (gid.to_string(), None)),
    )
}

/// Rebuilds a species-centric model from reactions whose participants and
/// kinetic laws use global ids. `split` maps a global id to its component
/// and location.
pub(crate) fn assemble(
    name: String,
    locations: Vec<Location>,
    parameters: Vec<Parameter>,
    system: Vec<SpeciesInstance>,
    reactions: Vec<Reaction>,
    events: Vec<Event>,
    split: impl Fn(&str) -> (String, Option<String>),
) -> Model {
    let mut component_order: Vec<String> = Vec::new();
    let mut instance_locs: HashMap<String, Vec<Option<String>>> = HashMap::new();
    for inst in &system {
        if !instance_locs.contains_key(&inst.species) {
            component_order.push(inst.species.clone());
        }
        instance_locs
            .entry(inst.species.clone())
            .or_default()
            .push(inst.location.clone());
    }

    let mut prefixes: HashMap<String, Vec<Prefix>> = HashMap::new();
    for r in &reactions {
        // (component, location, role, stoichiometry), duplicates merged.
        let mut entries: Vec<(String, Option<String>, Role, u32)> = Vec::new();
        let mut add = |gid: &str, role: Role, k: u32| {
            let (comp, loc) = split(gid);
            match entries.iter_mut().find(|e| e.0 == comp && e.1 == loc && e.2 == role) {
                Some(_) if role.is_modifier() => {}
                Some(e) => e.3 += k,
                None => entries.push((comp, loc, role, k)),
            }
        };
        for (gid, k) in &r.reactants {
            add(gid, Role::Reactant, *k);
        }
        for (gid, k) in &r.products {
            add(gid, Role::Product, *k);
        }
        for gid in &r.modifiers {
            add(gid, Role::GenericModifier, 1);
        }

        let mut seen_components: Vec<&str> = Vec::new();
        for (comp, _, _, _) in &entries {
            if !seen_components.contains(&comp.as_str()) {
                seen_components.push(comp);
            }
        }
        for comp in seen_components {
            let mine: Vec<_> = entries.iter().filter(|e| e.0 == comp).collect();
            if !instance_locs.contains_key(comp) && !component_order.iter().any(|c| c == comp) {
                component_order.push(comp.to_string());
            }
            let out = prefixes.entry(comp.to_string()).or_default();
            let locs = instance_locs.get(comp).cloned().unwrap_or_default();
            let uniform = mine.iter().all(|e| e.2 == mine[0].2 && e.3 == mine[0].3);
            let covers =
                !locs.is_empty() && mine.len() == locs.len() && locs.iter().all(|l| mine.iter().any(|e| &e.1 == l));
            if uniform && covers {
                out.push(Prefix {
                    action: r.id.clone(),
                    stoichiometry: mine[0].3,
                    role: mine[0].2,
                    location: None,
                });
            } else {
                for e in mine {
                    out.push(Prefix {
                        action: r.id.clone(),
                        stoichiometry: e.3,
                        role: e.2,
                        location: e.1.clone(),
                    });
                }
            }
        }
    }

    let species = component_order
        .into_iter()
        .map(|name| SpeciesComponent {
            prefixes: prefixes.remove(&name).unwrap_or_default(),
            name,
        })
        .collect();
    let functional_rates = reactions
        .iter()
        .map(|r| FunctionalRate {
            action: r.id.clone(),
            law: r.kinetic_law.clone(),
        })
        .collect();

    let mut model = Model {
        name,
        locations,
        parameters,
        functional_rates,
        species,
        system,
        events,
    };
    if model.locations.len() <= 1 {
        bare_names_for_single_location(&mut model);
    }
    model
}

/// With at most one location, species can be named without their location.
fn bare_names_for_single_location(model: &mut Model) {
    let table = model.symbols();
    let system = model.system.clone();
    let bare = |s: &str| -> String {
        match table.instance_index(s) {
            Some(i)
                if system[i].location.is_some() && table.resolve(&system[i].species) == Some(Binding::Species(i)) =>
            {
                system[i].species.clone()
            }
            _ => s.to_string(),
        }
    };
    for r in &mut model.functional_rates {
        r.law = r.law.map_symbols(&bare);
    }
    for e in &mut model.events {
        for a in &mut e.assignments {
            a.target = bare(&a.target);
            a.value = a.value.map_symbols(&bare);
        }
    }
}
