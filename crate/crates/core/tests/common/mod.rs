#![allow(dead_code)]

use std::collections::BTreeSet;

use epinarr::model::{
    Assignment, BinOp, Event, Expr, FunctionalRate, Location, LocationKind, Model, Parameter, Prefix, Role,
    SpeciesComponent, SpeciesInstance,
};
use proptest::prelude::*;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_number(rng: &mut ChaCha8Rng, allow_negative: bool) -> f64 {
    let v = match rng.random_range(0..6) {
        0 => rng.random_range(0..1000) as f64,
        1 => rng.random_range(1..64) as f64 / 8.0,
        2 => rng.random_range(1..100) as f64 * 1e-7,
        3 => rng.random_range(1..10) as f64 * 1e20,
        4 => rng.random::<f64>() * 100.0,
        _ => 1.0,
    };
    if allow_negative && rng.random_bool(0.3) {
        -v
    } else {
        v
    }
}

/// Identifier-shaped names, including ones that look like keywords' prefixes.
pub fn random_symbol(rng: &mut ChaCha8Rng) -> String {
    const POOL: &[&str] = &["x", "S", "I_Age1", "lambda", "k_2", "modelX", "W", "beta0", "in_", "A"];
    POOL.choose(rng).expect("pool is not empty").to_string()
}

pub fn random_expr(rng: &mut ChaCha8Rng, symbols: &[String], depth: u32, allow_negative: bool) -> Expr {
    if depth == 0 || rng.random_bool(0.3) {
        return if !symbols.is_empty() && rng.random_bool(0.6) {
            Expr::sym(symbols.choose(rng).expect("non-empty").clone())
        } else {
            Expr::num(random_number(rng, allow_negative))
        };
    }
    let op = *[BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Pow]
        .choose(rng)
        .expect("non-empty");
    Expr::binary(
        op,
        random_expr(rng, symbols, depth - 1, allow_negative),
        random_expr(rng, symbols, depth - 1, allow_negative),
    )
}

/// Any finite expression over arbitrary symbols, for MathML round trips.
pub fn random_free_expr(rng: &mut ChaCha8Rng) -> Expr {
    let symbols: Vec<String> = (0..4).map(|_| random_symbol(rng)).collect();
    random_expr(rng, &symbols, 5, true)
}

const COMPONENTS: &[&str] = &["S", "I", "R", "Exp", "VP", "VS", "X"];
const LOCATIONS: &[&str] = &["Age1", "Age2", "Lung", "Blood"];

/// A random model with no validation errors.
///
/// Components are placed in every location they use; prefixes for one
/// (component, action) pair are either a single unlocated prefix or
/// located prefixes in distinct locations.
pub fn random_model(rng: &mut ChaCha8Rng) -> Model {
    let mut m = Model::new(if rng.random_bool(0.5) {
        "model".to_string()
    } else {
        format!("m{}", rng.random_range(0..100))
    });

    for i in 0..rng.random_range(0..4) {
        let value = if i == 0 {
            rng.random_range(1..1000) as f64
        } else {
            random_number(rng, true)
        };
        m.parameters.push(Parameter::global(format!("p{i}"), value));
    }

    let nloc = rng.random_range(0..=3);
    for i in 0..nloc {
        let parent = match rng.random_range(0..3) {
            0 => None,
            1 => Some("world".to_string()),
            _ if i > 0 => Some(LOCATIONS[rng.random_range(0..i)].to_string()),
            _ => None,
        };
        let size = if !m.parameters.is_empty() && m.parameters[0].value > 0.0 && rng.random_bool(0.3) {
            Expr::sym("p0")
        } else {
            Expr::num(rng.random_range(1..100_000) as f64 / if rng.random_bool(0.5) { 1.0 } else { 4.0 })
        };
        m.locations.push(Location {
            name: LOCATIONS[i].to_string(),
            parent,
            size,
            kind: if rng.random_bool(0.7) {
                LocationKind::Compartment
            } else {
                LocationKind::Membrane
            },
        });
    }

    let ncomp = rng.random_range(1..=4);
    let mut comps: Vec<&str> = COMPONENTS.to_vec();
    comps.shuffle(rng);
    comps.truncate(ncomp);
    let mut instances = Vec::new();
    for c in &comps {
        let locs: Vec<Option<String>> = if nloc == 0 {
            vec![None]
        } else {
            let mut chosen: Vec<Option<String>> = LOCATIONS[..nloc]
                .iter()
                .filter(|_| rng.random_bool(0.6))
                .map(|l| Some(l.to_string()))
                .collect();
            if chosen.is_empty() {
                chosen.push(Some(LOCATIONS[rng.random_range(0..nloc)].to_string()));
            }
            chosen
        };
        for l in locs {
            let amount = if rng.random_bool(0.85) {
                Some(rng.random_range(0..2000) as f64)
            } else {
                None
            };
            instances.push(SpeciesInstance::new(*c, l.as_deref(), amount));
        }
    }
    instances.shuffle(rng);
    m.system = instances;

    // Symbols a law may use.
    let mut species_syms: Vec<String> = Vec::new();
    for inst in &m.system {
        if nloc <= 1 && rng.random_bool(0.5) {
            species_syms.push(inst.species.clone());
        } else {
            species_syms.push(inst.global_id());
        }
    }
    let mut syms = species_syms.clone();
    syms.extend(m.parameters.iter().map(|p| p.name.clone()));
    syms.extend(m.locations.iter().map(|l| l.name.clone()));

    let mut components: Vec<SpeciesComponent> = comps
        .iter()
        .map(|c| SpeciesComponent {
            name: c.to_string(),
            prefixes: Vec::new(),
        })
        .collect();
    let nact = rng.random_range(0..5);
    let mut rates = Vec::new();
    for a in 0..nact {
        let action = format!("r{a}");
        let mut used_any = false;
        for comp in components.iter_mut() {
            if !rng.random_bool(0.5) {
                continue;
            }
            let locs: Vec<Option<String>> = m
                .system
                .iter()
                .filter(|i| i.species == comp.name)
                .map(|i| i.location.clone())
                .collect();
            let role = *Role::ALL.choose(rng).expect("five roles");
            let k = rng.random_range(1..=3);
            if nloc == 0 || rng.random_bool(0.5) {
                comp.prefixes.push(Prefix {
                    action: action.clone(),
                    stoichiometry: k,
                    role,
                    location: None,
                });
            } else {
                for l in locs {
                    if !rng.random_bool(0.7) {
                        continue;
                    }
                    comp.prefixes.push(Prefix {
                        action: action.clone(),
                        stoichiometry: rng.random_range(1..=3),
                        role: *Role::ALL.choose(rng).expect("five roles"),
                        location: l,
                    });
                    used_any = true;
                }
                continue;
            }
            used_any = true;
        }
        if !used_any {
            components[0].prefixes.push(Prefix {
                action: action.clone(),
                stoichiometry: 1,
                role: Role::Reactant,
                location: None,
            });
        }
        rates.push(FunctionalRate {
            action,
            law: random_expr(rng, &syms, 3, false),
        });
    }
    for c in components.iter_mut() {
        c.prefixes.shuffle(rng);
    }
    rates.shuffle(rng);
    m.functional_rates = rates;
    m.species = components;

    let assignable: Vec<String> = species_syms
        .iter()
        .cloned()
        .chain(m.parameters.iter().map(|p| p.name.clone()))
        .collect();
    for e in 0..rng.random_range(0..3) {
        let n = rng.random_range(1..3);
        let mut targets: Vec<String> = assignable.clone();
        targets.shuffle(rng);
        targets.truncate(n);
        let value_syms: Vec<String> = m.parameters.iter().map(|p| p.name.clone()).collect();
        m.events.push(Event {
            name: format!("e{e}"),
            trigger_time: random_number(rng, false),
            assignments: targets
                .into_iter()
                .map(|target| Assignment {
                    target,
                    value: random_expr(rng, &value_syms, 2, false),
                })
                .collect(),
        });
    }
    m
}

/// Global ids that the model names explicitly: located prefixes, and
/// species symbols in laws and events.
pub fn named_instances(m: &Model) -> BTreeSet<String> {
    let table = m.symbols();
    let mut out = BTreeSet::new();
    for c in &m.species {
        for p in &c.prefixes {
            if let Some(l) = &p.location {
                out.insert(epinarr::model::species_global_id(&c.name, Some(l.as_str())));
            }
        }
    }
    let mut visit = |e: &Expr| {
        for s in e.free_symbols() {
            if let Some(epinarr::model::Binding::Species(i)) = table.resolve(&s) {
                out.insert(m.system[i].global_id());
            }
        }
    };
    for r in &m.functional_rates {
        visit(&r.law);
    }
    out
}

/// Removes the given instances from the system equation.
pub fn delete_instances(m: &Model, gids: &BTreeSet<String>) -> Model {
    let mut out = m.clone();
    out.system.retain(|i| !gids.contains(&i.global_id()));
    out
}

pub fn decay_source(rate: f64, a0: u32) -> String {
    format!("d = {rate};\ndecay = d * A;\nA = (decay,1) << A;\nA[{a0}]\n")
}

pub fn sir_source(beta: f64, gamma: f64, s0: u32, i0: u32) -> String {
    format!(
        "beta = {beta};\ngamma = {gamma};\ninfect = beta * S * I;\nrecover = gamma * I;\n\
         S = (infect,1) << S;\nI = (infect,1) >> I + (recover,1) << I;\nR = (recover,1) >> R;\n\
         S[{s0}] <*> I[{i0}] <*> R[0]\n"
    )
}

pub fn any_model() -> impl Strategy<Value = Model> {
    any::<u64>().prop_map(|seed| random_model(&mut rng(seed)))
}

pub fn any_expr() -> impl Strategy<Value = Expr> {
    any::<u64>().prop_map(|seed| random_free_expr(&mut rng(seed)))
}
