use std::collections::HashMap;

use thiserror::Error;

use super::{species_global_id, Expr, Model, Role};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("action `{action}` used by species `{species}` has no functional rate")]
    UnknownAction { action: String, species: String },
}

/// Reaction-centric view of one action.
#[derive(Debug, Clone, PartialEq)]
pub struct Reaction {
    pub id: String,
    pub reactants: Vec<(String, u32)>,
    pub products: Vec<(String, u32)>,
    pub modifiers: Vec<String>,
    pub kinetic_law: Expr,
}

impl Reaction {
    /// Every global id taking part, in reactant/product/modifier order.
    pub fn participants(&self) -> impl Iterator<Item = &str> {
        self.reactants
            .iter()
            .chain(&self.products)
            .map(|(id, _)| id.as_str())
            .chain(self.modifiers.iter().map(String::as_str))
    }
}

/// One reaction per action used by at least one prefix, in the order the
/// functional rates are declared.
///
/// A prefix without a location contributes every instance of its component;
/// a located prefix contributes `<species>_<location>` whether or not that
/// instance exists (the validator reports dangling ones).
pub fn derive_reactions(model: &Model) -> Result<Vec<Reaction>, ModelError> {
    Ok(derive(model, false)?.into_iter().map(|(r, _)| r).collect())
}

/// Like [`derive_reactions`], but actions without a functional rate are
/// kept (after the rated ones, in first-use order) with a `0` law and a
/// `false` flag.
pub(crate) fn derive_reactions_lenient(model: &Model) -> Vec<(Reaction, bool)> {
    derive(model, true).expect("lenient derivation does not fail")
}

fn derive(model: &Model, lenient: bool) -> Result<Vec<(Reaction, bool)>, ModelError> {
    let rate_index: HashMap<&str, usize> = model
        .functional_rates
        .iter()
        .enumerate()
        .map(|(i, r)| (r.action.as_str(), i))
        .collect();

    let mut instances_of: HashMap<&str, Vec<String>> = HashMap::new();
    for inst in &model.system {
        instances_of
            .entry(inst.species.as_str())
            .or_default()
            .push(inst.global_id());
    }

    let mut by_rate: Vec<Option<Reaction>> = vec![None; model.functional_rates.len()];
    let mut unrated: Vec<Reaction> = Vec::new();
    for comp in &model.species {
        for prefix in &comp.prefixes {
            let reaction = match rate_index.get(prefix.action.as_str()) {
                Some(&ri) => by_rate[ri].get_or_insert_with(|| Reaction {
                    id: prefix.action.clone(),
                    reactants: Vec::new(),
                    products: Vec::new(),
                    modifiers: Vec::new(),
                    kinetic_law: model.functional_rates[ri].law.clone(),
                }),
                None if lenient => {
                    let pos = match unrated.iter().position(|r| r.id == prefix.action) {
                        Some(pos) => pos,
                        None => {
                            unrated.push(Reaction {
                                id: prefix.action.clone(),
                                reactants: Vec::new(),
                                products: Vec::new(),
                                modifiers: Vec::new(),
                                kinetic_law: Expr::num(0.0),
                            });
                            unrated.len() - 1
                        }
                    };
                    &mut unrated[pos]
                }
                None => {
                    return Err(ModelError::UnknownAction {
                        action: prefix.action.clone(),
                        species: comp.name.clone(),
                    })
                }
            };
            let targets = match &prefix.location {
                Some(loc) => vec![species_global_id(&comp.name, Some(loc))],
                None => instances_of.get(comp.name.as_str()).cloned().unwrap_or_default(),
            };
            for id in targets {
                match prefix.role {
                    Role::Reactant => reaction.reactants.push((id, prefix.stoichiometry)),
                    Role::Product => reaction.products.push((id, prefix.stoichiometry)),
                    _ => reaction.modifiers.push(id),
                }
            }
        }
    }
    Ok(by_rate
        .into_iter()
        .flatten()
        .map(|r| (r, true))
        .chain(unrated.into_iter().map(|r| (r, false)))
        .collect())
}

/// Net stoichiometry, rows in system-equation order and columns in
/// [`derive_reactions`] order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoichiometryMatrix {
    pub species: Vec<String>,
    pub reactions: Vec<String>,
    entries: Vec<i64>,
}

impl StoichiometryMatrix {
    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.entries[row * self.reactions.len() + col]
    }

    pub fn column(&self, col: usize) -> Vec<i64> {
        (0..self.species.len()).map(|r| self.get(r, col)).collect()
    }

    pub fn rows(&self) -> usize {
        self.species.len()
    }

    pub fn cols(&self) -> usize {
        self.reactions.len()
    }

    pub fn from_reactions(species: Vec<String>, reactions: &[Reaction]) -> Self {
        let index: HashMap<&str, usize> = species.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let cols = reactions.len();
        let mut entries = vec![0i64; species.len() * cols];
        for (j, r) in reactions.iter().enumerate() {
            for (id, k) in &r.products {
                if let Some(&i) = index.get(id.as_str()) {
                    entries[i * cols + j] += i64::from(*k);
                }
            }
            for (id, k) in &r.reactants {
                if let Some(&i) = index.get(id.as_str()) {
                    entries[i * cols + j] -= i64::from(*k);
                }
            }
        }
        StoichiometryMatrix {
            species,
            reactions: reactions.iter().map(|r| r.id.clone()).collect(),
            entries,
        }
    }
}

pub fn stoichiometry_matrix(model: &Model) -> Result<StoichiometryMatrix, ModelError> {
    let reactions = derive_reactions(model)?;
    Ok(StoichiometryMatrix::from_reactions(model.global_ids(), &reactions))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{FunctionalRate, Location, LocationKind, Parameter, Prefix, SpeciesComponent, SpeciesInstance};

    fn prefix(action: &str, role: Role) -> Prefix {
        Prefix {
            action: action.into(),
            stoichiometry: 1,
            role,
            location: None,
        }
    }

    fn component(name: &str, prefixes: Vec<Prefix>) -> SpeciesComponent {
        SpeciesComponent {
            name: name.into(),
            prefixes,
        }
    }

    fn exposition_model() -> Model {
        let lsi = Expr::mul(Expr::mul(Expr::sym("lambda"), Expr::sym("S")), Expr::sym("I"));
        let mut m = Model::new("m");
        m.locations.push(Location {
            name: "Age1".into(),
            parent: Some("world".into()),
            size: Expr::num(1000.0),
            kind: LocationKind::Compartment,
        });
        m.parameters.push(Parameter::global("lambda", 0.0005));
        m.functional_rates.push(FunctionalRate {
            action: "Exposition".into(),
            law: lsi,
        });
        m.species = vec![
            component("S", vec![prefix("Exposition", Role::Reactant)]),
            component("I", vec![prefix("Exposition", Role::Activator)]),
            component("Exp", vec![prefix("Exposition", Role::Product)]),
        ];
        for s in ["S", "I", "Exp"] {
            m.system.push(SpeciesInstance::new(s, Some("Age1"), Some(1.0)));
        }
        m
    }

    #[test]
    fn exposition_pivot() {
        let m = exposition_model();
        let r = derive_reactions(&m).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].id, "Exposition");
        assert_eq!(r[0].reactants, vec![("S_Age1".to_string(), 1)]);
        assert_eq!(r[0].products, vec![("Exp_Age1".to_string(), 1)]);
        assert_eq!(r[0].modifiers, vec!["I_Age1".to_string()]);
        assert_eq!(r[0].kinetic_law.to_string(), "lambda * S * I");
    }

    #[test]
    fn lost_vaccination_pivot() {
        let mut m = Model::new("m");
        m.functional_rates.push(FunctionalRate {
            action: "LostVaccin".into(),
            law: Expr::mul(Expr::sym("W"), Expr::sym("VP")),
        });
        m.species = vec![
            component("VP", vec![prefix("LostVaccin", Role::Reactant)]),
            component("S", vec![prefix("LostVaccin", Role::Product)]),
        ];
        m.system.push(SpeciesInstance::new("VP", None, Some(3.0)));
        m.system.push(SpeciesInstance::new("S", None, Some(3.0)));
        let r = derive_reactions(&m).unwrap();
        assert_eq!(
            r,
            vec![Reaction {
                id: "LostVaccin".into(),
                reactants: vec![("VP".into(), 1)],
                products: vec![("S".into(), 1)],
                modifiers: vec![],
                kinetic_law: Expr::mul(Expr::sym("W"), Expr::sym("VP")),
            }]
        );
    }

    #[test]
    fn empty_model_has_no_reactions() {
        let m = Model::new("m");
        assert!(derive_reactions(&m).unwrap().is_empty());
        let s = stoichiometry_matrix(&m).unwrap();
        assert_eq!((s.rows(), s.cols()), (0, 0));
    }

    #[test]
    fn unknown_action_is_an_error() {
        let mut m = Model::new("m");
        m.species.push(component("A", vec![prefix("decay", Role::Reactant)]));
        assert_eq!(
            derive_reactions(&m),
            Err(ModelError::UnknownAction {
                action: "decay".into(),
                species: "A".into()
            })
        );
    }

    #[test]
    fn decay_matrix() {
        let mut m = Model::new("m");
        m.functional_rates.push(FunctionalRate {
            action: "decay".into(),
            law: Expr::mul(Expr::sym("d"), Expr::sym("A")),
        });
        m.species.push(component("A", vec![prefix("decay", Role::Reactant)]));
        m.system.push(SpeciesInstance::new("A", None, Some(100.0)));
        let s = stoichiometry_matrix(&m).unwrap();
        assert_eq!((s.rows(), s.cols()), (1, 1));
        assert_eq!(s.get(0, 0), -1);
    }

    #[test]
    fn exposition_matrix_column() {
        let s = stoichiometry_matrix(&exposition_model()).unwrap();
        assert_eq!(s.species, ["S_Age1", "I_Age1", "Exp_Age1"]);
        assert_eq!(s.column(0), vec![-1, 0, 1]);
    }

    #[test]
    fn located_prefix_selects_one_instance() {
        let mut m = Model::new("m");
        for loc in ["A1", "A2"] {
            m.locations.push(Location {
                name: loc.into(),
                parent: None,
                size: Expr::num(1.0),
                kind: LocationKind::Compartment,
            });
            m.system.push(SpeciesInstance::new("S", Some(loc), Some(1.0)));
        }
        m.functional_rates.push(FunctionalRate {
            action: "r".into(),
            law: Expr::sym("S_A2"),
        });
        m.species.push(component(
            "S",
            vec![Prefix {
                location: Some("A2".into()),
                ..prefix("r", Role::Reactant)
            }],
        ));
        let r = derive_reactions(&m).unwrap();
        assert_eq!(r[0].reactants, vec![("S_A2".to_string(), 1)]);
        let s = stoichiometry_matrix(&m).unwrap();
        assert_eq!(s.column(0), vec![0, -1]);
    }
}
