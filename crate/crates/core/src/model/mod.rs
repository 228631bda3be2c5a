//! Typed model: locations, parameters, functional rates, species
//! components, the system equation and events.
//!
//! A model is species-centric: each [`SpeciesComponent`] lists the actions
//! it takes part in. [`derive_reactions`] pivots that into reaction-centric
//! [`Reaction`]s, which is the view SBML and the simulators work with.

mod expr;
mod reactions;

use std::collections::HashMap;
use std::fmt;

pub use expr::{eval_expr, free_symbols, BinOp, EvalError, Expr};
pub(crate) use reactions::derive_reactions_lenient;
pub use reactions::{derive_reactions, stoichiometry_matrix, ModelError, Reaction, StoichiometryMatrix};

/// Name of the implicit root location.
pub const ROOT_LOCATION: &str = "world";

/// Name given to models that do not declare one.
pub const DEFAULT_MODEL_NAME: &str = "model";

#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub name: String,
    pub locations: Vec<Location>,
    pub parameters: Vec<Parameter>,
    pub functional_rates: Vec<FunctionalRate>,
    pub species: Vec<SpeciesComponent>,
    /// Initialised species instances composed with `<*>`.
    pub system: Vec<SpeciesInstance>,
    pub events: Vec<Event>,
}

impl Default for Model {
    fn default() -> Self {
        Model::new(DEFAULT_MODEL_NAME)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LocationKind {
    Compartment,
    Membrane,
}

impl LocationKind {
    /// Keyword used in model text.
    pub fn keyword(self) -> &'static str {
        match self {
            LocationKind::Compartment => "compartment",
            LocationKind::Membrane => "membrane",
        }
    }

    /// Id of the matching SBML compartmentType.
    pub fn type_id(self) -> &'static str {
        match self {
            LocationKind::Compartment => "Compartment",
            LocationKind::Membrane => "Membrane",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Location {
    pub name: String,
    pub parent: Option<String>,
    pub size: Expr,
    pub kind: LocationKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParameterOrigin {
    Global,
    /// Imported from a kinetic-law-local parameter; the name already
    /// carries the `<reaction>_` prefix.
    ReactionLocal {
        reaction: String,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Parameter {
    pub name: String,
    pub value: f64,
    pub origin: ParameterOrigin,
}

impl Parameter {
    pub fn global(name: impl Into<String>, value: f64) -> Self {
        Parameter {
            name: name.into(),
            value,
            origin: ParameterOrigin::Global,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalRate {
    pub action: String,
    pub law: Expr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Reactant,
    Product,
    Activator,
    Inhibitor,
    GenericModifier,
}

impl Role {
    pub const ALL: [Role; 5] = [
        Role::Reactant,
        Role::Product,
        Role::Activator,
        Role::Inhibitor,
        Role::GenericModifier,
    ];

    /// ASCII operator used in model text.
    pub fn operator(self) -> &'static str {
        match self {
            Role::Reactant => "<<",
            Role::Product => ">>",
            Role::Activator => "(+)",
            Role::Inhibitor => "(-)",
            Role::GenericModifier => "(.)",
        }
    }

    pub fn is_modifier(self) -> bool {
        matches!(self, Role::Activator | Role::Inhibitor | Role::GenericModifier)
    }
}

/// `(action, stoichiometry) op Species[@location]`.
///
/// Without a location the prefix applies to every instance of the
/// component; with one it applies to the instance in that location only.
#[derive(Debug, Clone, PartialEq)]
pub struct Prefix {
    pub action: String,
    pub stoichiometry: u32,
    pub role: Role,
    pub location: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpeciesComponent {
    pub name: String,
    pub prefixes: Vec<Prefix>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpeciesInstance {
    pub species: String,
    pub location: Option<String>,
    /// Count of individuals; `None` when the system equation gives no
    /// initial amount (treated as 0).
    pub initial_amount: Option<f64>,
    pub step_size: f64,
    pub levels: u32,
}

impl SpeciesInstance {
    pub fn new(species: impl Into<String>, location: Option<&str>, initial_amount: Option<f64>) -> Self {
        SpeciesInstance {
            species: species.into(),
            location: location.map(str::to_string),
            initial_amount,
            step_size: 1.0,
            levels: 1,
        }
    }

    pub fn global_id(&self) -> String {
        species_global_id(&self.species, self.location.as_deref())
    }

    pub fn amount(&self) -> f64 {
        self.initial_amount.unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub target: String,
    pub value: Expr,
}

/// Fires once when simulated time reaches `trigger_time`.
#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub name: String,
    pub trigger_time: f64,
    pub assignments: Vec<Assignment>,
}

/// `<species>_<location>`, or the bare species name without a location.
pub fn species_global_id(species: &str, location: Option<&str>) -> String {
    match location {
        Some(loc) => format!("{species}_{loc}"),
        None => species.to_string(),
    }
}

/// What a symbol in a kinetic law refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Binding {
    /// Index into `Model::system`.
    Species(usize),
    /// Index into `Model::parameters`.
    Parameter(usize),
    /// Index into `Model::locations`; the symbol stands for the size.
    LocationSize(usize),
}

/// Symbol resolution for one model.
///
/// Lookup order: species global id, then the bare species name when the
/// model has at most one location, then parameter, then location name.
#[derive(Debug, Clone)]
pub struct SymbolTable {
    global_ids: HashMap<String, usize>,
    bare_names: HashMap<String, usize>,
    parameters: HashMap<String, usize>,
    locations: HashMap<String, usize>,
}

impl SymbolTable {
    pub fn new(model: &Model) -> Self {
        let mut global_ids = HashMap::new();
        for (i, inst) in model.system.iter().enumerate() {
            global_ids.entry(inst.global_id()).or_insert(i);
        }
        let mut bare_names = HashMap::new();
        if model.locations.len() <= 1 {
            let mut seen: HashMap<&str, Option<usize>> = HashMap::new();
            for (i, inst) in model.system.iter().enumerate() {
                seen.entry(inst.species.as_str())
                    .and_modify(|slot| *slot = None)
                    .or_insert(Some(i));
            }
            bare_names = seen
                .into_iter()
                .filter_map(|(k, v)| v.map(|i| (k.to_string(), i)))
                .collect();
        }
        let mut parameters = HashMap::new();
        for (i, p) in model.parameters.iter().enumerate() {
            parameters.entry(p.name.clone()).or_insert(i);
        }
        let mut locations = HashMap::new();
        for (i, l) in model.locations.iter().enumerate() {
            locations.entry(l.name.clone()).or_insert(i);
        }
        SymbolTable {
            global_ids,
            bare_names,
            parameters,
            locations,
        }
    }

    pub fn resolve(&self, symbol: &str) -> Option<Binding> {
        if let Some(&i) = self.global_ids.get(symbol) {
            return Some(Binding::Species(i));
        }
        if let Some(&i) = self.bare_names.get(symbol) {
            return Some(Binding::Species(i));
        }
        if let Some(&i) = self.parameters.get(symbol) {
            return Some(Binding::Parameter(i));
        }
        self.locations.get(symbol).map(|&i| Binding::LocationSize(i))
    }

    pub fn instance_index(&self, global_id: &str) -> Option<usize> {
        self.global_ids.get(global_id).copied()
    }
}

impl Model {
    pub fn new(name: impl Into<String>) -> Self {
        Model {
            name: name.into(),
            locations: Vec::new(),
            parameters: Vec::new(),
            functional_rates: Vec::new(),
            species: Vec::new(),
            system: Vec::new(),
            events: Vec::new(),
        }
    }

    pub fn symbols(&self) -> SymbolTable {
        SymbolTable::new(self)
    }

    pub fn location(&self, name: &str) -> Option<&Location> {
        self.locations.iter().find(|l| l.name == name)
    }

    pub fn parameter(&self, name: &str) -> Option<&Parameter> {
        self.parameters.iter().find(|p| p.name == name)
    }

    pub fn functional_rate(&self, action: &str) -> Option<&FunctionalRate> {
        self.functional_rates.iter().find(|r| r.action == action)
    }

    pub fn component(&self, name: &str) -> Option<&SpeciesComponent> {
        self.species.iter().find(|c| c.name == name)
    }

    pub fn instance(&self, global_id: &str) -> Option<&SpeciesInstance> {
        self.system.iter().find(|i| i.global_id() == global_id)
    }

    pub fn global_ids(&self) -> Vec<String> {
        self.system.iter().map(SpeciesInstance::global_id).collect()
    }

    /// Evaluates parameters-only expressions such as location sizes.
    pub fn eval_constant(&self, expr: &Expr) -> Result<f64, EvalError> {
        expr.eval_with(&|name: &str| self.parameter(name).map(|p| p.value))
    }

    /// Evaluates `expr` with species at their initial amounts.
    pub fn eval_initial(&self, expr: &Expr) -> Result<f64, EvalError> {
        let table = self.symbols();
        expr.eval_with(&|name: &str| match table.resolve(name)? {
            Binding::Species(i) => Some(self.system[i].amount()),
            Binding::Parameter(i) => Some(self.parameters[i].value),
            Binding::LocationSize(i) => self.eval_constant(&self.locations[i].size).ok(),
        })
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Role::Reactant => "reactant",
            Role::Product => "product",
            Role::Activator => "activator",
            Role::Inhibitor => "inhibitor",
            Role::GenericModifier => "modifier",
        };
        f.write_str(s)
    }
}
