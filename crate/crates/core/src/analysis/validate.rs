use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::model::{species_global_id, Binding, Expr, Model, SymbolTable, ROOT_LOCATION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum IssueKind {
    UndefinedSpecies,
    UndefinedLocation,
    UndefinedParameterOrSymbol,
    UnknownAction,
    OrphanSpecies,
    UninitializedSpecies,
    DuplicateDefinition,
    NonPositiveSize,
}

impl IssueKind {
    pub fn severity(self) -> Severity {
        match self {
            IssueKind::OrphanSpecies | IssueKind::UninitializedSpecies => Severity::Warning,
            _ => Severity::Error,
        }
    }
}

/// One finding. `reaction` names the reaction the finding was made in,
/// when there is one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Issue {
    pub severity: Severity,
    pub kind: IssueKind,
    pub subject: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reaction: Option<String>,
    pub detail: String,
}

impl Issue {
    fn new(kind: IssueKind, subject: impl Into<String>, detail: impl Into<String>) -> Self {
        Issue {
            severity: kind.severity(),
            kind,
            subject: subject.into(),
            reaction: None,
            detail: detail.into(),
        }
    }

    fn in_reaction(mut self, reaction: &str) -> Self {
        self.reaction = Some(reaction.to_string());
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev}[{:?}] {}: {}", self.kind, self.subject, self.detail)
    }
}

/// Cross-reference and structural checks.
///
/// The result is sorted by (severity, kind, subject) and free of exact
/// duplicates, so two runs on the same model serialize identically.
pub fn validate(model: &Model) -> Vec<Issue> {
    let mut v = Validator {
        model,
        table: model.symbols(),
        issues: Vec::new(),
    };
    v.duplicates();
    v.locations();
    v.instances();
    v.prefixes();
    v.kinetic_laws();
    v.events();
    v.coverage();
    let mut issues = v.issues;
    issues.sort();
    issues.dedup();
    issues
}

struct Validator<'a> {
    model: &'a Model,
    table: SymbolTable,
    issues: Vec<Issue>,
}

impl Validator<'_> {
    fn push(&mut self, issue: Issue) {
        self.issues.push(issue);
    }

    fn duplicates(&mut self) {
        let m = self.model;
        let report = |names: Vec<&str>, what: &str, issues: &mut Vec<Issue>| {
            let mut seen = HashSet::new();
            for n in names {
                if !seen.insert(n) {
                    issues.push(Issue::new(
                        IssueKind::DuplicateDefinition,
                        n,
                        format!("{what} `{n}` is defined more than once"),
                    ));
                }
            }
        };
        report(
            m.locations.iter().map(|l| l.name.as_str()).collect(),
            "location",
            &mut self.issues,
        );
        report(
            m.parameters
                .iter()
                .map(|p| p.name.as_str())
                .chain(m.functional_rates.iter().map(|r| r.action.as_str()))
                .collect(),
            "parameter or functional rate",
            &mut self.issues,
        );
        report(
            m.species.iter().map(|c| c.name.as_str()).collect(),
            "species component",
            &mut self.issues,
        );
        report(
            m.events.iter().map(|e| e.name.as_str()).collect(),
            "event",
            &mut self.issues,
        );
        let ids = m.global_ids();
        report(
            ids.iter().map(String::as_str).collect(),
            "species instance",
            &mut self.issues,
        );
        for c in &m.species {
            let mut seen = HashSet::new();
            for p in &c.prefixes {
                if !seen.insert((p.action.as_str(), p.location.as_deref())) {
                    self.issues.push(
                        Issue::new(
                            IssueKind::DuplicateDefinition,
                            c.name.clone(),
                            format!("species `{}` takes part in `{}` more than once", c.name, p.action),
                        )
                        .in_reaction(&p.action),
                    );
                }
            }
        }
        if m.locations.iter().any(|l| l.name == ROOT_LOCATION) {
            self.push(Issue::new(
                IssueKind::DuplicateDefinition,
                ROOT_LOCATION,
                "location `world` is the implicit root and cannot be declared",
            ));
        }
    }

    fn location_known(&self, name: &str) -> bool {
        self.model.location(name).is_some()
    }

    fn locations(&mut self) {
        for loc in &self.model.locations {
            if let Some(parent) = &loc.parent {
                if parent != ROOT_LOCATION && !self.location_known(parent) {
                    self.push(Issue::new(
                        IssueKind::UndefinedLocation,
                        parent.clone(),
                        format!("location `{}` is inside `{parent}`, which is not defined", loc.name),
                    ));
                }
            }
            let unresolved: Vec<String> = loc
                .size
                .free_symbols()
                .into_iter()
                .filter(|s| self.model.parameter(s).is_none())
                .collect();
            if !unresolved.is_empty() {
                for s in unresolved {
                    self.push(Issue::new(
                        IssueKind::UndefinedParameterOrSymbol,
                        s.clone(),
                        format!(
                            "the size of location `{}` uses `{s}`, which is not a parameter",
                            loc.name
                        ),
                    ));
                }
                continue;
            }
            match self.model.eval_constant(&loc.size) {
                Ok(v) if v > 0.0 => {}
                Ok(v) => self.push(Issue::new(
                    IssueKind::NonPositiveSize,
                    loc.name.clone(),
                    format!("location `{}` has size {v}, which is not positive", loc.name),
                )),
                Err(e) => self.push(Issue::new(
                    IssueKind::NonPositiveSize,
                    loc.name.clone(),
                    format!("the size of location `{}` cannot be evaluated: {e}", loc.name),
                )),
            }
        }
    }

    fn instances(&mut self) {
        for inst in &self.model.system {
            if self.model.component(&inst.species).is_none() {
                self.push(Issue::new(
                    IssueKind::UndefinedSpecies,
                    inst.species.clone(),
                    format!(
                        "the system equation uses `{}`, which has no species definition",
                        inst.species
                    ),
                ));
            }
            if let Some(loc) = &inst.location {
                if !self.location_known(loc) {
                    self.push(Issue::new(
                        IssueKind::UndefinedLocation,
                        loc.clone(),
                        format!("species `{}` is placed in `{loc}`, which is not defined", inst.species),
                    ));
                }
            }
        }
    }

    fn prefixes(&mut self) {
        let m = self.model;
        for c in &m.species {
            for p in &c.prefixes {
                if m.functional_rate(&p.action).is_none() {
                    self.push(Issue::new(
                        IssueKind::UnknownAction,
                        p.action.clone(),
                        format!(
                            "species `{}` takes part in `{}`, which has no functional rate",
                            c.name, p.action
                        ),
                    ));
                }
                let Some(loc) = &p.location else { continue };
                if !self.location_known(loc) {
                    self.push(
                        Issue::new(
                            IssueKind::UndefinedLocation,
                            loc.clone(),
                            format!(
                                "reaction `{}` refers to location `{loc}`, which is not defined",
                                p.action
                            ),
                        )
                        .in_reaction(&p.action),
                    );
                    continue;
                }
                let gid = species_global_id(&c.name, Some(loc));
                if self.table.instance_index(&gid).is_none() {
                    self.push(undefined_species(&gid, &p.action));
                }
            }
        }
    }

    /// Classifies a symbol that resolved to nothing.
    fn unresolved_symbol(&self, symbol: &str, context: &str) -> Issue {
        let m = self.model;
        let looks_located = m.species.iter().any(|c| {
            symbol
                .strip_prefix(c.name.as_str())
                .and_then(|rest| rest.strip_prefix('_'))
                .is_some_and(|loc| self.location_known(loc))
        });
        if looks_located {
            return Issue::new(
                IssueKind::UndefinedSpecies,
                symbol,
                format!("{context} refers to species `{symbol}`, which is not defined"),
            );
        }
        if m.component(symbol).is_some() {
            if m.locations.len() <= 1 {
                let gid = species_global_id(symbol, m.locations.first().map(|l| l.name.as_str()));
                return Issue::new(
                    IssueKind::UndefinedSpecies,
                    gid.clone(),
                    format!("{context} refers to species `{gid}`, which is not defined"),
                );
            }
            return Issue::new(
                IssueKind::UndefinedParameterOrSymbol,
                symbol,
                format!(
                    "{context} uses species name `{symbol}`, which is ambiguous with several locations; use a global id such as `{}`",
                    species_global_id(symbol, Some(&m.locations[0].name))
                ),
            );
        }
        Issue::new(
            IssueKind::UndefinedParameterOrSymbol,
            symbol,
            format!("{context} uses `{symbol}`, which is not a species, parameter or location"),
        )
    }

    fn check_expr(&mut self, expr: &Expr, context: &str, reaction: Option<&str>) {
        for s in expr.free_symbols() {
            if self.table.resolve(&s).is_none() {
                let mut issue = self.unresolved_symbol(&s, context);
                if let Some(r) = reaction {
                    issue = issue.in_reaction(r);
                    if issue.kind == IssueKind::UndefinedSpecies {
                        issue = undefined_species(&issue.subject, r);
                    }
                }
                self.push(issue);
            }
        }
    }

    fn kinetic_laws(&mut self) {
        for rate in &self.model.functional_rates {
            let ctx = format!("reaction `{}`", rate.action);
            self.check_expr(&rate.law, &ctx, Some(&rate.action));
        }
    }

    fn events(&mut self) {
        for e in &self.model.events {
            let ctx = format!("event `{}`", e.name);
            for a in &e.assignments {
                let target_ok = matches!(
                    self.table.resolve(&a.target),
                    Some(Binding::Species(_) | Binding::Parameter(_))
                );
                if !target_ok {
                    let issue = self.unresolved_symbol(&a.target, &ctx);
                    self.push(issue);
                }
                self.check_expr(&a.value, &ctx, None);
            }
        }
    }

    fn coverage(&mut self) {
        let m = self.model;
        let instanced: HashSet<&str> = m.system.iter().map(|i| i.species.as_str()).collect();
        for c in &m.species {
            if !instanced.contains(c.name.as_str()) {
                self.push(Issue::new(
                    IssueKind::UninitializedSpecies,
                    c.name.clone(),
                    format!(
                        "species `{}` is defined but never placed in the system equation",
                        c.name
                    ),
                ));
            }
        }
        let participants = participant_ids(m);
        for id in m.global_ids() {
            if !participants.contains(&id) {
                self.push(Issue::new(
                    IssueKind::OrphanSpecies,
                    id.clone(),
                    format!("species `{id}` takes part in no reaction"),
                ));
            }
        }
    }
}

fn undefined_species(gid: &str, reaction: &str) -> Issue {
    Issue::new(
        IssueKind::UndefinedSpecies,
        gid,
        format!("reaction `{reaction}` refers to species `{gid}`, which is not defined"),
    )
    .in_reaction(reaction)
}

/// Global ids named by any prefix, whether or not its action has a rate.
pub(crate) fn participant_ids(model: &Model) -> BTreeSet<String> {
    let mut by_species: HashMap<&str, Vec<String>> = HashMap::new();
    for inst in &model.system {
        by_species
            .entry(inst.species.as_str())
            .or_default()
            .push(inst.global_id());
    }
    let mut out = BTreeSet::new();
    for c in &model.species {
        for p in &c.prefixes {
            match &p.location {
                Some(loc) => {
                    out.insert(species_global_id(&c.name, Some(loc)));
                }
                None => out.extend(by_species.get(c.name.as_str()).into_iter().flatten().cloned()),
            }
        }
    }
    out
}

/// Distinct actions used by at least one prefix, in first-use order.
pub(crate) fn used_actions(model: &Model) -> Vec<&str> {
    let mut seen = HashSet::new();
    model
        .species
        .iter()
        .flat_map(|c| c.prefixes.iter())
        .map(|p| p.action.as_str())
        .filter(|a| seen.insert(*a))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_model;

    const SIR: &str = "
        beta = 0.0005; gamma = 0.1;
        location A in world : size = 1000, type = compartment;
        infect = beta * S * I;
        recover = gamma * I;
        S = (infect,1) << S;
        I = (infect,1) >> I + (recover,1) << I;
        R = (recover,1) >> R;
        S@A[990] <*> I@A[10] <*> R@A[0]";

    #[test]
    fn clean_model_has_no_issues() {
        assert!(validate(&parse_model(SIR).unwrap()).is_empty());
    }

    #[test]
    fn empty_model_has_no_issues() {
        assert!(validate(&Model::default()).is_empty());
    }

    #[test]
    fn deleting_a_law_referenced_instance() {
        let src = SIR.replace("S@A[990] <*> ", "");
        let issues = validate(&parse_model(&src).unwrap());
        let errors: Vec<_> = issues.iter().filter(|i| i.is_error()).collect();
        assert_eq!(errors.len(), 1, "{issues:#?}");
        assert_eq!(errors[0].kind, IssueKind::UndefinedSpecies);
        assert_eq!(errors[0].subject, "S_A");
        assert_eq!(errors[0].reaction.as_deref(), Some("infect"));
        // S is now never instanced
        assert!(issues
            .iter()
            .any(|i| i.kind == IssueKind::UninitializedSpecies && i.subject == "S"));
    }

    #[test]
    fn structural_errors() {
        let src = "
            location A in nowhere : size = 0, type = compartment;
            location B : size = q, type = membrane;
            r = k * X;
            S = (r,1) << S + (s,1) >> S@C;
            S@A[1] <*> T@Z[2]";
        let issues = validate(&parse_model(src).unwrap());
        let kinds: Vec<(IssueKind, &str)> = issues.iter().map(|i| (i.kind, i.subject.as_str())).collect();
        for expected in [
            (IssueKind::UndefinedLocation, "nowhere"),
            (IssueKind::UndefinedLocation, "C"),
            (IssueKind::UndefinedLocation, "Z"),
            (IssueKind::NonPositiveSize, "A"),
            (IssueKind::UndefinedParameterOrSymbol, "q"),
            (IssueKind::UndefinedParameterOrSymbol, "k"),
            (IssueKind::UndefinedParameterOrSymbol, "X"),
            (IssueKind::UnknownAction, "s"),
            (IssueKind::UndefinedSpecies, "T"),
        ] {
            assert!(kinds.contains(&expected), "missing {expected:?} in {kinds:?}");
        }
        let mut sorted = issues.clone();
        sorted.sort();
        assert_eq!(sorted, issues);
    }

    #[test]
    fn orphans_and_duplicates_in_hand_built_model() {
        let mut m = parse_model(SIR).unwrap();
        m.system.push(m.system[0].clone());
        m.species.push(crate::model::SpeciesComponent {
            name: "Z".into(),
            prefixes: vec![],
        });
        m.system
            .push(crate::model::SpeciesInstance::new("Z", Some("A"), Some(0.0)));
        let issues = validate(&m);
        assert!(issues
            .iter()
            .any(|i| i.kind == IssueKind::DuplicateDefinition && i.subject == "S_A"));
        assert!(issues
            .iter()
            .any(|i| i.kind == IssueKind::OrphanSpecies && i.subject == "Z_A"));
        assert!(!issues
            .iter()
            .any(|i| i.kind == IssueKind::OrphanSpecies && i.subject == "R_A"));
    }
}
