use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::model::Model;
use crate::numfmt::shortest;

use super::used_actions;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParameterChange {
    pub name: String,
    pub old: f64,
    pub new: f64,
}

/// Differences between a reference model and a candidate. Every list is
/// sorted lexicographically.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DiffReport {
    pub missing_species: Vec<String>,
    pub extra_species: Vec<String>,
    pub missing_reactions: Vec<String>,
    pub extra_reactions: Vec<String>,
    pub changed_kinetic_laws: Vec<String>,
    pub changed_parameters: Vec<ParameterChange>,
    pub missing_parameters: Vec<String>,
    pub extra_parameters: Vec<String>,
}

impl DiffReport {
    pub fn is_empty(&self) -> bool {
        self == &DiffReport::default()
    }

    /// The same report seen from the other side.
    pub fn reversed(&self) -> DiffReport {
        DiffReport {
            missing_species: self.extra_species.clone(),
            extra_species: self.missing_species.clone(),
            missing_reactions: self.extra_reactions.clone(),
            extra_reactions: self.missing_reactions.clone(),
            changed_kinetic_laws: self.changed_kinetic_laws.clone(),
            changed_parameters: self
                .changed_parameters
                .iter()
                .map(|c| ParameterChange {
                    name: c.name.clone(),
                    old: c.new,
                    new: c.old,
                })
                .collect(),
            missing_parameters: self.extra_parameters.clone(),
            extra_parameters: self.missing_parameters.clone(),
        }
    }
}

impl fmt::Display for DiffReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return writeln!(f, "no differences");
        }
        let lists: [(&str, &[String]); 7] = [
            ("missing species", &self.missing_species),
            ("extra species", &self.extra_species),
            ("missing reactions", &self.missing_reactions),
            ("extra reactions", &self.extra_reactions),
            ("changed kinetic laws", &self.changed_kinetic_laws),
            ("missing parameters", &self.missing_parameters),
            ("extra parameters", &self.extra_parameters),
        ];
        for (label, items) in lists {
            for item in items {
                writeln!(f, "{label}: {item}")?;
            }
        }
        for c in &self.changed_parameters {
            writeln!(
                f,
                "changed parameter: {} {} -> {}",
                c.name,
                shortest(c.old),
                shortest(c.new)
            )?;
        }
        Ok(())
    }
}

/// Diff with exact parameter comparison.
pub fn diff_models(reference: &Model, candidate: &Model) -> DiffReport {
    diff_models_with_tolerance(reference, candidate, 0.0)
}

/// Parameters count as changed when they differ by more than `tolerance`.
pub fn diff_models_with_tolerance(reference: &Model, candidate: &Model, tolerance: f64) -> DiffReport {
    let species = |m: &Model| -> BTreeSet<String> { m.global_ids().into_iter().collect() };
    let (rs, cs) = (species(reference), species(candidate));

    let actions = |m: &Model| -> BTreeSet<String> { used_actions(m).into_iter().map(str::to_string).collect() };
    let (ra, ca) = (actions(reference), actions(candidate));

    let changed_kinetic_laws = ra
        .intersection(&ca)
        .filter(|a| match (reference.functional_rate(a), candidate.functional_rate(a)) {
            (Some(x), Some(y)) => x.law.canonical() != y.law.canonical(),
            (None, None) => false,
            _ => true,
        })
        .cloned()
        .collect();

    let params =
        |m: &Model| -> BTreeMap<String, f64> { m.parameters.iter().map(|p| (p.name.clone(), p.value)).collect() };
    let (rp, cp) = (params(reference), params(candidate));
    let changed_parameters = rp
        .iter()
        .filter_map(|(name, &old)| {
            let &new = cp.get(name)?;
            let differs = if tolerance > 0.0 {
                (old - new).abs() > tolerance
            } else {
                old != new
            };
            differs.then(|| ParameterChange {
                name: name.clone(),
                old,
                new,
            })
        })
        .collect();

    DiffReport {
        missing_species: rs.difference(&cs).cloned().collect(),
        extra_species: cs.difference(&rs).cloned().collect(),
        missing_reactions: ra.difference(&ca).cloned().collect(),
        extra_reactions: ca.difference(&ra).cloned().collect(),
        changed_kinetic_laws,
        changed_parameters,
        missing_parameters: rp.keys().filter(|k| !cp.contains_key(*k)).cloned().collect(),
        extra_parameters: cp.keys().filter(|k| !rp.contains_key(*k)).cloned().collect(),
    }
}
