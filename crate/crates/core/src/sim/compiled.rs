use crate::model::{derive_reactions, BinOp, Binding, Expr, Model, SymbolTable};

use super::SimError;

/// Expression with symbols resolved to state or parameter slots.
#[derive(Debug, Clone)]
pub(crate) enum Code {
    Const(f64),
    Species(usize),
    Param(usize),
    Bin(BinOp, Box<Code>, Box<Code>),
}

impl Code {
    pub fn eval(&self, x: &[f64], p: &[f64]) -> f64 {
        match self {
            Code::Const(v) => *v,
            Code::Species(i) => x[*i],
            Code::Param(i) => p[*i],
            Code::Bin(op, a, b) => {
                let (a, b) = (a.eval(x, p), b.eval(x, p));
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => a.powf(b),
                }
            }
        }
    }
}

fn compile(expr: &Expr, model: &Model, table: &SymbolTable, depth: usize) -> Result<Code, SimError> {
    Ok(match expr {
        Expr::Number(v) => Code::Const(*v),
        Expr::Symbol(s) => match table.resolve(s) {
            Some(Binding::Species(i)) => Code::Species(i),
            Some(Binding::Parameter(i)) => Code::Param(i),
            Some(Binding::LocationSize(i)) if depth < 8 => compile(&model.locations[i].size, model, table, depth + 1)?,
            _ => return Err(SimError::UnresolvedSymbol(s.clone())),
        },
        Expr::Binary { op, lhs, rhs } => Code::Bin(
            *op,
            Box::new(compile(lhs, model, table, depth)?),
            Box::new(compile(rhs, model, table, depth)?),
        ),
    })
}

pub(crate) enum Target {
    Species(usize),
    Param(usize),
}

pub(crate) struct CompiledEvent {
    pub time: f64,
    pub assignments: Vec<(Target, Code)>,
}

pub(crate) struct CompiledReaction {
    pub law: Code,
    /// Net change per species index.
    pub delta: Vec<(usize, f64)>,
    /// Minimum count per reactant species index.
    pub needs: Vec<(usize, f64)>,
}

/// Everything the integrators need, resolved once.
pub(crate) struct Compiled {
    pub species: Vec<String>,
    pub initial: Vec<f64>,
    pub params: Vec<f64>,
    pub reactions: Vec<CompiledReaction>,
    /// Sorted by time; ties keep declaration order.
    pub events: Vec<CompiledEvent>,
}

impl Compiled {
    pub fn new(model: &Model) -> Result<Self, SimError> {
        let table = model.symbols();
        let index = |gid: &str| {
            table
                .instance_index(gid)
                .ok_or_else(|| SimError::UnresolvedSymbol(gid.to_string()))
        };
        let reactions = derive_reactions(model)
            .map_err(|e| SimError::InvalidConfig(e.to_string()))?
            .iter()
            .map(|r| {
                let mut delta: Vec<(usize, f64)> = Vec::new();
                let mut needs: Vec<(usize, f64)> = Vec::new();
                let bump = |list: &mut Vec<(usize, f64)>, i: usize, k: f64| match list.iter_mut().find(|e| e.0 == i) {
                    Some(e) => e.1 += k,
                    None => list.push((i, k)),
                };
                for (gid, k) in &r.reactants {
                    let i = index(gid)?;
                    bump(&mut delta, i, -f64::from(*k));
                    bump(&mut needs, i, f64::from(*k));
                }
                for (gid, k) in &r.products {
                    bump(&mut delta, index(gid)?, f64::from(*k));
                }
                delta.retain(|e| e.1 != 0.0);
                Ok(CompiledReaction {
                    law: compile(&r.kinetic_law, model, &table, 0)?,
                    delta,
                    needs,
                })
            })
            .collect::<Result<Vec<_>, SimError>>()?;

        let mut events = model
            .events
            .iter()
            .map(|e| {
                let assignments = e
                    .assignments
                    .iter()
                    .map(|a| {
                        let target = match table.resolve(&a.target) {
                            Some(Binding::Species(i)) => Target::Species(i),
                            Some(Binding::Parameter(i)) => Target::Param(i),
                            _ => return Err(SimError::UnresolvedSymbol(a.target.clone())),
                        };
                        Ok((target, compile(&a.value, model, &table, 0)?))
                    })
                    .collect::<Result<Vec<_>, SimError>>()?;
                Ok(CompiledEvent {
                    time: e.trigger_time,
                    assignments,
                })
            })
            .collect::<Result<Vec<_>, SimError>>()?;
        events.sort_by(|a, b| a.time.total_cmp(&b.time));

        Ok(Compiled {
            species: model.global_ids(),
            initial: model.system.iter().map(|i| i.amount()).collect(),
            params: model.parameters.iter().map(|p| p.value).collect(),
            reactions,
            events,
        })
    }

    /// Applies `event` with every value computed from the pre-event state.
    /// `species_value` post-processes values written to species.
    pub fn fire(&self, event: &CompiledEvent, x: &mut [f64], p: &mut [f64], species_value: impl Fn(f64) -> f64) {
        let values: Vec<f64> = event.assignments.iter().map(|(_, c)| c.eval(x, p)).collect();
        for ((target, _), v) in event.assignments.iter().zip(values) {
            match target {
                Target::Species(i) => x[*i] = species_value(v),
                Target::Param(i) => p[*i] = v,
            }
        }
    }
}
