//! Deterministic (RK4) and stochastic (Gillespie direct method) simulation.
//!
//! Kinetic laws are used as written for both: they give reaction rates in
//! individuals per unit time, and as SSA propensities.
//!
//! SSA replicate `r` draws from `ChaCha8Rng::seed_from_u64(seed)` switched
//! to stream `r`, so a (seed, replicate) pair always gives the same run.

mod compiled;
mod ode;
mod ssa;

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::Path;
use std::sync::Arc;

use thiserror::Error;

use crate::analysis::{validate, Issue};
use crate::model::Model;
use crate::numfmt::shortest;

pub use ode::simulate_ode;
pub use ssa::simulate_ssa;

pub const DEFAULT_DT: f64 = 0.01;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("model has {} validation error(s)", .0.len())]
    ValidationFailed(Vec<Issue>),
    #[error("numerical blow-up at t = {time}")]
    NumericalBlowup { time: f64 },
    #[error("initial amount of `{species}` is {amount}, not an integer")]
    NonIntegerInitialAmount { species: String, amount: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("symbol `{0}` cannot be resolved")]
    UnresolvedSymbol(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub t_end: f64,
    /// RK4 step.
    pub dt: f64,
    /// Sampling interval; `None` picks the simulator's default.
    pub output_every: Option<f64>,
    pub replicates: usize,
    pub seed: u64,
}

impl SimConfig {
    pub fn new(t_end: f64) -> Self {
        SimConfig {
            t_end,
            dt: DEFAULT_DT,
            output_every: None,
            replicates: 1,
            seed: 0,
        }
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn with_output_every(mut self, every: f64) -> Self {
        self.output_every = Some(every);
        self
    }

    pub fn with_replicates(mut self, n: usize) -> Self {
        self.replicates = n;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn check_common(&self) -> Result<(), SimError> {
        let bad = |m: String| Err(SimError::InvalidConfig(m));
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return bad(format!("t_end must be positive, got {}", self.t_end));
        }
        if let Some(oe) = self.output_every {
            if !(oe.is_finite() && oe > 0.0) {
                return bad(format!("output_every must be positive, got {oe}"));
            }
            if oe > self.t_end {
                return bad(format!("output_every {oe} exceeds t_end {}", self.t_end));
            }
        }
        if self.replicates == 0 {
            return bad("replicates must be at least 1".into());
        }
        Ok(())
    }
}

/// One sampled row.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub time: f64,
    pub amounts: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Global ids, in system-equation order.
    pub species: Vec<String>,
    pub rows: Vec<Sample>,
}

impl Trajectory {
    pub fn species_index(&self, gid: &str) -> Option<usize> {
        self.species.iter().position(|s| s == gid)
    }

    pub fn last(&self) -> &Sample {
        self.rows.last().expect("trajectories have at least the t = 0 row")
    }

    /// Final amount of `gid`.
    pub fn final_amount(&self, gid: &str) -> Option<f64> {
        Some(self.last().amounts[self.species_index(gid)?])
    }
}

/// Row-wise mean of trajectories sampled at the same times.
pub fn mean_trajectory(runs: &[Trajectory]) -> Option<Trajectory> {
    let first = runs.first()?;
    let n = runs.len() as f64;
    let rows = first
        .rows
        .iter()
        .enumerate()
        .map(|(k, row)| Sample {
            time: row.time,
            amounts: (0..row.amounts.len())
                .map(|j| runs.iter().map(|r| r.rows[k].amounts[j]).sum::<f64>() / n)
                .collect(),
        })
        .collect();
    Some(Trajectory {
        species: first.species.clone(),
        rows,
    })
}

/// `time,<gid>,...` then one row per sample.
pub fn write_trajectory_csv<W: Write>(traj: &Trajectory, mut out: W) -> io::Result<()> {
    write!(out, "time")?;
    for s in &traj.species {
        write!(out, ",{s}")?;
    }
    writeln!(out)?;
    for row in &traj.rows {
        write!(out, "{}", shortest(row.time))?;
        for v in &row.amounts {
            write!(out, ",{}", shortest(*v))?;
        }
        writeln!(out)?;
    }
    out.flush()
}

pub fn save_trajectory_csv(traj: &Trajectory, path: &Path) -> Result<(), SimError> {
    let io_err = |source| SimError::Io {
        path: path.display().to_string(),
        source,
    };
    let file = std::fs::File::create(path).map_err(io_err)?;
    write_trajectory_csv(traj, io::BufWriter::new(file)).map_err(io_err)
}

fn require_valid(model: &Model) -> Result<(), SimError> {
    let errors: Vec<Issue> = validate(model).into_iter().filter(Issue::is_error).collect();
    if errors.is_empty() {
        Ok(())
    } else {
        Err(SimError::ValidationFailed(errors))
    }
}

/// `0, every, 2*every, ...` up to `t_end`, which is always the last time.
pub(crate) fn sample_times(t_end: f64, every: f64) -> Vec<f64> {
    let n = (t_end / every + 1e-9).floor() as usize;
    let mut times: Vec<f64> = (0..=n).map(|k| k as f64 * every).collect();
    let last = times.last_mut().expect("k = 0 is always present");
    if (t_end - *last).abs() <= 1e-9 * t_end {
        *last = t_end;
    } else {
        times.push(t_end);
    }
    times
}

/// A simulation method, looked up by name.
pub trait Simulator: Send + Sync {
    fn name(&self) -> &'static str;
    /// Runs every replicate the method supports; ODE always returns one.
    fn run(&self, model: &Model, cfg: &SimConfig) -> Result<Vec<Trajectory>, SimError>;
}

pub struct OdeSimulator;

impl Simulator for OdeSimulator {
    fn name(&self) -> &'static str {
        "ode"
    }

    fn run(&self, model: &Model, cfg: &SimConfig) -> Result<Vec<Trajectory>, SimError> {
        simulate_ode(model, cfg).map(|t| vec![t])
    }
}

pub struct SsaSimulator;

impl Simulator for SsaSimulator {
    fn name(&self) -> &'static str {
        "ssa"
    }

    fn run(&self, model: &Model, cfg: &SimConfig) -> Result<Vec<Trajectory>, SimError> {
        simulate_ssa(model, cfg)
    }
}

#[derive(Clone, Default)]
pub struct SimulatorRegistry {
    simulators: BTreeMap<&'static str, Arc<dyn Simulator>>,
}

impl SimulatorRegistry {
    pub fn with_defaults() -> Self {
        let mut r = SimulatorRegistry::default();
        r.register(Arc::new(OdeSimulator));
        r.register(Arc::new(SsaSimulator));
        r
    }

    pub fn register(&mut self, sim: Arc<dyn Simulator>) {
        self.simulators.insert(sim.name(), sim);
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn Simulator>> {
        self.simulators.get(name).cloned()
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.simulators.keys().copied().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_grid() {
        assert_eq!(sample_times(1.0, 0.5), [0.0, 0.5, 1.0]);
        assert_eq!(sample_times(1.0, 0.3), [0.0, 0.3, 0.6, 0.8999999999999999, 1.0]);
        let t = sample_times(1.0, 0.1);
        assert_eq!(t.len(), 11);
        assert_eq!(*t.last().unwrap(), 1.0);
    }

    #[test]
    fn csv_layout() {
        let traj = Trajectory {
            species: vec!["S".into(), "I".into(), "R".into()],
            rows: vec![Sample {
                time: 0.0,
                amounts: vec![990.0, 10.0, 0.0],
            }],
        };
        let mut buf = Vec::new();
        write_trajectory_csv(&traj, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "time,S,I,R\n0,990,10,0\n");
    }

    #[test]
    fn mean_of_two_runs() {
        let run = |v: f64| Trajectory {
            species: vec!["A".into()],
            rows: vec![Sample {
                time: 0.0,
                amounts: vec![v],
            }],
        };
        let m = mean_trajectory(&[run(1.0), run(2.0)]).unwrap();
        assert_eq!(m.rows[0].amounts, [1.5]);
    }

    #[test]
    fn config_checks() {
        assert!(SimConfig::new(0.0).check_common().is_err());
        assert!(SimConfig::new(1.0).with_output_every(2.0).check_common().is_err());
        assert!(SimConfig::new(1.0).with_replicates(0).check_common().is_err());
        assert!(SimConfig::new(1.0).check_common().is_ok());
    }

    #[test]
    fn registry_names() {
        assert_eq!(SimulatorRegistry::with_defaults().names(), ["ode", "ssa"]);
    }
}
