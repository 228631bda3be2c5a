//! `epinarr` command line.
//!
//! Exit codes: 0 success, 1 validation errors or differences found,
//! 2 parse, schema or usage error, 3 I/O error, 4 numerical failure.

use std::ffi::OsString;
use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};

use crate::analysis::{diff_models_with_tolerance, summarize, validate, Issue};
use crate::formats::{FormatError, FormatRegistry, ModelFormat};
use crate::model::Model;
use crate::narrative::{narrative_doc, NarrativeFormat, RendererRegistry};
use crate::parser::render_model;
use crate::sbml::{export_sbml, export_warnings, SbmlError};
use crate::sim::{mean_trajectory, write_trajectory_csv, SimConfig, SimError, SimulatorRegistry, Trajectory};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDINGS: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "epinarr",
    version,
    about = "Author, convert, narrate, check and simulate Bio-PEPA models"
)]
struct Cli {
    /// Input format (biopepa or sbml); by default taken from the file extension.
    #[arg(long, global = true, value_name = "FORMAT")]
    in_format: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that a model file can be read.
    Parse { file: PathBuf },
    /// Write a model as SBML.
    Export {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write a model as Bio-PEPA text.
    Import {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write a plain-language report of a model.
    Narrate {
        file: PathBuf,
        #[arg(long, default_value = "txt", value_name = "txt|md|html")]
        format: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Report structural problems.
    Validate {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print component counts.
    Summary {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Compare a candidate model against a reference.
    Diff {
        reference: PathBuf,
        candidate: PathBuf,
        #[arg(long)]
        json: bool,
        /// Largest parameter difference still treated as equal.
        #[arg(long, default_value_t = 0.0)]
        tolerance: f64,
    },
    /// Simulate and write CSV trajectories.
    Simulate {
        file: PathBuf,
        #[arg(long, value_name = "ode|ssa")]
        mode: String,
        #[arg(long)]
        t_end: f64,
        #[arg(long, default_value_t = crate::sim::DEFAULT_DT)]
        dt: f64,
        #[arg(long)]
        output_every: Option<f64>,
        #[arg(long, default_value_t = 1)]
        replicates: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file prefix; CSV goes to standard output without it.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }

    fn io(path: &Path, err: std::io::Error) -> Self {
        Failure::new(EXIT_IO, format!("{}: {err}", path.display()))
    }
}

struct Diagnostics<'a> {
    err: &'a mut dyn Write,
    color: bool,
}

impl Diagnostics<'_> {
    fn emit(&mut self, label: &str, ansi: &str, message: &str) {
        let _ = if self.color {
            writeln!(self.err, "\x1b[{ansi}m{label}:\x1b[0m {message}")
        } else {
            writeln!(self.err, "{label}: {message}")
        };
    }

    fn error(&mut self, message: &str) {
        self.emit("error", "1;31", message);
    }

    fn warning(&mut self, message: &str) {
        self.emit("warning", "1;33", message);
    }

    fn issue(&mut self, issue: &Issue) {
        let text = format!("[{:?}] {}", issue.kind, issue.detail);
        if issue.is_error() {
            self.error(&text);
        } else {
            self.warning(&text);
        }
    }
}

fn use_color() -> bool {
    match std::env::var("EPINARR_COLOR").as_deref() {
        Ok("never") => false,
        _ => std::io::stderr().is_terminal(),
    }
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_INPUT
                }
            };
        }
    };
    let mut diag = Diagnostics {
        err,
        color: use_color(),
    };
    match dispatch(cli, out, &mut diag) {
        Ok(code) => code,
        Err(f) => {
            diag.error(&f.message);
            f.code
        }
    }
}

fn format_for(path: &Path, forced: Option<&str>) -> Result<Arc<dyn ModelFormat>, Failure> {
    let registry = FormatRegistry::with_defaults();
    match forced {
        Some(name) => registry.get(name).ok_or_else(|| {
            Failure::new(
                EXIT_INPUT,
                format!("unknown format `{name}` (expected {})", registry.names().join(" or ")),
            )
        }),
        None => registry.for_path(path).ok_or_else(|| {
            Failure::new(
                EXIT_INPUT,
                format!(
                    "cannot tell the format of {} from its extension; use --in-format",
                    path.display()
                ),
            )
        }),
    }
}

fn load(path: &Path, forced: Option<&str>) -> Result<Model, Failure> {
    let format = format_for(path, forced)?;
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    format.read(&text).map_err(|e| match e {
        FormatError::Parse(p) => Failure::new(EXIT_INPUT, format!("{}:{p}", path.display())),
        FormatError::Sbml(s) => Failure::new(EXIT_INPUT, format!("{}: {s}", path.display())),
    })
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::io(p, e)),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::io(Path::new("<stdout>"), e)),
    }
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn dispatch(cli: Cli, out: &mut dyn Write, diag: &mut Diagnostics<'_>) -> Result<i32, Failure> {
    let forced = cli.in_format.as_deref();
    match cli.command {
        Command::Parse { file } => {
            let m = load(&file, forced)?;
            emit(out, None, &format!("{}: ok (model {})\n", file.display(), m.name))?;
            Ok(EXIT_OK)
        }
        Command::Export { file, output } => {
            let m = load(&file, forced)?;
            for w in export_warnings(&m) {
                diag.warning(&w);
            }
            match export_sbml(&m) {
                Ok(xml) => {
                    emit(out, output.as_deref(), &xml)?;
                    Ok(EXIT_OK)
                }
                Err(SbmlError::ValidationFailed(issues)) => {
                    issues.iter().for_each(|i| diag.issue(i));
                    Err(Failure::new(
                        EXIT_FINDINGS,
                        "model has validation errors; nothing exported",
                    ))
                }
                Err(e) => Err(Failure::new(EXIT_INPUT, e.to_string())),
            }
        }
        Command::Import { file, output } => {
            let m = load(&file, forced)?;
            emit(out, output.as_deref(), &render_model(&m))?;
            Ok(EXIT_OK)
        }
        Command::Narrate { file, format, output } => {
            let fmt: NarrativeFormat = format.parse().map_err(|e: String| Failure::new(EXIT_INPUT, e))?;
            let m = load(&file, forced)?;
            let doc = narrative_doc(&m, fmt);
            let renderer = RendererRegistry::with_defaults()
                .get(fmt.name())
                .ok_or_else(|| Failure::new(EXIT_INPUT, format!("no renderer for `{fmt}`")))?;
            emit(out, output.as_deref(), &renderer.render(&doc))?;
            Ok(EXIT_OK)
        }
        Command::Validate { file, json: as_json } => {
            let m = load(&file, forced)?;
            let issues = validate(&m);
            let text = if as_json {
                json(&issues)
            } else if issues.is_empty() {
                "no issues\n".to_string()
            } else {
                issues.iter().map(|i| format!("{i}\n")).collect()
            };
            emit(out, None, &text)?;
            Ok(if issues.iter().any(Issue::is_error) {
                EXIT_FINDINGS
            } else {
                EXIT_OK
            })
        }
        Command::Summary { file, json: as_json } => {
            let m = load(&file, forced)?;
            let s = summarize(&m);
            emit(out, None, &if as_json { json(&s) } else { s.to_string() })?;
            Ok(EXIT_OK)
        }
        Command::Diff {
            reference,
            candidate,
            json: as_json,
            tolerance,
        } => {
            if tolerance.is_nan() || tolerance < 0.0 {
                return Err(Failure::new(EXIT_INPUT, "--tolerance must be a non-negative number"));
            }
            let a = load(&reference, forced)?;
            let b = load(&candidate, forced)?;
            let report = diff_models_with_tolerance(&a, &b, tolerance);
            emit(out, None, &if as_json { json(&report) } else { report.to_string() })?;
            Ok(if report.is_empty() { EXIT_OK } else { EXIT_FINDINGS })
        }
        Command::Simulate {
            file,
            mode,
            t_end,
            dt,
            output_every,
            replicates,
            seed,
            output,
        } => {
            let registry = SimulatorRegistry::with_defaults();
            let sim = registry.get(&mode).ok_or_else(|| {
                Failure::new(
                    EXIT_INPUT,
                    format!("unknown mode `{mode}` (expected {})", registry.names().join(" or ")),
                )
            })?;
            let m = load(&file, forced)?;
            let mut cfg = SimConfig::new(t_end)
                .with_dt(dt)
                .with_replicates(replicates)
                .with_seed(seed);
            cfg.output_every = output_every;
            if mode == "ode" && replicates > 1 {
                diag.warning("--replicates is ignored in ode mode");
            }
            let runs = sim.run(&m, &cfg).map_err(|e| sim_failure(e, diag))?;
            write_runs(&runs, &mode, output.as_deref(), out)?;
            Ok(EXIT_OK)
        }
    }
}

fn sim_failure(e: SimError, diag: &mut Diagnostics<'_>) -> Failure {
    let code = match &e {
        SimError::ValidationFailed(issues) => {
            issues.iter().for_each(|i| diag.issue(i));
            EXIT_FINDINGS
        }
        SimError::NumericalBlowup { .. } => EXIT_NUMERICAL,
        SimError::NonIntegerInitialAmount { .. } => EXIT_FINDINGS,
        SimError::Io { .. } => EXIT_IO,
        SimError::InvalidConfig(_) | SimError::UnresolvedSymbol(_) => EXIT_INPUT,
    };
    Failure::new(code, e.to_string())
}

fn csv(traj: &Trajectory) -> String {
    let mut buf = Vec::new();
    write_trajectory_csv(traj, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("CSV is ASCII")
}

/// ODE writes `<prefix>.csv`; SSA writes `<prefix>_r<k>.csv` per replicate
/// and `<prefix>_mean.csv` when there is more than one.
fn write_runs(runs: &[Trajectory], mode: &str, prefix: Option<&Path>, out: &mut dyn Write) -> Result<(), Failure> {
    let mean = (runs.len() > 1).then(|| mean_trajectory(runs).expect("at least one run"));
    let Some(prefix) = prefix else {
        return emit(out, None, &csv(mean.as_ref().unwrap_or(&runs[0])));
    };
    let with_suffix = |suffix: &str| {
        let mut s = prefix.as_os_str().to_owned();
        s.push(suffix);
        PathBuf::from(s)
    };
    if mode == "ode" {
        return emit(out, Some(&with_suffix(".csv")), &csv(&runs[0]));
    }
    for (k, run) in runs.iter().enumerate() {
        emit(out, Some(&with_suffix(&format!("_r{k}.csv"))), &csv(run))?;
    }
    if let Some(mean) = mean {
        emit(out, Some(&with_suffix("_mean.csv")), &csv(&mean))?;
    }
    Ok(())
}
