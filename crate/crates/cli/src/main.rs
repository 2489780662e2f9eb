//! `drg`: analyse distance-regular graphs from the command line.

mod render;
mod target;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use drg_core::analysis::{analyze, Section, Settings};
use drg_core::catalogue::{run_catalogue, verify, Check, Status, Subject, Suite};
use drg_core::error::AnalysisError;
use drg_core::graph6::to_graph6;
use drg_core::qpoly::{Mode, BALANCED_SET_THRESHOLD, DEFAULT_SAMPLES};
use drg_core::Error;

#[derive(Debug, Parser)]
#[command(name = "drg", version, about = "Distance-regular graph analysis")]
struct Cli {
    /// Cap on worker threads.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    /// Log progress to stderr (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the full pipeline on a family spec or graph6 file.
    Analyze {
        target: String,
        #[command(flatten)]
        common: Common,
        /// Exit with status 3 when the graph is not distance-regular.
        #[arg(long)]
        require_drg: bool,
        /// Compute and emit a single section.
        #[arg(long, value_name = "SECTION")]
        only: Option<Section>,
    },
    /// Run one verification suite: thm1, ck, census or qpoly-consistency.
    Verify {
        suite: Suite,
        target: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run every check over the built-in catalogue.
    Catalogue {
        #[command(flatten)]
        common: Common,
        /// Run a single named check.
        #[arg(long, value_name = "CHECK")]
        only: Option<Check>,
    },
    /// Print a target as graph6.
    Export {
        target: String,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Prefix the `>>graph6<<` header.
        #[arg(long)]
        header: bool,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Emit JSON (the default).
    #[arg(long, conflicts_with = "pretty")]
    json: bool,
    /// Emit a human-readable table instead of JSON.
    #[arg(long)]
    pretty: bool,
    /// Write output to PATH instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Relative residual threshold for balanced-set instances.
    #[arg(long, value_name = "X", default_value_t = BALANCED_SET_THRESHOLD)]
    tolerance: f64,
    /// Balanced-set sweep mode; defaults to full up to 200 vertices.
    #[arg(long)]
    mode: Option<Mode>,
    /// Seed for sampled mode.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Instances drawn in sampled mode.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
}

impl Common {
    fn settings(&self) -> Result<Settings, Failure> {
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Failure::usage(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if self.samples == 0 {
            return Err(Failure::usage("samples must be positive"));
        }
        Ok(Settings {
            threshold: self.tolerance,
            mode: self.mode,
            seed: self.seed,
            samples: self.samples,
            ..Settings::default()
        })
    }

    fn emit(&self, json: impl FnOnce() -> String, pretty: impl FnOnce() -> String) -> Result<(), Failure> {
        let text = if self.pretty {
            pretty()
        } else {
            let mut j = json();
            j.push('\n');
            j
        };
        write_output(self.out.as_ref(), &text)
    }
}

fn write_output(out: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Exit statuses.
mod code {
    pub const USAGE: u8 = 2;
    pub const NOT_DRG: u8 = 3;
    pub const NUMERICAL: u8 = 4;
    pub const ASSERTION: u8 = 5;
}

#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: code::USAGE,
            message: message.into(),
        }
    }

    fn assertion(message: impl Into<String>) -> Self {
        Self {
            code: code::ASSERTION,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::NotDistanceRegular(_) => code::NOT_DRG,
            Error::Spectral(_) | Error::QPoly(_) => code::NUMERICAL,
            Error::Analysis(
                AnalysisError::CensusMismatch(_)
                | AnalysisError::NoSignChange(_)
                | AnalysisError::MultipleSignChanges(_)
                | AnalysisError::NonPositiveStart(_),
            ) => code::ASSERTION,
            _ => code::USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn json<T: serde::Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string(value).expect("reports serialize")
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(Failure::usage("--jobs must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Failure::usage(e.to_string()))?;
    }
    match cli.command {
        Command::Analyze {
            target,
            common,
            require_drg,
            only,
        } => {
            let settings = Settings {
                only,
                ..common.settings()?
            };
            let (source, graph) = target::load(&target)?;
            let report = analyze(&source, graph, &settings)?;
            if require_drg && !report.is_distance_regular() {
                let witness = report
                    .sections
                    .intersection
                    .as_ref()
                    .and_then(|i| i.witness.as_ref())
                    .map_or_else(String::new, |w| format!(": {w}"));
                return Err(Failure {
                    code: code::NOT_DRG,
                    message: format!("{target} is not distance-regular{witness}"),
                });
            }
            common.emit(|| json(&report), || render::report(&report))?;
            let alarms = report.alarms();
            if !alarms.is_empty() {
                return Err(Failure::assertion(alarms.join("; ")));
            }
            Ok(())
        }
        Command::Verify {
            suite,
            target,
            common,
        } => {
            let settings = common.settings()?;
            let (source, graph) = target::load(&target)?;
            let mut subject = Subject::new(source, graph, &settings)?;
            let outcome = verify(suite, &mut subject)?;
            common.emit(
                || {
                    json(&serde_json::json!({
                        "suite": suite.name(),
                        "target": target,
                        "status": outcome.status,
                        "residual": outcome.residual,
                        "detail": outcome.detail,
                    }))
                },
                || render::outcome(suite.name(), &target, &outcome),
            )?;
            match outcome.status {
                Status::Fail => Err(Failure::assertion(format!(
                    "{} failed on {target}: {}",
                    suite.name(),
                    outcome.detail
                ))),
                _ => Ok(()),
            }
        }
        Command::Catalogue { common, only } => {
            let settings = common.settings()?;
            let rows = run_catalogue(&settings, only)?;
            common.emit(|| json(&rows), || render::table(&rows))?;
            let failed: Vec<String> = rows
                .iter()
                .filter(|r| r.outcome.status == Status::Fail)
                .map(|r| format!("{}/{}", r.graph, r.check))
                .collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Failure::assertion(format!("failed: {}", failed.join(", "))))
            }
        }
        Command::Export { target, out, header } => {
            let (_, graph) = target::load(&target)?;
            let encoded = to_graph6(&graph).map_err(|e| Failure::usage(e.to_string()))?;
            let prefix = if header { drg_core::graph6::HEADER } else { "" };
            write_output(out.as_ref(), &format!("{prefix}{encoded}\n"))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("drg: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
