//! Command-line front end for `polyvol`.
//!
//! Every subcommand produces a [`Report`], rendered either as text or as
//! JSON. Reports depend only on the input and the flags, never on timing or
//! thread count, so two runs with the same arguments are byte-identical.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

mod commands;
pub mod input;
pub mod report;

pub use report::{Header, Report};

#[derive(Debug, Parser)]
#[command(name = "polyvol", version, about = "Exact volume forms and intersection homology of convex polytopes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// f-vector, simplicity, vertices and face lattice.
    Info(Options),
    /// Volume polynomial of each resolution chamber.
    VolumePoly(Options),
    /// Enumerate simple resolutions and where they differ.
    Resolutions(Options),
    /// Homology of a simple polytope from its volume form.
    Betti(Options),
    /// Intersection homology from uniform expressions.
    IhBetti(Options),
    /// Bases of the uniform spaces U^i.
    Uniform(Options),
    /// Compact local-global cycles and their relations.
    LocalGlobal(Options),
    /// Combinatorial predictions: h-vectors and Fibonacci counts.
    Oracle(Options),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Info(_) => "info",
            Command::VolumePoly(_) => "volume-poly",
            Command::Resolutions(_) => "resolutions",
            Command::Betti(_) => "betti",
            Command::IhBetti(_) => "ih-betti",
            Command::Uniform(_) => "uniform",
            Command::LocalGlobal(_) => "local-global",
            Command::Oracle(_) => "oracle",
        }
    }

    pub fn options(&self) -> &Options {
        match self {
            Command::Info(o)
            | Command::VolumePoly(o)
            | Command::Resolutions(o)
            | Command::Betti(o)
            | Command::IhBetti(o)
            | Command::Uniform(o)
            | Command::LocalGlobal(o)
            | Command::Oracle(o) => o,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Polytope as JSON.
    #[arg(value_name = "FILE", required_unless_present = "builtin", conflicts_with = "builtin")]
    pub path: Option<PathBuf>,
    /// Builtin polytope, e.g. pyr-square, octahedron, cube(3), prism(simplex(2)).
    #[arg(long)]
    pub builtin: Option<String>,
    #[arg(long, default_value_t = 20240613)]
    pub seed: u64,
    /// Random displacements tried in addition to facet orderings.
    #[arg(long, default_value_t = 256)]
    pub sample_count: usize,
    /// Above this many orderings, a seeded subset is used.
    #[arg(long, default_value_t = 5040)]
    pub max_orderings: usize,
    /// Sampled resolutions kept aside to test uniformity.
    #[arg(long, default_value_t = 24)]
    pub holdout: usize,
    #[arg(long)]
    pub holdout_seed: Option<u64>,
    /// Facet names whose product is normalized to one, e.g. N,E,B.
    #[arg(long, value_delimiter = ',')]
    pub calibrate: Option<Vec<String>>,
    /// Restrict listings to one degree.
    #[arg(long)]
    pub degree: Option<usize>,
    /// Expression to evaluate or test, e.g. "E*W - N*S".
    #[arg(long)]
    pub expr: Option<String>,
    /// Print the structured report.
    #[arg(long)]
    pub json: bool,
}

impl Options {
    /// Defaults with a builtin input.
    pub fn builtin(name: &str) -> Self {
        let cli = Cli::try_parse_from(["polyvol", "info", "--builtin", name]).expect("valid default arguments");
        cli.command.options().clone()
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("invalid polytope JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] polyvol::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 3 for size guards, 2 for every other input problem.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(polyvol::Error::GuardExceeded(_) | polyvol::Error::DimensionTooLarge { .. }) => 3,
            _ => 2,
        }
    }
}

/// A finished run. `code` is 1 when the computation disagrees with the
/// combinatorial prediction, 0 otherwise.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub code: i32,
}

impl Outcome {
    pub fn render(&self, json: bool) -> String {
        if json {
            self.report.to_json()
        } else {
            self.report.to_text()
        }
    }
}

pub fn run(command: &Command) -> Result<Outcome, CliError> {
    let report = commands::run(command)?;
    let code = if report.findings.is_empty() { 0 } else { 1 };
    Ok(Outcome { report, code })
}

/// Parses `args` (without the program name), runs, and returns the exit
/// code with the rendered output or error message.
pub fn run_args<I, S>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = std::iter::once("polyvol".to_string()).chain(args.into_iter().map(Into::into)).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.to_string());
        }
    };
    match run(&cli.command) {
        Ok(out) => (out.code, out.render(cli.command.options().json)),
        Err(e) => (e.exit_code(), format!("error: {e}\n")),
    }
}
