//! Command-line arguments and the job they describe.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;

use movcat_core::SignPolicy;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Decide movability to infinity over the integers (or the rationals with --mode rat).
    Movable,
    /// Decide movability over the rationals.
    FieldMovable,
    /// Evaluate the pairing obstruction at a monodromy point.
    Pairing,
    /// Diagonalize the complex over the Novikov ring up to the cutoff.
    NovikovDiag,
    /// Build the truncated infinite chain bounding a movable cycle.
    Chain,
    /// Propagate category weights for the queries in a fact file.
    Weights,
    /// Lower bounds on cat from the pairings in a fact file.
    Catbound,
    /// cat^1, ccat^1 and cat(M, xi) for products of surfaces.
    Surfaces,
    /// Emit the built-in fixture corpus.
    Fixtures,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Movable => "movable",
            Command::FieldMovable => "field-movable",
            Command::Pairing => "pairing",
            Command::NovikovDiag => "novikov-diag",
            Command::Chain => "chain",
            Command::Weights => "weights",
            Command::Catbound => "catbound",
            Command::Surfaces => "surfaces",
            Command::Fixtures => "fixtures",
        }
    }

    /// Whether the inputs are fact bases rather than presentations.
    pub fn reads_facts(&self) -> bool {
        matches!(self, Command::Weights | Command::Catbound)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Int,
    Rat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Policy {
    StrictPlusOne,
    PlusMinusOne,
}

impl From<Policy> for SignPolicy {
    fn from(p: Policy) -> Self {
        match p {
            Policy::StrictPlusOne => SignPolicy::StrictPlusOne,
            Policy::PlusMinusOne => SignPolicy::PlusMinusOne,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "movcat",
    version,
    about = "Movability to infinity and closed one-form category bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Input file: a presentation, or a fact base for weights and catbound.
    #[arg(long, global = true)]
    pub input: Vec<PathBuf>,

    /// Built-in fixture to use instead of an input file.
    #[arg(long, global = true)]
    pub fixture: Vec<String>,

    /// Override the xi rows, e.g. "-1" or "1 0; 0 1".
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub xi: Option<String>,

    #[arg(long, global = true, value_enum, default_value = "int")]
    pub mode: Mode,

    /// Truncation level for Novikov series and infinite chains.
    #[arg(long, global = true, default_value = "10")]
    pub cutoff: String,

    /// Exponent box radius for the certificate search in rank >= 2.
    #[arg(
        long = "box",
        global = true,
        default_value_t = 2,
        allow_hyphen_values = true
    )]
    pub search_box: i64,

    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,

    #[arg(long, global = true, value_enum, default_value = "strict-plus-one")]
    pub sign_policy: Policy,

    /// Re-check every certificate from the emitted report and the inputs.
    #[arg(long, global = true)]
    pub verify: bool,

    /// Surface pattern such as "2:nz,3:z,2:nz".
    #[arg(long, global = true)]
    pub pattern: Vec<String>,

    /// Run every pattern with up to this many factors of genus 2 or 3.
    #[arg(long, global = true)]
    pub all_up_to: Option<usize>,

    /// Monodromy point: "generic" or comma-separated rationals.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub monodromy: Vec<String>,

    /// Extra class expression to propagate weights for.
    #[arg(long, global = true)]
    pub expr: Vec<String>,

    /// Directory for the fixtures command; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputRef {
    File(PathBuf),
    Fixture(String),
}

/// A validated job.
#[derive(Clone, Debug)]
pub struct JobSpec {
    pub command: Command,
    pub inputs: Vec<InputRef>,
    pub mode: Mode,
    pub xi: Option<String>,
    pub cutoff: BigRational,
    pub search_box: i64,
    pub format: Format,
    pub sign_policy: SignPolicy,
    pub verify: bool,
    pub patterns: Vec<String>,
    pub all_up_to: Option<usize>,
    pub monodromy: Vec<String>,
    pub exprs: Vec<String>,
    pub out: Option<PathBuf>,
}

impl JobSpec {
    pub fn new(command: Command) -> Self {
        JobSpec {
            command,
            inputs: vec![],
            mode: Mode::Int,
            xi: None,
            cutoff: BigRational::from_integer(10.into()),
            search_box: 2,
            format: Format::Text,
            sign_policy: SignPolicy::StrictPlusOne,
            verify: false,
            patterns: vec![],
            all_up_to: None,
            monodromy: vec![],
            exprs: vec![],
            out: None,
        }
    }

    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let cutoff: BigRational = cli.cutoff.trim().parse().map_err(|_| {
            CliError::Input(format!("--cutoff: not a rational number: {:?}", cli.cutoff))
        })?;
        let mut inputs: Vec<InputRef> = cli.input.into_iter().map(InputRef::File).collect();
        inputs.extend(cli.fixture.into_iter().map(InputRef::Fixture));
        let job = JobSpec {
            command: cli.command,
            inputs,
            mode: cli.mode,
            xi: cli.xi,
            cutoff,
            search_box: cli.search_box,
            format: cli.format,
            sign_policy: cli.sign_policy.into(),
            verify: cli.verify,
            patterns: cli.pattern,
            all_up_to: cli.all_up_to,
            monodromy: cli.monodromy,
            exprs: cli.expr,
            out: cli.out,
        };
        job.validate()?;
        Ok(job)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.cutoff <= BigRational::from_integer(0.into()) {
            return Err(CliError::Input("--cutoff must be positive".into()));
        }
        if self.search_box < 0 {
            return Err(CliError::Input("--box must be nonnegative".into()));
        }
        let needs_input = !matches!(self.command, Command::Surfaces | Command::Fixtures);
        if needs_input && self.inputs.is_empty() {
            return Err(CliError::Input(format!(
                "{} needs --input or --fixture",
                self.command.name()
            )));
        }
        if self.command == Command::Surfaces && self.patterns.is_empty() && self.all_up_to.is_none()
        {
            return Err(CliError::Input(
                "surfaces needs --pattern or --all-up-to".into(),
            ));
        }
        Ok(())
    }

    /// The options that determine the output, for the report header.
    pub fn options(&self) -> serde_json::Value {
        let policy = match self.sign_policy {
            SignPolicy::StrictPlusOne => "strict-plus-one",
            SignPolicy::PlusMinusOne => "plus-minus-one",
        };
        serde_json::json!({
            "mode": self.mode,
            "xi": self.xi,
            "cutoff": self.cutoff.to_string(),
            "box": self.search_box,
            "sign_policy": policy,
            "patterns": self.patterns,
            "all_up_to": self.all_up_to,
            "monodromy": self.monodromy,
            "exprs": self.exprs,
        })
    }
}
