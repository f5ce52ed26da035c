//! `dfoperad`: load finite structures, run the bounded checkers and
//! constructions, and print deterministic verdicts.

mod doc;
mod emit;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dfoperad::fincat::DEFAULT_BUDGET;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("bad configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Core(String),
}

#[derive(Debug, Parser)]
#[command(name = "dfoperad", version, about = "Bounded-exhaustive checks for DF operads, multicategories and Mackey data")]
pub struct Cli {
    #[command(flatten)]
    pub options: Options,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Largest set in the site (default 4; a multicategory's arity bound
    /// when smaller, and exactly the arity bound for `roundtrip`).
    #[arg(long, global = true)]
    pub site_bound: Option<usize>,
    /// Arity bound for generated multicategories and for extraction.
    #[arg(long, global = true, default_value_t = 3)]
    pub arity_bound: usize,
    /// Candidate budget for isomorphism and universal-element searches.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for generated structures.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the produced document here instead of embedding it in the report.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print wall-clock time to stderr (never part of the report).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Fiberwise products of a category document.
    Cartesian,
    /// Fiberwise coproducts of a category document.
    Cocartesian,
    /// The DF operad of a monoid, multicategory or DF monoid document.
    Given,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Run the law checkers.
    Check {
        #[command(subcommand)]
        what: CheckCommand,
    },
    /// Build a DF operad (or the DF monoid of a monoid).
    Build {
        #[command(subcommand)]
        what: BuildCommand,
    },
    /// Extract a multicategory from a DF operad.
    Extract {
        #[command(subcommand)]
        what: ExtractCommand,
    },
    /// Round trip a multicategory or monoid through the DF side.
    Roundtrip { input: PathBuf },
    /// Write an explicit document for a stock structure.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        /// e.g. `cyclic:3`, `klein`, `or`, `endomorphism:2`, `chain:2`, `random`.
        name: String,
    },
}

#[derive(Debug, Clone, Subcommand)]
pub enum CheckCommand {
    /// Commutative monoid laws and its Mackey data, or a DF monoid document.
    Monoid { input: PathBuf },
    /// Symmetric multicategory laws up to the arity bound.
    Multicat { input: PathBuf },
    /// Lax double functor, pullback and product checks.
    Df {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Given)]
        mode: ModeArg,
    },
    /// Representability and Beck-Chevalley.
    Monoidal {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Given)]
        mode: ModeArg,
        /// Also check co-representability by reindexing.
        #[arg(long)]
        fibration: bool,
    },
    /// Co-representability of every proarrow by reindexing.
    Fibration {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Given)]
        mode: ModeArg,
    },
}

#[derive(Debug, Clone, Subcommand)]
pub enum BuildCommand {
    Df {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Given)]
        mode: ModeArg,
    },
}

#[derive(Debug, Clone, Subcommand)]
pub enum ExtractCommand {
    Multicat {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Given)]
        mode: ModeArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Monoid,
    Multicat,
    Category,
    DfMonoid,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let code = match run::run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    };
    if cli.options.timing {
        eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    }
    ExitCode::from(code)
}
