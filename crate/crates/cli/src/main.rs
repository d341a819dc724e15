//! `fqmoments`: verification suites and moment scans over F_q[T].
//!
//! Exit status: 0 when every check passes, 1 on a verification failure,
//! 2 on a usage or configuration error.

mod args;
mod cmd;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use args::{CacheAction, Common, LemmaArgs, ReciprocityArgs, ScanArgs, TableArgs, VerifyArgs};

#[derive(Parser)]
#[command(
    name = "fqmoments",
    version,
    about = "Characters, L-functions and twisted second moments over F_q[T]"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact identities: φ* count, orthogonality, Möbius sums, 2^ω, main-term sums
    VerifyIdentities(VerifyArgs),
    /// Exact reciprocity formulas over irreducible moduli
    Reciprocity(ReciprocityArgs),
    /// Moment table for one twist H against the main-term prediction
    ScanOneTwist(ScanArgs),
    /// Moment table for two twists H, K against the main-term prediction
    ScanTwoTwist(ScanArgs),
    /// Characters and central L-values for one modulus
    CharTable(TableArgs),
    /// Main-term sums, off-diagonal bound ratios and the arithmetic ratio
    LemmaChecks(LemmaArgs),
    /// Inspect or clear the unit-group cache
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

/// Failure categories mapped to exit codes.
pub enum Failure {
    Usage(String),
    Verification,
}

impl From<fqmoments::Error> for Failure {
    fn from(e: fqmoments::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("output: {e}"))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let common = cli.common;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(common.workers.unwrap_or(0))
        .build()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    pool.install(|| match cli.command {
        Command::VerifyIdentities(a) => cmd::identities::run(&common, &a),
        Command::Reciprocity(a) => cmd::reciprocity::run(&common, &a),
        Command::ScanOneTwist(a) => cmd::scan::run(&common, &a, false),
        Command::ScanTwoTwist(a) => cmd::scan::run(&common, &a, true),
        Command::CharTable(a) => cmd::chartable::run(&common, &a),
        Command::LemmaChecks(a) => cmd::lemmas::run(&common, &a),
        Command::Cache { action } => cmd::cache::run(&common, &action),
    })
}

fn main() -> ExitCode {
    output::start_clock();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
