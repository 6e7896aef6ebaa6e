mod commands;
mod inputs;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "gcrossed", version, about = "Strict G-crossed Frobenius star-algebras")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Check every axiom of an algebra file.
    Verify(Common),
    /// Build the extension of a base by a cocycle and write it as an algebra file.
    Construct(Common),
    /// Evaluate the twisted Verlinde formula and its oracle on an instance.
    Verlinde(Common),
    /// Fusion coefficients of a basis (the normalized E-basis by default).
    Fuse(Common),
    /// Cocycle checks, or a cohomology comparison when two cocycles are given.
    Cohomology(Common),
    /// Extract the cocycle of an algebra, optionally comparing with a reference cocycle.
    Classify(Common),
    /// Crossed S-matrices, their unitarity, and categorical Verlinde queries.
    Smatrix(Common),
}

/// Inputs are file paths, or built-in names when no such file exists.
#[derive(Args, Clone, Debug)]
pub struct Common {
    /// Group file or name (z<n>, klein4, s3, d4, q8, z2xz4, z2^3, z2xq8).
    #[arg(long)]
    pub group: Option<String>,
    /// Base file or name (c1, toric, fib, z<m>ring).
    #[arg(long)]
    pub base: Option<String>,
    /// Action file or name (trivial, swap).
    #[arg(long)]
    pub action: Option<String>,
    /// Cocycle file or name (trivial, twist); give twice to compare two cocycles.
    #[arg(long)]
    pub cocycle: Vec<String>,
    #[arg(long)]
    pub algebra: Option<PathBuf>,
    /// Instance file or name (abab for verlinde, toric for smatrix).
    #[arg(long)]
    pub instance: Option<String>,
    /// Machine-readable result file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// A failure with its exit code: 1 for domain errors, 2 for malformed input.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn domain(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }

    pub fn input(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<gcrossed::Error> for Failure {
    fn from(e: gcrossed::Error) -> Self {
        let code = if e.is_malformed_input() { 2 } else { 1 };
        Self { code, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match &cli.verb {
        Verb::Verify(c) => commands::verify(c),
        Verb::Construct(c) => commands::construct(c),
        Verb::Verlinde(c) => commands::verlinde(c),
        Verb::Fuse(c) => commands::fuse(c),
        Verb::Cohomology(c) => commands::cohomology(c),
        Verb::Classify(c) => commands::classify(c),
        Verb::Smatrix(c) => commands::smatrix(c),
    };
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
