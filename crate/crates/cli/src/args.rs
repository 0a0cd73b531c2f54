//! Command-line arguments.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "optcode",
    version,
    about = "Optimal-distance convolutional codes from superregular matrices"
)]
pub struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized commands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Maximum number of determinant or codeword evaluations.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Worker threads for parallel work (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Finite field operations.
    #[command(subcommand)]
    Field(FieldCommand),
    /// Matrix checks.
    #[command(subcommand)]
    Matrix(MatrixCommand),
    /// Zero-pattern checks.
    #[command(subcommand)]
    Pattern(PatternCommand),
    /// Convolutional code construction and analysis.
    #[command(subcommand)]
    Code(CodeCommand),
}

#[derive(Debug, Subcommand)]
pub enum FieldCommand {
    /// Describe GF(p^N): modulus, order and primitive element.
    Info(FieldArgs),
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    /// Characteristic.
    #[arg(long)]
    pub p: u64,
    /// Extension degree N.
    #[arg(long, alias = "N")]
    pub degree: usize,
    /// Modulus coefficients c0,...,cN (monic, c0 first).
    #[arg(long, value_delimiter = ',')]
    pub modulus: Option<Vec<u64>>,
}

#[derive(Debug, Subcommand)]
pub enum MatrixCommand {
    /// Check every nontrivial minor of a matrix document for a nonzero
    /// determinant. Exit 0 if superregular, 1 with a witness otherwise.
    CheckSuperregular {
        /// Matrix document, or `-` for standard input.
        file: PathBuf,
        /// Split the work across threads. The verdict is unchanged; the
        /// witness may differ.
        #[arg(long)]
        parallel: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum PatternCommand {
    /// Decide whether a minor of a zero pattern is trivial. Exit 0 if
    /// trivial, 1 if not.
    Triviality {
        /// Pattern document, or `-` for standard input.
        file: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct SpecArgs {
    /// Code length.
    #[arg(long)]
    pub n: usize,
    /// Message length.
    #[arg(long)]
    pub k: usize,
    /// Distinct Forney indices, increasing.
    #[arg(long, value_delimiter = ',', required = true)]
    pub indices: Vec<usize>,
    /// Multiplicity of each index.
    #[arg(long, value_delimiter = ',', required = true)]
    pub mults: Vec<usize>,
}

#[derive(Debug, Subcommand)]
pub enum CodeCommand {
    /// Degree, distance bounds and ε₀ for a Forney profile.
    Bounds(SpecArgs),
    /// Build the optimal generator and certify its distance. Exit 0 if
    /// certified, 1 if not.
    Build {
        #[command(flatten)]
        spec: SpecArgs,
        /// `auto` picks the smallest verifiable GF(2^N) meeting the
        /// degree bound.
        #[arg(long, conflicts_with_all = ["p", "degree"])]
        field: Option<String>,
        /// Characteristic of an explicit field.
        #[arg(long, requires = "degree")]
        p: Option<u64>,
        /// Degree of an explicit field.
        #[arg(long, alias = "N", requires = "p")]
        degree: Option<usize>,
        /// Largest degree tried by `--field auto`.
        #[arg(long, default_value_t = optcode::construct::DEFAULT_MAX_AUTO_DEGREE)]
        max_degree: usize,
        /// Write the generator document here.
        #[arg(long)]
        out_generator: Option<PathBuf>,
        /// Write the certificate here.
        #[arg(long)]
        out_certificate: Option<PathBuf>,
    },
    /// Smallest codeword weight over messages of degree at most E.
    Distance {
        /// Generator document, or `-` for standard input.
        file: PathBuf,
        /// Largest message degree E.
        #[arg(long)]
        max_degree: usize,
    },
    /// Search small fields for a generator with the optimal supports whose
    /// sliding matrix is superregular. Exit 0 if found, 1 if not.
    SearchField {
        #[command(flatten)]
        spec: SpecArgs,
        /// Search only this characteristic.
        #[arg(long, requires = "degree")]
        p: Option<u64>,
        /// Search only this degree.
        #[arg(long, alias = "N", requires = "p")]
        degree: Option<usize>,
        /// Largest field size tried when no field is given.
        #[arg(long, default_value_t = 1024)]
        max_q: u64,
        /// Random trials per field.
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        /// Write the generator document of the hit here.
        #[arg(long)]
        out_generator: Option<PathBuf>,
    },
}
