use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "analogy",
    version,
    about = "Analogical-proportion reasoning over nominal tables"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Worker threads (defaults to the number of cores). Output does not
    /// depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check or solve analogical proportions.
    Ap(ApArgs),
    /// Cross-validate or train/test a classifier.
    Evaluate(EvaluateArgs),
    /// Contrastive explanation of one row's result.
    Explain(ExplainArgs),
    /// Functional and multivalued dependency analysis.
    Deps(DepsArgs),
    /// Write a synthetic dataset or relation as CSV to stdout.
    Generate(GenerateArgs),
}

#[derive(Debug, Args)]
pub struct ApArgs {
    #[command(subcommand)]
    pub op: ApOp,
}

#[derive(Debug, Subcommand)]
pub enum ApOp {
    /// Does a : b :: c : d hold? Values may be comma-separated tuples.
    Check {
        #[arg(num_args = 4, required = true)]
        values: Vec<String>,
        /// Check inverse paralogy instead (Boolean values 0/1 only).
        #[arg(long)]
        ip: bool,
        /// Closed domain the values must belong to, comma-separated.
        #[arg(long, value_delimiter = ',')]
        domain: Option<Vec<String>>,
    },
    /// Solve a : b :: c : x.
    Solve {
        #[arg(num_args = 3, required = true)]
        values: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        domain: Option<Vec<String>>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Delimiter {
    Comma,
    Tab,
    Semicolon,
}

impl Delimiter {
    pub fn byte(self) -> u8 {
        match self {
            Delimiter::Comma => b',',
            Delimiter::Tab => b'\t',
            Delimiter::Semicolon => b';',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Missing {
    Reject,
    Drop,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Delimited file with a header row.
    #[arg(long)]
    pub data: PathBuf,
    /// Class (result) column; defaults to the last column.
    #[arg(long)]
    pub class_column: Option<String>,
    /// JSON sidecar declaring per-attribute domains.
    #[arg(long)]
    pub schema: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Delimiter::Comma)]
    pub delimiter: Delimiter,
    /// Missing-value policy (`?` or empty cells).
    #[arg(long, value_enum, default_value_t = Missing::Reject)]
    pub missing: Missing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyName {
    Baseline,
    Selected,
    Bongard,
    Knn,
    Constant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Profile {
    /// Selected triplets, radius 2, half the training fold mined, 10 folds.
    Table2,
    /// Grid over k = 1,3,5,7,9,11 with 10 folds (bongard or knn).
    Table3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FallbackName {
    None,
    Knn1,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, value_enum)]
    pub strategy: Option<StrategyName>,
    #[arg(long, value_enum)]
    pub profile: Option<Profile>,
    /// Hamming radius around the query (selected).
    #[arg(long)]
    pub radius: Option<usize>,
    #[arg(long)]
    pub min_support: Option<u64>,
    #[arg(long)]
    pub min_confidence: Option<f64>,
    /// Fraction of each training fold used for pair mining (selected).
    #[arg(long)]
    pub subsample: Option<f64>,
    /// Voting neighbors (bongard).
    #[arg(long)]
    pub neighbor_budget: Option<usize>,
    #[arg(long)]
    pub max_literals: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Grid of k values, comma-separated (bongard budget or knn k).
    #[arg(long, value_delimiter = ',')]
    pub k_grid: Option<Vec<usize>>,
    #[arg(long)]
    pub folds: Option<usize>,
    /// Seed for fold assignment and pair-mining subsamples.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub fallback: Option<FallbackName>,
    /// Held-out file scored against a model trained on --data, instead of
    /// cross-validation.
    #[arg(long)]
    pub test: Option<PathBuf>,
    /// Show wall time in human output.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Args)]
pub struct ExplainArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Row to explain, counting data rows from 0.
    #[arg(long, conflicts_with = "query")]
    pub row: Option<usize>,
    /// Item to explain, as comma-separated attribute symbols.
    #[arg(long, requires = "result")]
    pub query: Option<String>,
    /// Result of --query.
    #[arg(long)]
    pub result: Option<String>,
    /// Ask "why not <target>" instead of "why".
    #[arg(long)]
    pub target: Option<String>,
    /// Ignore adverse examples differing on more attributes.
    #[arg(long)]
    pub max_change: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DepsMode {
    /// Every disjoint (X, Y) pair; at most 6 attributes.
    Exhaustive,
    /// One (X, Y) pair given by --x and --y.
    Single,
}

#[derive(Debug, Args)]
pub struct DepsArgs {
    /// Delimited file with a header row; every column is an attribute.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub schema: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Delimiter::Comma)]
    pub delimiter: Delimiter,
    #[arg(long, value_enum, default_value_t = DepsMode::Exhaustive)]
    pub mode: DepsMode,
    /// Attribute names, comma-separated (may be empty).
    #[arg(long, value_delimiter = ',')]
    pub x: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    pub y: Option<Vec<String>>,
    /// Cap on listed AP witnesses.
    #[arg(long, default_value_t = 5)]
    pub max_witnesses: usize,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(subcommand)]
    pub kind: GenerateKind,
}

#[derive(Debug, Subcommand)]
pub enum GenerateKind {
    /// Full truth table of c0 xor c1.x1 xor ... xor cn.xn.
    Affine {
        #[arg(long)]
        n: usize,
        /// c0..cn as 0/1, comma-separated; drawn from --seed when absent.
        #[arg(long, value_delimiter = ',')]
        coefficients: Option<Vec<u8>>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Dataset with planted change rules, from a JSON spec file.
    Planted {
        #[arg(long)]
        config: PathBuf,
        /// Also write the ground truth as JSON here.
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Distinct random tuples over a uniform domain.
    RandomRelation {
        #[arg(long)]
        arity: usize,
        #[arg(long, default_value_t = 2)]
        domain_size: usize,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Full instance space of a MONK's problem.
    Monk {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        problem: u8,
    },
}
