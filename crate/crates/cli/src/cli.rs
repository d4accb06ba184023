use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "relop", version, about = "Functions of Hermitian matrices under relatively bounded perturbations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the seeded instance (A.json, K.json, R.json) into a directory.
    Gen(GenArgs),
    /// Double operator integral of a symbol in the eigenbases of B and A.
    Doi(DoiArgs),
    /// f(A + K) − f(A) through the standard and relative representations.
    Diff(DiffArgs),
    /// Spectral shift function: counting oracle and ν-construction profile.
    Ssf(SsfArgs),
    /// trace(f(A + K) − f(A)) against ∫ f′ ξ.
    TraceCheck(TraceCheckArgs),
    /// Two-sided Schur multiplier norm bounds with a certificate.
    Multnorm(MultnormArgs),
    /// Commutator and quasi-commutator ratios, Cayley identity residual.
    Probe(ProbeArgs),
    /// Eigenvalue trajectories and weights along A + tK.
    Flow(FlowArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Gen(_) => "gen",
            Self::Doi(_) => "doi",
            Self::Diff(_) => "diff",
            Self::Ssf(_) => "ssf",
            Self::TraceCheck(_) => "trace-check",
            Self::Multnorm(_) => "multnorm",
            Self::Probe(_) => "probe",
            Self::Flow(_) => "flow",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Gaussian,
    Diagdom,
    Clustered,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output file (stdout when absent). Relative paths are placed under
    /// $RELOP_OUT_DIR when it is set.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// The operators A, K (B = A + K) and R. Anything not read from a file is
/// drawn from one seeded stream in the order A, K, R.
#[derive(Debug, Args)]
pub struct Instance {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Dimension of generated matrices.
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = FamilyArg::Gaussian)]
    pub family: FamilyArg,
    /// Scale of the generated perturbation K.
    #[arg(long, default_value_t = 0.5)]
    pub k_scale: f64,
    /// Hermitian matrix file for A.
    #[arg(long)]
    pub a: Option<PathBuf>,
    /// Hermitian matrix file for K.
    #[arg(long, conflicts_with = "b")]
    pub k: Option<PathBuf>,
    /// Hermitian matrix file for B; K is taken as B − A.
    #[arg(long)]
    pub b: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub instance: Instance,
    /// Target directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SymbolKind {
    /// 𝔇f
    Dd,
    /// 𝔇f·(y + i)
    DdI,
    /// 𝔇f·(y² + 1)^{1/2}
    DdIi,
    /// (x + i)(y + i)𝔇f
    Resolvent,
    /// The constant --value.
    Constant,
}

#[derive(Debug, Args)]
pub struct SymbolArgs {
    #[arg(long, value_enum, default_value_t = SymbolKind::Dd)]
    pub symbol: SymbolKind,
    #[arg(long, default_value = "resolvent:z=0+1i")]
    pub function: String,
    /// Complex value for the constant symbol, e.g. -1 or 0.5+2i.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub value: String,
}

#[derive(Debug, Args)]
pub struct DoiArgs {
    #[command(flatten)]
    pub instance: Instance,
    #[command(flatten)]
    pub symbol: SymbolArgs,
    /// General matrix file for the operator Q (default: K).
    #[arg(long)]
    pub q: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct DiffArgs {
    #[command(flatten)]
    pub instance: Instance,
    #[arg(long, default_value = "resolvent:z=0+1i")]
    pub function: String,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SsfArgs {
    #[command(flatten)]
    pub instance: Instance,
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    #[arg(long, default_value_t = 1000)]
    pub bins: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum XiSource {
    Oracle,
    Profile,
}

#[derive(Debug, Args)]
pub struct TraceCheckArgs {
    #[command(flatten)]
    pub instance: Instance,
    #[arg(long, default_value = "resolvent:z=0+1i")]
    pub function: String,
    #[arg(long, value_enum, default_value_t = XiSource::Oracle)]
    pub xi: XiSource,
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    #[arg(long, default_value_t = 1000)]
    pub bins: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MultSource {
    /// A symbol sampled on (spectrum of B) × (spectrum of A).
    Symbol,
    /// Upper-triangular all-ones pattern of size n.
    Triangular,
    /// Sylvester sign pattern of size n.
    Sign,
    /// Entries read from --matrix.
    File,
}

#[derive(Debug, Args)]
pub struct MultnormArgs {
    #[command(flatten)]
    pub instance: Instance,
    #[arg(long, value_enum, default_value_t = MultSource::Symbol)]
    pub source: MultSource,
    #[command(flatten)]
    pub symbol: SymbolArgs,
    /// General matrix file with the symbol samples (for --source file).
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 16)]
    pub probes: usize,
    #[arg(long, default_value_t = 50_000)]
    pub max_iter: usize,
    /// Include the factorization vectors in the report.
    #[arg(long)]
    pub certificate: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub instance: Instance,
    #[arg(long, default_value = "resolvent:z=0+1i")]
    pub function: String,
    /// General matrix file for R (default: generated).
    #[arg(long)]
    pub r: Option<PathBuf>,
    /// Also bound the ratios by the multiplier norm of 𝔇f·(y + i) on the
    /// matched spectra.
    #[arg(long)]
    pub bound: bool,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    #[command(flatten)]
    pub instance: Instance,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    #[command(flatten)]
    pub output: Output,
}
