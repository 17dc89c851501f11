use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "weylhull", version, about = "Absorption probabilities of random-walk convex hulls, exact and simulated")]
pub struct Cli {
    /// Worker thread cap; falls back to WEYLHULL_THREADS, then to all cores.
    #[arg(long, global = true, env = "WEYLHULL_THREADS")]
    pub threads: Option<usize>,

    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact absorb / non-absorb probabilities.
    Exact(ExactArgs),
    /// Coefficient rows of the generating polynomials.
    Coeffs(CoeffsArgs),
    /// Monte Carlo estimate of the absorption probability.
    Simulate(SimulateArgs),
    /// Hyperplane arrangement tools.
    #[command(subcommand)]
    Arrangement(ArrangementCommand),
    /// Conic intrinsic volumes and their checks.
    #[command(subcommand)]
    Cone(ConeCommand),
    /// Exact-versus-asymptotic tables.
    Asympt(AsymptArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    /// bridge-A, walk-B, walk-D, joint-B or wendel.
    #[arg(long)]
    pub family: String,
    /// Step count; a comma-separated list for joint-B, the number of walks for wendel.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub steps: Vec<usize>,
    #[arg(long)]
    pub dim: usize,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Double-precision evaluation instead of exact rationals (any n).
    #[arg(long)]
    pub float: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RowFamily {
    Stirling,
    B,
    D,
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    #[arg(long, value_enum)]
    pub family: RowFamily,
    #[arg(long)]
    pub n: usize,
    /// Keep only coefficients up to this degree.
    #[arg(long)]
    pub max_degree: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SeedArg {
    /// Integer seed (decimal or 0x hex), or `random` for fresh entropy.
    #[arg(long)]
    pub seed: Option<String>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// gaussian, uniform-sphere, heavy-tail, lattice-simple or matrix.
    #[arg(long, default_value = "gaussian")]
    pub model: String,
    /// Increment matrix for `--model matrix`: d rows, n columns.
    #[arg(long)]
    pub matrix_file: Option<PathBuf>,
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[command(flatten)]
    pub seed: SeedArg,
    /// Hull membership tolerance, relative to the largest point norm.
    #[arg(long, default_value_t = weylhull::hull::DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct ArrangementSource {
    /// Arrangement file: `dim n`, then one integer normal per line.
    #[arg(long, conflicts_with = "reflection")]
    pub file: Option<PathBuf>,
    /// Reflection arrangement instead of a file, e.g. `B3`.
    #[arg(long)]
    pub reflection: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum ArrangementCommand {
    /// Characteristic polynomial coefficients a_0..a_n.
    Charpoly(ArrangementSource),
    /// Region count by enumeration, next to the Zaslavsky count.
    Regions {
        #[command(flatten)]
        source: ArrangementSource,
        /// Also list the sign vectors.
        #[arg(long)]
        list: bool,
    },
    /// Regions met by a subspace, next to the generic prediction.
    Intersect {
        #[command(flatten)]
        source: ArrangementSource,
        /// Codimension of a random Gaussian subspace.
        #[arg(long, conflicts_with = "basis")]
        codim: Option<usize>,
        /// Explicit integer basis, rows separated by `;`, e.g. `1,0,0;0,1,1`.
        #[arg(long)]
        basis: Option<String>,
        #[arg(long, value_enum, default_value = "open")]
        mode: Mode,
        #[command(flatten)]
        seed: SeedArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Open,
    Closed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GroupType {
    A,
    B,
    D,
}

#[derive(Debug, Args)]
pub struct ChamberArgs {
    #[arg(long = "type", value_enum)]
    pub kind: GroupType,
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Subcommand)]
pub enum ConeCommand {
    /// Exact intrinsic volumes of a Weyl chamber or of a random polyhedral cone.
    Volumes {
        #[arg(long = "type", value_enum, required_unless_present = "halfspaces")]
        kind: Option<GroupType>,
        #[arg(long)]
        n: usize,
        /// Expected volumes of the cone cut by this many generic half-spaces.
        #[arg(long)]
        halfspaces: Option<usize>,
    },
    /// Sampled squared distances to a chamber against the Steiner law.
    Steiner {
        #[command(flatten)]
        chamber: ChamberArgs,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[command(flatten)]
        seed: SeedArg,
        /// Also evaluate the exact tail CDF at these points.
        #[arg(long, value_delimiter = ',')]
        lambda: Vec<f64>,
    },
    /// Crofton estimate of a half-tail functional from random subspaces.
    Crofton {
        #[command(flatten)]
        chamber: ChamberArgs,
        /// Codimension d; the estimate targets h_{d+1}.
        #[arg(long)]
        codim: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[command(flatten)]
        seed: SeedArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Regime {
    /// Fixed dimension, growing n.
    Fixed,
    /// Critical window d = u log n + a sqrt(u log n).
    Clt,
    /// d = u x log n away from the window.
    Ld,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Prefactor {
    Corrected,
    AsPrinted,
}

#[derive(Debug, Args)]
pub struct AsymptArgs {
    #[arg(long, value_enum)]
    pub regime: Regime,
    #[arg(long = "type", value_enum, default_value = "b")]
    pub kind: GroupType,
    /// Dimension for the fixed regime.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Window parameter for the clt regime.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub a: f64,
    /// Rate parameter for the ld regime.
    #[arg(long, default_value_t = 0.5)]
    pub x: f64,
    #[arg(long, value_delimiter = ',', default_value = "10,100,1000,10000")]
    pub ns: Vec<usize>,
    #[arg(long, value_enum, default_value = "corrected")]
    pub prefactor: Prefactor,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// combinatorics, arrangements, conic, simulation, asymptotics, acceptance or all.
    pub suite: String,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[command(flatten)]
    pub seed: SeedArg,
}
