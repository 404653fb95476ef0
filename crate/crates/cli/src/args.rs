use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "diskweyl",
    version,
    about = "Dirichlet spectrum of the unit disk versus a cusp lattice count"
)]
pub struct Cli {
    /// Worker threads for parallel stages (defaults to all cores).
    #[arg(long, global = true, env = "DISKWEYL_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bessel zeros x_k(n) <= mu as CSV.
    Zeros(ZerosArgs),
    /// N_disk, N_D and the two-term remainder at one cutoff, as JSON.
    Count(CountArgs),
    /// Count comparison over an evenly spaced grid, as CSV.
    Scan(ScanArgs),
    /// Block-maxima power-law fit of a scan column, as JSON.
    Fit(FitArgs),
    /// Invariant suites; exits 1 if any check fails.
    Verify(VerifyArgs),
    /// Mollified sandwich around the weighted cusp count, as JSON.
    Mollify(MollifyArgs),
}

#[derive(Debug, Args)]
pub struct ZerosArgs {
    /// Cutoff on x.
    #[arg(long)]
    pub mu: f64,
    /// Highest order; every order with a zero below the cutoff by default.
    #[arg(long)]
    pub n_max: Option<u32>,
    /// Output file (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long)]
    pub mu: f64,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub mu_min: f64,
    #[arg(long)]
    pub mu_max: f64,
    #[arg(long)]
    pub step: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Column {
    Remainder,
    Diff,
}

impl Column {
    pub fn header(self) -> &'static str {
        match self {
            Column::Remainder => "remainder",
            Column::Diff => "diff",
        }
    }
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// CSV with a `mu` column and the fitted column (a scan output works as is).
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = diskweyl_core::asymptotics::DEFAULT_BLOCK_SIZE)]
    pub block: usize,
    #[arg(long, value_enum, default_value_t = Column::Remainder)]
    pub column: Column,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SuiteArg {
    Special,
    Geometry,
    Lattice,
    Sandwich,
    Appendix,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suites to run (repeatable); all of them when omitted.
    #[arg(long, value_enum)]
    pub suite: Vec<SuiteArg>,
    /// Dilations for the lattice and sandwich suites (repeatable).
    #[arg(long)]
    pub mu: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random draws per randomized check.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Absolute tolerance of the quadrature oracle for J_n.
    #[arg(long)]
    pub oracle_abs_tol: Option<f64>,
    /// Relative tolerance of the quadrature oracle for J_n.
    #[arg(long)]
    pub oracle_rel_tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MollifyArgs {
    #[arg(long)]
    pub mu: f64,
    /// Collar width is `eps_scale * mu^(-eps_exp)`.
    #[arg(long, default_value_t = 1.0 / 3.0)]
    pub eps_exp: f64,
    #[arg(long, default_value_t = 1.0)]
    pub eps_scale: f64,
    /// Midpoint cells per collar width in the convolution stencil.
    #[arg(long, default_value_t = 64)]
    pub cells: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
