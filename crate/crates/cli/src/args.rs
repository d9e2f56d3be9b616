use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use robint::Method;

#[derive(Parser, Debug)]
#[command(
    name = "robint",
    version,
    about = "Robustness intervals for expectation values and ground-state energies"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Bound <H> or its ground energy from a state file.
    Bounds(BoundsArgs),
    /// Tabulate intervals over a grid of infidelities as CSV.
    Sweep(SweepArgs),
    /// Check the transcribed LiH tables for containment of the exact energy.
    CheckTables(CheckTablesArgs),
    /// Run a noisy VQE, write the optimized state and certify its energy.
    Simulate(SimulateArgs),
    /// Run the seeded oracle property suites.
    Verify(VerifyArgs),
}

#[derive(ValueEnum, Copy, Clone, Debug, PartialEq, Eq)]
pub enum MethodArg {
    Sdp,
    GramianExp,
    GramianEig,
    All,
}

impl MethodArg {
    pub fn methods(self) -> Vec<Method> {
        match self {
            MethodArg::Sdp => vec![Method::Sdp],
            MethodArg::GramianExp => vec![Method::GramianExpectation],
            MethodArg::GramianEig => vec![Method::GramianEigenvalue],
            MethodArg::All => Method::ALL.to_vec(),
        }
    }
}

#[derive(ValueEnum, Copy, Clone, Debug, PartialEq, Eq)]
pub enum FidelityArg {
    Eckart,
    Half,
    Gap,
    GapTight,
}

/// Where the fidelity budget comes from: `--eps` or a spectral bound.
#[derive(Args, Debug, Clone)]
pub struct BudgetArgs {
    /// Infidelity budget eps with F(rho, target) >= 1 - eps.
    #[arg(long, conflicts_with = "fidelity_from")]
    pub eps: Option<f64>,
    /// Derive eps from a ground-state fidelity bound on the energy statistics.
    #[arg(long, value_enum)]
    pub fidelity_from: Option<FidelityArg>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda1: Option<f64>,
    /// Lower bound on lambda1 - lambda0 (defaults to lambda1 - lambda0).
    #[arg(long)]
    pub gap: Option<f64>,
    /// The ground level is degenerate.
    #[arg(long)]
    pub degenerate_ground: bool,
    /// Assert that <H> is closer to lambda0 than to lambda1.
    #[arg(long)]
    pub closer_to_ground: bool,
}

/// Exact statistics by default; sampled ones with `--sample`.
#[derive(Args, Debug, Clone)]
pub struct SamplingArgs {
    /// Estimate moments from simulated shots instead of exact expectation values.
    #[arg(long)]
    pub sample: bool,
    #[arg(long, default_value_t = 8192)]
    pub shots: u64,
    #[arg(long, default_value_t = 20)]
    pub reps: usize,
    /// One-sided confidence level of each half-width.
    #[arg(long, default_value_t = 0.99)]
    pub confidence: f64,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    /// Pauli-sum Hamiltonian file, e.g. `-0.5 + 0.3 Z0 Z1 + 0.2 X0`.
    #[arg(short = 'H', long)]
    pub hamiltonian: PathBuf,
    /// State JSON: {"dim": d, "matrix": [[[re, im], ...], ...]}.
    #[arg(long)]
    pub state: PathBuf,
    #[command(flatten)]
    pub budget: BudgetArgs,
    #[arg(long, value_enum, default_value = "all")]
    pub method: MethodArg,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Fail with exit code 3 when a requested bound falls back to its trivial value.
    #[arg(long)]
    pub strict: bool,
    #[arg(short = 'o', long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Comma-separated infidelities.
    #[arg(long, value_delimiter = ',', num_args = 0.., conflicts_with = "eps_range")]
    pub eps: Vec<f64>,
    /// `start:stop:count`, endpoints included.
    #[arg(long)]
    pub eps_range: Option<String>,
    /// Fixed <A> for an observable with spectrum in [-1, 1] (or a projection with --projection).
    #[arg(long, allow_hyphen_values = true)]
    pub first: Option<f64>,
    /// Fixed variance of A; defaults to the projection value p (1 - p) with --projection.
    #[arg(long)]
    pub variance: Option<f64>,
    /// Comma-separated <P> values of a projection; every row reports p.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub projection: Vec<f64>,
    /// Take the statistics of this Hamiltonian on --state instead.
    #[arg(short = 'H', long, requires = "state")]
    pub hamiltonian: Option<PathBuf>,
    #[arg(long)]
    pub state: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "all")]
    pub method: MethodArg,
    #[arg(long)]
    pub strict: bool,
    #[arg(short = 'o', long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CheckTablesArgs {
    /// Fixture CSV; the tables shipped with the binary when omitted.
    pub fixture: Option<PathBuf>,
    /// Write the per-row report as JSON.
    #[arg(short = 'o', long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(short = 'H', long)]
    pub hamiltonian: PathBuf,
    /// Entangling layers of the RY/CNOT template (0 gives a single RY layer).
    #[arg(long, default_value_t = 1)]
    pub layers: usize,
    /// Bit-flip probability after every single-qubit gate.
    #[arg(long, default_value_t = 0.0)]
    pub p1: f64,
    /// Two-qubit depolarizing probability after every CNOT.
    #[arg(long, default_value_t = 0.0)]
    pub p2: f64,
    #[arg(long, default_value_t = 200)]
    pub max_sweeps: usize,
    #[arg(long, value_enum, default_value = "all")]
    pub method: MethodArg,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub strict: bool,
    /// Where to write the optimized state JSON.
    #[arg(long)]
    pub state_out: Option<PathBuf>,
    #[arg(short = 'o', long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Reduced problem sizes.
    #[arg(long)]
    pub quick: bool,
    #[arg(long, default_value_t = 20240601)]
    pub seed: u64,
    #[arg(short = 'o', long)]
    pub out: Option<PathBuf>,
}
