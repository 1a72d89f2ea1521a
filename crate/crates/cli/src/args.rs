use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug, Clone)]
#[command(name = "capcon", version, about = "Energy- and purity-constrained classical capacities")]
pub struct Cli {
    /// Seed for every stochastic search and random check.
    #[arg(long, global = true, env = "CAPCON_SEED")]
    pub seed: Option<u64>,

    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output format. Defaults to csv, or json for `verify`.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// key=value file with defaults for seed, jobs, format and search budgets.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Noiseless d-level channel under an energy bound.
    Noiseless(NoiselessArgs),
    /// Qubit dephasing channel.
    Dephasing(DephasingArgs),
    /// Qubit channels under energy and purity bounds.
    Dual(DualArgs),
    /// Energy-constrained dense coding.
    Dc(DcArgs),
    /// Data behind one of the figures, as a table.
    Figure(FigureArgs),
    /// Run a verification suite and report every check.
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConstraintArg {
    Average,
    Strict,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProbabilitiesArg {
    Equiprobable,
    Optimized,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ChannelArg {
    Noiseless,
    Dephasing,
}

/// Either a single energy or a sweep.
#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct EnergyAxis {
    #[arg(long = "E", value_name = "E", allow_hyphen_values = true)]
    pub energy: Option<f64>,

    /// Sweep as `start:stop:points`.
    #[arg(long = "E-grid", value_name = "START:STOP:POINTS")]
    pub grid: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct NoiselessArgs {
    /// Dimension, or `inf` for the oscillator.
    #[arg(long)]
    pub d: String,
    #[command(flatten)]
    pub energy: EnergyAxis,
    #[arg(long, value_enum, default_value = "average")]
    pub constraint: ConstraintArg,
}

#[derive(Args, Debug, Clone)]
pub struct DephasingArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: f64,
    #[command(flatten)]
    pub energy: EnergyAxis,
    #[arg(long, value_enum, default_value = "average")]
    pub constraint: ConstraintArg,
    #[arg(long, value_enum, default_value = "optimized")]
    pub probabilities: ProbabilitiesArg,
}

#[derive(Args, Debug, Clone)]
pub struct DualArgs {
    /// Purity bound in [1/2, 1].
    #[arg(long = "L", value_name = "L", allow_hyphen_values = true)]
    pub purity: f64,
    #[command(flatten)]
    pub energy: EnergyAxis,
    #[arg(long, value_enum, default_value = "noiseless")]
    pub channel: ChannelArg,
    /// Only read for the dephasing channel.
    #[arg(long, value_enum, default_value = "optimized")]
    pub probabilities: ProbabilitiesArg,
}

#[derive(Args, Debug, Clone)]
pub struct DcArgs {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[command(flatten)]
    pub energy: EnergyAxis,
    /// Use the stochastic search over qubit encodings instead of the
    /// analytic optimum. Implied by any of the three flags below.
    #[arg(long)]
    pub numeric: bool,
    #[arg(long, value_enum)]
    pub channel: Option<ChannelArg>,
    #[arg(long, value_enum)]
    pub constraint: Option<ConstraintArg>,
    #[arg(long, value_enum)]
    pub probabilities: Option<ProbabilitiesArg>,
}

#[derive(Args, Debug, Clone)]
pub struct FigureArgs {
    /// fig1, fig2, fig3a, fig3b, fig4a or fig4b.
    pub name: String,
    /// Number of points on the horizontal axis.
    #[arg(long)]
    pub resolution: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    ClosedForms,
    Oracles,
    NoGo,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
}
