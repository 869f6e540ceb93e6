use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Generalized summation of trigonometric series by convergence factors.
///
/// Angles are in radians.
#[derive(Debug, Parser)]
#[command(name = "sigmasum", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Table of convergence factors `k,mu_k` for k = 0…N.
    Factors {
        #[command(flatten)]
        method: MethodArgs,
        /// Highest harmonic.
        #[arg(long = "N")]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// De kernel on a uniform grid: closed form against the truncated series.
    Kernel {
        /// Kernel order r (positive integer).
        #[arg(long)]
        r: u32,
        /// Step α in (0, π).
        #[arg(long)]
        alpha: f64,
        /// Grid size.
        #[arg(long = "M", default_value_t = 101)]
        m: usize,
        /// Truncation of the spectral series.
        #[arg(long = "N", default_value_t = 4096)]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Sums the factored Fourier series of a function on a uniform grid.
    Sum {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        method: MethodArgs,
        #[arg(long = "N")]
        n: usize,
        #[arg(long = "M", default_value_t = 256)]
        m: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Convolves a function with a summation kernel on a uniform grid.
    Convolve {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = KernelKind::De)]
        kernel: KernelKind,
        /// De order (integer) or Poisson radius in (0, 1).
        #[arg(long)]
        r: f64,
        /// De step α; ignored for the Poisson kernel.
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long = "M", default_value_t = 256)]
        m: usize,
        /// Quadrature nodes per panel (at least 16).
        #[arg(long, default_value_t = 32)]
        quad: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Overshoot of the summed series above the function's supremum.
    Gibbs {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        method: MethodArgs,
        #[arg(long = "N")]
        n: usize,
        #[arg(long = "M", default_value_t = 8192)]
        m: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Runs the numerical verification suite and prints JSON reports.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Keep measured runtimes in the output (not byte-reproducible).
        #[arg(long)]
        timings: bool,
        /// Output file; standard output when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodKind {
    Identity,
    Poisson,
    Sigma,
    Lanczos,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelKind {
    De,
    Poisson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BuiltinArg {
    Square,
    Sawtooth,
}

#[derive(Debug, Args)]
pub struct MethodArgs {
    /// Factor family.
    #[arg(long, value_enum, default_value_t = MethodKind::Identity)]
    pub method: MethodKind,
    /// Poisson radius in (0, 1), or sigma order (positive integer).
    #[arg(long)]
    pub r: Option<f64>,
    /// Sigma step α in (0, π).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Lanczos cutoff n.
    #[arg(long = "lanczos-n")]
    pub lanczos_n: Option<u32>,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// JSON series spec: {"a0":…,"a":[…],"b":[…]} or {"builtin":"square"}; `-` for stdin.
    #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
    pub input: Option<PathBuf>,
    /// Built-in function.
    #[arg(long, value_enum)]
    pub builtin: Option<BuiltinArg>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}
