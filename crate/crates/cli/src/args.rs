//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "prism-nematic", version, about = "Energy bounds and conformal energies of nematic director fields in rectangular prisms")]
pub struct Cli {
    /// Worker threads for parallel quadrature (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form invariants of a rational map with numerical cross-checks.
    Invariants(InvariantsArgs),
    /// Closed-form lower and upper energy bounds.
    Bounds(BoundsArgs),
    /// Exact energy of a conformal configuration, with its bounds.
    Energy(EnergyArgs),
    /// Energy of a one-parameter family over a range of the parameter, as CSV.
    Sweep(SweepArgs),
    /// Minimum of the scaled energy over a one-parameter family.
    Minimize(MinimizeArgs),
    /// Director field sampled on a grid over the octant, as CSV.
    Field(FieldArgs),
    /// Self-check on random rational maps.
    Check(CheckArgs),
    /// Run a job described by a JSON file.
    Run(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LpChoice {
    AllPairs,
    Edges,
}

#[derive(Debug, Args)]
pub struct ElasticArgs {
    /// One-constant elastic modulus.
    #[arg(long = "K", default_value_t = 1.0)]
    pub k: f64,
    /// Splay modulus; with --K2 and --K3 adds a Frank lower bound.
    #[arg(long = "K1", requires_all = ["k2", "k3"])]
    pub k1: Option<f64>,
    #[arg(long = "K2", requires_all = ["k1", "k3"])]
    pub k2: Option<f64>,
    #[arg(long = "K3", requires_all = ["k1", "k2"])]
    pub k3: Option<f64>,
}

impl ElasticArgs {
    pub fn frank(&self) -> Option<[f64; 3]> {
        Some([self.k1?, self.k2?, self.k3?])
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct FamilyArgs {
    /// Built-in family name.
    #[arg(long)]
    pub family: Option<String>,
    /// JSON template whose factor positions may be "$s".
    #[arg(long)]
    pub template: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InvariantsArgs {
    /// JSON rational-map spec.
    #[arg(long)]
    pub spec: PathBuf,
    /// Absolute tolerance of the numerical trapped area.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Side lengths Lx,Ly,Lz with Lx >= Ly >= Lz.
    #[arg(long, value_parser = parse_prism)]
    pub prism: [f64; 3],
    /// Trapped area at the origin.
    #[arg(long, required_unless_present = "spec", conflicts_with = "spec", allow_hyphen_values = true)]
    pub omega0: Option<f64>,
    /// JSON rational-map spec supplying the trapped area.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[command(flatten)]
    pub elastic: ElasticArgs,
    /// Pairs constrained in the lower-bound linear program.
    #[arg(long, value_enum, default_value_t = LpChoice::AllPairs)]
    pub lp_constraints: LpChoice,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EnergyArgs {
    #[arg(long, value_parser = parse_prism)]
    pub prism: [f64; 3],
    #[arg(long)]
    pub spec: PathBuf,
    #[command(flatten)]
    pub elastic: ElasticArgs,
    /// Quadrature tolerance relative to the upper bound.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub source: FamilyArgs,
    #[arg(long, value_parser = parse_prism)]
    pub prism: [f64; 3],
    /// Parameter range a:b inside (0, 1).
    #[arg(long, value_parser = parse_range, default_value = "0.05:0.95")]
    pub range: (f64, f64),
    /// Number of parameter values, endpoints included.
    #[arg(long, default_value_t = 19)]
    pub steps: usize,
    #[arg(long = "K", default_value_t = 1.0)]
    pub k: f64,
    /// Quadrature tolerance relative to the upper bound.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MinimizeArgs {
    #[command(flatten)]
    pub source: FamilyArgs,
    #[arg(long, value_parser = parse_prism)]
    pub prism: [f64; 3],
    #[arg(long = "K", default_value_t = 1.0)]
    pub k: f64,
    /// Width of the final parameter bracket.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, value_parser = parse_prism)]
    pub prism: [f64; 3],
    /// Points per axis.
    #[arg(long, default_value_t = 11)]
    pub grid: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of random maps.
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub job: PathBuf,
}

fn parse_number(s: &str) -> Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| format!("'{s}' is not a number"))
}

pub fn parse_prism(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [x, y, z] = parts.as_slice() else {
        return Err(format!("expected Lx,Ly,Lz, got '{s}'"));
    };
    Ok([parse_number(x)?, parse_number(y)?, parse_number(z)?])
}

pub fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected a:b, got '{s}'"))?;
    Ok((parse_number(a)?, parse_number(b)?))
}
