use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::FamilyName;

#[derive(Parser, Debug)]
#[command(name = "interaction-minimiser", version, about = "Stability, minimisation and bounds for radial interaction energies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify stability of a potential and report its hypotheses.
    Classify(CommonArgs),
    /// Multi-start particle minimisation of the discrete energy.
    Minimise(CommonArgs),
    /// Explicit Euler integration of the particle aggregation flow.
    Flow(CommonArgs),
    /// Check a particle configuration against the a-priori bounds.
    Certify(CommonArgs),
    /// Compute the a-priori bound parameters of an unstable potential.
    Bounds(CommonArgs),
    /// Morse phase diagram: classifier against the closed-form criterion.
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Clone, Default)]
pub struct CommonArgs {
    /// JSON run configuration; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub potential: Option<FamilyName>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Power-law attractive exponent.
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Power-law repulsive exponent.
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long)]
    pub cr: Option<f64>,
    #[arg(long)]
    pub ca: Option<f64>,
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long)]
    pub la: Option<f64>,
    /// Number of particles.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    #[arg(long)]
    pub grad_tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub ball_radius: Option<f64>,
    #[arg(long)]
    pub init_radius: Option<f64>,
    /// Flow time step.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Flow end time.
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub el_tolerance: Option<f64>,
    /// Particle CSV (`x1,...,xd,w`).
    #[arg(long)]
    pub particles: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub ratio_min: Option<f64>,
    #[arg(long)]
    pub ratio_max: Option<f64>,
    #[arg(long)]
    pub ratio_steps: Option<usize>,
    #[arg(long)]
    pub length_min: Option<f64>,
    #[arg(long)]
    pub length_max: Option<f64>,
    #[arg(long)]
    pub length_steps: Option<usize>,
    /// Comma-separated dimensions.
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
}
