use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use pht_core::glue::{GlueMode, TGrid};
use pht_core::pht::GridScheme;

#[derive(Debug, Parser)]
#[command(name = "pht", version, about = "Persistent homology transforms, gluing over covers, and sampling checks")]
pub struct Cli {
    /// Key-value file supplying defaults for the subcommand's flags.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Output directory (overrides PHT_OUT_DIR and the config file).
    #[arg(long, global = true, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Barcodes of a complex in every grid direction.
    #[command(args_override_self = true)]
    Pht(PhtArgs),
    /// Stalk-by-stalk gluing reports.
    Glue {
        #[command(subcommand)]
        action: GlueAction,
    },
    /// Glued against direct Betti numbers; exits 1 on any mismatch.
    #[command(args_override_self = true)]
    Verify(GlueArgs),
    /// Sampling experiments on built-in manifolds.
    Sample {
        #[command(subcommand)]
        action: SampleAction,
    },
    /// Surrogate distance between two saved transforms.
    #[command(args_override_self = true)]
    Distance(DistanceArgs),
    /// Polar heatmap of a saved planar transform.
    #[command(args_override_self = true)]
    Render(RenderArgs),
}

#[derive(Debug, Subcommand)]
pub enum GlueAction {
    #[command(args_override_self = true)]
    Run(GlueArgs),
}

#[derive(Debug, Subcommand)]
pub enum SampleAction {
    #[command(args_override_self = true)]
    Run(SampleArgs),
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Number of grid directions.
    #[arg(long, default_value_t = 64)]
    pub directions: usize,
    /// uniform (planar), fibonacci (spatial) or random.
    #[arg(long)]
    pub scheme: Option<GridScheme>,
    /// Seed for random grids and sampling.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct PhtArgs {
    /// Complex in OFF or JSON form.
    #[arg(long)]
    pub complex: PathBuf,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Highest homological degree; defaults to the ambient dimension.
    #[arg(long)]
    pub max_degree: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GlueArgs {
    #[arg(long)]
    pub complex: PathBuf,
    /// Cover as JSON.
    #[arg(long)]
    pub cover: PathBuf,
    /// fast or total.
    #[arg(long, default_value = "total")]
    pub mode: GlueMode,
    #[command(flatten)]
    pub grid: GridArgs,
    /// critical, uniform:LO:HI:COUNT or values:T1,T2,...
    #[arg(long, default_value = "critical", value_parser = parse_t_grid)]
    pub t_grid: TGrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ManifoldKind {
    Circle,
    Sphere,
    Torus,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, value_enum)]
    pub manifold: ManifoldKind,
    /// Radius (minor radius for the torus).
    #[arg(long = "r", default_value_t = 1.0)]
    pub radius: f64,
    /// Torus major radius.
    #[arg(long = "R")]
    pub major: Option<f64>,
    #[arg(long, default_value_t = 300)]
    pub n: usize,
    /// Ball radius.
    #[arg(long)]
    pub eps: f64,
    /// First seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of consecutive seeds to run.
    #[arg(long, default_value_t = 1)]
    pub runs: u64,
    #[arg(long, default_value_t = 32)]
    pub directions: usize,
    #[arg(long)]
    pub scheme: Option<GridScheme>,
    /// Resolution of the reference triangulation.
    #[arg(long)]
    pub reference_resolution: Option<usize>,
    /// Also write the sampled points as CSV (single run only).
    #[arg(long)]
    pub export_points: bool,
}

#[derive(Debug, Args)]
pub struct DistanceArgs {
    pub a: PathBuf,
    pub b: PathBuf,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// Transform JSON written by `pht`.
    #[arg(long)]
    pub pht: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub degree: usize,
    /// File name inside the output directory.
    #[arg(long, default_value = "heatmap.svg")]
    pub output: String,
    #[arg(long, requires = "t_max")]
    pub t_min: Option<f64>,
    #[arg(long, requires = "t_min")]
    pub t_max: Option<f64>,
}

pub fn parse_t_grid(s: &str) -> Result<TGrid, String> {
    let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("bad level {x:?}: {e}"));
    match s.split_once(':') {
        None if s == "critical" => Ok(TGrid::Critical),
        Some(("uniform", rest)) => {
            let parts: Vec<&str> = rest.split(':').collect();
            let [lo, hi, count] = parts[..] else {
                return Err("expected uniform:LO:HI:COUNT".into());
            };
            let count = count.trim().parse().map_err(|e| format!("bad count {count:?}: {e}"))?;
            Ok(TGrid::Uniform {
                lo: num(lo)?,
                hi: num(hi)?,
                count,
            })
        }
        Some(("values", rest)) => Ok(TGrid::Values(rest.split(',').map(num).collect::<Result<_, _>>()?)),
        _ => Err(format!("unknown level grid {s:?}")),
    }
}
