use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "wright-hopf", version, about = "Hopf bifurcations of x'(t) = -mu f(x(t-1))")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-k table of critical values, directions and normal-form coefficients.
    Classify(ClassifyArgs),
    /// Sequence case, switching index and Schwarzian check.
    Sequence(SequenceArgs),
    /// Period bounds of branch k over an eta grid.
    Bounds(BoundsArgs),
    /// Integrate from a constant history and print the trajectory.
    Simulate(SimulateArgs),
    /// Amplitude and period of the first branch over an eta grid.
    Sweep(SweepArgs),
    /// Cooke transform checks on critical pairs and on a computed orbit.
    CookeCheck(CookeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// wright, ikeda, poly-switch, poly-subcritical or cubic(B,C)
    #[arg(long)]
    pub preset: Option<String>,
    /// Raw coefficients f'(0) f''(0) f'''(0) of a cubic.
    #[arg(long, num_args = 3, value_names = ["D1", "F2", "F3"], allow_negative_numbers = true)]
    pub cubic: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub source: Source,
    /// Inclusive index range `a..b`.
    #[arg(long, default_value = "-2..4", allow_hyphen_values = true, value_parser = parse_k_range)]
    pub k_range: (i64, i64),
    /// Degeneracy tolerance on C - H(k) B^2.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SequenceArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, default_value_t = 0)]
    pub k: u32,
    /// Comma-separated values or `start:end:count`.
    #[arg(long, default_value = "0.02:0.2:10", value_parser = parse_grid)]
    pub eta: Grid,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub source: Source,
    /// Parameter mu of the equation as given (not normalized).
    #[arg(long, allow_negative_numbers = true)]
    pub mu: f64,
    /// Constant initial history.
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    pub amplitude: f64,
    #[arg(long, env = "WRIGHT_HOPF_T_END", default_value_t = 100.0)]
    pub t_end: f64,
    /// Step 1/m, given as a decimal or as `1/m`.
    #[arg(long, env = "WRIGHT_HOPF_STEP", default_value = "1/64", value_parser = parse_step)]
    pub step: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, default_value = "0.02:0.2:10", value_parser = parse_grid)]
    pub eta: Grid,
    #[arg(long, env = "WRIGHT_HOPF_STEP", default_value = "1/64", value_parser = parse_step)]
    pub step: f64,
    /// Relative slack used for the within_bounds column.
    #[arg(long, default_value_t = 0.02)]
    pub slack: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CookeArgs {
    #[command(flatten)]
    pub source: Source,
    /// Parameter of the orbit whose transforms are checked.
    #[arg(long, default_value_t = 1.8)]
    pub mu: f64,
    /// Largest Cooke index.
    #[arg(long, default_value_t = 3)]
    pub l_max: u32,
    /// Largest branch index for the critical-pair check.
    #[arg(long, default_value_t = 5)]
    pub k_max: u32,
    #[arg(long, env = "WRIGHT_HOPF_STEP", default_value = "1/64", value_parser = parse_step)]
    pub step: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

fn parse_k_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected `a..b`, got `{s}`"))?;
    let parse = |v: &str| v.trim().parse::<i64>().map_err(|e| format!("`{v}`: {e}"));
    let (a, b) = (parse(a)?, parse(b.trim_start_matches('='))?);
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    if b - a > 100_000 {
        return Err("range too long".into());
    }
    Ok((a, b))
}

fn parse_number(s: &str) -> Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("`{s}` is not a finite number"))
}

/// Values of eta, in order.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

fn parse_grid(s: &str) -> Result<Grid, String> {
    parse_values(s).map(Grid)
}

fn parse_values(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [start, end, count] => {
            let (start, end) = (parse_number(start)?, parse_number(end)?);
            let count: usize = count.trim().parse().map_err(|e| format!("count: {e}"))?;
            match count {
                0 => Err("grid count must be positive".into()),
                1 => Ok(vec![start]),
                _ => Ok((0..count)
                    .map(|i| start + (end - start) * i as f64 / (count - 1) as f64)
                    .collect()),
            }
        }
        [list] => list.split(',').map(parse_number).collect(),
        _ => Err(format!("expected `a,b,c` or `start:end:count`, got `{s}`")),
    }
}

fn parse_step(s: &str) -> Result<f64, String> {
    match s.split_once('/') {
        Some((num, den)) => Ok(parse_number(num)? / parse_number(den)?),
        None => parse_number(s),
    }
}
