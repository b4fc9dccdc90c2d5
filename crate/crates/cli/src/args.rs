use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lv_resilience::model::nondimensionalize;
use lv_resilience::{DimensionalParams, IntegrationConfig, NondimParams};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "lvres",
    version,
    about = "Basin boundary, resilience and sensitivity analysis of bistable Lotka-Volterra competition",
    args_override_self = true
)]
pub struct Cli {
    /// File of `key = value` lines read as flags; command-line flags win
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Regime, equilibria with stability, and the saddle spectrum as JSON
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Analyze {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Separatrix knots as CSV `x,y[,s_star][,residual]`
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Separatrix {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        integration: IntegrationArgs,
        /// Add the model curve B (x/A)^delta
        #[arg(long)]
        with_model: bool,
        /// Add the integral-equation residual
        #[arg(long)]
        with_residual: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Precariousness and latitude report as JSON, optional basin grid CSV
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Resilience {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        integration: IntegrationArgs,
        /// Monte Carlo sample count
        #[arg(long, default_value_t = 10_000)]
        mc_n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Native densities for precariousness, comma separated
        #[arg(long, default_value = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1")]
        x0: String,
        /// Resolution of the basin grid over the unit square
        #[arg(long)]
        grid: Option<usize>,
        /// Basin grid CSV path [default: basin_grid.csv]
        #[arg(long)]
        grid_out: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Parameter derivatives of the separatrix as CSV `x,dsda,dsdb,dsdd`
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Sensitivity {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        integration: IntegrationArgs,
        /// Evaluation points, comma separated
        #[arg(long, default_value = "0.05,0.1,0.2,0.3,0.4,0.5,0.75,1")]
        xs: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Curve values, derivatives and latitude over a parameter grid
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Sweep {
        /// Value, list `a,b,c`, or range `start:stop:count`
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        #[arg(long)]
        delta: String,
        /// Native densities, comma separated
        #[arg(long, default_value = "0.5")]
        x: String,
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        integration: IntegrationArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Distance of the separatrix from its singular limits along a delta ladder
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Limits {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, value_enum, default_value_t = LimitArg::Zero)]
        direction: LimitArg,
        /// Delta values, comma separated [default: 1,0.3,0.1,0.03,0.01 or 1,3,10,30,100]
        #[arg(long)]
        ladder: Option<String>,
        /// Measuring window `lo,hi`
        #[arg(long, default_value = "0.2,0.8")]
        window: String,
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        integration: IntegrationArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Forward trajectories as CSV `traj_id,t,x,y,label`
    #[command(name = "phase-portrait", args_override_self = true, allow_negative_numbers = true)]
    PhasePortrait {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        integration: IntegrationArgs,
        /// Initial conditions `x:y`, comma separated
        #[arg(long)]
        ic: Option<String>,
        /// Without --ic: n by n grid of cell centres over the unit square
        #[arg(long, default_value_t = 5)]
        grid: usize,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LimitArg {
    Zero,
    Infinity,
}

/// Either the nondimensional triple or the six dimensional rates.
#[derive(Debug, Args)]
pub struct ParamArgs {
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Native growth rate
    #[arg(long)]
    pub rn: Option<f64>,
    /// Invader growth rate
    #[arg(long)]
    pub ri: Option<f64>,
    /// Native carrying capacity
    #[arg(long)]
    pub kn: Option<f64>,
    /// Invader carrying capacity
    #[arg(long)]
    pub ki: Option<f64>,
    /// Effect of the invader on the native
    #[arg(long = "a")]
    pub a: Option<f64>,
    /// Effect of the native on the invader
    #[arg(long = "b")]
    pub b: Option<f64>,
}

impl ParamArgs {
    pub fn resolve(&self) -> Result<NondimParams, CliError> {
        let nondim = [self.alpha, self.beta, self.delta];
        let dim = [self.rn, self.ri, self.kn, self.ki, self.a, self.b];
        let any_nondim = nondim.iter().any(Option::is_some);
        let any_dim = dim.iter().any(Option::is_some);
        match (any_nondim, any_dim) {
            (true, true) => Err(CliError::Usage(
                "give either --alpha/--beta/--delta or --rn/--ri/--kn/--ki/--a/--b, not both".into(),
            )),
            (false, false) => Err(CliError::Usage("no parameters given".into())),
            (true, false) => match nondim {
                [Some(al), Some(be), Some(de)] => Ok(NondimParams::new(al, be, de)?),
                _ => Err(CliError::Usage("--alpha, --beta and --delta are all required".into())),
            },
            (false, true) => match dim {
                [Some(rn), Some(ri), Some(kn), Some(ki), Some(a), Some(b)] => {
                    Ok(nondimensionalize(&DimensionalParams::new(rn, ri, kn, ki, a, b)?))
                }
                _ => Err(CliError::Usage("--rn, --ri, --kn, --ki, --a and --b are all required".into())),
            },
        }
    }
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// Right end of the separatrix domain
    #[arg(long, default_value_t = 3.0)]
    pub xmax: f64,
    /// Number of resampling knots
    #[arg(long, default_value_t = 512)]
    pub knots: usize,
    /// Seed offset from the saddle along the stable direction
    #[arg(long, default_value_t = 1e-7)]
    pub eps: f64,
}

impl CurveArgs {
    pub fn config(&self) -> lv_resilience::SeparatrixBuildConfig {
        lv_resilience::SeparatrixBuildConfig {
            eigen_offset: self.eps,
            x_max: self.xmax,
            resample_count: self.knots,
            ..Default::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct IntegrationArgs {
    #[arg(long, default_value_t = 1e-9)]
    pub rtol: f64,
    #[arg(long, default_value_t = 1e-11)]
    pub atol: f64,
    /// Time limit of a single trajectory
    #[arg(long, default_value_t = 1e4)]
    pub max_time: f64,
}

impl IntegrationArgs {
    pub fn config(&self) -> Result<IntegrationConfig, CliError> {
        for (name, v) in [("rtol", self.rtol), ("atol", self.atol), ("max-time", self.max_time)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::Usage(format!("--{name} must be positive, got {v}")));
            }
        }
        Ok(IntegrationConfig {
            rel_tol: self.rtol,
            abs_tol: self.atol,
            max_time: self.max_time,
            ..Default::default()
        })
    }
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Output file [default: standard output, or the LVRES_OUTPUT_DIR directory]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn parse_list(flag: &str, text: &str) -> Result<Vec<f64>, CliError> {
    let values: Result<Vec<f64>, _> = text.split(',').map(|t| t.trim().parse::<f64>()).collect();
    match values {
        Ok(v) if !v.is_empty() && v.iter().all(|x| x.is_finite()) => Ok(v),
        _ => Err(CliError::Usage(format!("--{flag}: expected comma-separated numbers, got `{text}`"))),
    }
}

/// A single value, a list `a,b,c`, or an inclusive range `start:stop:count`.
pub fn parse_grid(flag: &str, text: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("--{flag}: expected a value, a list a,b,c or start:stop:count, got `{text}`"));
    if !text.contains(':') {
        return parse_list(flag, text).map_err(|_| bad());
    }
    let parts: Vec<&str> = text.split(':').map(str::trim).collect();
    let [start, stop, count] = parts[..] else { return Err(bad()) };
    let (start, stop): (f64, f64) = (start.parse().map_err(|_| bad())?, stop.parse().map_err(|_| bad())?);
    let count: usize = count.parse().map_err(|_| bad())?;
    if count == 0 || !start.is_finite() || !stop.is_finite() || (count == 1 && start != stop) {
        return Err(bad());
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    Ok((0..count)
        .map(|i| if i + 1 == count { stop } else { start + (stop - start) * i as f64 / (count - 1) as f64 })
        .collect())
}

pub fn parse_points(text: &str) -> Result<Vec<(f64, f64)>, CliError> {
    text.split(',')
        .map(|pair| {
            let (x, y) = pair.split_once(':').ok_or_else(|| CliError::Usage(format!("--ic: expected x:y, got `{pair}`")))?;
            match (x.trim().parse::<f64>(), y.trim().parse::<f64>()) {
                (Ok(x), Ok(y)) if x >= 0.0 && y >= 0.0 && x.is_finite() && y.is_finite() => Ok((x, y)),
                _ => Err(CliError::Usage(format!("--ic: expected nonnegative x:y, got `{pair}`"))),
            }
        })
        .collect()
}
