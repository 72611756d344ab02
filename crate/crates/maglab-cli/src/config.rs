//! Command-line flags and the resolved run configuration.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use maglab_geometry::{model_from_spec, GeometryModel, GeometrySpec};
use maglab_oracle::{log_grid, Scheme};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::CliError;

/// Version of the JSON artifacts.
pub const SCHEMA: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "maglab", version, about = "Large-scale magnitude expansions: symbolic engines and numerical oracle")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Expansion coefficients c_k and energy coefficients ε_k.
    Expand(ExpandArgs),
    /// Symbolic coefficients against oracle fits, with tolerances.
    Compare(CompareArgs),
    /// Symbol term lists at a point.
    Symbols(SymbolsArgs),
    /// Numerical magnitude against the truncated series.
    Magnitude(MagnitudeArgs),
    /// Least-squares fit of the coefficients from numerical magnitudes.
    Fit(FitArgs),
    /// Positive-definiteness scan of the kernel matrix.
    PdProbe(ProbeArgs),
    /// The builtin model catalog.
    Models(OutputArgs),
}

/// Geometry selection: a builtin name with parameters, or a JSON spec file.
#[derive(Clone, Debug, Default, Args)]
pub struct ModelArgs {
    /// Builtin model name (see `maglab models`).
    #[arg(long)]
    pub model: Option<String>,
    /// JSON geometry spec `{"model", "params", "jet_order", "quadrature_n"}`.
    #[arg(long, conflicts_with = "model")]
    pub geometry: Option<PathBuf>,
    /// Model parameters as a JSON object.
    #[arg(long)]
    pub params: Option<String>,
    /// Shorthand for the `length` parameter.
    #[arg(long = "len")]
    pub length: Option<f64>,
    /// Shorthand for the `radius` parameter.
    #[arg(long = "r")]
    pub radius: Option<f64>,
    /// Shorthand for the ellipse semi-axis `a`.
    #[arg(long)]
    pub a: Option<f64>,
    /// Shorthand for the ellipse semi-axis `b`.
    #[arg(long)]
    pub b: Option<f64>,
}

#[derive(Clone, Debug, Default, Args)]
pub struct OutputArgs {
    /// Directory for the JSON and CSV artifacts; stdout gets the JSON either way.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write a gnuplot script next to the CSV.
    #[arg(long, requires = "out")]
    pub plot: bool,
    /// Seed for every randomized choice.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Oracle discretization, mirroring the engine's schemes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Points,
    Corrected,
    Rings,
    #[default]
    Auto,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Points => Scheme::Points,
            SchemeArg::Corrected => Scheme::Corrected,
            SchemeArg::Rings => Scheme::Rings,
            SchemeArg::Auto => Scheme::Auto,
        }
    }
}

#[derive(Clone, Debug, Args)]
pub struct ExpandArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Highest coefficient order.
    #[arg(long = "K", visible_alias = "k", default_value_t = 2)]
    pub k: u32,
    /// Allow orders above 2.
    #[arg(long)]
    pub experimental: bool,
    /// Interior quadrature budget.
    #[arg(long, default_value_t = 400)]
    pub interior_budget: usize,
    /// Boundary quadrature budget.
    #[arg(long, default_value_t = 64)]
    pub boundary_budget: usize,
}

#[derive(Clone, Debug, Args)]
pub struct OracleArgs {
    /// Discretization size (points, or rings for radial balls).
    #[arg(long = "N", visible_alias = "n")]
    pub n: Option<usize>,
    /// Scales: `a:b:m` for m log-spaced values, or a comma list.
    #[arg(long = "R-grid", visible_alias = "r-grid")]
    pub r_grid: Option<String>,
    #[arg(long, value_enum, default_value_t = SchemeArg::Auto)]
    pub scheme: SchemeArg,
}

#[derive(Clone, Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub oracle: OracleArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long = "K", visible_alias = "k", default_value_t = 2)]
    pub k: u32,
    /// Tolerance on c_0: relative, or absolute when the target is zero.
    #[arg(long = "tol-c0", default_value_t = 0.05)]
    pub tol_c0: f64,
    #[arg(long = "tol-c1", default_value_t = 0.10)]
    pub tol_c1: f64,
    #[arg(long = "tol-c2", default_value_t = 0.25)]
    pub tol_c2: f64,
}

#[derive(Clone, Debug, Args)]
pub struct SymbolsArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Highest symbol order.
    #[arg(long, default_value_t = 2)]
    pub j: u32,
    /// Jet order of the chart; at least `j`.
    #[arg(long = "jet-order")]
    pub jet_order: Option<u32>,
    /// Boundary factors instead of interior symbols.
    #[arg(long)]
    pub boundary: bool,
    /// `base`, `pole`, or comma-separated ambient coordinates.
    #[arg(long, default_value = "base")]
    pub at: String,
    /// Use a seeded random curved chart of this dimension instead of a model.
    #[arg(long, conflicts_with_all = ["model", "geometry", "boundary"])]
    pub random_chart: Option<usize>,
}

#[derive(Clone, Debug, Args)]
pub struct MagnitudeArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub oracle: OracleArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Order of the comparison series.
    #[arg(long = "K", visible_alias = "k", default_value_t = 2)]
    pub k: u32,
}

#[derive(Clone, Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub oracle: OracleArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long = "K", visible_alias = "k", default_value_t = 2)]
    pub k: u32,
}

#[derive(Clone, Debug, Args)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub oracle: OracleArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Random triangle-inequality checks before probing.
    #[arg(long, default_value_t = 2000)]
    pub triangle_samples: usize,
}

/// Everything that determines a run's artifacts, echoed into its JSON.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub model: Option<String>,
    pub params: Value,
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jet_order: Option<u32>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scheme: Option<Scheme>,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(command: &str, seed: u64) -> Self {
        RunConfig {
            command: command.into(),
            model: None,
            params: Value::Null,
            k: None,
            jet_order: None,
            n: None,
            r_grid: None,
            scheme: None,
            seed,
        }
    }
}

/// A resolved geometry with the spec it came from.
pub struct Geometry {
    pub spec: GeometrySpec,
    pub model: Box<dyn GeometryModel>,
}

impl ModelArgs {
    /// Merges the spec file, `--params` and the shorthands, then builds the model.
    pub fn resolve(&self) -> Result<Geometry, CliError> {
        let mut spec = match (&self.geometry, &self.model) {
            (Some(path), _) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
                serde_json::from_str::<GeometrySpec>(&text)?
            }
            (None, Some(name)) => serde_json::from_value(serde_json::json!({ "model": name }))?,
            (None, None) => return Err(CliError::Usage("one of --model or --geometry is required".into())),
        };
        let mut params = match std::mem::take(&mut spec.params) {
            Value::Object(m) => m,
            Value::Null => Map::new(),
            _ => return Err(CliError::Usage("geometry params must be a JSON object".into())),
        };
        if let Some(text) = &self.params {
            match serde_json::from_str::<Value>(text)? {
                Value::Object(m) => params.extend(m),
                _ => return Err(CliError::Usage("--params must be a JSON object".into())),
            }
        }
        for (key, value) in [("length", self.length), ("radius", self.radius), ("a", self.a), ("b", self.b)] {
            if let Some(v) = value {
                params.insert(key.into(), v.into());
            }
        }
        spec.params = Value::Object(params);
        let model = model_from_spec(&spec)?;
        Ok(Geometry { spec, model })
    }
}

/// Parses `a:b:m` (log-spaced) or a comma-separated list of positive scales.
pub fn parse_r_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("bad R grid `{text}`; use a:b:m or r1,r2,..."));
    let grid = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let m: usize = parts[2].trim().parse().map_err(|_| bad())?;
        log_grid(a, b, m)
    } else {
        text.split(',').map(|s| s.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<_, _>>()?
    };
    if grid.is_empty() || grid.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(bad());
    }
    Ok(grid)
}
