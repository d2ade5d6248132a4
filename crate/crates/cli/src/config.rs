//! Experiment parameters shared by the command line and TOML config files.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context};
use clap::Args;
use remap_core::{CgConfig, Diagonal, QuadratureRule, RbfConfig, SamplingMode};
use serde::{Deserialize, Deserializer};

use crate::expr::Expr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Deserialize)]
#[serde(try_from = "String")]
pub enum Method {
    Mi,
    Mc,
    Rbf,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Mi, Method::Mc, Method::Rbf];
}

impl FromStr for Method {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        match s.trim() {
            "mi" => Ok(Self::Mi),
            "mc" => Ok(Self::Mc),
            "rbf" => Ok(Self::Rbf),
            other => bail!("unknown method '{other}' (expected mi, mc or rbf)"),
        }
    }
}

impl TryFrom<String> for Method {
    type Error = anyhow::Error;

    fn try_from(s: String) -> anyhow::Result<Self> {
        s.parse()
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Mi => "mi",
            Self::Mc => "mc",
            Self::Rbf => "rbf",
        })
    }
}

/// Comma-separated list on the command line; a string or an array in TOML.
#[derive(Clone, Debug, PartialEq)]
pub struct List<T>(pub Vec<T>);

impl<T: FromStr> FromStr for List<T>
where
    T::Err: fmt::Display,
{
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let items = s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| t.trim().parse::<T>().map_err(|e| anyhow::anyhow!("'{}': {e}", t.trim())))
            .collect::<anyhow::Result<Vec<_>>>()?;
        if items.is_empty() {
            bail!("empty list");
        }
        Ok(Self(items))
    }
}

impl<'de, T> Deserialize<'de> for List<T>
where
    T: FromStr + Deserialize<'de>,
    T::Err: fmt::Display,
{
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw<T> {
            Seq(Vec<T>),
            One(T),
            Text(String),
        }
        match Raw::<T>::deserialize(d)? {
            Raw::Seq(v) => Ok(Self(v)),
            Raw::One(v) => Ok(Self(vec![v])),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Parameters of the square-mesh generator: `n,perturbation,seed,diagonal`.
#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(try_from = "String")]
pub struct MeshGen {
    pub n: usize,
    pub perturbation: f64,
    pub seed: u64,
    pub diagonal: Diagonal,
}

impl MeshGen {
    pub fn new(n: usize, perturbation: f64, seed: u64, diagonal: Diagonal) -> Self {
        Self {
            n,
            perturbation,
            seed,
            diagonal,
        }
    }

    /// A partner mesh of the same resolution with the other diagonal and
    /// the next seed, so the pair is non-matching.
    pub fn partner(&self) -> Self {
        let diagonal = match self.diagonal {
            Diagonal::Left => Diagonal::Right,
            Diagonal::Right | Diagonal::Alternating => Diagonal::Left,
        };
        Self {
            seed: self.seed + 1,
            diagonal,
            ..*self
        }
    }
}

impl FromStr for MeshGen {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [n, p, seed, diag] = parts[..] else {
            bail!("mesh generator '{s}' must be n,perturbation,seed,diagonal");
        };
        Ok(Self {
            n: n.parse().context("generator n")?,
            perturbation: p.parse().context("generator perturbation")?,
            seed: seed.parse().context("generator seed")?,
            diagonal: diag.parse()?,
        })
    }
}

impl TryFrom<String> for MeshGen {
    type Error = anyhow::Error;

    fn try_from(s: String) -> anyhow::Result<Self> {
        s.parse()
    }
}

/// Analytic field: `linear` (x + y), `smooth` (sin x cos y + 2) or an
/// expression in x and y.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(try_from = "String")]
pub enum FieldKind {
    Linear,
    Smooth,
    Custom { text: String, expr: Expr },
}

impl FieldKind {
    pub fn eval(&self, p: [f64; 2]) -> f64 {
        match self {
            Self::Linear => p[0] + p[1],
            Self::Smooth => p[0].sin() * p[1].cos() + 2.0,
            Self::Custom { expr, .. } => expr.eval(p[0], p[1]),
        }
    }
}

impl FromStr for FieldKind {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        Ok(match s.trim() {
            "linear" => Self::Linear,
            "smooth" => Self::Smooth,
            text => Self::Custom {
                text: text.to_string(),
                expr: Expr::parse(text).map_err(|e| anyhow::anyhow!("field expression '{text}' {e}"))?,
            },
        })
    }
}

impl TryFrom<String> for FieldKind {
    type Error = anyhow::Error;

    fn try_from(s: String) -> anyhow::Result<Self> {
        s.parse()
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Linear => f.write_str("linear"),
            Self::Smooth => f.write_str("smooth"),
            Self::Custom { text, .. } => f.write_str(text),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(try_from = "String")]
pub struct Sampling(pub SamplingMode);

impl FromStr for Sampling {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        Ok(Self(s.trim().parse()?))
    }
}

impl TryFrom<String> for Sampling {
    type Error = anyhow::Error;

    fn try_from(s: String) -> anyhow::Result<Self> {
        s.parse()
    }
}

/// Every option of every subcommand. Unset values fall back to the config
/// file, then to per-command defaults.
#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    /// TOML file with any of these options; flags take precedence.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Transfer method(s): mi, mc, rbf (comma separated).
    #[arg(long)]
    pub method: Option<List<Method>>,

    /// Source mesh in MSH 2.2 ASCII format.
    #[arg(long)]
    pub source_mesh: Option<PathBuf>,

    /// Target mesh in MSH 2.2 ASCII format.
    #[arg(long)]
    pub target_mesh: Option<PathBuf>,

    /// Generated target mesh `n,perturbation,seed,diagonal`; the source is
    /// its partner (other diagonal, next seed) unless given separately.
    #[arg(long)]
    pub gen: Option<MeshGen>,

    /// Generated source mesh, same format as --gen
    #[arg(long)]
    pub source_gen: Option<MeshGen>,

    /// Generated target mesh, same format as --gen
    #[arg(long)]
    pub target_gen: Option<MeshGen>,

    /// Scattered source samples as CSV with header x,y,value (rbf only).
    #[arg(long)]
    pub source_points: Option<PathBuf>,

    /// A named field (linear or smooth) or an expression like "exp(-x)*cos(3*y)".
    #[arg(long)]
    pub field: Option<FieldKind>,

    /// Samples per target element (comma separated for sweeps).
    #[arg(long)]
    pub samples: Option<List<usize>>,

    /// uniform or sobol.
    #[arg(long)]
    pub sampling: Option<Sampling>,

    /// Random seeds (comma separated).
    #[arg(long)]
    pub seeds: Option<List<u64>>,

    /// Round trips.
    #[arg(long)]
    pub iterations: Option<usize>,

    /// Polynomial degree of the intersection quadrature (at most 4).
    #[arg(long)]
    pub quad_degree: Option<u32>,

    /// Relative residual tolerance of the mass-matrix solve.
    #[arg(long)]
    pub cg_tol: Option<f64>,

    /// Ridge regularization of the rbf fit.
    #[arg(long)]
    pub rbf_lambda: Option<f64>,

    /// Refinement levels `n` for the convergence study.
    #[arg(long)]
    pub levels: Option<List<usize>>,

    /// Mesh subdivisions `n` for the benchmark (2 n² elements each).
    #[arg(long)]
    pub sizes: Option<List<usize>>,

    /// Timing repetitions per benchmark case (best is reported).
    #[arg(long)]
    pub reps: Option<usize>,

    /// Worker threads; results do not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,

    /// Output CSV path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Metrics CSV for `transfer` (standard output when absent).
    #[arg(long)]
    pub metrics_out: Option<PathBuf>,
}

macro_rules! overlay {
    ($top:ident, $base:ident; $($f:ident),*) => {
        Params { config: $top.config, $($f: $top.$f.or($base.$f)),* }
    };
}

impl Params {
    /// Reads the config file, if any, and lets explicit flags win.
    pub fn resolve(self) -> anyhow::Result<Self> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let base = Self::from_file(&path)?;
        let top = self;
        Ok(overlay!(top, base; method, source_mesh, target_mesh, gen, source_gen, target_gen,
            source_points, field, samples, sampling, seeds, iterations, quad_degree, cg_tol,
            rbf_lambda, levels, sizes, reps, workers, out, metrics_out))
    }

    pub fn from_file(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn methods(&self) -> Vec<Method> {
        self.method.as_ref().map_or(Method::ALL.to_vec(), |m| m.0.clone())
    }

    pub fn field_or(&self, default: FieldKind) -> FieldKind {
        self.field.clone().unwrap_or(default)
    }

    pub fn samples_or(&self, default: &[usize]) -> Vec<usize> {
        self.samples.as_ref().map_or(default.to_vec(), |s| s.0.clone())
    }

    pub fn seeds_or(&self, default: &[u64]) -> Vec<u64> {
        self.seeds.as_ref().map_or(default.to_vec(), |s| s.0.clone())
    }

    pub fn settings(&self) -> anyhow::Result<Settings> {
        let quad_degree = self.quad_degree.unwrap_or(2);
        let cg_tol = self.cg_tol.unwrap_or(1e-12);
        if !(cg_tol > 0.0 && cg_tol < 1.0) {
            bail!("cg tolerance must lie in (0, 1), got {cg_tol}");
        }
        let rbf = RbfConfig {
            lambda: self.rbf_lambda.unwrap_or(RbfConfig::<f64>::default().lambda),
            ..RbfConfig::default()
        };
        Ok(Settings {
            quadrature: QuadratureRule::with_degree(quad_degree)?,
            cg: CgConfig::with_tol(cg_tol),
            rbf,
            sampling: self.sampling.map_or(SamplingMode::Sobol, |s| s.0),
        })
    }
}

/// Numerical settings shared by all methods.
#[derive(Clone, Debug)]
pub struct Settings {
    pub quadrature: QuadratureRule<f64>,
    pub cg: CgConfig<f64>,
    pub rbf: RbfConfig<f64>,
    pub sampling: SamplingMode,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            quadrature: QuadratureRule::three_point(),
            cg: CgConfig::default(),
            rbf: RbfConfig::default(),
            sampling: SamplingMode::Sobol,
        }
    }
}
