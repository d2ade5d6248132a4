use thiserror::Error;

pub type Result<T, E = RemapError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum RemapError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("mesh contains no triangle elements")]
    EmptyMesh,

    #[error("element {element} is degenerate (area {area:e})")]
    DegenerateElement { element: usize, area: f64 },

    #[error("edge ({0}, {1}) is shared by more than two elements")]
    NonManifold(usize, usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("conjugate gradient did not converge after {iterations} iterations (relative residual {residual:e})")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        /// Iterate with the smallest residual seen.
        best: Vec<f64>,
    },

    #[error("target element {element} is only covered to {covered:e} of its area {area:e}")]
    CoverageGap {
        element: usize,
        covered: f64,
        area: f64,
    },

    #[error("source evaluation failed at ({x}, {y})")]
    SourceEvalFailed { x: f64, y: f64 },

    #[error("non-positive sampling density {density:e} in element {element}")]
    InvalidDensity { element: usize, density: f64 },

    #[error("need {needed} support points but the cloud has only {available}")]
    InsufficientPoints { needed: usize, available: usize },

    #[error("local fit at target node {node} is singular (condition {condition:e})")]
    SingularFit { node: usize, condition: f64 },

    #[error("denominator of relative error is zero")]
    ZeroDenominator,

    #[error("fields live on different meshes ({left} vs {right} nodes)")]
    MeshMismatch { left: usize, right: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl RemapError {
    /// Stable identifier for machine-readable error reporting.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Parse { .. } => "parse",
            Self::EmptyMesh => "empty_mesh",
            Self::DegenerateElement { .. } => "degenerate_element",
            Self::NonManifold(..) => "non_manifold",
            Self::InvalidParameter(_) => "invalid_parameter",
            Self::DimensionMismatch { .. } => "dimension_mismatch",
            Self::NoConvergence { .. } => "no_convergence",
            Self::CoverageGap { .. } => "coverage_gap",
            Self::SourceEvalFailed { .. } => "source_eval_failed",
            Self::InvalidDensity { .. } => "invalid_density",
            Self::InsufficientPoints { .. } => "insufficient_points",
            Self::SingularFit { .. } => "singular_fit",
            Self::ZeroDenominator => "zero_denominator",
            Self::MeshMismatch { .. } => "mesh_mismatch",
            Self::Io(_) => "io",
        }
    }
}
