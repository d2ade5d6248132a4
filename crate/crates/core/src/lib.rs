//! Field transfer between non-matching 2D triangle meshes.
//!
//! Three transfer operators sit on a shared mesh and finite element stack:
//!
//! * [`MiTransfer`] assembles the Galerkin load vector exactly over the
//!   intersections of target and source elements (the supermesh),
//! * [`McTransfer`] estimates the same load vector from pointwise samples of
//!   the source, uniform or Sobol, without needing source topology,
//! * [`RbfTransfer`] fits a weighted local linear polynomial around each
//!   target node; it is cheap but not conservative.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the `*64` aliases
//! below cover the common case.

pub mod error;
pub mod fem;
pub mod geometry;
pub mod intersect;
pub mod locate;
pub mod mesh;
pub mod metrics;
pub mod montecarlo;
pub mod parallel;
pub mod rbf;
pub mod scalar;
pub mod transfer;

pub use error::{RemapError, Result};
pub use fem::{CgConfig, GalerkinSolver, NodalField, QuadratureRule};
pub use intersect::IntersectionSet;
pub use locate::UniformGridLocator;
pub use mesh::{generate_square_mesh, Diagonal, TriMesh};
pub use metrics::ErrorReport;
pub use montecarlo::{SamplePlan, SamplingMode};
pub use rbf::RbfConfig;
pub use scalar::Real;
pub use transfer::{FieldTransfer, McTransfer, MiTransfer, RbfTransfer};

pub type TriMesh64 = TriMesh<f64>;
pub type TriMesh32 = TriMesh<f32>;
pub type NodalField64 = NodalField<f64>;
pub type NodalField32 = NodalField<f32>;
pub type IntersectionSet64 = IntersectionSet<f64>;
pub type Locator64 = UniformGridLocator<f64>;
pub type MiTransfer64 = MiTransfer<f64>;
pub type McTransfer64 = McTransfer<f64>;
pub type RbfTransfer64 = RbfTransfer<f64>;
pub type MiTransfer32 = MiTransfer<f32>;
