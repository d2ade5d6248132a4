//! Reusable source-to-target operators split into an initialization phase
//! holding all geometric work and a cheap online phase that maps nodal
//! values.

use std::sync::Arc;

use crate::error::{RemapError, Result};
use crate::fem::{CgConfig, CsrMatrix, GalerkinSolver, NodalField, QuadratureRule};
use crate::intersect::{assemble_load_intersection, find_intersections, IntersectionSet};
use crate::locate::UniformGridLocator;
use crate::mesh::TriMesh;
use crate::montecarlo::{build_load_operator, OutsidePolicy, SamplePlan};
use crate::rbf::{PointCloud, RbfConfig, RbfOperator};
use crate::scalar::Real;

pub trait FieldTransfer<T: Real>: Send + Sync {
    fn source_mesh(&self) -> &Arc<TriMesh<T>>;
    fn target_mesh(&self) -> &Arc<TriMesh<T>>;

    /// Online step: source coefficients in, target coefficients out.
    fn apply(&self, source: &NodalField<T>) -> Result<NodalField<T>>;
}

fn check_source<T: Real>(expected: &Arc<TriMesh<T>>, field: &NodalField<T>) -> Result<()> {
    let m = field.mesh();
    if Arc::ptr_eq(expected, m)
        || (expected.elements() == m.elements() && expected.nodes() == m.nodes())
    {
        Ok(())
    } else {
        Err(RemapError::MeshMismatch {
            left: expected.num_nodes(),
            right: m.num_nodes(),
        })
    }
}

/// Galerkin projection with the load assembled on the supermesh.
#[derive(Clone, Debug)]
pub struct MiTransfer<T> {
    source: Arc<TriMesh<T>>,
    intersections: IntersectionSet<T>,
    rule: QuadratureRule<T>,
    solver: GalerkinSolver<T>,
}

impl<T: Real> MiTransfer<T> {
    pub fn new(
        source: Arc<TriMesh<T>>,
        target: Arc<TriMesh<T>>,
        rule: QuadratureRule<T>,
        cg: CgConfig<T>,
    ) -> Result<Self> {
        let locator = UniformGridLocator::new(source.clone());
        let intersections = find_intersections(&target, &source, &locator)?;
        Ok(Self {
            source,
            intersections,
            rule,
            solver: GalerkinSolver::new(target, cg),
        })
    }

    pub fn intersections(&self) -> &IntersectionSet<T> {
        &self.intersections
    }

    pub fn solver(&self) -> &GalerkinSolver<T> {
        &self.solver
    }
}

impl<T: Real> FieldTransfer<T> for MiTransfer<T> {
    fn source_mesh(&self) -> &Arc<TriMesh<T>> {
        &self.source
    }

    fn target_mesh(&self) -> &Arc<TriMesh<T>> {
        self.solver.mesh()
    }

    fn apply(&self, source: &NodalField<T>) -> Result<NodalField<T>> {
        check_source(&self.source, source)?;
        let load = assemble_load_intersection(self.solver.mesh(), source, &self.intersections, &self.rule)?;
        self.solver.solve(&load)
    }
}

/// Galerkin projection with a sampled load vector. Sample points are
/// located once; the estimator is then the sparse linear map `b̂ = B f^s`.
#[derive(Clone, Debug)]
pub struct McTransfer<T> {
    source: Arc<TriMesh<T>>,
    plan: SamplePlan,
    operator: CsrMatrix<T>,
    solver: GalerkinSolver<T>,
}

impl<T: Real> McTransfer<T> {
    pub fn new(
        source: Arc<TriMesh<T>>,
        target: Arc<TriMesh<T>>,
        plan: SamplePlan,
        policy: OutsidePolicy,
        cg: CgConfig<T>,
    ) -> Result<Self> {
        let locator = UniformGridLocator::new(source.clone());
        let operator = build_load_operator(&target, &locator, &plan, policy)?;
        Ok(Self {
            source,
            plan,
            operator,
            solver: GalerkinSolver::new(target, cg),
        })
    }

    pub fn plan(&self) -> &SamplePlan {
        &self.plan
    }

    pub fn operator(&self) -> &CsrMatrix<T> {
        &self.operator
    }
}

impl<T: Real> FieldTransfer<T> for McTransfer<T> {
    fn source_mesh(&self) -> &Arc<TriMesh<T>> {
        &self.source
    }

    fn target_mesh(&self) -> &Arc<TriMesh<T>> {
        self.solver.mesh()
    }

    fn apply(&self, source: &NodalField<T>) -> Result<NodalField<T>> {
        check_source(&self.source, source)?;
        let load = self.operator.mul_vec(source.values())?;
        self.solver.solve(&load)
    }
}

/// Local weighted least-squares fit at each target node over source nodes.
#[derive(Clone, Debug)]
pub struct RbfTransfer<T> {
    source: Arc<TriMesh<T>>,
    target: Arc<TriMesh<T>>,
    operator: RbfOperator<T>,
}

impl<T: Real> RbfTransfer<T> {
    /// An unset initial radius defaults to twice the source mean element size.
    pub fn new(source: Arc<TriMesh<T>>, target: Arc<TriMesh<T>>, config: RbfConfig<T>) -> Result<Self> {
        let config = RbfConfig {
            initial_radius: Some(
                config
                    .initial_radius
                    .unwrap_or_else(|| T::lit(2.0) * source.mean_element_size()),
            ),
            ..config
        };
        let cloud = PointCloud::new(source.nodes().to_vec(), vec![T::zero(); source.num_nodes()])?;
        let operator = RbfOperator::new(target.nodes(), &cloud, &config)?;
        Ok(Self {
            source,
            target,
            operator,
        })
    }

    pub fn operator(&self) -> &RbfOperator<T> {
        &self.operator
    }
}

impl<T: Real> FieldTransfer<T> for RbfTransfer<T> {
    fn source_mesh(&self) -> &Arc<TriMesh<T>> {
        &self.source
    }

    fn target_mesh(&self) -> &Arc<TriMesh<T>> {
        &self.target
    }

    fn apply(&self, source: &NodalField<T>) -> Result<NodalField<T>> {
        check_source(&self.source, source)?;
        NodalField::new(self.target.clone(), self.operator.apply(source.values())?)
    }
}
