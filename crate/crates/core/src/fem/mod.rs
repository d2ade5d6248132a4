//! P1 finite elements: basis, quadrature, mass matrix, Galerkin solve.

mod cg;
mod quadrature;
mod sparse;

pub use cg::{cg_solve, CgConfig, CgSolution};
pub use quadrature::QuadratureRule;
pub use sparse::{CsrMatrix, SparseSymMatrix};

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{RemapError, Result};
use crate::mesh::TriMesh;
use crate::parallel;
use crate::scalar::Real;

/// P1 shape function values at a point given by barycentric coordinates.
/// The linear Lagrange basis on a triangle is the barycentric triple itself.
#[inline]
pub fn eval_basis<T: Real>(bary: [T; 3]) -> [T; 3] {
    bary
}

/// Nodal coefficients of a P1 field on a mesh.
#[derive(Clone, Debug)]
pub struct NodalField<T> {
    mesh: Arc<TriMesh<T>>,
    values: Vec<T>,
}

impl<T: Real> NodalField<T> {
    pub fn new(mesh: Arc<TriMesh<T>>, values: Vec<T>) -> Result<Self> {
        if values.len() != mesh.num_nodes() {
            return Err(RemapError::DimensionMismatch {
                expected: mesh.num_nodes(),
                actual: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(RemapError::InvalidParameter(format!(
                "coefficient {i} is not finite"
            )));
        }
        Ok(Self { mesh, values })
    }

    /// Nodal interpolant of `f`.
    pub fn interpolate<F: Fn([T; 2]) -> T>(mesh: Arc<TriMesh<T>>, f: F) -> Result<Self> {
        let values = mesh.interpolate(f);
        Self::new(mesh, values)
    }

    pub fn constant(mesh: Arc<TriMesh<T>>, c: T) -> Self {
        let values = vec![c; mesh.num_nodes()];
        Self { mesh, values }
    }

    pub fn mesh(&self) -> &Arc<TriMesh<T>> {
        &self.mesh
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    /// Field value inside `element` at barycentric coordinates `bary`.
    #[inline]
    pub fn eval_in(&self, element: usize, bary: [T; 3]) -> T {
        let tri = self.mesh.elements()[element];
        let psi = eval_basis(bary);
        psi[0] * self.values[tri[0]] + psi[1] * self.values[tri[1]] + psi[2] * self.values[tri[2]]
    }
}

/// Consistent P1 mass matrix `M_ki = ∫ ψ_k ψ_i`, assembled with the
/// degree-2 rule (exact for products of linears).
pub fn assemble_mass_matrix<T: Real>(mesh: &TriMesh<T>) -> SparseSymMatrix<T> {
    let rule = QuadratureRule::three_point();
    let local: Vec<[[T; 3]; 3]> = mesh
        .areas()
        .par_iter()
        .map(|&area| {
            let mut m = [[T::zero(); 3]; 3];
            for (l, w) in rule.iter() {
                let psi = eval_basis(l);
                for a in 0..3 {
                    for b in 0..3 {
                        m[a][b] += area * w * psi[a] * psi[b];
                    }
                }
            }
            m
        })
        .collect();
    let mut triplets = Vec::with_capacity(9 * mesh.num_elements());
    for (tri, m) in mesh.elements().iter().zip(&local) {
        for a in 0..3 {
            for b in 0..3 {
                triplets.push((tri[a], tri[b], m[a][b]));
            }
        }
    }
    let n = mesh.num_nodes();
    SparseSymMatrix::new(CsrMatrix::from_triplets(n, n, triplets))
        .expect("element matrices are symmetric")
}

/// `∫_Ω f dΩ` by applying `rule` on every element.
pub fn integrate_field<T: Real>(field: &NodalField<T>, rule: &QuadratureRule<T>) -> T {
    let mesh = field.mesh();
    let per_element: Vec<T> = (0..mesh.num_elements())
        .into_par_iter()
        .map(|e| {
            let s = rule
                .iter()
                .fold(T::zero(), |acc, (l, w)| acc + w * field.eval_in(e, l));
            s * mesh.areas()[e]
        })
        .collect();
    parallel::sum(&per_element)
}

/// Mass matrix plus solver settings for a fixed target mesh.
#[derive(Clone, Debug)]
pub struct GalerkinSolver<T> {
    mesh: Arc<TriMesh<T>>,
    mass: SparseSymMatrix<T>,
    cg: CgConfig<T>,
}

impl<T: Real> GalerkinSolver<T> {
    pub fn new(mesh: Arc<TriMesh<T>>, cg: CgConfig<T>) -> Self {
        let mass = assemble_mass_matrix(&mesh);
        Self { mesh, mass, cg }
    }

    pub fn mesh(&self) -> &Arc<TriMesh<T>> {
        &self.mesh
    }

    pub fn mass(&self) -> &SparseSymMatrix<T> {
        &self.mass
    }

    pub fn cg_config(&self) -> &CgConfig<T> {
        &self.cg
    }

    /// Solves `M f = b` for the target coefficients.
    pub fn solve(&self, load: &[T]) -> Result<NodalField<T>> {
        let sol = cg_solve(&self.mass, load, &self.cg)?;
        NodalField::new(self.mesh.clone(), sol.x)
    }
}
