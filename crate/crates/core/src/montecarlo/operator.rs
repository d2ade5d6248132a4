use rayon::prelude::*;

use super::{bary_map, OutsidePolicy, SamplePlan};
use crate::error::{RemapError, Result};
use crate::fem::{eval_basis, CsrMatrix};
use crate::geometry;
use crate::locate::UniformGridLocator;
use crate::mesh::TriMesh;
use crate::scalar::Real;

/// Linear map `B` with `b̂ = B f^s` for a mesh-backed source: every sample
/// point is located once, and its basis products are folded into a sparse
/// target-node × source-node matrix. Applying `B` gives the same estimate as
/// [`super::assemble_load_mc`] with a [`super::MeshBackedField`] up to roundoff.
pub fn build_load_operator<T: Real>(
    target: &TriMesh<T>,
    source_locator: &UniformGridLocator<T>,
    plan: &SamplePlan,
    policy: OutsidePolicy,
) -> Result<CsrMatrix<T>> {
    let source = source_locator.mesh();
    let inv_n = T::from_count(plan.count()).recip();
    let per_element: Vec<Vec<(usize, usize, T)>> = (0..target.num_elements())
        .into_par_iter()
        .map(|e| {
            let tri = target.triangle(e);
            let nodes = target.elements()[e];
            let scale = target.areas()[e] * inv_n;
            // (source node, contributions to the three target nodes)
            let mut cols: Vec<(usize, [T; 3])> = Vec::with_capacity(16);
            for &[xi, eta] in plan.params_for(e).iter() {
                let bary: [T; 3] = bary_map(xi, eta);
                let x = geometry::from_barycentric(&tri, bary);
                let loc = policy.resolve(source_locator, x).ok_or(RemapError::SourceEvalFailed {
                    x: x[0].as_f64(),
                    y: x[1].as_f64(),
                })?;
                let psi = eval_basis(bary);
                let phi = eval_basis(loc.bary);
                for (b, &sn) in source.elements()[loc.element].iter().enumerate() {
                    let slot = match cols.iter().position(|c| c.0 == sn) {
                        Some(i) => i,
                        None => {
                            cols.push((sn, [T::zero(); 3]));
                            cols.len() - 1
                        }
                    };
                    for a in 0..3 {
                        cols[slot].1[a] += psi[a] * phi[b];
                    }
                }
            }
            let mut trip = Vec::with_capacity(cols.len() * 3);
            for (sn, w) in cols {
                for a in 0..3 {
                    trip.push((nodes[a], sn, w[a] * scale));
                }
            }
            Ok(trip)
        })
        .collect::<Result<_>>()?;
    let triplets = per_element.into_iter().flatten().collect();
    Ok(CsrMatrix::from_triplets(
        target.num_nodes(),
        source.num_nodes(),
        triplets,
    ))
}
