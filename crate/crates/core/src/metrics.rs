//! Accuracy and conservation errors, both on the supermesh and on DoFs.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{RemapError, Result};
use crate::fem::{integrate_field, NodalField, QuadratureRule};
use crate::intersect::{visit_overlap_quadrature, IntersectionSet};
use crate::parallel;
use crate::scalar::Real;

fn check_pair<T: Real>(
    source: &NodalField<T>,
    target: &NodalField<T>,
    intersections: &IntersectionSet<T>,
) -> Result<()> {
    let n = target.mesh().num_elements();
    if intersections.num_targets() != n {
        return Err(RemapError::DimensionMismatch {
            expected: n,
            actual: intersections.num_targets(),
        });
    }
    let ns = source.mesh().num_elements();
    let max_source = (0..n)
        .flat_map(|t| intersections.for_target(t).iter().map(|i| i.source))
        .max();
    if max_source.is_some_and(|s| s >= ns) {
        return Err(RemapError::MeshMismatch {
            left: ns,
            right: max_source.unwrap_or(0) + 1,
        });
    }
    Ok(())
}

/// Per-target-element sums of `g(f^s, f^t) · w` over the supermesh, reduced
/// in element order.
fn supermesh_integrals<T: Real, const K: usize>(
    source: &NodalField<T>,
    target: &NodalField<T>,
    intersections: &IntersectionSet<T>,
    integrand: impl Fn(T, T) -> [T; K] + Sync,
) -> Result<[T; K]> {
    check_pair(source, target, intersections)?;
    let rule = QuadratureRule::three_point();
    let tmesh = target.mesh();
    let smesh = source.mesh();
    let per_element: Vec<[T; K]> = (0..tmesh.num_elements())
        .into_par_iter()
        .map(|t| {
            let mut acc = [T::zero(); K];
            visit_overlap_quadrature(tmesh, smesh, intersections, &rule, t, |s, lt, ls, w| {
                let g = integrand(source.eval_in(s, ls), target.eval_in(t, lt));
                for k in 0..K {
                    acc[k] += w * g[k];
                }
            });
            acc
        })
        .collect();
    let mut out = [T::zero(); K];
    for k in 0..K {
        let column: Vec<T> = per_element.iter().map(|a| a[k]).collect();
        out[k] = parallel::sum(&column);
    }
    Ok(out)
}

/// `‖f^s − f^t‖_{L²}` evaluated on the supermesh.
pub fn supermesh_l2_distance<T: Real>(
    source: &NodalField<T>,
    target: &NodalField<T>,
    intersections: &IntersectionSet<T>,
) -> Result<T> {
    let [d] = supermesh_integrals(source, target, intersections, |s, t| [(s - t) * (s - t)])?;
    Ok(d.sqrt())
}

/// Relative L² error `‖f^s − f^t‖ / ‖f^s‖` on the supermesh.
pub fn supermesh_l2_error<T: Real>(
    source: &NodalField<T>,
    target: &NodalField<T>,
    intersections: &IntersectionSet<T>,
) -> Result<T> {
    let [num, den] =
        supermesh_integrals(source, target, intersections, |s, t| [(s - t) * (s - t), s * s])?;
    if den <= T::zero() {
        return Err(RemapError::ZeroDenominator);
    }
    Ok((num / den).sqrt())
}

/// Relative mass error `|∫f^s − ∫f^t| / |∫f^s|` on the supermesh.
pub fn supermesh_mass_error<T: Real>(
    source: &NodalField<T>,
    target: &NodalField<T>,
    intersections: &IntersectionSet<T>,
) -> Result<T> {
    let [ms, mt] = supermesh_integrals(source, target, intersections, |s, t| [s, t])?;
    if ms == T::zero() {
        return Err(RemapError::ZeroDenominator);
    }
    Ok(((ms - mt) / ms).abs())
}

fn same_mesh<T: Real>(a: &NodalField<T>, b: &NodalField<T>) -> Result<()> {
    let (ma, mb) = (a.mesh(), b.mesh());
    if Arc::ptr_eq(ma, mb)
        || (ma.num_nodes() == mb.num_nodes() && ma.elements() == mb.elements() && ma.nodes() == mb.nodes())
    {
        Ok(())
    } else {
        Err(RemapError::MeshMismatch {
            left: ma.num_nodes(),
            right: mb.num_nodes(),
        })
    }
}

/// Relative discrete error `‖f − f_ref‖₂ / ‖f_ref‖₂` over the DoFs.
pub fn dof_l2_error<T: Real>(approx: &NodalField<T>, reference: &NodalField<T>) -> Result<T> {
    same_mesh(approx, reference)?;
    let diff: Vec<T> = approx
        .values()
        .iter()
        .zip(reference.values())
        .map(|(a, r)| *a - *r)
        .collect();
    let den = parallel::norm2(reference.values());
    if den == T::zero() {
        return Err(RemapError::ZeroDenominator);
    }
    Ok(parallel::norm2(&diff) / den)
}

/// Relative mass error `|∫f − ∫f_ref| / |∫f_ref|` by quadrature on the
/// shared mesh.
pub fn mesh_mass_error<T: Real>(
    approx: &NodalField<T>,
    reference: &NodalField<T>,
    rule: &QuadratureRule<T>,
) -> Result<T> {
    same_mesh(approx, reference)?;
    let r = integrate_field(reference, rule);
    if r == T::zero() {
        return Err(RemapError::ZeroDenominator);
    }
    Ok(((integrate_field(approx, rule) - r) / r).abs())
}

/// One row of error output, with the run's metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReport {
    pub method: String,
    pub h_source: f64,
    pub h_target: f64,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub realization: Option<usize>,
    pub l2: Option<f64>,
    pub mass_supermesh: Option<f64>,
    pub dof_l2: Option<f64>,
    pub mass_mesh: Option<f64>,
}

impl ErrorReport {
    pub const CSV_HEADER: &'static str =
        "method,h_source,h_target,samples,seed,realization,e_l2,e_mass_sm,e_dof_l2,e_mass_m1";

    pub fn new(method: impl Into<String>, h_source: f64, h_target: f64) -> Self {
        Self {
            method: method.into(),
            h_source,
            h_target,
            samples: None,
            seed: None,
            realization: None,
            l2: None,
            mass_supermesh: None,
            dof_l2: None,
            mass_mesh: None,
        }
    }

    /// All present error entries are finite and non-negative.
    pub fn is_valid(&self) -> bool {
        [self.l2, self.mass_supermesh, self.dof_l2, self.mass_mesh]
            .iter()
            .flatten()
            .all(|v| v.is_finite() && *v >= 0.0)
    }

    pub fn csv_row(&self) -> String {
        self.to_string()
    }
}

fn opt<V: fmt::Display>(v: &Option<V>) -> String {
    v.as_ref().map_or(String::new(), |v| v.to_string())
}

fn opt_e(v: &Option<f64>) -> String {
    v.map_or(String::new(), |v| format!("{v:.12e}"))
}

impl fmt::Display for ErrorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{:.12e},{:.12e},{},{},{},{},{},{},{}",
            self.method,
            self.h_source,
            self.h_target,
            opt(&self.samples),
            opt(&self.seed),
            opt(&self.realization),
            opt_e(&self.l2),
            opt_e(&self.mass_supermesh),
            opt_e(&self.dof_l2),
            opt_e(&self.mass_mesh),
        )
    }
}
