//! Local supermesh construction and intersection-based load assembly.

mod clip;

pub use clip::{clip_triangles, ConvexPolygon};

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::error::{RemapError, Result};
use crate::fem::{eval_basis, NodalField, QuadratureRule};
use crate::geometry::{self, AffineInverse, Point};
use crate::locate::UniformGridLocator;
use crate::mesh::TriMesh;
use crate::parallel;
use crate::scalar::Real;

/// Overlap of one target element with one source element.
#[derive(Clone, Debug, PartialEq)]
pub struct Intersection<T> {
    pub source: usize,
    pub polygon: ConvexPolygon<T>,
}

/// For every target element, the source elements it overlaps with positive
/// area (sorted by source index) and the overlap polygons.
#[derive(Clone, Debug)]
pub struct IntersectionSet<T> {
    offsets: Vec<usize>,
    entries: Vec<Intersection<T>>,
}

impl<T: Real> IntersectionSet<T> {
    pub fn from_lists(lists: Vec<Vec<Intersection<T>>>) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        offsets.push(0);
        let mut entries = Vec::with_capacity(lists.iter().map(Vec::len).sum());
        for list in lists {
            entries.extend(list);
            offsets.push(entries.len());
        }
        Self { offsets, entries }
    }

    pub fn num_targets(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn num_intersections(&self) -> usize {
        self.entries.len()
    }

    pub fn for_target(&self, t: usize) -> &[Intersection<T>] {
        &self.entries[self.offsets[t]..self.offsets[t + 1]]
    }

    /// Source element indices overlapping target element `t`.
    pub fn sources(&self, t: usize) -> Vec<usize> {
        self.for_target(t).iter().map(|i| i.source).collect()
    }

    pub fn covered_area(&self, t: usize) -> T {
        self.for_target(t)
            .iter()
            .fold(T::zero(), |acc, i| acc + i.polygon.area())
    }

    pub fn total_area(&self) -> T {
        let per: Vec<T> = (0..self.num_targets()).map(|t| self.covered_area(t)).collect();
        parallel::sum(&per)
    }
}

/// Adjacency-driven search for all source elements overlapping each target
/// element. Each search is seeded by locating the target centroid in the
/// source mesh and expands breadth-first through neighbors of overlapping
/// elements only.
pub fn find_intersections<T: Real>(
    target: &TriMesh<T>,
    source: &TriMesh<T>,
    source_locator: &UniformGridLocator<T>,
) -> Result<IntersectionSet<T>> {
    let lists: Vec<Vec<Intersection<T>>> = (0..target.num_elements())
        .into_par_iter()
        .map(|t| search_one(target, source, source_locator, t))
        .collect();
    let slack = T::one() - T::tol(1e-6);
    for (t, list) in lists.iter().enumerate() {
        let covered = list.iter().fold(T::zero(), |a, i| a + i.polygon.area());
        let area = target.areas()[t];
        if covered < slack * area {
            return Err(RemapError::CoverageGap {
                element: t,
                covered: covered.as_f64(),
                area: area.as_f64(),
            });
        }
    }
    Ok(IntersectionSet::from_lists(lists))
}

fn search_one<T: Real>(
    target: &TriMesh<T>,
    source: &TriMesh<T>,
    locator: &UniformGridLocator<T>,
    t: usize,
) -> Vec<Intersection<T>> {
    let tri = target.triangle(t);
    let c = geometry::centroid(&tri);
    let seed = locator
        .locate(c)
        .map(|loc| loc.element)
        .unwrap_or_else(|| locator.nearest_element(c));

    let mut found = Vec::new();
    let mut visited = vec![seed];
    let mut queue = VecDeque::from([seed]);
    while let Some(s) = queue.pop_front() {
        let Some(polygon) = clip_triangles(&tri, &source.triangle(s)) else {
            continue;
        };
        found.push(Intersection { source: s, polygon });
        for n in source.adjacency()[s].iter().flatten() {
            if !visited.contains(n) {
                visited.push(*n);
                queue.push_back(*n);
            }
        }
    }
    found.sort_by_key(|i| i.source);
    found
}

/// Calls `visit(source, target_bary, source_bary, weight)` for every
/// quadrature point of the fan-triangulated overlaps of target element `t`.
pub fn visit_overlap_quadrature<T: Real, F>(
    target: &TriMesh<T>,
    source: &TriMesh<T>,
    intersections: &IntersectionSet<T>,
    rule: &QuadratureRule<T>,
    t: usize,
    mut visit: F,
) where
    F: FnMut(usize, [T; 3], [T; 3], T),
{
    let t_inv = AffineInverse::new(&target.triangle(t));
    for inter in intersections.for_target(t) {
        let s_inv = AffineInverse::new(&source.triangle(inter.source));
        let mut poly = inter.polygon.clone();
        poly.sort_ccw();
        for sub in poly.fan() {
            let area = geometry::signed_area(&sub);
            if area <= T::zero() {
                continue;
            }
            for (l, w) in rule.iter() {
                let x: Point<T> = geometry::from_barycentric(&sub, l);
                visit(inter.source, t_inv.barycentric(x), s_inv.barycentric(x), area * w);
            }
        }
    }
}

/// Load vector `b_k = ∫ f^s ψ_k` integrated exactly (up to quadrature
/// degree) over the overlap polygons of each target element.
pub fn assemble_load_intersection<T: Real>(
    target: &TriMesh<T>,
    source_field: &NodalField<T>,
    intersections: &IntersectionSet<T>,
    rule: &QuadratureRule<T>,
) -> Result<Vec<T>> {
    if intersections.num_targets() != target.num_elements() {
        return Err(RemapError::DimensionMismatch {
            expected: target.num_elements(),
            actual: intersections.num_targets(),
        });
    }
    let source = source_field.mesh();
    let local: Vec<[T; 3]> = (0..target.num_elements())
        .into_par_iter()
        .map(|t| {
            let mut b = [T::zero(); 3];
            visit_overlap_quadrature(target, source, intersections, rule, t, |s, lt, ls, w| {
                let fs = source_field.eval_in(s, ls);
                let psi = eval_basis(lt);
                for a in 0..3 {
                    b[a] += w * fs * psi[a];
                }
            });
            b
        })
        .collect();
    Ok(parallel::scatter_elements(
        target.elements(),
        &local,
        target.num_nodes(),
    ))
}

/// The fan sub-triangles of every overlap as an MSH 2.2 document, for
/// visual inspection.
pub fn supermesh_msh<T: Real>(intersections: &IntersectionSet<T>) -> String {
    let mut nodes = Vec::new();
    let mut elements = Vec::new();
    for t in 0..intersections.num_targets() {
        for inter in intersections.for_target(t) {
            let mut poly = inter.polygon.clone();
            poly.sort_ccw();
            let min_area = T::tol(1e-12) * poly.area();
            for sub in poly.fan().filter(|s| geometry::signed_area(s) > min_area) {
                let base = nodes.len();
                nodes.extend_from_slice(&sub);
                elements.push([base, base + 1, base + 2]);
            }
        }
    }
    crate::mesh::format_msh(&nodes, &elements)
}
