//! Point location on a triangle mesh through a uniform background grid.

use std::sync::Arc;

use crate::geometry::{self, Point};
use crate::mesh::TriMesh;
use crate::scalar::Real;

/// Element containing a query point and the point's barycentric coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointLocation<T> {
    pub element: usize,
    pub bary: [T; 3],
}

/// Uniform grid over the mesh bounding box. Each cell lists, in ascending
/// order, every element whose (slightly padded) bounding box overlaps it.
#[derive(Clone, Debug)]
pub struct UniformGridLocator<T> {
    mesh: Arc<TriMesh<T>>,
    nx: usize,
    ny: usize,
    origin: Point<T>,
    cell: [T; 2],
    cell_offsets: Vec<usize>,
    cell_elements: Vec<u32>,
    centroids: Vec<Point<T>>,
}

impl<T: Real> UniformGridLocator<T> {
    /// Grid with `nx = ny = int(L · sqrt(#elements))`, `L` the longest
    /// bounding-box edge.
    pub fn new(mesh: Arc<TriMesh<T>>) -> Self {
        let l = mesh.bbox().longest_edge().as_f64();
        let n = (l * (mesh.num_elements() as f64).sqrt()) as usize;
        Self::with_cells(mesh, n.max(1), n.max(1))
    }

    pub fn with_cells(mesh: Arc<TriMesh<T>>, nx: usize, ny: usize) -> Self {
        let nx = nx.max(1);
        let ny = ny.max(1);
        let bb = mesh.bbox();
        let cell = [
            (bb.width() / T::from_count(nx)).max(T::min_positive_value()),
            (bb.height() / T::from_count(ny)).max(T::min_positive_value()),
        ];
        let pad = T::tol(1e-12) * bb.diagonal();

        let mut locator = Self {
            nx,
            ny,
            origin: bb.min,
            cell,
            cell_offsets: Vec::new(),
            cell_elements: Vec::new(),
            centroids: (0..mesh.num_elements()).map(|e| mesh.centroid(e)).collect(),
            mesh,
        };

        // counting sort into cells: ascending element order within each cell
        let ranges: Vec<_> = (0..locator.mesh.num_elements())
            .map(|e| {
                let tri = locator.mesh.triangle(e);
                let bb = geometry::Aabb::from_points(tri.iter()).expect("three points");
                let lo = locator.cell_of([bb.min[0] - pad, bb.min[1] - pad]);
                let hi = locator.cell_of([bb.max[0] + pad, bb.max[1] + pad]);
                (lo, hi)
            })
            .collect();
        let mut counts = vec![0usize; nx * ny + 1];
        for &((i0, j0), (i1, j1)) in &ranges {
            for j in j0..=j1 {
                for i in i0..=i1 {
                    counts[j * nx + i + 1] += 1;
                }
            }
        }
        for c in 1..counts.len() {
            counts[c] += counts[c - 1];
        }
        let mut fill = counts.clone();
        let mut cell_elements = vec![0u32; counts[nx * ny]];
        for (e, &((i0, j0), (i1, j1))) in ranges.iter().enumerate() {
            for j in j0..=j1 {
                for i in i0..=i1 {
                    let c = j * nx + i;
                    cell_elements[fill[c]] = e as u32;
                    fill[c] += 1;
                }
            }
        }
        locator.cell_offsets = counts;
        locator.cell_elements = cell_elements;
        locator
    }

    pub fn mesh(&self) -> &Arc<TriMesh<T>> {
        &self.mesh
    }

    pub fn grid_size(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    /// Cell indices of `p`, clamped to the grid.
    fn cell_of(&self, p: Point<T>) -> (usize, usize) {
        let clamp = |v: T, n: usize| -> usize {
            let f = v.floor();
            if f <= T::zero() {
                0
            } else {
                f.to_usize().unwrap_or(usize::MAX).min(n - 1)
            }
        };
        (
            clamp((p[0] - self.origin[0]) / self.cell[0], self.nx),
            clamp((p[1] - self.origin[1]) / self.cell[1], self.ny),
        )
    }

    /// Elements whose padded bounding box overlaps the grid cell `(i, j)`.
    pub fn cell_candidates(&self, i: usize, j: usize) -> &[u32] {
        let c = j * self.nx + i;
        &self.cell_elements[self.cell_offsets[c]..self.cell_offsets[c + 1]]
    }

    /// Containing element with barycentrics, or `None` when the point is
    /// outside every element by more than the barycentric slack `1e-12`.
    /// Points on shared edges resolve to the lowest element index.
    pub fn locate(&self, p: Point<T>) -> Option<PointLocation<T>> {
        let bb = self.mesh.bbox();
        if !bb.contains(p, T::tol(1e-12) * bb.diagonal()) {
            return None;
        }
        let eps = T::tol(1e-12);
        let (i, j) = self.cell_of(p);
        self.cell_candidates(i, j).iter().find_map(|&e| {
            let e = e as usize;
            let bary = geometry::barycentric(&self.mesh.triangle(e), p);
            (bary.iter().all(|&l| l >= -eps)).then_some(PointLocation { element: e, bary })
        })
    }

    /// Element whose centroid is closest to `p` (lowest index on ties),
    /// searched over expanding rings of grid cells.
    pub fn nearest_element(&self, p: Point<T>) -> usize {
        let (ci, cj) = self.cell_of(p);
        let step = self.cell[0].min(self.cell[1]);
        let mut best: Option<(T, usize)> = None;
        let max_ring = self.nx.max(self.ny);
        for ring in 0..=max_ring {
            if let Some((d2, _)) = best {
                // every cell in this ring is at least (ring - 1) cells away
                let bound = step * T::from_count(ring.saturating_sub(1));
                if bound * bound > d2 {
                    break;
                }
            }
            let (i0, i1) = (ci.saturating_sub(ring), (ci + ring).min(self.nx - 1));
            let (j0, j1) = (cj.saturating_sub(ring), (cj + ring).min(self.ny - 1));
            for j in j0..=j1 {
                for i in i0..=i1 {
                    let on_ring = i.abs_diff(ci) == ring || j.abs_diff(cj) == ring;
                    if !on_ring {
                        continue;
                    }
                    for &e in self.cell_candidates(i, j) {
                        let e = e as usize;
                        let d2 = geometry::dist2(self.centroids[e], p);
                        let better = match best {
                            None => true,
                            Some((bd, be)) => d2 < bd || (d2 == bd && e < be),
                        };
                        if better {
                            best = Some((d2, e));
                        }
                    }
                }
            }
        }
        best.map(|(_, e)| e).expect("mesh has at least one element")
    }

    /// `locate`, falling back to the nearest element with barycentrics
    /// clamped onto it.
    pub fn locate_or_snap(&self, p: Point<T>) -> PointLocation<T> {
        self.locate(p).unwrap_or_else(|| {
            let element = self.nearest_element(p);
            let raw = geometry::barycentric(&self.mesh.triangle(element), p);
            PointLocation {
                element,
                bary: clamp_barycentric(raw),
            }
        })
    }
}

/// Clips negative coordinates to zero and renormalizes.
pub fn clamp_barycentric<T: Real>(l: [T; 3]) -> [T; 3] {
    let c = l.map(|v| v.max(T::zero()));
    let s = c[0] + c[1] + c[2];
    if s > T::zero() {
        c.map(|v| v / s)
    } else {
        let third = T::one() / T::lit(3.0);
        [third; 3]
    }
}
