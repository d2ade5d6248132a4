//! Immutable linear triangle meshes with element adjacency.

mod generate;
mod msh;

pub use generate::{generate_square_mesh, Diagonal};
pub(crate) use msh::format_msh;
pub use msh::{load_msh, parse_msh, write_msh};

use crate::error::{RemapError, Result};
use crate::geometry::{self, Aabb, Point, Triangle};
use crate::scalar::Real;

/// Neighbors across the three edges of an element; edge `i` joins local
/// vertices `i` and `(i + 1) % 3`. `None` marks a boundary edge.
pub type Adjacency = [Option<usize>; 3];

/// 2D linear triangle mesh. Elements are stored counterclockwise.
#[derive(Clone, Debug)]
pub struct TriMesh<T> {
    nodes: Vec<Point<T>>,
    elements: Vec<[usize; 3]>,
    adjacency: Vec<Adjacency>,
    areas: Vec<T>,
    bbox: Aabb<T>,
}

impl<T: Real> TriMesh<T> {
    /// Validates and builds a mesh. Clockwise elements are flipped.
    pub fn new(nodes: Vec<Point<T>>, mut elements: Vec<[usize; 3]>) -> Result<Self> {
        if elements.is_empty() {
            return Err(RemapError::EmptyMesh);
        }
        for (e, tri) in elements.iter().enumerate() {
            if let Some(&bad) = tri.iter().find(|&&v| v >= nodes.len()) {
                return Err(RemapError::InvalidParameter(format!(
                    "element {e} references node {bad} but the mesh has {} nodes",
                    nodes.len()
                )));
            }
        }
        let bbox = Aabb::from_points(elements.iter().flatten().map(|&v| &nodes[v]))
            .expect("non-empty element list");
        let diag = bbox.diagonal();
        let min_area = T::lit(1e-14) * diag * diag;

        let mut areas = Vec::with_capacity(elements.len());
        for (e, tri) in elements.iter_mut().enumerate() {
            let corners = [nodes[tri[0]], nodes[tri[1]], nodes[tri[2]]];
            let mut area = geometry::signed_area(&corners);
            if area < T::zero() {
                tri.swap(1, 2);
                area = -area;
            }
            if area <= min_area {
                return Err(RemapError::DegenerateElement {
                    element: e,
                    area: area.as_f64(),
                });
            }
            areas.push(area);
        }
        let adjacency = build_adjacency(&elements)?;
        Ok(Self {
            nodes,
            elements,
            adjacency,
            areas,
            bbox,
        })
    }

    pub fn nodes(&self) -> &[Point<T>] {
        &self.nodes
    }

    pub fn elements(&self) -> &[[usize; 3]] {
        &self.elements
    }

    pub fn adjacency(&self) -> &[Adjacency] {
        &self.adjacency
    }

    pub fn areas(&self) -> &[T] {
        &self.areas
    }

    pub fn bbox(&self) -> Aabb<T> {
        self.bbox
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_elements(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    pub fn triangle(&self, element: usize) -> Triangle<T> {
        let [a, b, c] = self.elements[element];
        [self.nodes[a], self.nodes[b], self.nodes[c]]
    }

    #[inline]
    pub fn centroid(&self, element: usize) -> Point<T> {
        geometry::centroid(&self.triangle(element))
    }

    pub fn total_area(&self) -> T {
        self.areas.iter().copied().sum()
    }

    /// Characteristic element length `sqrt(2 * mean area)`; equals the leg
    /// length `1/n` for a structured right-triangle grid.
    pub fn mean_element_size(&self) -> T {
        (T::lit(2.0) * self.total_area() / T::from_count(self.num_elements())).sqrt()
    }

    /// `∫ ψ_k dΩ` for every node: a third of the area of each incident element.
    pub fn basis_integrals(&self) -> Vec<T> {
        let third = T::one() / T::lit(3.0);
        let mut out = vec![T::zero(); self.num_nodes()];
        for (tri, &area) in self.elements.iter().zip(&self.areas) {
            for &v in tri {
                out[v] += area * third;
            }
        }
        out
    }

    /// Applies `f` to every node to produce nodal values.
    pub fn interpolate<F: Fn(Point<T>) -> T>(&self, f: F) -> Vec<T> {
        self.nodes.iter().map(|&p| f(p)).collect()
    }
}

/// Shared-edge neighbors for each element, from a sorted edge-key list.
pub fn build_adjacency(elements: &[[usize; 3]]) -> Result<Vec<Adjacency>> {
    let mut edges: Vec<((usize, usize), usize, usize)> = Vec::with_capacity(elements.len() * 3);
    for (e, tri) in elements.iter().enumerate() {
        for i in 0..3 {
            let (a, b) = (tri[i], tri[(i + 1) % 3]);
            edges.push(((a.min(b), a.max(b)), e, i));
        }
    }
    edges.sort_unstable();

    let mut adjacency = vec![[None; 3]; elements.len()];
    let mut i = 0;
    while i < edges.len() {
        let mut j = i + 1;
        while j < edges.len() && edges[j].0 == edges[i].0 {
            j += 1;
        }
        match j - i {
            1 => {}
            2 => {
                let (_, e0, l0) = edges[i];
                let (_, e1, l1) = edges[i + 1];
                adjacency[e0][l0] = Some(e1);
                adjacency[e1][l1] = Some(e0);
            }
            _ => {
                let (a, b) = edges[i].0;
                return Err(RemapError::NonManifold(a, b));
            }
        }
        i = j;
    }
    Ok(adjacency)
}
