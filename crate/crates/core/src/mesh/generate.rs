use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::TriMesh;
use crate::error::{RemapError, Result};
use crate::geometry;
use crate::scalar::Real;

/// How each grid square is split into two triangles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Diagonal {
    /// `\`: from the top-left to the bottom-right corner.
    Left,
    /// `/`: from the bottom-left to the top-right corner.
    Right,
    /// Checkerboard of `Left` and `Right`.
    Alternating,
}

impl std::str::FromStr for Diagonal {
    type Err = RemapError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Self::Left),
            "right" => Ok(Self::Right),
            "alternating" | "alt" => Ok(Self::Alternating),
            other => Err(RemapError::InvalidParameter(format!(
                "unknown diagonal '{other}' (expected left, right or alternating)"
            ))),
        }
    }
}

impl std::fmt::Display for Diagonal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Left => "left",
            Self::Right => "right",
            Self::Alternating => "alternating",
        })
    }
}

/// Structured triangulation of the unit square with `2 n²` elements.
///
/// Interior nodes are displaced by up to `perturbation · h` per coordinate
/// (`h = 1/n`); boundary nodes stay put so the domain is exactly `[0, 1]²`.
pub fn generate_square_mesh<T: Real>(
    n: usize,
    perturbation: f64,
    seed: u64,
    diagonal: Diagonal,
) -> Result<TriMesh<T>> {
    if n == 0 {
        return Err(RemapError::InvalidParameter("subdivision count must be >= 1".into()));
    }
    if !(0.0..0.5).contains(&perturbation) {
        return Err(RemapError::InvalidParameter(format!(
            "perturbation {perturbation} outside [0, 0.5)"
        )));
    }
    let h = 1.0 / n as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nodes = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            let mut x = i as f64 * h;
            let mut y = j as f64 * h;
            let interior = i > 0 && i < n && j > 0 && j < n;
            if interior && perturbation > 0.0 {
                x += perturbation * h * rng.gen_range(-1.0..1.0);
                y += perturbation * h * rng.gen_range(-1.0..1.0);
            }
            nodes.push([T::lit(x), T::lit(y)]);
        }
    }

    let id = |i: usize, j: usize| j * (n + 1) + i;
    let mut elements = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            let (p00, p10, p11, p01) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            let right = match diagonal {
                Diagonal::Right => true,
                Diagonal::Left => false,
                Diagonal::Alternating => (i + j) % 2 == 0,
            };
            if right {
                elements.push([p00, p10, p11]);
                elements.push([p00, p11, p01]);
            } else {
                elements.push([p00, p10, p01]);
                elements.push([p10, p11, p01]);
            }
        }
    }

    for (e, tri) in elements.iter().enumerate() {
        let corners = [nodes[tri[0]], nodes[tri[1]], nodes[tri[2]]];
        if geometry::signed_area(&corners) <= T::zero() {
            return Err(RemapError::InvalidParameter(format!(
                "perturbation {perturbation} with seed {seed} inverts element {e}"
            )));
        }
    }
    TriMesh::new(nodes, elements)
}
