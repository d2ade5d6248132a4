//! Non-conservative baseline: local weighted linear least-squares fit with
//! compactly supported Wendland C4 weights and an adaptively grown radius.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{RemapError, Result};
use crate::fem::NodalField;
use crate::geometry::{self, Aabb, Point};
use crate::mesh::TriMesh;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RbfConfig<T> {
    /// Ridge regularization, relative to the mean diagonal of the normal
    /// matrix so it is independent of the weight and length scales.
    pub lambda: T,
    /// Starting radius; `None` means twice the source spacing.
    pub initial_radius: Option<T>,
    pub growth: T,
    pub min_support: usize,
}

impl<T: Real> Default for RbfConfig<T> {
    fn default() -> Self {
        Self {
            lambda: T::lit(1e-12),
            initial_radius: None,
            growth: T::lit(1.5),
            min_support: 6,
        }
    }
}

impl<T: Real> RbfConfig<T> {
    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(RemapError::InvalidParameter(m.into()));
        if !(self.lambda >= T::zero()) {
            return bad("lambda must be non-negative");
        }
        if !(self.growth > T::one()) {
            return bad("radius growth factor must exceed 1");
        }
        if self.min_support < 3 {
            return bad("min_support must be at least 3 for a linear fit");
        }
        if let Some(r) = self.initial_radius {
            if !(r > T::zero()) {
                return bad("initial radius must be positive");
            }
        }
        Ok(())
    }
}

/// Wendland C4 kernel `(1 − r)⁶ (35 r² + 18 r + 3) / 3`, zero for `r ≥ 1`.
pub fn c4_weight<T: Real>(r: T) -> T {
    if r >= T::one() {
        return T::zero();
    }
    let s = T::one() - r;
    let s2 = s * s;
    let s6 = s2 * s2 * s2;
    s6 * (T::lit(35.0) * r * r + T::lit(18.0) * r + T::lit(3.0)) / T::lit(3.0)
}

/// Scattered source samples with a uniform-grid spatial index.
#[derive(Clone, Debug)]
pub struct PointCloud<T> {
    coords: Vec<Point<T>>,
    values: Vec<T>,
    bbox: Aabb<T>,
    nx: usize,
    ny: usize,
    cell: [T; 2],
    offsets: Vec<usize>,
    indices: Vec<u32>,
}

impl<T: Real> PointCloud<T> {
    pub fn new(coords: Vec<Point<T>>, values: Vec<T>) -> Result<Self> {
        if coords.len() != values.len() {
            return Err(RemapError::DimensionMismatch {
                expected: coords.len(),
                actual: values.len(),
            });
        }
        let bbox = Aabb::from_points(coords.iter()).ok_or(RemapError::InsufficientPoints {
            needed: 1,
            available: 0,
        })?;
        let n = ((coords.len() as f64 / 2.0).sqrt() as usize).max(1);
        let cell = [
            (bbox.width() / T::from_count(n)).max(T::min_positive_value()),
            (bbox.height() / T::from_count(n)).max(T::min_positive_value()),
        ];
        let mut cloud = Self {
            coords,
            values,
            bbox,
            nx: n,
            ny: n,
            cell,
            offsets: Vec::new(),
            indices: Vec::new(),
        };
        let cells: Vec<usize> = cloud
            .coords
            .iter()
            .map(|&p| {
                let (i, j) = cloud.cell_of(p);
                j * n + i
            })
            .collect();
        let mut offsets = vec![0usize; n * n + 1];
        for &c in &cells {
            offsets[c + 1] += 1;
        }
        for c in 1..offsets.len() {
            offsets[c] += offsets[c - 1];
        }
        let mut fill = offsets.clone();
        let mut indices = vec![0u32; cells.len()];
        for (i, &c) in cells.iter().enumerate() {
            indices[fill[c]] = i as u32;
            fill[c] += 1;
        }
        cloud.offsets = offsets;
        cloud.indices = indices;
        Ok(cloud)
    }

    /// Nodes of a P1 field with their coefficients.
    pub fn from_field(field: &NodalField<T>) -> Result<Self> {
        Self::new(field.mesh().nodes().to_vec(), field.values().to_vec())
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[Point<T>] {
        &self.coords
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Typical spacing `sqrt(bbox area / #points)`.
    pub fn spacing(&self) -> T {
        (self.bbox.area() / T::from_count(self.len())).sqrt()
    }

    fn cell_of(&self, p: Point<T>) -> (usize, usize) {
        let idx = |v: T, n: usize| -> usize {
            let f = v.floor();
            if f <= T::zero() {
                0
            } else {
                f.to_usize().unwrap_or(usize::MAX).min(n - 1)
            }
        };
        (
            idx((p[0] - self.bbox.min[0]) / self.cell[0], self.nx),
            idx((p[1] - self.bbox.min[1]) / self.cell[1], self.ny),
        )
    }

    /// Indices of points strictly within `radius` of `center`, ascending.
    pub fn ball(&self, center: Point<T>, radius: T) -> Vec<usize> {
        let (i0, j0) = self.cell_of([center[0] - radius, center[1] - radius]);
        let (i1, j1) = self.cell_of([center[0] + radius, center[1] + radius]);
        let r2 = radius * radius;
        let mut out = Vec::new();
        for j in j0..=j1 {
            for i in i0..=i1 {
                let c = j * self.nx + i;
                for &k in &self.indices[self.offsets[c]..self.offsets[c + 1]] {
                    if geometry::dist2(self.coords[k as usize], center) < r2 {
                        out.push(k as usize);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Smallest radius `r₀ · growthᵏ` whose open ball holds at least
/// `min_support` points, with those points.
pub fn adapt_radius<T: Real>(
    target: Point<T>,
    cloud: &PointCloud<T>,
    initial_radius: T,
    config: &RbfConfig<T>,
) -> Result<(T, Vec<usize>)> {
    if cloud.len() < config.min_support {
        return Err(RemapError::InsufficientPoints {
            needed: config.min_support,
            available: cloud.len(),
        });
    }
    let mut r = initial_radius;
    loop {
        let support = cloud.ball(target, r);
        if support.len() >= config.min_support {
            return Ok((r, support));
        }
        r *= config.growth;
    }
}

/// Cached neighborhoods and fit coefficients for every target node; the
/// fitted value is a fixed linear combination of the support values.
#[derive(Clone, Debug)]
pub struct RbfOperator<T> {
    offsets: Vec<usize>,
    support: Vec<usize>,
    coeffs: Vec<T>,
    radii: Vec<T>,
    num_sources: usize,
}

const MAX_CONDITION: f64 = 1e14;

impl<T: Real> RbfOperator<T> {
    /// Adapts each target's radius and fits its local polynomial.
    pub fn new(targets: &[Point<T>], cloud: &PointCloud<T>, config: &RbfConfig<T>) -> Result<Self> {
        config.validate()?;
        let r0 = config
            .initial_radius
            .unwrap_or_else(|| T::lit(2.0) * cloud.spacing());
        let fits: Vec<(T, Vec<usize>, Vec<T>)> = targets
            .par_iter()
            .enumerate()
            .map(|(node, &x)| {
                let (radius, support) = adapt_radius(x, cloud, r0, config)?;
                // weighted design rows φ·[1, dx/r, dy/r]; offsets in units of
                // the radius keep the columns comparable
                let design: Vec<[T; 3]> = support
                    .iter()
                    .map(|&k| {
                        let p = cloud.coords()[k];
                        let phi = c4_weight(geometry::dist2(p, x).sqrt() / radius);
                        [phi, phi * (p[0] - x[0]) / radius, phi * (p[1] - x[1]) / radius]
                    })
                    .collect();
                let mut normal = [[T::zero(); 3]; 3];
                for a in &design {
                    for i in 0..3 {
                        for j in 0..3 {
                            normal[i][j] += a[i] * a[j];
                        }
                    }
                }
                let ridge = config.lambda * (normal[0][0] + normal[1][1] + normal[2][2]) / T::lit(3.0);
                for (i, row) in normal.iter_mut().enumerate() {
                    row[i] += ridge;
                }
                let cond = invert3(&normal).map_or(T::infinity(), |inv| condition(&normal, &inv));
                if !(cond <= T::lit(MAX_CONDITION)) {
                    return Err(RemapError::SingularFit {
                        node,
                        condition: cond.as_f64(),
                    });
                }
                let weights = intercept_weights(&design, ridge.sqrt()).ok_or(RemapError::SingularFit {
                    node,
                    condition: f64::INFINITY,
                })?;
                let coeffs = weights.iter().zip(&design).map(|(w, a)| *w * a[0]).collect();
                Ok((radius, support, coeffs))
            })
            .collect::<Result<_>>()?;

        let mut op = Self {
            offsets: vec![0],
            support: Vec::new(),
            coeffs: Vec::new(),
            radii: Vec::with_capacity(fits.len()),
            num_sources: cloud.len(),
        };
        for (radius, support, coeffs) in fits {
            op.support.extend(support);
            op.coeffs.extend(coeffs);
            op.offsets.push(op.support.len());
            op.radii.push(radius);
        }
        Ok(op)
    }

    pub fn radii(&self) -> &[T] {
        &self.radii
    }

    pub fn support(&self, target: usize) -> &[usize] {
        &self.support[self.offsets[target]..self.offsets[target + 1]]
    }

    /// Fitted value at every target point for the source `values`.
    pub fn apply(&self, values: &[T]) -> Result<Vec<T>> {
        if values.len() != self.num_sources {
            return Err(RemapError::DimensionMismatch {
                expected: self.num_sources,
                actual: values.len(),
            });
        }
        Ok((0..self.radii.len())
            .into_par_iter()
            .map(|t| {
                let span = self.offsets[t]..self.offsets[t + 1];
                self.support[span.clone()]
                    .iter()
                    .zip(&self.coeffs[span])
                    .fold(T::zero(), |acc, (&k, &c)| acc + c * values[k])
            })
            .collect())
    }
}

/// Row `g` with `c₀ = gᵀ b` for the least-squares problem with design `a`
/// augmented by `ridge · I`, via twice-orthogonalized Gram–Schmidt.
fn intercept_weights<T: Real>(a: &[[T; 3]], ridge: T) -> Option<Vec<T>> {
    let m = a.len() + 3;
    let mut q: Vec<Vec<T>> = (0..3)
        .map(|j| {
            let mut col: Vec<T> = a.iter().map(|r| r[j]).collect();
            col.extend((0..3).map(|i| if i == j { ridge } else { T::zero() }));
            col
        })
        .collect();
    let dot = |u: &[T], v: &[T]| u.iter().zip(v).fold(T::zero(), |s, (x, y)| s + *x * *y);
    let mut r = [[T::zero(); 3]; 3];
    for j in 0..3 {
        for _ in 0..2 {
            for i in 0..j {
                let c = dot(&q[i], &q[j]);
                r[i][j] += c;
                let (head, tail) = q.split_at_mut(j);
                for (t, h) in tail[0].iter_mut().zip(&head[i]) {
                    *t -= c * *h;
                }
            }
        }
        let norm = dot(&q[j], &q[j]).sqrt();
        if !(norm > T::zero()) {
            return None;
        }
        r[j][j] = norm;
        q[j].iter_mut().for_each(|v| *v /= norm);
    }
    // Rᵀ z = e₀, then g = Q z restricted to the data rows
    let z0 = r[0][0].recip();
    let z1 = -r[0][1] * z0 / r[1][1];
    let z2 = -(r[0][2] * z0 + r[1][2] * z1) / r[2][2];
    Some((0..m - 3).map(|k| q[0][k] * z0 + q[1][k] * z1 + q[2][k] * z2).collect())
}

fn invert3<T: Real>(m: &[[T; 3]; 3]) -> Option<[[T; 3]; 3]> {
    let c00 = m[1][1] * m[2][2] - m[1][2] * m[2][1];
    let c01 = m[1][2] * m[2][0] - m[1][0] * m[2][2];
    let c02 = m[1][0] * m[2][1] - m[1][1] * m[2][0];
    let det = m[0][0] * c00 + m[0][1] * c01 + m[0][2] * c02;
    if !(det.is_finite() && det.abs() > T::zero()) {
        return None;
    }
    let d = det.recip();
    Some([
        [
            c00 * d,
            (m[0][2] * m[2][1] - m[0][1] * m[2][2]) * d,
            (m[0][1] * m[1][2] - m[0][2] * m[1][1]) * d,
        ],
        [
            c01 * d,
            (m[0][0] * m[2][2] - m[0][2] * m[2][0]) * d,
            (m[0][2] * m[1][0] - m[0][0] * m[1][2]) * d,
        ],
        [
            c02 * d,
            (m[0][1] * m[2][0] - m[0][0] * m[2][1]) * d,
            (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * d,
        ],
    ])
}

fn norm1<T: Real>(m: &[[T; 3]; 3]) -> T {
    (0..3)
        .map(|j| m[0][j].abs() + m[1][j].abs() + m[2][j].abs())
        .fold(T::zero(), T::max)
}

fn condition<T: Real>(m: &[[T; 3]; 3], inv: &[[T; 3]; 3]) -> T {
    norm1(m) * norm1(inv)
}

/// Transfers scattered source samples onto the nodes of `target`.
pub fn rbf_transfer<T: Real>(
    target: Arc<TriMesh<T>>,
    cloud: &PointCloud<T>,
    config: &RbfConfig<T>,
) -> Result<NodalField<T>> {
    let op = RbfOperator::new(target.nodes(), cloud, config)?;
    let values = op.apply(cloud.values())?;
    NodalField::new(target, values)
}
