use arrayvec::ArrayVec;

use crate::geometry::{self, Point, Triangle};
use crate::scalar::Real;

/// Clipping two triangles yields at most six vertices; intermediate passes
/// may carry one more before duplicates are dropped.
const MAX_VERTICES: usize = 8;

/// Convex polygon with counterclockwise vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexPolygon<T> {
    vertices: ArrayVec<Point<T>, MAX_VERTICES>,
}

impl<T: Real> ConvexPolygon<T> {
    pub fn from_triangle(tri: &Triangle<T>) -> Self {
        Self {
            vertices: tri.iter().copied().collect(),
        }
    }

    pub fn vertices(&self) -> &[Point<T>] {
        &self.vertices
    }

    /// Shoelace area (positive for CCW order).
    pub fn area(&self) -> T {
        let v = &self.vertices;
        let n = v.len();
        if n < 3 {
            return T::zero();
        }
        let mut twice = T::zero();
        for i in 0..n {
            let (a, b) = (v[i], v[(i + 1) % n]);
            twice += a[0] * b[1] - a[1] * b[0];
        }
        twice * T::lit(0.5)
    }

    pub fn vertex_centroid(&self) -> Point<T> {
        let n = T::from_count(self.vertices.len());
        let (sx, sy) = self
            .vertices
            .iter()
            .fold((T::zero(), T::zero()), |(x, y), p| (x + p[0], y + p[1]));
        [sx / n, sy / n]
    }

    /// Reorders vertices counterclockwise by angle about the vertex centroid.
    pub fn sort_ccw(&mut self) {
        let c = self.vertex_centroid();
        self.vertices.sort_by(|a, b| {
            let ta = (a[1] - c[1]).atan2(a[0] - c[0]);
            let tb = (b[1] - c[1]).atan2(b[0] - c[0]);
            ta.partial_cmp(&tb).unwrap_or(std::cmp::Ordering::Equal)
        });
    }

    /// Fan triangulation anchored at the first vertex.
    pub fn fan(&self) -> impl Iterator<Item = Triangle<T>> + '_ {
        let v = &self.vertices;
        (1..v.len().saturating_sub(1)).map(move |i| [v[0], v[i], v[i + 1]])
    }

    /// Every turn is a left turn, up to `tol · scale²`.
    pub fn is_convex_ccw(&self, tol: T) -> bool {
        let v = &self.vertices;
        let n = v.len();
        n >= 3 && (0..n).all(|i| geometry::cross(v[i], v[(i + 1) % n], v[(i + 2) % n]) >= -tol)
    }
}

fn clip_half_plane<T: Real>(
    poly: &ArrayVec<Point<T>, MAX_VERTICES>,
    a: Point<T>,
    b: Point<T>,
) -> ArrayVec<Point<T>, MAX_VERTICES> {
    let mut out = ArrayVec::new();
    let n = poly.len();
    for i in 0..n {
        let s = poly[i];
        let e = poly[(i + 1) % n];
        let ds = geometry::cross(a, b, s);
        let de = geometry::cross(a, b, e);
        let (s_in, e_in) = (ds >= T::zero(), de >= T::zero());
        if s_in != e_in {
            let t = ds / (ds - de);
            let p = [s[0] + (e[0] - s[0]) * t, s[1] + (e[1] - s[1]) * t];
            push_distinct(&mut out, p);
        }
        if e_in {
            push_distinct(&mut out, e);
        }
    }
    if out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

fn push_distinct<T: Real>(out: &mut ArrayVec<Point<T>, MAX_VERTICES>, p: Point<T>) {
    if out.last() != Some(&p) && !out.is_full() {
        out.push(p);
    }
}

/// Intersection `t ∩ s` of two counterclockwise triangles by clipping `s`
/// against the three edges of `t`. Returns `None` when the overlap area is at
/// most `1e-14 · |t|`.
pub fn clip_triangles<T: Real>(t: &Triangle<T>, s: &Triangle<T>) -> Option<ConvexPolygon<T>> {
    let mut poly: ArrayVec<Point<T>, MAX_VERTICES> = s.iter().copied().collect();
    for i in 0..3 {
        poly = clip_half_plane(&poly, t[i], t[(i + 1) % 3]);
        if poly.len() < 3 {
            return None;
        }
    }
    let polygon = ConvexPolygon { vertices: poly };
    let threshold = T::tol(1e-14) * geometry::signed_area(t);
    (polygon.area() > threshold).then_some(polygon)
}
