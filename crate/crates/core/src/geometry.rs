//! Small planar geometry helpers on `[T; 2]` points.

use crate::scalar::Real;

pub type Point<T> = [T; 2];
pub type Triangle<T> = [Point<T>; 3];

#[inline]
pub fn cross<T: Real>(o: Point<T>, a: Point<T>, b: Point<T>) -> T {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Signed area, positive for counterclockwise vertex order.
#[inline]
pub fn signed_area<T: Real>(tri: &Triangle<T>) -> T {
    cross(tri[0], tri[1], tri[2]) * T::lit(0.5)
}

/// Barycentric coordinates of `p` with respect to `tri`.
///
/// Each coordinate is a sub-triangle area ratio, so the result sums to one up
/// to roundoff and is exact at the vertices.
#[inline]
pub fn barycentric<T: Real>(tri: &Triangle<T>, p: Point<T>) -> [T; 3] {
    let twice = cross(tri[0], tri[1], tri[2]);
    let l0 = cross(p, tri[1], tri[2]) / twice;
    let l1 = cross(tri[0], p, tri[2]) / twice;
    [l0, l1, T::one() - l0 - l1]
}

#[inline]
pub fn from_barycentric<T: Real>(tri: &Triangle<T>, l: [T; 3]) -> Point<T> {
    [
        l[0] * tri[0][0] + l[1] * tri[1][0] + l[2] * tri[2][0],
        l[0] * tri[0][1] + l[1] * tri[1][1] + l[2] * tri[2][1],
    ]
}

#[inline]
pub fn centroid<T: Real>(tri: &Triangle<T>) -> Point<T> {
    let third = T::one() / T::lit(3.0);
    [
        (tri[0][0] + tri[1][0] + tri[2][0]) * third,
        (tri[0][1] + tri[1][1] + tri[2][1]) * third,
    ]
}

#[inline]
pub fn dist2<T: Real>(a: Point<T>, b: Point<T>) -> T {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    dx * dx + dy * dy
}

/// Precomputed inverse of the affine map from barycentric to physical space.
#[derive(Clone, Copy, Debug)]
pub struct AffineInverse<T> {
    origin: Point<T>,
    // rows of the inverse Jacobian
    inv: [[T; 2]; 2],
}

impl<T: Real> AffineInverse<T> {
    pub fn new(tri: &Triangle<T>) -> Self {
        let e1 = [tri[1][0] - tri[0][0], tri[1][1] - tri[0][1]];
        let e2 = [tri[2][0] - tri[0][0], tri[2][1] - tri[0][1]];
        let det = e1[0] * e2[1] - e1[1] * e2[0];
        Self {
            origin: tri[0],
            inv: [[e2[1] / det, -e2[0] / det], [-e1[1] / det, e1[0] / det]],
        }
    }

    #[inline]
    pub fn barycentric(&self, p: Point<T>) -> [T; 3] {
        let d = [p[0] - self.origin[0], p[1] - self.origin[1]];
        let l1 = self.inv[0][0] * d[0] + self.inv[0][1] * d[1];
        let l2 = self.inv[1][0] * d[0] + self.inv[1][1] * d[1];
        [T::one() - l1 - l2, l1, l2]
    }
}

/// Axis-aligned bounding box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Aabb<T> {
    pub min: Point<T>,
    pub max: Point<T>,
}

impl<T: Real> Aabb<T> {
    pub fn from_points<'a, I>(points: I) -> Option<Self>
    where
        I: IntoIterator<Item = &'a Point<T>>,
    {
        let mut it = points.into_iter();
        let first = *it.next()?;
        let mut bb = Aabb {
            min: first,
            max: first,
        };
        for p in it {
            bb.min[0] = bb.min[0].min(p[0]);
            bb.min[1] = bb.min[1].min(p[1]);
            bb.max[0] = bb.max[0].max(p[0]);
            bb.max[1] = bb.max[1].max(p[1]);
        }
        Some(bb)
    }

    pub fn width(&self) -> T {
        self.max[0] - self.min[0]
    }

    pub fn height(&self) -> T {
        self.max[1] - self.min[1]
    }

    pub fn diagonal(&self) -> T {
        (self.width() * self.width() + self.height() * self.height()).sqrt()
    }

    pub fn area(&self) -> T {
        self.width() * self.height()
    }

    pub fn longest_edge(&self) -> T {
        self.width().max(self.height())
    }

    pub fn contains(&self, p: Point<T>, slack: T) -> bool {
        p[0] >= self.min[0] - slack
            && p[0] <= self.max[0] + slack
            && p[1] >= self.min[1] - slack
            && p[1] <= self.max[1] + slack
    }

    /// Projection of `p` onto the box.
    pub fn clamp(&self, p: Point<T>) -> Point<T> {
        [
            p[0].max(self.min[0]).min(self.max[0]),
            p[1].max(self.min[1]).min(self.max[1]),
        ]
    }
}
