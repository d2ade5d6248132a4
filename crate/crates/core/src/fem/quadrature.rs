use crate::error::{RemapError, Result};
use crate::scalar::Real;

/// Symmetric triangle rule in barycentric form; weights sum to one and are
/// scaled by the element area at use.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule<T> {
    points: Vec<[T; 3]>,
    weights: Vec<T>,
    degree: u32,
}

impl<T: Real> QuadratureRule<T> {
    /// One-point centroid rule, exact for degree 1.
    pub fn centroid() -> Self {
        let t = T::one() / T::lit(3.0);
        Self {
            points: vec![[t, t, t]],
            weights: vec![T::one()],
            degree: 1,
        }
    }

    /// Three interior points `(2/3, 1/6, 1/6)`, exact for degree 2.
    pub fn three_point() -> Self {
        let a = T::lit(2.0) / T::lit(3.0);
        let b = T::one() / T::lit(6.0);
        let w = T::one() / T::lit(3.0);
        Self {
            points: vec![[a, b, b], [b, a, b], [b, b, a]],
            weights: vec![w; 3],
            degree: 2,
        }
    }

    /// Dunavant six-point rule, exact for degree 4.
    pub fn dunavant6() -> Self {
        let a1 = T::lit(0.445_948_490_915_964_89);
        let b1 = T::one() - a1 - a1;
        let w1 = T::lit(0.223_381_589_678_011_47);
        let a2 = T::lit(0.091_576_213_509_770_73);
        let b2 = T::one() - a2 - a2;
        let w2 = T::lit(0.109_951_743_655_321_87);
        Self {
            points: vec![
                [b1, a1, a1],
                [a1, b1, a1],
                [a1, a1, b1],
                [b2, a2, a2],
                [a2, b2, a2],
                [a2, a2, b2],
            ],
            weights: vec![w1, w1, w1, w2, w2, w2],
            degree: 4,
        }
    }

    /// Cheapest catalogued rule exact for polynomials of `degree`.
    pub fn with_degree(degree: u32) -> Result<Self> {
        match degree {
            0 | 1 => Ok(Self::centroid()),
            2 => Ok(Self::three_point()),
            3 | 4 => Ok(Self::dunavant6()),
            d => Err(RemapError::InvalidParameter(format!(
                "no quadrature rule of degree {d} (maximum 4)"
            ))),
        }
    }

    pub fn points(&self) -> &[[T; 3]] {
        &self.points
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn iter(&self) -> impl Iterator<Item = ([T; 3], T)> + '_ {
        self.points.iter().copied().zip(self.weights.iter().copied())
    }
}
