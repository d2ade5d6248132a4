//! Reductions whose result does not depend on the rayon worker count.

use rayon::prelude::*;

use crate::scalar::Real;

const CHUNK: usize = 4096;

/// Dot product summed in fixed-size chunks, then sequentially.
pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    let partial: Vec<T> = a
        .par_chunks(CHUNK)
        .zip(b.par_chunks(CHUNK))
        .map(|(x, y)| x.iter().zip(y).fold(T::zero(), |acc, (&p, &q)| acc + p * q))
        .collect();
    partial.into_iter().fold(T::zero(), |acc, v| acc + v)
}

pub fn sum<T: Real>(a: &[T]) -> T {
    let partial: Vec<T> = a
        .par_chunks(CHUNK)
        .map(|x| x.iter().fold(T::zero(), |acc, &v| acc + v))
        .collect();
    partial.into_iter().fold(T::zero(), |acc, v| acc + v)
}

pub fn norm2<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

/// Adds per-element contributions into a node-indexed vector in element order.
pub fn scatter_elements<T: Real>(
    elements: &[[usize; 3]],
    local: &[[T; 3]],
    num_nodes: usize,
) -> Vec<T> {
    let mut out = vec![T::zero(); num_nodes];
    for (tri, vals) in elements.iter().zip(local) {
        for a in 0..3 {
            out[tri[a]] += vals[a];
        }
    }
    out
}
