use rayon::prelude::*;

use crate::error::{RemapError, Result};
use crate::scalar::Real;

/// Compressed sparse row matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix<T> {
    nrows: usize,
    ncols: usize,
    row_offsets: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<T>,
}

impl<T: Real> CsrMatrix<T> {
    /// Builds from `(row, col, value)` triplets. Duplicates are summed in the
    /// order they appear, so the result is independent of how the triplets
    /// were produced as long as their order is.
    pub fn from_triplets(nrows: usize, ncols: usize, mut triplets: Vec<(usize, usize, T)>) -> Self {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_offsets = vec![0usize; nrows + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut values: Vec<T> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "triplet ({r}, {c}) out of bounds");
            if last == Some((r, c)) {
                *values.last_mut().expect("previous entry") += v;
            } else {
                cols.push(c);
                values.push(v);
                row_offsets[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..nrows {
            row_offsets[r + 1] += row_offsets[r];
        }
        Self {
            nrows,
            ncols,
            row_offsets,
            cols,
            values,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, r: usize) -> (&[usize], &[T]) {
        let span = self.row_offsets[r]..self.row_offsets[r + 1];
        (&self.cols[span.clone()], &self.values[span])
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        let (cols, vals) = self.row(r);
        cols.binary_search(&c).map(|k| vals[k]).unwrap_or_else(|_| T::zero())
    }

    /// `y = A x`, rows in parallel, each row summed sequentially.
    pub fn mul_vec_into(&self, x: &[T], y: &mut [T]) -> Result<()> {
        if x.len() != self.ncols {
            return Err(RemapError::DimensionMismatch {
                expected: self.ncols,
                actual: x.len(),
            });
        }
        if y.len() != self.nrows {
            return Err(RemapError::DimensionMismatch {
                expected: self.nrows,
                actual: y.len(),
            });
        }
        y.par_iter_mut().enumerate().for_each(|(r, out)| {
            let (cols, vals) = self.row(r);
            *out = cols
                .iter()
                .zip(vals)
                .fold(T::zero(), |acc, (&c, &v)| acc + v * x[c]);
        });
        Ok(())
    }

    pub fn mul_vec(&self, x: &[T]) -> Result<Vec<T>> {
        let mut y = vec![T::zero(); self.nrows];
        self.mul_vec_into(x, &mut y)?;
        Ok(y)
    }

    pub fn row_sums(&self) -> Vec<T> {
        (0..self.nrows)
            .map(|r| self.row(r).1.iter().copied().fold(T::zero(), |a, v| a + v))
            .collect()
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.nrows.min(self.ncols)).map(|r| self.get(r, r)).collect()
    }

    /// Exact (bitwise) structural and numerical symmetry.
    pub fn is_symmetric(&self) -> bool {
        self.nrows == self.ncols
            && (0..self.nrows).all(|r| {
                let (cols, vals) = self.row(r);
                cols.iter().zip(vals).all(|(&c, &v)| self.get(c, r) == v)
            })
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut d = vec![vec![T::zero(); self.ncols]; self.nrows];
        for (r, row) in d.iter_mut().enumerate() {
            let (cols, vals) = self.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                row[c] = v;
            }
        }
        d
    }
}

/// Symmetric positive-definite matrix stored with both triangles.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseSymMatrix<T>(CsrMatrix<T>);

impl<T: Real> SparseSymMatrix<T> {
    pub fn new(matrix: CsrMatrix<T>) -> Result<Self> {
        if !matrix.is_symmetric() {
            return Err(RemapError::InvalidParameter("matrix is not symmetric".into()));
        }
        Ok(Self(matrix))
    }

    pub fn csr(&self) -> &CsrMatrix<T> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }
}

impl<T> std::ops::Deref for SparseSymMatrix<T> {
    type Target = CsrMatrix<T>;

    fn deref(&self) -> &CsrMatrix<T> {
        &self.0
    }
}
