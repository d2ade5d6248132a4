use rayon::prelude::*;

use super::SparseSymMatrix;
use crate::error::{RemapError, Result};
use crate::parallel;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CgConfig<T> {
    /// Relative residual target `‖Mx − b‖₂ / ‖b‖₂`.
    pub tol: T,
    /// Defaults to `10 · N`.
    pub max_iter: Option<usize>,
}

impl<T: Real> Default for CgConfig<T> {
    fn default() -> Self {
        Self {
            tol: T::tol(1e-12),
            max_iter: None,
        }
    }
}

impl<T: Real> CgConfig<T> {
    pub fn with_tol(tol: T) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug)]
pub struct CgSolution<T> {
    pub x: Vec<T>,
    pub iterations: usize,
    /// True relative residual of `x`.
    pub residual: T,
}

const MAX_RESTARTS: usize = 3;

/// Jacobi-preconditioned conjugate gradients from a zero initial guess.
pub fn cg_solve<T: Real>(
    matrix: &SparseSymMatrix<T>,
    b: &[T],
    config: &CgConfig<T>,
) -> Result<CgSolution<T>> {
    let n = matrix.dim();
    if b.len() != n {
        return Err(RemapError::DimensionMismatch {
            expected: n,
            actual: b.len(),
        });
    }
    let bnorm = parallel::norm2(b);
    if bnorm == T::zero() {
        return Ok(CgSolution {
            x: vec![T::zero(); n],
            iterations: 0,
            residual: T::zero(),
        });
    }
    let inv_diag: Vec<T> = matrix
        .diagonal()
        .into_iter()
        .map(|d| if d > T::zero() { d.recip() } else { T::one() })
        .collect();
    let max_iter = config.max_iter.unwrap_or(10 * n).max(1);

    let mut x = vec![T::zero(); n];
    let mut r = b.to_vec();
    let mut best = (T::infinity(), x.clone());
    let mut iterations = 0;
    let mut ap = vec![T::zero(); n];

    for _restart in 0..=MAX_RESTARTS {
        let mut z: Vec<T> = r.iter().zip(&inv_diag).map(|(&r, &d)| r * d).collect();
        let mut p = z.clone();
        let mut rz = parallel::dot(&r, &z);
        while iterations < max_iter {
            iterations += 1;
            matrix.mul_vec_into(&p, &mut ap)?;
            let pap = parallel::dot(&p, &ap);
            if pap <= T::zero() {
                break;
            }
            let alpha = rz / pap;
            x.par_iter_mut().zip(&p).for_each(|(x, &p)| *x += alpha * p);
            r.par_iter_mut().zip(&ap).for_each(|(r, &a)| *r -= alpha * a);
            let res = parallel::norm2(&r) / bnorm;
            if res < best.0 {
                best.0 = res;
                best.1.copy_from_slice(&x);
            }
            if res <= config.tol {
                break;
            }
            z.par_iter_mut()
                .zip(&r)
                .zip(&inv_diag)
                .for_each(|((z, &r), &d)| *z = r * d);
            let rz_next = parallel::dot(&r, &z);
            let beta = rz_next / rz;
            rz = rz_next;
            p.par_iter_mut().zip(&z).for_each(|(p, &z)| *p = z + beta * *p);
        }
        // recurrence residuals drift; confirm with the true residual
        let true_res = residual(matrix, &x, b, bnorm)?;
        if true_res <= config.tol {
            return Ok(CgSolution {
                x,
                iterations,
                residual: true_res,
            });
        }
        if iterations >= max_iter {
            break;
        }
        matrix.mul_vec_into(&x, &mut ap)?;
        r.iter_mut().zip(b).zip(&ap).for_each(|((r, &b), &a)| *r = b - a);
    }
    let best_res = residual(matrix, &best.1, b, bnorm)?;
    Err(RemapError::NoConvergence {
        iterations,
        residual: best_res.as_f64(),
        best: best.1.iter().map(|v| v.as_f64()).collect(),
    })
}

fn residual<T: Real>(m: &SparseSymMatrix<T>, x: &[T], b: &[T], bnorm: T) -> Result<T> {
    let mut r = m.mul_vec(x)?;
    r.iter_mut().zip(b).for_each(|(r, &b)| *r = b - *r);
    Ok(parallel::norm2(&r) / bnorm)
}
