//! Sampling-based estimate of the Galerkin load vector from pointwise
//! source queries only.
//!
//! For a target element `t` with samples `X_j` drawn from a density `p_t`,
//! the element contribution is
//!
//! ```text
//! b̂_k^t = (1/N) Σ_j f^s(X_j) ψ_k(X_j) / p_t(X_j)
//! ```
//!
//! which for area-uniform sampling (`p_t = 1/|Ω_t|`) becomes
//! `(|Ω_t|/N) Σ_j f^s(X_j) ψ_k(X_j)`. Because `Σ_k ψ_k = 1`, a constant
//! source is integrated exactly regardless of `N`.

mod operator;
mod plan;
mod sobol;
mod source;

pub use operator::build_load_operator;
pub use plan::{bary_map, SamplePlan, SamplingMode, StreamLayout, MAX_SAMPLES};
pub use sobol::{sobol_2d, Sobol2d};
pub use source::{AnalyticField, MeshBackedField, OutsidePolicy, SourceField};

use rayon::prelude::*;

use crate::error::{RemapError, Result};
use crate::fem::eval_basis;
use crate::geometry;
use crate::mesh::TriMesh;
use crate::parallel;
use crate::scalar::Real;

/// Sampling density on a target element, expressed on barycentric space.
pub trait SampleDensity<T: Real>: Sync {
    /// Maps a uniform parametric point to a barycentric sample distributed
    /// according to this density.
    fn map(&self, xi: f64, eta: f64) -> [T; 3];

    /// Density value `p_t` at `bary` for an element of the given area.
    fn pdf(&self, area: T, bary: [T; 3]) -> T;

    /// Importance weight `1 / p_t`.
    fn weight(&self, area: T, bary: [T; 3]) -> T {
        self.pdf(area, bary).recip()
    }
}

/// `p_t = 1/|Ω_t|`.
#[derive(Clone, Copy, Debug, Default)]
pub struct UniformDensity;

impl<T: Real> SampleDensity<T> for UniformDensity {
    #[inline]
    fn map(&self, xi: f64, eta: f64) -> [T; 3] {
        bary_map(xi, eta)
    }

    fn pdf(&self, area: T, _bary: [T; 3]) -> T {
        area.recip()
    }

    #[inline]
    fn weight(&self, area: T, _bary: [T; 3]) -> T {
        area
    }
}

/// `p_t = 3 λ_v / |Ω_t|`: density growing linearly toward local vertex `v`.
#[derive(Clone, Copy, Debug)]
pub struct LinearTiltDensity {
    pub vertex: usize,
}

impl<T: Real> SampleDensity<T> for LinearTiltDensity {
    fn map(&self, xi: f64, eta: f64) -> [T; 3] {
        // λ_v ~ Beta(2, 2) via the trigonometric root of 3x² − 2x³ = ξ,
        // then uniform along the opposite segment
        let lv = 0.5 + ((1.0 - 2.0 * xi).acos() / 3.0 - 2.0 * std::f64::consts::PI / 3.0).cos();
        let lv = lv.clamp(0.0, 1.0);
        let rest = 1.0 - lv;
        let mut out = [T::zero(); 3];
        let (a, b) = ((self.vertex + 1) % 3, (self.vertex + 2) % 3);
        out[self.vertex] = T::lit(lv);
        out[a] = T::lit(rest * (1.0 - eta));
        out[b] = T::lit(rest * eta);
        out
    }

    fn pdf(&self, area: T, bary: [T; 3]) -> T {
        T::lit(3.0) * bary[self.vertex] / area
    }
}

/// Load vector by area-uniform sampling of every target element.
pub fn assemble_load_mc<T, S>(target: &TriMesh<T>, source: &S, plan: &SamplePlan) -> Result<Vec<T>>
where
    T: Real,
    S: SourceField<T> + ?Sized,
{
    assemble_load_importance(target, source, plan, &UniformDensity)
}

/// Load vector estimate with samples drawn from `density` on each element.
pub fn assemble_load_importance<T, S, D>(
    target: &TriMesh<T>,
    source: &S,
    plan: &SamplePlan,
    density: &D,
) -> Result<Vec<T>>
where
    T: Real,
    S: SourceField<T> + ?Sized,
    D: SampleDensity<T> + ?Sized,
{
    let inv_n = T::from_count(plan.count()).recip();
    let local: Vec<[T; 3]> = (0..target.num_elements())
        .into_par_iter()
        .map(|e| {
            let tri = target.triangle(e);
            let area = target.areas()[e];
            let mut acc = [T::zero(); 3];
            for &[xi, eta] in plan.params_for(e).iter() {
                let bary = density.map(xi, eta);
                let x = geometry::from_barycentric(&tri, bary);
                let f = source
                    .eval(x)
                    .filter(|v| v.is_finite())
                    .ok_or(RemapError::SourceEvalFailed {
                        x: x[0].as_f64(),
                        y: x[1].as_f64(),
                    })?;
                let w = density.weight(area, bary);
                if !(w.is_finite() && w > T::zero()) {
                    return Err(RemapError::InvalidDensity {
                        element: e,
                        density: w.recip().as_f64(),
                    });
                }
                let psi = eval_basis(bary);
                for a in 0..3 {
                    acc[a] += f * psi[a] * w;
                }
            }
            Ok(acc.map(|v| v * inv_n))
        })
        .collect::<Result<_>>()?;
    Ok(parallel::scatter_elements(
        target.elements(),
        &local,
        target.num_nodes(),
    ))
}

/// Relative integral error `|I − Î| / |I|`.
pub fn integral_error<T: Real>(exact: T, estimate: T) -> T {
    ((exact - estimate) / exact).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_square_mesh, Diagonal};

    #[test]
    fn constant_source_is_exact_for_any_count() {
        let mesh = generate_square_mesh::<f64>(6, 0.25, 5, Diagonal::Alternating).unwrap();
        for (mode, n) in [(SamplingMode::Uniform, 1), (SamplingMode::Uniform, 7), (SamplingMode::Sobol, 33)] {
            let plan = SamplePlan::new(mode, n, 2).unwrap();
            let b = assemble_load_mc(&mesh, &AnalyticField(|_: [f64; 2]| 1.0), &plan).unwrap();
            assert!((b.iter().sum::<f64>() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn uniform_density_reduction_is_bitwise() {
        let mesh = generate_square_mesh::<f64>(4, 0.2, 5, Diagonal::Left).unwrap();
        let plan = SamplePlan::new(SamplingMode::Uniform, 64, 3).unwrap();
        let src = AnalyticField(|p: [f64; 2]| p[0].exp() * p[1]);
        let a = assemble_load_mc(&mesh, &src, &plan).unwrap();
        let b = assemble_load_importance(&mesh, &src, &plan, &UniformDensity).unwrap();
        assert_eq!(a, b);
    }

    struct ZeroDensity;
    impl SampleDensity<f64> for ZeroDensity {
        fn map(&self, xi: f64, eta: f64) -> [f64; 3] {
            bary_map(xi, eta)
        }
        fn pdf(&self, _area: f64, _bary: [f64; 3]) -> f64 {
            0.0
        }
    }

    #[test]
    fn zero_density_is_rejected() {
        let mesh = generate_square_mesh::<f64>(2, 0.0, 0, Diagonal::Left).unwrap();
        let plan = SamplePlan::new(SamplingMode::Sobol, 4, 0).unwrap();
        let err = assemble_load_importance(&mesh, &AnalyticField(|_: [f64; 2]| 1.0), &plan, &ZeroDensity)
            .unwrap_err();
        assert!(matches!(err, RemapError::InvalidDensity { element: 0, .. }));
    }

    #[test]
    fn failing_source_is_reported() {
        let mesh = generate_square_mesh::<f64>(2, 0.0, 0, Diagonal::Left).unwrap();
        let plan = SamplePlan::new(SamplingMode::Sobol, 4, 0).unwrap();
        let nan = AnalyticField(|_: [f64; 2]| f64::NAN);
        assert!(matches!(
            assemble_load_mc(&mesh, &nan, &plan),
            Err(RemapError::SourceEvalFailed { .. })
        ));
    }

    #[test]
    fn tilt_sampler_has_requested_mean() {
        // E[λ_v] under p ∝ λ_v is 1/2
        let d = LinearTiltDensity { vertex: 1 };
        let pts = sobol_2d(4096, 0);
        let mean: f64 = pts
            .iter()
            .map(|&[a, b]| SampleDensity::<f64>::map(&d, a, b)[1])
            .sum::<f64>()
            / 4096.0;
        assert!((mean - 0.5).abs() < 1e-3);
    }
}
