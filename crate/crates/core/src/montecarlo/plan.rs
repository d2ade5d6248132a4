use std::borrow::Cow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::sobol::{scrambled_sobol_2d_bits, sobol_2d_bits, to_unit};
use crate::error::{RemapError, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SamplingMode {
    /// Seeded pseudorandom points.
    Uniform,
    /// Sobol points; seed 0 is the plain sequence, other seeds apply a
    /// random linear matrix scramble and digital shift.
    Sobol,
}

impl std::str::FromStr for SamplingMode {
    type Err = RemapError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Self::Uniform),
            "sobol" => Ok(Self::Sobol),
            other => Err(RemapError::InvalidParameter(format!(
                "unknown sampling mode '{other}' (expected uniform or sobol)"
            ))),
        }
    }
}

impl std::fmt::Display for SamplingMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Uniform => "uniform",
            Self::Sobol => "sobol",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StreamLayout {
    /// One parametric point set reused by every element.
    Shared,
    /// A separate stream per element, derived from the seed and element index.
    Independent,
}

pub const MAX_SAMPLES: usize = 1_000_000;

/// Parametric sample points `(ξ, η) ∈ [0, 1)²` for the per-element estimator.
#[derive(Clone, Debug)]
pub struct SamplePlan {
    mode: SamplingMode,
    layout: StreamLayout,
    seed: u64,
    count: usize,
    shared: Vec<[f64; 2]>,
}

impl SamplePlan {
    pub fn new(mode: SamplingMode, count: usize, seed: u64) -> Result<Self> {
        if count == 0 || count > MAX_SAMPLES {
            return Err(RemapError::InvalidParameter(format!(
                "sample count {count} outside [1, {MAX_SAMPLES}]"
            )));
        }
        let shared = generate(mode, count, &mut ChaCha8Rng::seed_from_u64(seed), seed != 0);
        Ok(Self {
            mode,
            layout: StreamLayout::Shared,
            seed,
            count,
            shared,
        })
    }

    /// Switches to per-element streams.
    pub fn independent(mut self) -> Self {
        self.layout = StreamLayout::Independent;
        self
    }

    pub fn mode(&self) -> SamplingMode {
        self.mode
    }

    pub fn layout(&self) -> StreamLayout {
        self.layout
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// The shared parametric set.
    pub fn parametric(&self) -> &[[f64; 2]] {
        &self.shared
    }

    /// Shared barycentric set, area-uniform on the reference triangle.
    pub fn barycentric<T: Real>(&self) -> Vec<[T; 3]> {
        self.shared.iter().map(|&[xi, eta]| bary_map(xi, eta)).collect()
    }

    /// Parametric points used for `element`.
    pub fn params_for(&self, element: usize) -> Cow<'_, [[f64; 2]]> {
        match self.layout {
            StreamLayout::Shared => Cow::Borrowed(&self.shared),
            StreamLayout::Independent => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                rng.set_stream(element as u64 + 1);
                Cow::Owned(generate(self.mode, self.count, &mut rng, true))
            }
        }
    }
}

fn generate(mode: SamplingMode, count: usize, rng: &mut ChaCha8Rng, scramble: bool) -> Vec<[f64; 2]> {
    let bits = match mode {
        SamplingMode::Uniform => return (0..count).map(|_| [rng.gen(), rng.gen()]).collect(),
        SamplingMode::Sobol if scramble => scrambled_sobol_2d_bits(count, rng),
        SamplingMode::Sobol => sobol_2d_bits(count, 0),
    };
    bits.into_iter().map(|[a, b]| [to_unit(a), to_unit(b)]).collect()
}

/// Maps a uniform point of the unit square to area-uniform barycentric
/// coordinates: `(1 − √ξ, √ξ (1 − η), √ξ η)`.
#[inline]
pub fn bary_map<T: Real>(xi: f64, eta: f64) -> [T; 3] {
    let r = xi.sqrt();
    [T::lit(1.0 - r), T::lit(r * (1.0 - eta)), T::lit(r * eta)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::sobol_2d;

    #[test]
    fn corners() {
        assert_eq!(bary_map::<f64>(0.0, 0.7), [1.0, 0.0, 0.0]);
        let almost = 1.0 - f64::EPSILON;
        let b = bary_map::<f64>(almost, 0.0);
        assert!(b[0] < 1e-15 && (b[1] - 1.0).abs() < 1e-15 && b[2] == 0.0);
        let c = bary_map::<f64>(almost, almost);
        assert!(c[0] < 1e-15 && c[1] < 1e-15 && (c[2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn plan_validation_and_determinism() {
        assert!(SamplePlan::new(SamplingMode::Uniform, 0, 1).is_err());
        assert!(SamplePlan::new(SamplingMode::Sobol, MAX_SAMPLES + 1, 1).is_err());
        let a = SamplePlan::new(SamplingMode::Uniform, 50, 9).unwrap();
        let b = SamplePlan::new(SamplingMode::Uniform, 50, 9).unwrap();
        assert_eq!(a.parametric(), b.parametric());
        let c = SamplePlan::new(SamplingMode::Uniform, 50, 10).unwrap();
        assert_ne!(a.parametric(), c.parametric());
    }

    #[test]
    fn sobol_seed_zero_is_plain_sequence() {
        let p = SamplePlan::new(SamplingMode::Sobol, 16, 0).unwrap();
        assert_eq!(p.parametric(), &sobol_2d(16, 0)[..]);
        let scrambled = SamplePlan::new(SamplingMode::Sobol, 16, 3).unwrap();
        assert_ne!(scrambled.parametric(), p.parametric());
    }

    #[test]
    fn independent_streams_differ_per_element() {
        let p = SamplePlan::new(SamplingMode::Uniform, 8, 4).unwrap().independent();
        assert_ne!(p.params_for(0), p.params_for(1));
        assert_eq!(p.params_for(3), p.params_for(3));
    }

    #[test]
    fn barycentric_points_are_valid() {
        let p = SamplePlan::new(SamplingMode::Sobol, 500, 0).unwrap();
        for l in p.barycentric::<f64>() {
            assert!(l.iter().all(|&v| v >= 0.0));
            assert!((l.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        }
    }
}
