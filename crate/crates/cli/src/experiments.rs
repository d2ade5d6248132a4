//! The studies behind each subcommand, as plain functions returning rows.

use std::sync::Arc;
use std::time::Instant;

use anyhow::{bail, Context};
use remap_core::fem::integrate_field;
use remap_core::intersect::find_intersections;
use remap_core::metrics::{dof_l2_error, mesh_mass_error, supermesh_l2_error, supermesh_mass_error};
use remap_core::montecarlo::{assemble_load_mc, AnalyticField, OutsidePolicy};
use remap_core::rbf::{rbf_transfer, PointCloud};
use remap_core::{
    generate_square_mesh, Diagonal, ErrorReport, FieldTransfer, IntersectionSet, McTransfer, MiTransfer,
    NodalField, QuadratureRule, RbfTransfer, RemapError, SamplePlan, SamplingMode, TriMesh,
};

use crate::config::{FieldKind, MeshGen, Method, Settings};

pub type Mesh = Arc<TriMesh<f64>>;

pub fn generate(g: &MeshGen) -> remap_core::Result<Mesh> {
    generate_square_mesh(g.n, g.perturbation, g.seed, g.diagonal).map(Arc::new)
}

/// Non-matching pair of level `n` used by the convergence study and the
/// benchmark: `(source, target)`.
pub fn study_pair(n: usize) -> remap_core::Result<(Mesh, Mesh)> {
    let target = MeshGen::new(n, 0.2, 1, Diagonal::Left);
    Ok((generate(&target.partner())?, generate(&target)?))
}

/// Fine and coarse meshes of the round-trip study, with about 20000 and
/// 1800 elements.
pub fn roundtrip_pair() -> (MeshGen, MeshGen) {
    (
        MeshGen::new(100, 0.2, 11, Diagonal::Left),
        MeshGen::new(30, 0.2, 12, Diagonal::Right),
    )
}

pub fn interpolate(mesh: &Mesh, field: &FieldKind) -> NodalField<f64> {
    NodalField::new(mesh.clone(), mesh.interpolate(|p| field.eval(p))).expect("one value per node")
}

/// Builds the initialization state of `method` for a source/target pair.
pub fn build_transfer(
    method: Method,
    source: &Mesh,
    target: &Mesh,
    samples: usize,
    seed: u64,
    settings: &Settings,
) -> remap_core::Result<Box<dyn FieldTransfer<f64>>> {
    Ok(match method {
        Method::Mi => Box::new(MiTransfer::new(
            source.clone(),
            target.clone(),
            settings.quadrature.clone(),
            settings.cg,
        )?),
        Method::Mc => Box::new(McTransfer::new(
            source.clone(),
            target.clone(),
            SamplePlan::new(settings.sampling, samples, seed)?,
            OutsidePolicy::Snap,
            settings.cg,
        )?),
        Method::Rbf => Box::new(RbfTransfer::new(source.clone(), target.clone(), settings.rbf)?),
    })
}

/// Where the source values of a one-shot transfer come from.
pub enum SourceInput {
    /// P1 interpolant of the analytic field on this mesh.
    Mesh(Mesh),
    /// Scattered samples; only the rbf method accepts them.
    Points(PointCloud<f64>),
}

pub struct TransferOutcome {
    pub field: NodalField<f64>,
    pub report: ErrorReport,
}

/// One transfer with all metrics that apply. Supermesh metrics need a
/// source mesh; discrete metrics compare against the analytic field
/// interpolated on the target, when a field is known.
pub fn run_transfer(
    method: Method,
    source: &SourceInput,
    target: &Mesh,
    field: Option<&FieldKind>,
    samples: usize,
    seed: u64,
    settings: &Settings,
) -> anyhow::Result<TransferOutcome> {
    let (result, h_source, source_field) = match source {
        SourceInput::Mesh(mesh) => {
            let f = field.context("a mesh source needs an analytic field")?;
            let source_field = interpolate(mesh, f);
            let op = build_transfer(method, mesh, target, samples, seed, settings)?;
            (op.apply(&source_field)?, mesh.mean_element_size(), Some(source_field))
        }
        SourceInput::Points(cloud) => {
            if method != Method::Rbf {
                bail!("scattered source points are only supported by the rbf method");
            }
            (rbf_transfer(target.clone(), cloud, &settings.rbf)?, cloud.spacing(), None)
        }
    };
    let mut report = ErrorReport::new(method.to_string(), h_source, target.mean_element_size());
    if method == Method::Mc {
        report.samples = Some(samples);
        report.seed = Some(seed);
    }
    if let Some(sf) = &source_field {
        let set = find_intersections(target, sf.mesh(), &remap_core::UniformGridLocator::new(sf.mesh().clone()))?;
        report.l2 = Some(supermesh_l2_error(sf, &result, &set)?);
        report.mass_supermesh = Some(supermesh_mass_error(sf, &result, &set)?);
    }
    if let Some(f) = field {
        let reference = interpolate(target, f);
        report.dof_l2 = Some(dof_l2_error(&result, &reference)?);
        report.mass_mesh = Some(mesh_mass_error(&result, &reference, &QuadratureRule::three_point())?);
    }
    Ok(TransferOutcome { field: result, report })
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegralRow {
    pub samples: usize,
    pub mode: SamplingMode,
    pub seed: u64,
    pub e_int: f64,
}

/// `400 · 100^(k/(points−1))`, rounded: a log-spaced grid over [400, 40000].
pub fn log_sample_grid(points: usize) -> Vec<usize> {
    (0..points)
        .map(|k| (400.0 * 100f64.powf(k as f64 / (points - 1) as f64)).round() as usize)
        .collect()
}

/// Relative error of the sampled integral of `field` over the two-element
/// unit square, over the full grid of sample counts and seeds in both modes.
pub fn integral_study(field: &FieldKind, samples: &[usize], seeds: &[u64]) -> anyhow::Result<Vec<IntegralRow>> {
    let mesh = generate(&MeshGen::new(1, 0.0, 0, Diagonal::Right))?;
    let exact = reference_integral(field)?;
    let source = AnalyticField(|p: [f64; 2]| field.eval(p));
    let mut rows = Vec::new();
    for mode in [SamplingMode::Uniform, SamplingMode::Sobol] {
        for &n in samples {
            for &seed in seeds {
                let b = assemble_load_mc(&mesh, &source, &SamplePlan::new(mode, n, seed)?)?;
                let estimate: f64 = b.iter().sum();
                rows.push(IntegralRow {
                    samples: n,
                    mode,
                    seed,
                    e_int: remap_core::montecarlo::integral_error(exact, estimate),
                });
            }
        }
    }
    Ok(rows)
}

/// High-order quadrature on a fine mesh; exact for polynomials of degree ≤ 4.
fn reference_integral(field: &FieldKind) -> anyhow::Result<f64> {
    let mesh = generate(&MeshGen::new(64, 0.0, 0, Diagonal::Right))?;
    let rule = QuadratureRule::<f64>::with_degree(4)?;
    let mut total = 0.0;
    for e in 0..mesh.num_elements() {
        let tri = mesh.triangle(e);
        for (l, w) in rule.iter() {
            let p = remap_core::geometry::from_barycentric(&tri, l);
            total += w * mesh.areas()[e] * field.eval(p);
        }
    }
    if total == 0.0 {
        return Err(RemapError::ZeroDenominator.into());
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub h: f64,
    pub method: Method,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub e_l2: f64,
    pub e_mass_sm: f64,
}

/// Supermesh accuracy and conservation of every method over the levels.
pub fn convergence(
    levels: &[usize],
    field: &FieldKind,
    methods: &[Method],
    samples: &[usize],
    seeds: &[u64],
    settings: &Settings,
) -> anyhow::Result<Vec<ConvergenceRow>> {
    let mut rows = Vec::new();
    for &n in levels {
        let (source, target) = study_pair(n)?;
        let set = find_intersections(&target, &source, &remap_core::UniformGridLocator::new(source.clone()))?;
        let source_field = interpolate(&source, field);
        let mut record = |method, samples, seed, op: Box<dyn FieldTransfer<f64>>| -> anyhow::Result<()> {
            let out = op.apply(&source_field)?;
            rows.push(ConvergenceRow {
                n,
                h: target.mean_element_size(),
                method,
                samples,
                seed,
                e_l2: supermesh_l2_error(&source_field, &out, &set)?,
                e_mass_sm: supermesh_mass_error(&source_field, &out, &set)?,
            });
            Ok(())
        };
        for &method in methods {
            match method {
                Method::Mc => {
                    for &s in samples {
                        for &seed in seeds {
                            let op = build_transfer(method, &source, &target, s, seed, settings)?;
                            record(method, Some(s), Some(seed), op)?;
                        }
                    }
                }
                _ => record(method, None, None, build_transfer(method, &source, &target, 0, 0, settings)?)?,
            }
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoundtripRow {
    pub iteration: usize,
    pub method: Method,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub e_dof_l2: f64,
    pub e_mass_m1: f64,
}

/// Repeated first → second → first mesh transfers of the interpolated
/// field, measured against the initial coefficients after every trip.
#[allow(clippy::too_many_arguments)]
pub fn roundtrip(
    first: &Mesh,
    second: &Mesh,
    field: &FieldKind,
    methods: &[Method],
    samples: &[usize],
    seeds: &[u64],
    iterations: usize,
    settings: &Settings,
) -> anyhow::Result<Vec<RoundtripRow>> {
    if iterations == 0 {
        bail!("iteration count must be at least 1");
    }
    let reference = interpolate(first, field);
    let rule = QuadratureRule::three_point();
    let mut rows = Vec::new();
    let mut run = |method, samples: Option<usize>, seed: Option<u64>| -> anyhow::Result<()> {
        let (n, s) = (samples.unwrap_or(0), seed.unwrap_or(0));
        let forward = build_transfer(method, first, second, n, s, settings)?;
        let backward = build_transfer(method, second, first, n, s, settings)?;
        let mut f = reference.clone();
        for iteration in 1..=iterations {
            f = backward.apply(&forward.apply(&f)?)?;
            rows.push(RoundtripRow {
                iteration,
                method,
                samples,
                seed,
                e_dof_l2: dof_l2_error(&f, &reference)?,
                e_mass_m1: mesh_mass_error(&f, &reference, &rule)?,
            });
        }
        Ok(())
    };
    for &method in methods {
        match method {
            Method::Mc => {
                for &s in samples {
                    for &seed in seeds {
                        run(method, Some(s), Some(seed))?;
                    }
                }
            }
            _ => run(method, None, None)?,
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub elements: usize,
    pub method: Method,
    pub samples: Option<usize>,
    pub workers: usize,
    pub init_seconds: Option<f64>,
    pub online_seconds: Option<f64>,
    /// Empty on success, otherwise the error kind that stopped this case.
    pub status: String,
}

impl BenchRow {
    pub fn online_per_element(&self) -> Option<f64> {
        self.online_seconds.map(|t| t / self.elements as f64)
    }
}

/// Best-of-`reps` wall-clock time of the initialization and the online
/// step of every method on the study pair of each size. A failing case is
/// reported in its row and the sweep continues.
pub fn bench(
    sizes: &[usize],
    methods: &[Method],
    samples: usize,
    seed: u64,
    reps: usize,
    settings: &Settings,
) -> anyhow::Result<Vec<BenchRow>> {
    if reps == 0 {
        bail!("repetition count must be at least 1");
    }
    let field = FieldKind::Smooth;
    let mut rows = Vec::new();
    for &n in sizes {
        let (source, target) = study_pair(n)?;
        let source_field = interpolate(&source, &field);
        for &method in methods {
            let mut row = BenchRow {
                n,
                elements: target.num_elements(),
                method,
                samples: (method == Method::Mc).then_some(samples),
                workers: rayon::current_num_threads(),
                init_seconds: None,
                online_seconds: None,
                status: String::new(),
            };
            let timed = (|| -> remap_core::Result<(f64, f64)> {
                let (mut init, mut online) = (f64::INFINITY, f64::INFINITY);
                for _ in 0..reps {
                    let start = Instant::now();
                    let op = build_transfer(method, &source, &target, samples, seed, settings)?;
                    init = init.min(start.elapsed().as_secs_f64());
                    let start = Instant::now();
                    let out = op.apply(&source_field)?;
                    online = online.min(start.elapsed().as_secs_f64());
                    drop(out);
                }
                Ok((init, online))
            })();
            match timed {
                Ok((init, online)) => {
                    row.init_seconds = Some(init);
                    row.online_seconds = Some(online);
                }
                Err(e) => row.status = e.kind().to_string(),
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Integral of a nodal field on its own mesh by the degree-2 rule.
pub fn field_integral(f: &NodalField<f64>) -> f64 {
    integrate_field(f, &QuadratureRule::three_point())
}

/// Supermesh between two meshes, located through the source.
pub fn supermesh(target: &Mesh, source: &Mesh) -> remap_core::Result<IntersectionSet<f64>> {
    find_intersections(target, source, &remap_core::UniformGridLocator::new(source.clone()))
}
