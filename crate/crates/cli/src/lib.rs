//! Command-line harness for the remap library: one-shot transfers and the
//! integral, convergence, round-trip and timing studies, all writing CSV.

pub mod config;
pub mod experiments;
pub mod expr;
pub mod output;

use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use remap_core::mesh::load_msh;
use remap_core::rbf::PointCloud;
use remap_core::RemapError;

use config::{FieldKind, Method, Params};
use experiments::{Mesh, SourceInput};

#[derive(Parser, Debug)]
#[command(name = "remap", version, about = "Field transfer between non-matching triangle meshes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Transfer one analytic or scattered field and report its errors.
    Transfer(Params),
    /// Sampled integral error against sample count, uniform and Sobol.
    IntegralStudy(Params),
    /// Supermesh errors of every method under mesh refinement.
    Convergence(Params),
    /// Repeated there-and-back transfers between two meshes.
    Roundtrip(Params),
    /// Initialization and online timings against mesh size.
    Bench(Params),
}

impl Command {
    pub fn params(&self) -> &Params {
        match self {
            Self::Transfer(p)
            | Self::IntegralStudy(p)
            | Self::Convergence(p)
            | Self::Roundtrip(p)
            | Self::Bench(p) => p,
        }
    }
}

pub const DEFAULT_SAMPLES: [usize; 4] = [400, 800, 1200, 1600];
pub const DEFAULT_LEVELS: [usize; 4] = [8, 16, 32, 64];
pub const DEFAULT_BENCH_SIZES: [usize; 4] = [23, 71, 224, 448];

fn load_or_generate(
    file: Option<&std::path::Path>,
    generated: Option<config::MeshGen>,
) -> anyhow::Result<Option<Mesh>> {
    if let Some(path) = file {
        let mesh = load_msh(path).with_context(|| format!("loading {}", path.display()))?;
        return Ok(Some(Arc::new(mesh)));
    }
    generated.map(|g| experiments::generate(&g).map_err(Into::into)).transpose()
}

fn target_mesh(p: &Params) -> anyhow::Result<Option<Mesh>> {
    load_or_generate(p.target_mesh.as_deref(), p.target_gen.or(p.gen))
}

fn source_mesh(p: &Params) -> anyhow::Result<Option<Mesh>> {
    load_or_generate(p.source_mesh.as_deref(), p.source_gen.or(p.gen.map(|g| g.partner())))
}

fn single_method(p: &Params) -> anyhow::Result<Method> {
    match p.method.as_ref().map(|m| m.0.as_slice()) {
        Some([m]) => Ok(*m),
        Some(_) => bail!("transfer takes exactly one --method"),
        None => bail!("transfer needs --method mi|mc|rbf"),
    }
}

/// Runs one subcommand with already-resolved parameters.
pub fn run(command: &Command, p: &Params) -> anyhow::Result<()> {
    let settings = p.settings()?;
    match command {
        Command::Transfer(_) => {
            let method = single_method(p)?;
            let target = target_mesh(p)?.context("no target mesh: use --target-mesh, --target-gen or --gen")?;
            let (source, field) = match &p.source_points {
                Some(path) => {
                    let (coords, values) = output::read_points(path)?;
                    (SourceInput::Points(PointCloud::new(coords, values)?), p.field.clone())
                }
                None => {
                    let source = source_mesh(p)?.context("no source mesh: use --source-mesh, --source-gen or --gen")?;
                    (SourceInput::Mesh(source), Some(p.field_or(FieldKind::Smooth)))
                }
            };
            let samples = *p.samples_or(&[1600]).first().expect("non-empty");
            let seed = *p.seeds_or(&[1]).first().expect("non-empty");
            let outcome = experiments::run_transfer(method, &source, &target, field.as_ref(), samples, seed, &settings)?;
            output::write_field(output::open(p.out.as_deref())?, &outcome.field)?;
            output::write_metrics(output::open(p.metrics_out.as_deref())?, &[outcome.report])?;
        }
        Command::IntegralStudy(_) => {
            let seeds: Vec<u64> = (1..=30).collect();
            let rows = experiments::integral_study(
                &p.field_or(FieldKind::Linear),
                &p.samples_or(&experiments::log_sample_grid(9)),
                &p.seeds_or(&seeds),
            )?;
            output::write_integral(output::open(p.out.as_deref())?, &rows)?;
        }
        Command::Convergence(_) => {
            let levels = p.levels.as_ref().map_or(DEFAULT_LEVELS.to_vec(), |l| l.0.clone());
            let rows = experiments::convergence(
                &levels,
                &p.field_or(FieldKind::Smooth),
                &p.methods(),
                &p.samples_or(&DEFAULT_SAMPLES),
                &p.seeds_or(&[1]),
                &settings,
            )?;
            output::write_convergence(output::open(p.out.as_deref())?, &rows)?;
        }
        Command::Roundtrip(_) => {
            let (fine, coarse) = experiments::roundtrip_pair();
            let first = source_mesh(p)?.map_or_else(|| experiments::generate(&fine), Ok)?;
            let second = target_mesh(p)?.map_or_else(|| experiments::generate(&coarse), Ok)?;
            let rows = experiments::roundtrip(
                &first,
                &second,
                &p.field_or(FieldKind::Smooth),
                &p.methods(),
                &p.samples_or(&DEFAULT_SAMPLES),
                &p.seeds_or(&[1]),
                p.iterations.unwrap_or(100),
                &settings,
            )?;
            output::write_roundtrip(output::open(p.out.as_deref())?, &rows)?;
        }
        Command::Bench(_) => {
            let sizes = p.sizes.as_ref().map_or(DEFAULT_BENCH_SIZES.to_vec(), |s| s.0.clone());
            let rows = experiments::bench(
                &sizes,
                &p.methods(),
                *p.samples_or(&[400]).first().expect("non-empty"),
                *p.seeds_or(&[1]).first().expect("non-empty"),
                p.reps.unwrap_or(3),
                &settings,
            )?;
            output::write_bench(output::open(p.out.as_deref())?, &rows)?;
        }
    }
    Ok(())
}

/// `error,<kind>,<message>` for the first library error in the chain,
/// `error,config,<message>` otherwise.
pub fn error_line(err: &anyhow::Error) -> String {
    let kind = err
        .chain()
        .find_map(|e| e.downcast_ref::<RemapError>())
        .map_or("config", RemapError::kind);
    let message = format!("{err:#}").replace(['\n', '\r'], " ");
    format!("error,{kind},{message}")
}
