//! CSV writers. Every file starts with a `# schema: <name>/<version>` line.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::Context;
use remap_core::{ErrorReport, NodalField};
use serde::Deserialize;

use crate::experiments::{BenchRow, ConvergenceRow, IntegralRow, RoundtripRow};

pub const FIELD_SCHEMA: &str = "remap-field/1";
pub const METRICS_SCHEMA: &str = "remap-metrics/1";
pub const INTEGRAL_SCHEMA: &str = "remap-integral-study/1";
pub const CONVERGENCE_SCHEMA: &str = "remap-convergence/1";
pub const ROUNDTRIP_SCHEMA: &str = "remap-roundtrip/1";
pub const BENCH_SCHEMA: &str = "remap-bench/1";

pub fn open(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Shortest representation that reads back to the same `f64`.
pub fn num(v: f64) -> String {
    format!("{v:e}")
}

fn opt<V: ToString>(v: Option<V>) -> String {
    v.map_or(String::new(), |v| v.to_string())
}

fn write_table<W: Write>(out: W, schema: &str, header: &[&str], rows: Vec<Vec<String>>) -> anyhow::Result<()> {
    let mut out = out;
    writeln!(out, "# schema: {schema}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_field<W: Write>(out: W, field: &NodalField<f64>) -> anyhow::Result<()> {
    let rows = field
        .mesh()
        .nodes()
        .iter()
        .zip(field.values())
        .enumerate()
        .map(|(i, (p, v))| vec![i.to_string(), p[0].to_string(), p[1].to_string(), v.to_string()])
        .collect();
    write_table(out, FIELD_SCHEMA, &["node_id", "x", "y", "value"], rows)
}

pub fn write_metrics<W: Write>(out: W, reports: &[ErrorReport]) -> anyhow::Result<()> {
    let mut out = out;
    writeln!(out, "# schema: {METRICS_SCHEMA}")?;
    writeln!(out, "{}", ErrorReport::CSV_HEADER)?;
    for r in reports {
        writeln!(out, "{}", r.csv_row())?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_integral<W: Write>(out: W, rows: &[IntegralRow]) -> anyhow::Result<()> {
    let rows = rows
        .iter()
        .map(|r| vec![r.samples.to_string(), r.mode.to_string(), r.seed.to_string(), num(r.e_int)])
        .collect();
    write_table(out, INTEGRAL_SCHEMA, &["samples", "mode", "seed", "e_int"], rows)
}

pub fn write_convergence<W: Write>(out: W, rows: &[ConvergenceRow]) -> anyhow::Result<()> {
    let rows = rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                num(r.h),
                r.method.to_string(),
                opt(r.samples),
                opt(r.seed),
                num(r.e_l2),
                num(r.e_mass_sm),
            ]
        })
        .collect();
    write_table(
        out,
        CONVERGENCE_SCHEMA,
        &["n", "h", "method", "samples", "seed", "e_l2", "e_mass_sm"],
        rows,
    )
}

pub fn write_roundtrip<W: Write>(out: W, rows: &[RoundtripRow]) -> anyhow::Result<()> {
    let rows = rows
        .iter()
        .map(|r| {
            vec![
                r.iteration.to_string(),
                r.method.to_string(),
                opt(r.samples),
                opt(r.seed),
                num(r.e_dof_l2),
                num(r.e_mass_m1),
            ]
        })
        .collect();
    write_table(
        out,
        ROUNDTRIP_SCHEMA,
        &["iteration", "method", "samples", "seed", "e_dof_l2", "e_mass_m1"],
        rows,
    )
}

pub fn write_bench<W: Write>(out: W, rows: &[BenchRow]) -> anyhow::Result<()> {
    let rows = rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.elements.to_string(),
                r.method.to_string(),
                opt(r.samples),
                r.workers.to_string(),
                opt(r.init_seconds.map(num)),
                opt(r.online_seconds.map(num)),
                opt(r.online_per_element().map(num)),
                r.status.clone(),
            ]
        })
        .collect();
    write_table(
        out,
        BENCH_SCHEMA,
        &[
            "n",
            "elements",
            "method",
            "samples",
            "workers",
            "init_s",
            "online_s",
            "online_per_element_s",
            "status",
        ],
        rows,
    )
}

#[derive(Deserialize)]
struct PointRecord {
    x: f64,
    y: f64,
    value: f64,
}

/// Scattered samples from a CSV with header `x,y,value`; `#` lines are
/// comments.
pub fn read_points(path: &Path) -> anyhow::Result<(Vec<[f64; 2]>, Vec<f64>)> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("opening {}", path.display()))?;
    let (mut coords, mut values) = (Vec::new(), Vec::new());
    for (i, rec) in reader.deserialize::<PointRecord>().enumerate() {
        let r = rec.with_context(|| format!("{}: record {}", path.display(), i + 1))?;
        coords.push([r.x, r.y]);
        values.push(r.value);
    }
    Ok((coords, values))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for v in [0.1, 1.0 / 3.0, 2.5e-17, 123456.789] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn points_csv_with_comments() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("pts.csv");
        std::fs::write(&p, "# schema: anything\nx,y,value\n0,0,1\n0.5, 1, 2.5\n").unwrap();
        let (c, v) = read_points(&p).unwrap();
        assert_eq!(c, vec![[0.0, 0.0], [0.5, 1.0]]);
        assert_eq!(v, vec![1.0, 2.5]);
        std::fs::write(&p, "x,y,value\n0,zero,1\n").unwrap();
        assert!(read_points(&p).is_err());
    }
}
