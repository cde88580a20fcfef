use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};
use topoclass::io::{read_diagram_file, write_distance_matrix, MatrixSidecar};
use topoclass::metrics::pairwise_distances;
use topoclass::rips::PersistenceDiagram;

use super::{load_diagrams, metric, metric_columns, MetricName};
use crate::config::{existing, usage, Globals};
use crate::report::emit;

/// Distance between two diagram files (`--x`, `--y`), or the pairwise
/// matrices of a diagram corpus (`--input`, `--out`).
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistArgs {
    #[arg(long)]
    pub x: Option<PathBuf>,
    #[arg(long)]
    pub y: Option<PathBuf>,
    /// Diagram corpus directory.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Output directory for `dist-dim0.csv` and `dist-dim1.csv`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub metric: Option<MetricName>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
}

#[derive(Serialize)]
struct Row {
    x: String,
    y: String,
    dim: usize,
    metric: &'static str,
    p: Option<f64>,
    c: Option<f64>,
    distance: f64,
    seed: Option<u64>,
}

#[derive(Serialize)]
struct MatrixRow {
    file: String,
    dim: usize,
    size: usize,
    metric: &'static str,
    p: Option<f64>,
    c: Option<f64>,
    seed: Option<u64>,
}

pub fn run(a: &DistArgs, g: &Globals) -> anyhow::Result<()> {
    let m = metric(a.metric, a.p, a.c)?;
    let (p, c) = metric_columns(&m);
    match (&a.x, &a.y, &a.input) {
        (Some(_), Some(_), None) => {
            let xp = existing(a.x.as_ref(), "x")?;
            let yp = existing(a.y.as_ref(), "y")?;
            let x = read_diagram_file(&xp, "x", None)?;
            let y = read_diagram_file(&yp, "y", None)?;
            let rows = [0, 1]
                .into_iter()
                .map(|dim| {
                    Ok(Row {
                        x: xp.display().to_string(),
                        y: yp.display().to_string(),
                        dim,
                        metric: m.name(),
                        p,
                        c,
                        distance: m.distance(x.diagram(dim), y.diagram(dim))?,
                        seed: g.seed,
                    })
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            emit(&rows, g.format)
        }
        (None, None, Some(_)) => {
            let input = existing(a.input.as_ref(), "input")?;
            let out = a.out.clone().ok_or_else(|| usage("dist: a corpus needs --out <DIR>"))?;
            std::fs::create_dir_all(&out)?;
            let (corpus, manifest) = load_diagrams(&input)?;
            let ids: Vec<String> = corpus.iter().map(|r| r.id.clone()).collect();
            let mut rows = Vec::new();
            for dim in [0, 1] {
                let diagrams: Vec<PersistenceDiagram> = corpus.iter().map(|r| r.diagram(dim).clone()).collect();
                let matrix = pairwise_distances(&diagrams, &m)?;
                let file = out.join(format!("dist-dim{dim}.csv"));
                write_distance_matrix(&file, &matrix, &MatrixSidecar::new(&m, Some(dim), ids.clone()))?;
                rows.push(MatrixRow {
                    file: file.display().to_string(),
                    dim,
                    size: matrix.len(),
                    metric: m.name(),
                    p,
                    c,
                    seed: manifest.seed.or(g.seed),
                });
            }
            emit(&rows, g.format)
        }
        _ => Err(usage("dist: give either --x and --y, or --input")),
    }
}
