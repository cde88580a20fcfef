use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};
use topoclass::classifier::{build_feature_matrix, corpus_distances, features_from_distances, FeatureVector, SelfPair};
use topoclass::io::write_features;
use topoclass::Structure;

use super::{load_diagrams, metric, metric_columns, MetricName};
use crate::config::{existing, parse_serde, usage, Globals};
use crate::report::emit;

/// Writes the eight per-class distance statistics of every diagram in
/// `--input` against the labeled `--reference` corpus (default: the input
/// itself).
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeaturesArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub reference: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub metric: Option<MetricName>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    /// exclude or include a diagram's zero distance to itself when the
    /// input is its own reference.
    #[arg(long, value_parser = parse_serde::<SelfPair>)]
    pub self_pair: Option<SelfPair>,
}

#[derive(Serialize)]
struct Row {
    out: String,
    rows: usize,
    metric: &'static str,
    p: Option<f64>,
    c: Option<f64>,
    seed: Option<u64>,
}

pub fn run(a: &FeaturesArgs, g: &Globals) -> anyhow::Result<()> {
    let input = existing(a.input.as_ref(), "input")?;
    let out = a.out.clone().ok_or_else(|| usage("features: missing required --out <FILE>"))?;
    let m = metric(a.metric, a.p, a.c)?;
    let (corpus, manifest) = load_diagrams(&input)?;
    let features: Vec<FeatureVector> = match &a.reference {
        Some(r) => {
            let (reference, _) = load_diagrams(&existing(Some(r), "reference")?)?;
            build_feature_matrix(&corpus, &reference, &m)?
        }
        None => self_features(&corpus, &m, a.self_pair.unwrap_or_default())?,
    };
    let rows: Vec<(FeatureVector, Option<Structure>)> = features.into_iter().zip(corpus.iter().map(|r| r.label)).collect();
    write_features(&out, &rows)?;
    let (p, c) = metric_columns(&m);
    emit(
        &[Row {
            out: out.display().to_string(),
            rows: rows.len(),
            metric: m.name(),
            p,
            c,
            seed: manifest.seed.or(g.seed),
        }],
        g.format,
    )
}

fn self_features(
    corpus: &[topoclass::classifier::DiagramRecord],
    m: &topoclass::metrics::Metric,
    self_pair: SelfPair,
) -> anyhow::Result<Vec<FeatureVector>> {
    if self_pair == SelfPair::Include {
        return Ok(build_feature_matrix(corpus, corpus, m)?);
    }
    let labels: Vec<Structure> = corpus
        .iter()
        .map(|r| r.label.ok_or_else(|| usage(format!("features: `{}` is unlabeled", r.id))))
        .collect::<anyhow::Result<_>>()?;
    for class in Structure::ALL {
        let n = labels.iter().filter(|&&l| l == class).count();
        if n < 3 {
            return Err(topoclass::Error::InsufficientData(format!(
                "{n} {class} diagram(s); leave-one-out variance features need at least 3 per class"
            ))
            .into());
        }
    }
    let [d0, d1] = corpus_distances(corpus, m)?;
    Ok((0..corpus.len())
        .map(|i| {
            let keep = |row: &[f64]| -> Vec<f64> { row.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| *v).collect() };
            let others: Vec<Structure> = labels.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, l)| *l).collect();
            features_from_distances(&keep(d0.row(i)), &keep(d1.row(i)), &others)
        })
        .collect())
}
