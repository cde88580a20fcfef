use std::time::Instant;

use clap::Args;
use serde::{Deserialize, Serialize};
use topoclass::classifier::{corpus_distances, cross_validate_with_distances, CvConfig};
use topoclass::corpus::{diagram_corpus, generate_corpus, CorpusSpec};
use topoclass::metrics::Metric;

use super::DEFAULT_P;
use crate::config::Globals;
use crate::report::emit;

/// Times each pipeline stage on a freshly generated corpus. Timings are the
/// one report that is not reproducible run to run; every other column is.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchArgs {
    #[arg(long)]
    pub n_per_class: Option<usize>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
}

#[derive(Serialize)]
struct Row {
    stage: &'static str,
    items: usize,
    seconds: f64,
    seed: u64,
}

pub fn run(a: &BenchArgs, g: &Globals) -> anyhow::Result<()> {
    let seed = g.require_seed("bench")?;
    let spec = CorpusSpec::new(a.tau.unwrap_or(0.25), a.n_per_class.unwrap_or(50), seed);
    spec.validate()?;
    let metric = Metric::Dpc {
        p: DEFAULT_P,
        c: a.c.unwrap_or(0.1),
    };
    metric.validate()?;
    let mut rows = Vec::new();
    let mut timed = |stage, items, t: Instant| {
        rows.push(Row {
            stage,
            items,
            seconds: t.elapsed().as_secs_f64(),
            seed,
        })
    };

    let t = Instant::now();
    let clouds = generate_corpus(&spec)?;
    timed("generate", clouds.len(), t);

    let t = Instant::now();
    let records = diagram_corpus(&clouds)?;
    timed("diagrams", records.len(), t);

    let t = Instant::now();
    let distances = corpus_distances(&records, &metric)?;
    timed("distances", 2 * records.len() * records.len(), t);

    let t = Instant::now();
    let cfg = CvConfig::with_seed(seed);
    let report = cross_validate_with_distances(&records, &distances, &metric, &cfg)?;
    timed("cv", report.folds, t);

    emit(&rows, g.format)
}
