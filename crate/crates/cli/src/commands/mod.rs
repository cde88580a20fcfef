//! One module per subcommand. Each exposes an argument struct (flags and
//! config-file section at once) and a `run` function.

pub mod bench;
pub mod bound;
pub mod cv;
pub mod dist;
pub mod features;
pub mod fit;
pub mod generate;
pub mod pd;

use std::path::Path;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use topoclass::classifier::{CvConfig, DiagramRecord, ModelKind, SelfPair, TreeParams};
use topoclass::io::{read_diagram_corpus, read_manifest, Manifest};
use topoclass::metrics::{DpcParams, Metric};

pub const DEFAULT_P: f64 = 2.0;
pub const DEFAULT_C: f64 = 1.0;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricName {
    #[default]
    Dpc,
    Wasserstein,
    Bottleneck,
}

pub fn metric(name: Option<MetricName>, p: Option<f64>, c: Option<f64>) -> anyhow::Result<Metric> {
    let p = p.unwrap_or(DEFAULT_P);
    let m = match name.unwrap_or_default() {
        MetricName::Dpc => Metric::dpc(DpcParams::new(p, c.unwrap_or(DEFAULT_C))?),
        MetricName::Wasserstein => Metric::Wasserstein { p },
        MetricName::Bottleneck => Metric::Bottleneck,
    };
    m.validate()?;
    Ok(m)
}

/// `(p, c)` columns of a report row for a metric.
pub fn metric_columns(m: &Metric) -> (Option<f64>, Option<f64>) {
    match *m {
        Metric::Dpc { p, c } => (Some(p), Some(c)),
        Metric::Wasserstein { p } => (Some(p), None),
        Metric::Bottleneck => (None, None),
    }
}

pub struct CvFlags {
    pub folds: Option<usize>,
    pub model: Option<ModelKind>,
    pub max_depth: Option<usize>,
    pub min_leaf: Option<usize>,
    pub self_pair: Option<SelfPair>,
}

pub fn cv_config(seed: u64, f: CvFlags) -> CvConfig {
    let d = CvConfig::with_seed(seed);
    CvConfig {
        folds: f.folds.unwrap_or(d.folds),
        model: f.model.unwrap_or(d.model),
        self_pair: f.self_pair.unwrap_or(d.self_pair),
        tree: TreeParams {
            max_depth: f.max_depth.unwrap_or(d.tree.max_depth),
            min_leaf: f.min_leaf.unwrap_or(d.tree.min_leaf),
        },
        ..d
    }
}

pub fn load_diagrams(dir: &Path) -> anyhow::Result<(Vec<DiagramRecord>, Manifest)> {
    let manifest = read_manifest(dir)?;
    Ok((read_diagram_corpus(dir)?, manifest))
}
