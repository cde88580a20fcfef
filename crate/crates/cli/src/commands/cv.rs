use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};
use topoclass::classifier::{
    counting_classifier, cross_validate, default_c_grid, geometric_grid, grid_search_c, CvReport, ModelKind, SelfPair,
};
use topoclass::metrics::Metric;

use super::{cv_config, load_diagrams, CvFlags, DEFAULT_P};
use crate::config::{existing, parse_serde, usage, Globals};
use crate::report::emit;

/// Stratified k-fold accuracy of the distance-feature tree, one row per
/// input corpus, optionally next to the counting and Wasserstein baselines.
///
/// `c` comes from `--c`, or from a grid search on the separate `--tune`
/// corpus.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CvArgs {
    /// Diagram corpus directories.
    #[arg(long, num_args = 1..)]
    pub input: Option<Vec<PathBuf>>,
    #[arg(long)]
    pub tune: Option<PathBuf>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Also report the counting and Wasserstein classifiers.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub baselines: Option<bool>,
    #[arg(long)]
    pub folds: Option<usize>,
    /// tree or logistic.
    #[arg(long, value_parser = parse_serde::<ModelKind>)]
    pub model: Option<ModelKind>,
    #[arg(long)]
    pub max_depth: Option<usize>,
    #[arg(long)]
    pub min_leaf: Option<usize>,
    #[arg(long, value_parser = parse_serde::<SelfPair>)]
    pub self_pair: Option<SelfPair>,
}

/// Cross-validates `d_p^c` over a geometric `c` grid on one corpus.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub c_min: Option<f64>,
    #[arg(long)]
    pub c_max: Option<f64>,
    #[arg(long)]
    pub c_count: Option<usize>,
    #[arg(long)]
    pub folds: Option<usize>,
    #[arg(long, value_parser = parse_serde::<ModelKind>)]
    pub model: Option<ModelKind>,
    #[arg(long)]
    pub max_depth: Option<usize>,
    #[arg(long)]
    pub min_leaf: Option<usize>,
    #[arg(long, value_parser = parse_serde::<SelfPair>)]
    pub self_pair: Option<SelfPair>,
}

#[derive(Serialize)]
struct CvRow {
    corpus: String,
    tau: Option<f64>,
    classifier: &'static str,
    p: Option<f64>,
    c: Option<f64>,
    accuracy: f64,
    folds: usize,
    n: usize,
    seed: u64,
}

#[derive(Serialize)]
struct GridRow {
    c: f64,
    p: f64,
    accuracy: f64,
    best: bool,
    seed: u64,
}

pub fn run_cv(a: &CvArgs, g: &Globals) -> anyhow::Result<()> {
    let inputs = a.input.clone().unwrap_or_default();
    if inputs.is_empty() {
        return Err(usage("cv: missing required --input <DIR>..."));
    }
    let inputs: Vec<PathBuf> = inputs.iter().map(|p| existing(Some(p), "input")).collect::<anyhow::Result<_>>()?;
    let tune = a.tune.as_ref().map(|t| existing(Some(t), "tune")).transpose()?;
    if a.c.is_none() && tune.is_none() {
        return Err(usage("cv: give --c, or --tune <DIR> to choose c by grid search"));
    }
    let seed = g.require_seed("cv")?;
    let p = a.p.unwrap_or(DEFAULT_P);
    let cfg = cv_config(
        seed,
        CvFlags {
            folds: a.folds,
            model: a.model,
            max_depth: a.max_depth,
            min_leaf: a.min_leaf,
            self_pair: a.self_pair,
        },
    );
    let c = match (a.c, &tune) {
        (Some(c), _) => c,
        (None, Some(t)) => grid_search_c(&load_diagrams(t)?.0, &default_c_grid(), p, &cfg)?.best_c,
        (None, None) => unreachable!("checked above"),
    };

    let mut rows = Vec::new();
    for dir in &inputs {
        let (corpus, manifest) = load_diagrams(dir)?;
        let tau = manifest.corpus.as_ref().map(|s| s.tau);
        let row = |classifier, p, c, r: CvReport| CvRow {
            corpus: dir.display().to_string(),
            tau,
            classifier,
            p,
            c,
            accuracy: r.mean_accuracy,
            folds: r.folds,
            n: r.n_samples,
            seed,
        };
        rows.push(row("dpc", Some(p), Some(c), cross_validate(&corpus, &Metric::Dpc { p, c }, &cfg)?));
        if a.baselines.unwrap_or(false) {
            rows.push(row("counting", None, None, counting_classifier(&corpus, &cfg)?));
            rows.push(row("wasserstein", Some(p), None, cross_validate(&corpus, &Metric::Wasserstein { p }, &cfg)?));
        }
    }
    emit(&rows, g.format)
}

pub fn run_grid(a: &GridArgs, g: &Globals) -> anyhow::Result<()> {
    let input = existing(a.input.as_ref(), "input")?;
    let seed = g.require_seed("grid")?;
    let p = a.p.unwrap_or(DEFAULT_P);
    let grid = match (a.c_min, a.c_max, a.c_count) {
        (None, None, None) => default_c_grid(),
        (lo, hi, n) => geometric_grid(lo.unwrap_or(0.01), hi.unwrap_or(1.0), n.unwrap_or(10))?,
    };
    let cfg = cv_config(
        seed,
        CvFlags {
            folds: a.folds,
            model: a.model,
            max_depth: a.max_depth,
            min_leaf: a.min_leaf,
            self_pair: a.self_pair,
        },
    );
    let (corpus, _) = load_diagrams(&input)?;
    let result = grid_search_c(&corpus, &grid, p, &cfg)?;
    let rows: Vec<GridRow> = result
        .scores
        .iter()
        .map(|s| GridRow {
            c: s.c,
            p,
            accuracy: s.mean_accuracy,
            best: s.c == result.best_c,
            seed,
        })
        .collect();
    emit(&rows, g.format)
}
