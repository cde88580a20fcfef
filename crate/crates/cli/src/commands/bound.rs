use std::path::PathBuf;

use clap::Args;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use topoclass::classifier::DiagramRecord;
use topoclass::metrics::DpcParams;
use topoclass::stats::{dpc_probabilistic_bound, wls_fit, PredictorTransform};
use topoclass::Structure;

use super::{load_diagrams, DEFAULT_C, DEFAULT_P};
use crate::commands::fit::DEFAULT_ALPHA;
use crate::config::{existing, parse_serde, Globals};
use crate::report::emit;

/// For every pair of same-class diagrams `(x, y)` with `x` before `y`,
/// reports the dimension-1 `d_p^c` next to its probabilistic upper bound.
/// The hole-count fit is made per class on the same corpus.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, value_parser = parse_serde::<PredictorTransform>)]
    pub transform: Option<PredictorTransform>,
}

#[derive(Serialize)]
struct Row {
    x: String,
    y: String,
    label: Option<Structure>,
    distance: f64,
    unnormalized: f64,
    bound: f64,
    holds: bool,
    seed: Option<u64>,
}

pub fn run(a: &BoundArgs, g: &Globals) -> anyhow::Result<()> {
    let input = existing(a.input.as_ref(), "input")?;
    let params = DpcParams::new(a.p.unwrap_or(DEFAULT_P), a.c.unwrap_or(DEFAULT_C))?;
    let alpha = a.alpha.unwrap_or(DEFAULT_ALPHA);
    let transform = a.transform.unwrap_or_default();
    let (corpus, manifest) = load_diagrams(&input)?;
    let seed = manifest.seed.or(g.seed);

    let mut groups: Vec<(Option<Structure>, Vec<&DiagramRecord>)> = Vec::new();
    for r in &corpus {
        match groups.iter_mut().find(|(l, _)| *l == r.label) {
            Some((_, v)) => v.push(r),
            None => groups.push((r.label, vec![r])),
        }
    }
    groups.sort_by_key(|(l, _)| *l);

    let mut rows = Vec::new();
    for (label, members) in &groups {
        let cards: Vec<_> = members.iter().map(|r| r.cardinality_record()).collect();
        let fit = wls_fit(&cards, transform)?;
        let pairs: Vec<(usize, usize)> = (0..members.len())
            .flat_map(|i| (i + 1..members.len()).map(move |j| (i, j)))
            .collect();
        let mut chunk: Vec<Row> = pairs
            .par_iter()
            .map(|&(i, j)| {
                let (x, y) = (members[i], members[j]);
                let b = dpc_probabilistic_bound(&x.dim1, &y.dim1, &fit, x.b0 as f64, alpha, &params)?;
                Ok(Row {
                    x: x.id.clone(),
                    y: y.id.clone(),
                    label: *label,
                    distance: b.normalized,
                    unnormalized: b.unnormalized,
                    bound: b.bound,
                    holds: b.holds(),
                    seed,
                })
            })
            .collect::<topoclass::Result<_>>()?;
        rows.append(&mut chunk);
    }
    emit(&rows, g.format)
}
