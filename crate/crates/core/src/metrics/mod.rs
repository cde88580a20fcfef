//! Distances between persistence diagrams.

pub mod assignment;
pub mod dpc;
pub mod wasserstein;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid_input, Result};
use crate::rips::{PersistenceDiagram, PersistencePair};

pub use assignment::{assignment_solve, CostMatrix, Matching};
pub use dpc::{dpc_distance, dpc_matching, DpcMatching, DpcParams};
pub use wasserstein::{bottleneck_distance, wasserstein_distance};

/// ℓ∞ distance between two diagram points.
#[inline]
pub fn linf(a: &PersistencePair, b: &PersistencePair) -> f64 {
    (a.birth - b.birth).abs().max((a.death - b.death).abs())
}

pub(crate) fn check_finite(d: &PersistenceDiagram) -> Result<()> {
    if d.has_essential() {
        return Err(invalid_input(format!(
            "dimension-{} diagram has essential classes; strip them before measuring distances",
            d.dim()
        )));
    }
    Ok(())
}

/// Which diagram distance to use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "metric", rename_all = "lowercase")]
pub enum Metric {
    Dpc { p: f64, c: f64 },
    Wasserstein { p: f64 },
    Bottleneck,
}

impl Metric {
    pub fn dpc(params: DpcParams) -> Self {
        Metric::Dpc {
            p: params.p(),
            c: params.c(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Metric::Dpc { .. } => "dpc",
            Metric::Wasserstein { .. } => "wasserstein",
            Metric::Bottleneck => "bottleneck",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Metric::Dpc { p, c } => DpcParams::new(p, c).map(|_| ()),
            Metric::Wasserstein { p } => wasserstein_distance(&PersistenceDiagram::empty(0), &PersistenceDiagram::empty(0), p).map(|_| ()),
            Metric::Bottleneck => Ok(()),
        }
    }

    pub fn distance(&self, x: &PersistenceDiagram, y: &PersistenceDiagram) -> Result<f64> {
        match *self {
            Metric::Dpc { p, c } => dpc_distance(x, y, &DpcParams::new(p, c)?),
            Metric::Wasserstein { p } => wasserstein_distance(x, y, p),
            Metric::Bottleneck => bottleneck_distance(x, y),
        }
    }
}

/// Dense square matrix of reals.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        SquareMatrix { n, data: vec![0.0; n * n] }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        (0..self.n).map(move |i| self.row(i))
    }
}

/// All pairwise distances within a corpus of diagrams of one dimension.
/// Entries are evaluated in parallel; the result is deterministic.
pub fn pairwise_distances(corpus: &[PersistenceDiagram], metric: &Metric) -> Result<SquareMatrix> {
    metric.validate()?;
    if let Some(first) = corpus.first() {
        if let Some(bad) = corpus.iter().find(|d| d.dim() != first.dim()) {
            return Err(invalid_input(format!(
                "corpus mixes homology dimensions {} and {}",
                first.dim(),
                bad.dim()
            )));
        }
    }
    let n = corpus.len();
    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| (i + 1..n).map(|j| metric.distance(&corpus[i], &corpus[j])).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let mut out = SquareMatrix::zeros(n);
    for (i, row) in upper.iter().enumerate() {
        for (k, &v) in row.iter().enumerate() {
            let j = i + 1 + k;
            out.set(i, j, v);
            out.set(j, i, v);
        }
    }
    Ok(out)
}

/// `out[q][r] = metric(queries[q], references[r])`.
pub fn cross_distances(queries: &[PersistenceDiagram], references: &[PersistenceDiagram], metric: &Metric) -> Result<Vec<Vec<f64>>> {
    metric.validate()?;
    queries
        .par_iter()
        .map(|q| references.iter().map(|r| metric.distance(q, r)).collect())
        .collect()
}
