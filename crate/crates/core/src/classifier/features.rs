//! Distance-statistics features.
//!
//! A diagram pair `(X⁰, X¹)` is described by the mean and sample variance
//! of its distances to every BCC reference and to every FCC reference, in
//! both homology dimensions: eight numbers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::Metric;
use crate::pointcloud::{PointCloud, Structure};
use crate::rips::{cloud_diagrams, diagram_cardinalities, PersistenceDiagram, RipsOptions};
use crate::stats::CardinalityRecord;

/// Finite dimension-0 and dimension-1 diagrams of one labeled cloud.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagramRecord {
    pub id: String,
    pub label: Option<Structure>,
    /// Number of points in the cloud (`b0`, essential class included).
    pub b0: usize,
    pub dim0: PersistenceDiagram,
    pub dim1: PersistenceDiagram,
}

impl DiagramRecord {
    /// Runs the Rips pipeline on `pc` and strips essential classes.
    pub fn from_cloud(pc: &PointCloud) -> Result<Self> {
        let diags = cloud_diagrams(pc, &RipsOptions::default())?;
        let (b0, _) = diagram_cardinalities(&diags)?;
        Ok(DiagramRecord {
            id: pc.id().to_string(),
            label: pc.label(),
            b0,
            dim0: diags.get(0).expect("dim 0").finite(),
            dim1: diags.get(1).expect("dim 1").finite(),
        })
    }

    /// Builds a record from stored diagrams; `dim0` may include its
    /// essential class.
    pub fn from_diagrams(id: impl Into<String>, label: Option<Structure>, dim0: &PersistenceDiagram, dim1: &PersistenceDiagram) -> Self {
        DiagramRecord {
            id: id.into(),
            label,
            b0: dim0.len(),
            dim0: dim0.finite(),
            dim1: dim1.finite(),
        }
    }

    pub fn b1(&self) -> usize {
        self.dim1.len()
    }

    pub fn cardinality_record(&self) -> CardinalityRecord {
        CardinalityRecord::new(self.id.clone(), self.b0, self.b1())
    }

    pub fn diagram(&self, dim: usize) -> &PersistenceDiagram {
        match dim {
            0 => &self.dim0,
            _ => &self.dim1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub e_b0: f64,
    pub e_b1: f64,
    pub v_b0: f64,
    pub v_b1: f64,
    pub e_f0: f64,
    pub e_f1: f64,
    pub v_f0: f64,
    pub v_f1: f64,
}

impl FeatureVector {
    pub const NAMES: [&'static str; 8] = ["e_b0", "e_b1", "v_b0", "v_b1", "e_f0", "e_f1", "v_f0", "v_f1"];

    pub fn to_array(&self) -> [f64; 8] {
        [self.e_b0, self.e_b1, self.v_b0, self.v_b1, self.e_f0, self.e_f1, self.v_f0, self.v_f1]
    }

    pub fn from_array(a: [f64; 8]) -> Self {
        FeatureVector {
            e_b0: a[0],
            e_b1: a[1],
            v_b0: a[2],
            v_b1: a[3],
            e_f0: a[4],
            e_f1: a[5],
            v_f0: a[6],
            v_f1: a[7],
        }
    }
}

/// Mean and `1/(N-1)` sample variance.
pub(crate) fn mean_var(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / n;
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// Assembles the features of one query from its distances to the
/// references: `dist0[r]`, `dist1[r]` for reference `r` with label
/// `labels[r]`.
pub fn features_from_distances(dist0: &[f64], dist1: &[f64], labels: &[Structure]) -> FeatureVector {
    let pick = |d: &[f64], class: Structure| mean_var(d.iter().zip(labels).filter(move |(_, &l)| l == class).map(|(v, _)| *v));
    let (e_b0, v_b0) = pick(dist0, Structure::Bcc);
    let (e_b1, v_b1) = pick(dist1, Structure::Bcc);
    let (e_f0, v_f0) = pick(dist0, Structure::Fcc);
    let (e_f1, v_f1) = pick(dist1, Structure::Fcc);
    FeatureVector {
        e_b0,
        e_b1,
        v_b0,
        v_b1,
        e_f0,
        e_f1,
        v_f0,
        v_f1,
    }
}

pub(crate) fn reference_labels(reference: &[DiagramRecord]) -> Result<Vec<Structure>> {
    let labels: Vec<Structure> = reference
        .iter()
        .map(|r| r.label.ok_or_else(|| Error::InvalidInput(format!("reference `{}` is unlabeled", r.id))))
        .collect::<Result<_>>()?;
    check_class_sizes(&labels)?;
    Ok(labels)
}

pub(crate) fn check_class_sizes(labels: &[Structure]) -> Result<()> {
    for class in Structure::ALL {
        let n = labels.iter().filter(|&&l| l == class).count();
        if n < 2 {
            return Err(Error::InsufficientData(format!(
                "{n} {class} reference diagram(s); the variance feature needs at least 2"
            )));
        }
    }
    Ok(())
}

/// Features of one query against a labeled reference corpus.
pub fn build_features(query: &DiagramRecord, reference: &[DiagramRecord], metric: &Metric) -> Result<FeatureVector> {
    let labels = reference_labels(reference)?;
    let dist = |dim: usize| -> Result<Vec<f64>> {
        reference
            .iter()
            .map(|r| metric.distance(query.diagram(dim), r.diagram(dim)))
            .collect()
    };
    Ok(features_from_distances(&dist(0)?, &dist(1)?, &labels))
}

/// Features of every query against the same reference corpus.
pub fn build_feature_matrix(queries: &[DiagramRecord], reference: &[DiagramRecord], metric: &Metric) -> Result<Vec<FeatureVector>> {
    use rayon::prelude::*;
    reference_labels(reference)?;
    queries.par_iter().map(|q| build_features(q, reference, metric)).collect()
}
