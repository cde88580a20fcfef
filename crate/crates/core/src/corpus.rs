//! Labeled corpora of atomic neighborhoods drawn from synthetic lattices.

use rand::seq::SliceRandom;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifier::DiagramRecord;
use crate::error::{invalid_param, Error, Result};
use crate::pointcloud::{generate_lattice, LatticeSpec, PointCloud, SweepIndex, Structure};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CorpusSpec {
    /// Gaussian noise level, in lattice-constant units.
    pub tau: f64,
    pub sparsity: f64,
    pub n_per_class: usize,
    pub radius: f64,
    pub cells_per_axis: usize,
    pub lattice_constant: f64,
    /// Neighborhoods taken from any single lattice sample.
    pub per_sample: usize,
    pub seed: u64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            tau: 0.0,
            sparsity: 0.67,
            n_per_class: 100,
            radius: 1.5,
            cells_per_axis: 10,
            lattice_constant: 1.0,
            per_sample: 50,
            seed: 0,
        }
    }
}

impl CorpusSpec {
    pub fn new(tau: f64, n_per_class: usize, seed: u64) -> Self {
        CorpusSpec {
            tau,
            n_per_class,
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau >= 0.0 && self.tau.is_finite()) {
            return Err(invalid_param("tau must be finite and nonnegative"));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(invalid_param("radius must be positive"));
        }
        if self.per_sample == 0 {
            return Err(invalid_param("per_sample must be positive"));
        }
        if 2.0 * self.margin() >= self.cells_per_axis as f64 * self.lattice_constant {
            return Err(invalid_param(format!(
                "{} cells per axis leave no interior for radius {} at tau {}",
                self.cells_per_axis, self.radius, self.tau
            )));
        }
        self.lattice(Structure::Bcc, 0).validate()
    }

    /// Centers are kept this far from every face of the box so their balls
    /// never reach past the sample boundary.
    pub fn margin(&self) -> f64 {
        self.radius + 2.0 * self.tau
    }

    fn lattice(&self, structure: Structure, seed: u64) -> LatticeSpec {
        LatticeSpec::new(structure, self.cells_per_axis)
            .with_lattice_constant(self.lattice_constant)
            .with_noise(self.tau)
            .with_sparsity(self.sparsity)
            .with_seed(seed)
    }
}

/// Neighborhoods of randomly chosen interior atoms, `n_per_class` of each
/// structure, BCC first. Ids are `bcc-0000`, `fcc-0000`, ...
pub fn generate_corpus(spec: &CorpusSpec) -> Result<Vec<PointCloud>> {
    spec.validate()?;
    let mut out = Vec::with_capacity(2 * spec.n_per_class);
    for (k, structure) in Structure::ALL.into_iter().enumerate() {
        let mut seeds = ChaCha8Rng::seed_from_u64(spec.seed ^ ((k as u64 + 1) << 56));
        let mut taken = 0usize;
        let mut barren = 0usize;
        while taken < spec.n_per_class {
            let sample_seed = seeds.next_u64();
            let sample = generate_lattice(&spec.lattice(structure, sample_seed))?;
            let hi = spec.cells_per_axis as f64 * spec.lattice_constant - spec.margin();
            let lo = spec.margin();
            let mut centers: Vec<usize> = (0..sample.len())
                .filter(|&i| sample.point(i).iter().all(|&x| x >= lo && x <= hi))
                .collect();
            let mut rng = ChaCha8Rng::seed_from_u64(sample_seed);
            centers.shuffle(&mut rng);
            let index = SweepIndex::new(&sample);
            let before = taken;
            for &c in centers.iter().take(spec.per_sample) {
                if taken == spec.n_per_class {
                    break;
                }
                let hits = index.within(sample.point(c), spec.radius);
                if hits.len() < 2 {
                    continue;
                }
                out.push(sample.subset(format!("{structure}-{taken:04}"), &hits));
                taken += 1;
            }
            if taken == before {
                barren += 1;
                if barren > 100 {
                    return Err(Error::InsufficientData(format!(
                        "no {structure} neighborhood with two atoms found in 100 samples"
                    )));
                }
            }
        }
    }
    Ok(out)
}

/// Diagrams of every cloud, computed in parallel; order is preserved.
pub fn diagram_corpus(clouds: &[PointCloud]) -> Result<Vec<DiagramRecord>> {
    clouds.par_iter().map(DiagramRecord::from_cloud).collect()
}
