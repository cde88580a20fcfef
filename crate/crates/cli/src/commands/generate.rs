use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};
use topoclass::corpus::{generate_corpus, CorpusSpec};
use topoclass::io::{write_corpus, write_point_cloud, write_point_cloud_to};
use topoclass::pointcloud::{generate_lattice, LatticeSpec};
use topoclass::Structure;

use crate::config::{parse_serde, usage, Globals};
use crate::report::emit;

/// Without `--structure`, writes a labeled corpus of neighborhoods of both
/// classes into `--out`. With it, writes a single lattice sample as CSV to
/// `--out` (or stdout).
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerateArgs {
    /// bcc or fcc: emit one lattice sample instead of a corpus.
    #[arg(long, value_parser = parse_serde::<Structure>)]
    pub structure: Option<Structure>,
    /// Gaussian noise standard deviation, in lattice constants.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Fraction of atoms removed after noise.
    #[arg(long)]
    pub sparsity: Option<f64>,
    /// Unit cells per axis of each lattice sample.
    #[arg(long)]
    pub cells: Option<usize>,
    #[arg(long)]
    pub n_per_class: Option<usize>,
    /// Neighborhood radius, in lattice constants.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Neighborhoods drawn from each lattice sample.
    #[arg(long)]
    pub per_sample: Option<usize>,
    #[arg(long)]
    pub lattice_constant: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct SampleRow {
    id: String,
    structure: Structure,
    atoms: usize,
    removed: usize,
    seed: Option<u64>,
}

#[derive(Serialize)]
struct CorpusRow {
    out: String,
    entries: usize,
    bcc: usize,
    fcc: usize,
    tau: f64,
    sparsity: f64,
    seed: u64,
}

pub fn run(a: &GenerateArgs, g: &Globals) -> anyhow::Result<()> {
    match a.structure {
        Some(s) => single(s, a, g),
        None => corpus(a, g),
    }
}

fn single(structure: Structure, a: &GenerateArgs, g: &Globals) -> anyhow::Result<()> {
    let d = CorpusSpec::default();
    let tau = a.tau.unwrap_or(0.0);
    let sparsity = a.sparsity.unwrap_or(d.sparsity);
    // a noise-free, unthinned sample is deterministic and needs no seed
    let seed = if tau > 0.0 || sparsity > 0.0 {
        Some(g.require_seed("generate")?)
    } else {
        g.seed
    };
    let spec = LatticeSpec::new(structure, a.cells.unwrap_or(d.cells_per_axis))
        .with_noise(tau)
        .with_sparsity(sparsity)
        .with_lattice_constant(a.lattice_constant.unwrap_or(d.lattice_constant))
        .with_seed(seed.unwrap_or(0));
    let pc = generate_lattice(&spec)?;
    match &a.out {
        Some(path) => {
            write_point_cloud(path, &pc)?;
            let row = SampleRow {
                id: pc.id().to_string(),
                structure,
                atoms: pc.len(),
                removed: spec.removed_count(),
                seed,
            };
            emit(&[row], g.format)
        }
        None => {
            let stdout = std::io::stdout();
            write_point_cloud_to(&mut stdout.lock(), &pc)?;
            Ok(())
        }
    }
}

fn corpus(a: &GenerateArgs, g: &Globals) -> anyhow::Result<()> {
    let out = a.out.clone().ok_or_else(|| usage("generate: a corpus needs --out <DIR>"))?;
    let d = CorpusSpec::default();
    let spec = CorpusSpec {
        tau: a.tau.unwrap_or(d.tau),
        sparsity: a.sparsity.unwrap_or(d.sparsity),
        n_per_class: a.n_per_class.unwrap_or(d.n_per_class),
        radius: a.radius.unwrap_or(d.radius),
        cells_per_axis: a.cells.unwrap_or(d.cells_per_axis),
        lattice_constant: a.lattice_constant.unwrap_or(d.lattice_constant),
        per_sample: a.per_sample.unwrap_or(d.per_sample),
        seed: g.require_seed("generate")?,
    };
    spec.validate().map_err(|e| usage(e.to_string()))?;
    let clouds = generate_corpus(&spec)?;
    let manifest = write_corpus(&out, &clouds, Some(&spec))?;
    let count = |s: Structure| manifest.entries.iter().filter(|e| e.label == Some(s)).count();
    let row = CorpusRow {
        out: out.display().to_string(),
        entries: manifest.entries.len(),
        bcc: count(Structure::Bcc),
        fcc: count(Structure::Fcc),
        tau: spec.tau,
        sparsity: spec.sparsity,
        seed: spec.seed,
    };
    emit(&[row], g.format)
}
