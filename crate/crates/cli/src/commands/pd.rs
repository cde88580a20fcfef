use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};
use topoclass::classifier::DiagramRecord;
use topoclass::corpus::diagram_corpus;
use topoclass::io::{read_corpus, read_manifest, read_point_cloud, write_diagram_corpus, write_records};

use crate::config::{existing, usage, Globals};
use crate::report::emit;

/// Computes dimension-0 and dimension-1 diagrams for a point CSV or a
/// point corpus directory. Writes one `<id>.pd.csv` per cloud, a manifest,
/// and `records.csv` with the `id,b0,b1` cardinalities.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdArgs {
    /// A point CSV file or a corpus directory with a manifest.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Row {
    out: String,
    diagrams: usize,
    seed: Option<u64>,
}

pub const RECORDS_FILE: &str = "records.csv";

pub fn run(a: &PdArgs, g: &Globals) -> anyhow::Result<()> {
    let input = existing(a.input.as_ref(), "input")?;
    let out = a.out.clone().ok_or_else(|| usage("pd: missing required --out <DIR>"))?;
    let (clouds, seed, spec) = if input.is_dir() {
        let m = read_manifest(&input)?;
        (read_corpus(&input)?, m.seed.or(g.seed), m.corpus)
    } else {
        let id = input
            .file_stem()
            .map_or_else(|| "cloud".to_string(), |s| s.to_string_lossy().into_owned());
        (vec![read_point_cloud(&input, id)?], g.seed, None)
    };
    let mut records: Vec<DiagramRecord> = diagram_corpus(&clouds)?;
    records.sort_by(|x, y| x.id.cmp(&y.id));
    write_diagram_corpus(&out, &records, seed, spec.as_ref())?;
    let cards: Vec<_> = records.iter().map(DiagramRecord::cardinality_record).collect();
    write_records(&out.join(RECORDS_FILE), &cards)?;
    emit(
        &[Row {
            out: out.display().to_string(),
            diagrams: records.len(),
            seed,
        }],
        g.format,
    )
}
