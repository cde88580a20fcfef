//! Text formats: point clouds, corpus manifests, diagrams, cardinality
//! records, distance matrices and feature tables.
//!
//! Every reader reports malformed rows as [`Error::Parse`] with the 1-based
//! line number in the file (the header is line 1).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::classifier::{DiagramRecord, FeatureVector};
use crate::corpus::CorpusSpec;
use crate::error::{invalid_input, Error, Result};
use crate::metrics::{Metric, SquareMatrix};
use crate::pointcloud::{PointCloud, Structure};
use crate::rips::{PersistenceDiagram, PersistencePair};
use crate::stats::CardinalityRecord;

pub const FORMAT_VERSION: u32 = 1;

fn parse_err(path: &Path, line: u64, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        msg: msg.into(),
    }
}

fn parse_f64(path: &Path, line: u64, field: &str, what: &str) -> Result<f64> {
    let v: f64 = field
        .trim()
        .parse()
        .map_err(|_| parse_err(path, line, format!("{what}: `{field}` is not a number")))?;
    if v.is_nan() {
        return Err(parse_err(path, line, format!("{what} is NaN")));
    }
    Ok(v)
}

/// Reads rows as string records, returning `(line, record)` pairs and the
/// header. Blank lines are skipped.
fn read_rows(path: &Path) -> Result<(Vec<String>, Vec<(u64, csv::StringRecord)>)> {
    let text = fs::read_to_string(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| parse_err(path, 1, e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(path, line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.iter().all(str::is_empty) {
            continue;
        }
        rows.push((line, rec));
    }
    Ok((header, rows))
}

fn check_header(path: &Path, header: &[String], expected: &[&str]) -> Result<()> {
    if header.len() < expected.len() || header.iter().zip(expected).any(|(h, e)| h != e) {
        return Err(parse_err(
            path,
            1,
            format!("expected header `{}`, found `{}`", expected.join(","), header.join(",")),
        ));
    }
    Ok(())
}

fn check_width(path: &Path, line: u64, rec: &csv::StringRecord, width: usize) -> Result<()> {
    if rec.len() != width {
        return Err(parse_err(path, line, format!("expected {width} fields, found {}", rec.len())));
    }
    Ok(())
}

fn create(path: &Path) -> Result<fs::File> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    Ok(fs::File::create(path)?)
}

/// Shortest round-trip form, always with a decimal point or exponent.
pub fn format_f64(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else {
        format!("{v:?}")
    }
}

// ---------------------------------------------------------------- points

/// Reads a `x,y,z[,label]` file. The cloud's label is the common label of
/// its rows, if every row carries the same one.
pub fn read_point_cloud(path: &Path, id: impl Into<String>) -> Result<PointCloud> {
    if fs::read_to_string(path)?.trim().is_empty() {
        return Err(Error::InsufficientData(format!("{}: empty file", path.display())));
    }
    let (header, rows) = read_rows(path)?;
    check_header(path, &header, &["x", "y", "z"])?;
    let labeled = match header.len() {
        3 => false,
        4 if header[3] == "label" => true,
        _ => return Err(parse_err(path, 1, "header must be `x,y,z` or `x,y,z,label`")),
    };
    if rows.is_empty() {
        return Err(Error::InsufficientData(format!("{}: no atoms", path.display())));
    }
    let mut points = Vec::with_capacity(rows.len());
    let mut labels = Vec::new();
    for (line, rec) in &rows {
        check_width(path, *line, rec, header.len())?;
        let p: Vec<f64> = (0..3)
            .map(|k| {
                let v = parse_f64(path, *line, &rec[k], ["x", "y", "z"][k])?;
                if !v.is_finite() {
                    return Err(parse_err(path, *line, "coordinates must be finite"));
                }
                Ok(v)
            })
            .collect::<Result<_>>()?;
        points.push(p);
        if labeled && !rec[3].is_empty() {
            let l: Structure = rec[3].parse().map_err(|e: Error| parse_err(path, *line, e.to_string()))?;
            labels.push(l);
        }
    }
    let label = match labels.first() {
        Some(&l) if labels.len() == rows.len() && labels.iter().all(|&m| m == l) => Some(l),
        _ => None,
    };
    PointCloud::new(id, &points, label)
}

pub fn write_point_cloud(path: &Path, pc: &PointCloud) -> Result<()> {
    let mut w = std::io::BufWriter::new(create(path)?);
    write_point_cloud_to(&mut w, pc)?;
    w.flush()?;
    Ok(())
}

/// Same format as [`write_point_cloud`], to any writer.
pub fn write_point_cloud_to<W: Write>(w: &mut W, pc: &PointCloud) -> Result<()> {
    if pc.dim() != 3 {
        return Err(invalid_input("point files hold 3-dimensional clouds"));
    }
    let label = pc.label();
    match label {
        Some(_) => writeln!(w, "x,y,z,label")?,
        None => writeln!(w, "x,y,z")?,
    }
    for p in pc.points() {
        write!(w, "{},{},{}", format_f64(p[0]), format_f64(p[1]), format_f64(p[2]))?;
        match label {
            Some(l) => writeln!(w, ",{l}")?,
            None => writeln!(w)?,
        }
    }
    Ok(())
}

// -------------------------------------------------------------- manifest

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub label: Option<Structure>,
    /// Path relative to the manifest's directory.
    pub file: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: u32,
    /// What the files hold: `points` or `diagrams`.
    pub kind: String,
    pub seed: Option<u64>,
    pub corpus: Option<CorpusSpec>,
    pub entries: Vec<ManifestEntry>,
}

pub const MANIFEST_FILE: &str = "manifest.json";

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| parse_err(path, e.line() as u64, e.to_string()))
}

pub fn read_manifest(dir: &Path) -> Result<Manifest> {
    let m: Manifest = read_json(&dir.join(MANIFEST_FILE))?;
    if m.version != FORMAT_VERSION {
        return Err(invalid_input(format!("unsupported manifest version {}", m.version)));
    }
    Ok(m)
}

/// Writes one CSV per cloud plus the manifest into `dir`.
pub fn write_corpus(dir: &Path, clouds: &[PointCloud], spec: Option<&CorpusSpec>) -> Result<Manifest> {
    fs::create_dir_all(dir)?;
    let mut entries = Vec::with_capacity(clouds.len());
    for pc in clouds {
        let file = format!("{}.csv", pc.id());
        write_point_cloud(&dir.join(&file), pc)?;
        entries.push(ManifestEntry {
            id: pc.id().to_string(),
            label: pc.label(),
            file,
        });
    }
    let manifest = Manifest {
        version: FORMAT_VERSION,
        kind: "points".into(),
        seed: spec.map(|s| s.seed),
        corpus: spec.cloned(),
        entries,
    };
    write_json(&dir.join(MANIFEST_FILE), &manifest)?;
    Ok(manifest)
}

fn entry_path(dir: &Path, e: &ManifestEntry) -> PathBuf {
    dir.join(&e.file)
}

/// Reads a point corpus; manifest labels override file labels.
pub fn read_corpus(dir: &Path) -> Result<Vec<PointCloud>> {
    let m = read_manifest(dir)?;
    if m.kind != "points" {
        return Err(invalid_input(format!("{} holds {}, not points", dir.display(), m.kind)));
    }
    m.entries
        .iter()
        .map(|e| {
            let mut pc = read_point_cloud(&entry_path(dir, e), e.id.clone())?;
            if e.label.is_some() {
                pc.set_label(e.label);
            }
            Ok(pc)
        })
        .collect()
}

// -------------------------------------------------------------- diagrams

/// Writes `dim,birth,death` rows for every diagram given.
pub fn write_diagrams(path: &Path, diagrams: &[&PersistenceDiagram]) -> Result<()> {
    let mut w = std::io::BufWriter::new(create(path)?);
    writeln!(w, "dim,birth,death")?;
    for d in diagrams {
        for p in d.pairs() {
            writeln!(w, "{},{},{}", d.dim(), format_f64(p.birth), format_f64(p.death))?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a diagram file into diagrams of dimensions `0..=max(1, top dim)`.
pub fn read_diagrams(path: &Path) -> Result<Vec<PersistenceDiagram>> {
    let (header, rows) = read_rows(path)?;
    check_header(path, &header, &["dim", "birth", "death"])?;
    let mut by_dim: Vec<Vec<PersistencePair>> = vec![Vec::new(), Vec::new()];
    for (line, rec) in &rows {
        check_width(path, *line, rec, 3)?;
        let dim: usize = rec[0]
            .parse()
            .map_err(|_| parse_err(path, *line, format!("dim: `{}` is not a nonnegative integer", &rec[0])))?;
        let birth = parse_f64(path, *line, &rec[1], "birth")?;
        let death = parse_f64(path, *line, &rec[2], "death")?;
        if !(birth.is_finite() && birth >= 0.0 && death >= birth) {
            return Err(parse_err(path, *line, "need 0 <= birth <= death and a finite birth"));
        }
        if dim >= by_dim.len() {
            by_dim.resize_with(dim + 1, Vec::new);
        }
        by_dim[dim].push(PersistencePair::new(birth, death));
    }
    by_dim
        .into_iter()
        .enumerate()
        .map(|(d, pairs)| PersistenceDiagram::new(d, pairs))
        .collect()
}

/// Writes one diagram file per record plus a manifest. Each record's
/// dimension-0 diagram is written with its essential class restored.
/// `corpus` carries the generating spec forward when the diagrams came
/// from a generated point corpus.
pub fn write_diagram_corpus(
    dir: &Path,
    records: &[DiagramRecord],
    seed: Option<u64>,
    corpus: Option<&CorpusSpec>,
) -> Result<Manifest> {
    fs::create_dir_all(dir)?;
    let mut entries = Vec::with_capacity(records.len());
    for r in records {
        let file = format!("{}.pd.csv", r.id);
        let mut pairs = r.dim0.pairs().to_vec();
        if r.b0 > pairs.len() {
            pairs.push(PersistencePair::new(0.0, f64::INFINITY));
        }
        let d0 = PersistenceDiagram::new(0, pairs)?;
        write_diagrams(&dir.join(&file), &[&d0, &r.dim1])?;
        entries.push(ManifestEntry {
            id: r.id.clone(),
            label: r.label,
            file,
        });
    }
    let manifest = Manifest {
        version: FORMAT_VERSION,
        kind: "diagrams".into(),
        seed,
        corpus: corpus.cloned(),
        entries,
    };
    write_json(&dir.join(MANIFEST_FILE), &manifest)?;
    Ok(manifest)
}

pub fn read_diagram_file(path: &Path, id: impl Into<String>, label: Option<Structure>) -> Result<DiagramRecord> {
    let d = read_diagrams(path)?;
    Ok(DiagramRecord::from_diagrams(id, label, &d[0], &d[1]))
}

pub fn read_diagram_corpus(dir: &Path) -> Result<Vec<DiagramRecord>> {
    let m = read_manifest(dir)?;
    if m.kind != "diagrams" {
        return Err(invalid_input(format!("{} holds {}, not diagrams", dir.display(), m.kind)));
    }
    m.entries
        .iter()
        .map(|e| read_diagram_file(&entry_path(dir, e), e.id.clone(), e.label))
        .collect()
}

// --------------------------------------------------------------- records

pub fn write_records(path: &Path, records: &[CardinalityRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records(path: &Path) -> Result<Vec<CardinalityRecord>> {
    let (header, rows) = read_rows(path)?;
    check_header(path, &header, &["id", "b0", "b1"])?;
    rows.iter()
        .map(|(line, rec)| {
            check_width(path, *line, rec, 3)?;
            let count = |k: usize, what: &str| -> Result<usize> {
                rec[k]
                    .parse()
                    .map_err(|_| parse_err(path, *line, format!("{what}: `{}` is not a count", &rec[k])))
            };
            Ok(CardinalityRecord::new(rec[0].to_string(), count(1, "b0")?, count(2, "b1")?))
        })
        .collect()
}

// ------------------------------------------------------ distance matrices

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixSidecar {
    pub metric: String,
    pub p: Option<f64>,
    pub c: Option<f64>,
    pub dim: Option<usize>,
    pub diagram_ids: Vec<String>,
}

impl MatrixSidecar {
    pub fn new(metric: &Metric, dim: Option<usize>, diagram_ids: Vec<String>) -> Self {
        let (p, c) = match *metric {
            Metric::Dpc { p, c } => (Some(p), Some(c)),
            Metric::Wasserstein { p } => (Some(p), None),
            Metric::Bottleneck => (None, None),
        };
        MatrixSidecar {
            metric: metric.name().into(),
            p,
            c,
            dim,
            diagram_ids,
        }
    }
}

/// `path` gets the bare matrix; `path` with extension `json` the sidecar.
pub fn write_distance_matrix(path: &Path, m: &SquareMatrix, sidecar: &MatrixSidecar) -> Result<()> {
    if sidecar.diagram_ids.len() != m.len() {
        return Err(invalid_input("sidecar ids do not match the matrix size"));
    }
    let mut w = std::io::BufWriter::new(create(path)?);
    for row in m.rows() {
        let line: Vec<String> = row.iter().map(|&v| format_f64(v)).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    w.flush()?;
    write_json(&path.with_extension("json"), sidecar)
}

pub fn read_distance_matrix(path: &Path) -> Result<(SquareMatrix, MatrixSidecar)> {
    let sidecar: MatrixSidecar = read_json(&path.with_extension("json"))?;
    let text = fs::read_to_string(path)?;
    let n = sidecar.diagram_ids.len();
    let mut m = SquareMatrix::zeros(n);
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    if lines.len() != n {
        return Err(parse_err(path, lines.len() as u64, format!("expected {n} rows")));
    }
    for (i, l) in lines.iter().enumerate() {
        let fields: Vec<&str> = l.split(',').collect();
        if fields.len() != n {
            return Err(parse_err(path, i as u64 + 1, format!("expected {n} fields")));
        }
        for (j, f) in fields.iter().enumerate() {
            m.set(i, j, parse_f64(path, i as u64 + 1, f, "distance")?);
        }
    }
    Ok((m, sidecar))
}

// -------------------------------------------------------------- features

pub fn write_features(path: &Path, rows: &[(FeatureVector, Option<Structure>)]) -> Result<()> {
    let mut w = std::io::BufWriter::new(create(path)?);
    writeln!(w, "{},label", FeatureVector::NAMES.join(","))?;
    for (f, l) in rows {
        let vals: Vec<String> = f.to_array().iter().map(|&v| format_f64(v)).collect();
        writeln!(w, "{},{}", vals.join(","), l.map_or("", |l| l.as_str()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_features(path: &Path) -> Result<Vec<(FeatureVector, Option<Structure>)>> {
    let (header, rows) = read_rows(path)?;
    let mut expected: Vec<&str> = FeatureVector::NAMES.to_vec();
    expected.push("label");
    check_header(path, &header, &expected)?;
    rows.iter()
        .map(|(line, rec)| {
            check_width(path, *line, rec, 9)?;
            let mut a = [0.0; 8];
            for (k, name) in FeatureVector::NAMES.iter().enumerate() {
                a[k] = parse_f64(path, *line, &rec[k], name)?;
            }
            let label = match &rec[8] {
                "" => None,
                s => Some(s.parse().map_err(|e: Error| parse_err(path, *line, e.to_string()))?),
            };
            Ok((FeatureVector::from_array(a), label))
        })
        .collect()
}
