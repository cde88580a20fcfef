//! Vietoris–Rips persistence in low dimensions.
//!
//! The filtration is the clique complex of a distance matrix: a vertex enters
//! at 0, an edge at its length and a higher simplex at the largest pairwise
//! distance among its vertices. Simplices are ordered by (value, dimension,
//! lexicographic vertex list) and the boundary matrix is reduced column by
//! column over Z/2, highest dimension first, with clearing.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid_input, invalid_param, Result};
use crate::pointcloud::{distance_matrix, DistanceMatrix, PointCloud};

/// Highest homology dimension supported.
pub const MAX_SUPPORTED_DIM: usize = 2;

/// A (birth, death) pair; `death` is `+inf` for essential classes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PersistencePair {
    pub birth: f64,
    pub death: f64,
}

impl PersistencePair {
    pub fn new(birth: f64, death: f64) -> Self {
        PersistencePair { birth, death }
    }

    pub fn is_essential(&self) -> bool {
        self.death == f64::INFINITY
    }

    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }
}

/// Multiset of persistence pairs in one homology dimension.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PersistenceDiagram {
    dim: usize,
    pairs: Vec<PersistencePair>,
}

impl PersistenceDiagram {
    /// Checks `0 <= birth <= death` for every pair; pairs are stored in
    /// canonical (birth, death) order.
    pub fn new(dim: usize, mut pairs: Vec<PersistencePair>) -> Result<Self> {
        for (i, p) in pairs.iter().enumerate() {
            if !(p.birth >= 0.0 && p.birth.is_finite()) {
                return Err(invalid_input(format!("pair {i}: birth {} is not a finite nonnegative value", p.birth)));
            }
            if p.death.is_nan() || p.death < p.birth {
                return Err(invalid_input(format!("pair {i}: death {} precedes birth {}", p.death, p.birth)));
            }
        }
        pairs.sort_by(|a, b| a.birth.total_cmp(&b.birth).then(a.death.total_cmp(&b.death)));
        Ok(PersistenceDiagram { dim, pairs })
    }

    pub fn from_pairs(dim: usize, pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(dim, pairs.iter().map(|&(b, d)| PersistencePair::new(b, d)).collect())
    }

    pub fn empty(dim: usize) -> Self {
        PersistenceDiagram { dim, pairs: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pairs(&self) -> &[PersistencePair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn essential_count(&self) -> usize {
        self.pairs.iter().filter(|p| p.is_essential()).count()
    }

    pub fn has_essential(&self) -> bool {
        self.essential_count() > 0
    }

    /// The diagram without its essential classes.
    pub fn finite(&self) -> PersistenceDiagram {
        PersistenceDiagram {
            dim: self.dim,
            pairs: self.pairs.iter().copied().filter(|p| !p.is_essential()).collect(),
        }
    }
}

/// Sizes of the truncated filtration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiltrationSummary {
    pub max_scale: f64,
    /// Number of simplices per dimension, index = dimension.
    pub simplex_counts: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RipsOptions {
    pub max_dim: usize,
    /// Largest filtration value included; `None` means the enclosing radius.
    pub max_scale: Option<f64>,
}

impl Default for RipsOptions {
    fn default() -> Self {
        RipsOptions {
            max_dim: 1,
            max_scale: None,
        }
    }
}

impl RipsOptions {
    pub fn with_max_dim(max_dim: usize) -> Self {
        RipsOptions {
            max_dim,
            ..Default::default()
        }
    }
}

/// Diagrams of dimensions `0..=max_dim` together with the filtration summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagrams {
    by_dim: Vec<PersistenceDiagram>,
    pub summary: FiltrationSummary,
}

impl Diagrams {
    pub fn get(&self, dim: usize) -> Option<&PersistenceDiagram> {
        self.by_dim.get(dim)
    }

    pub fn max_dim(&self) -> usize {
        self.by_dim.len() - 1
    }

    pub fn iter(&self) -> impl Iterator<Item = &PersistenceDiagram> {
        self.by_dim.iter()
    }

    pub fn into_vec(self) -> Vec<PersistenceDiagram> {
        self.by_dim
    }
}

#[derive(Debug, Clone, Copy)]
struct Simplex {
    verts: [u16; 4],
    dim: u8,
    value: f64,
}

impl Simplex {
    fn vertices(&self) -> &[u16] {
        &self.verts[..=self.dim as usize]
    }

    fn key(&self) -> u64 {
        pack(self.vertices())
    }
}

fn pack(verts: &[u16]) -> u64 {
    verts.iter().fold(0u64, |acc, &v| (acc << 16) | (v as u64 + 1))
}

/// Enumerates all cliques with at most `max_simplex_dim + 1` vertices and
/// diameter `<= scale`.
fn enumerate_simplices(dm: &DistanceMatrix, max_simplex_dim: usize, scale: f64) -> Vec<Simplex> {
    let n = dm.len();
    let mut out: Vec<Simplex> = (0..n)
        .map(|v| Simplex {
            verts: [v as u16, 0, 0, 0],
            dim: 0,
            value: 0.0,
        })
        .collect();
    let mut frontier: Vec<Simplex> = out.clone();
    for k in 1..=max_simplex_dim {
        let mut next = Vec::new();
        for s in &frontier {
            let last = s.verts[k - 1] as usize;
            'w: for w in last + 1..n {
                let mut value = s.value;
                for &u in s.vertices() {
                    let d = dm.get(u as usize, w);
                    if d > scale {
                        continue 'w;
                    }
                    value = value.max(d);
                }
                let mut verts = s.verts;
                verts[k] = w as u16;
                next.push(Simplex {
                    verts,
                    dim: k as u8,
                    value,
                });
            }
        }
        out.extend_from_slice(&next);
        frontier = next;
    }
    out.sort_by(|a, b| {
        a.value
            .total_cmp(&b.value)
            .then(a.dim.cmp(&b.dim))
            .then_with(|| a.vertices().cmp(b.vertices()))
    });
    out
}

/// Symmetric difference of two ascending index lists.
fn add_columns(a: &[usize], b: &[usize], out: &mut Vec<usize>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}

/// Persistence diagrams of the Rips filtration of `dm` in dimensions
/// `0..=opts.max_dim`.
///
/// Zero-persistence pairs are dropped. The dimension-0 diagram keeps its
/// essential class `(0, inf)`; with a user-supplied `max_scale` below the
/// enclosing radius further essential classes may appear in any dimension.
pub fn rips_diagrams(dm: &DistanceMatrix, opts: &RipsOptions) -> Result<Diagrams> {
    if opts.max_dim > MAX_SUPPORTED_DIM {
        return Err(invalid_param(format!(
            "homology dimension {} is unsupported (max {MAX_SUPPORTED_DIM})",
            opts.max_dim
        )));
    }
    if dm.is_empty() {
        return Err(invalid_input("distance matrix is empty"));
    }
    if dm.len() > u16::MAX as usize {
        return Err(invalid_input("too many points for the Rips complex"));
    }
    let scale = match opts.max_scale {
        Some(s) if !(s >= 0.0) => return Err(invalid_param("max_scale must be nonnegative")),
        Some(s) => s,
        None => dm.enclosing_radius(),
    };

    let max_dim = opts.max_dim;
    let simplices = enumerate_simplices(dm, max_dim + 1, scale);
    let mut simplex_counts = vec![0usize; max_dim + 2];
    let mut index: Vec<HashMap<u64, usize>> = vec![HashMap::new(); max_dim + 2];
    for (i, s) in simplices.iter().enumerate() {
        simplex_counts[s.dim as usize] += 1;
        index[s.dim as usize].insert(s.key(), i);
    }

    let total = simplices.len();
    // pivot_col[row] = column whose reduced boundary has its lowest entry at row
    let mut pivot_col: Vec<Option<usize>> = vec![None; total];
    let mut reduced: Vec<Vec<usize>> = vec![Vec::new(); total];
    let mut cleared = vec![false; total];
    let mut pairs: Vec<Vec<PersistencePair>> = vec![Vec::new(); max_dim + 1];
    let mut scratch = Vec::new();

    for k in (1..=max_dim + 1).rev() {
        for j in 0..total {
            let s = simplices[j];
            if s.dim as usize != k || cleared[j] {
                continue;
            }
            let verts = s.vertices();
            let mut col: Vec<usize> = (0..verts.len())
                .map(|skip| {
                    let facet: Vec<u16> = verts
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    index[k - 1][&pack(&facet)]
                })
                .collect();
            col.sort_unstable();
            while let Some(&low) = col.last() {
                match pivot_col[low] {
                    Some(other) => {
                        add_columns(&col, &reduced[other], &mut scratch);
                        std::mem::swap(&mut col, &mut scratch);
                    }
                    None => break,
                }
            }
            if let Some(&low) = col.last() {
                pivot_col[low] = Some(j);
                cleared[low] = true;
                let birth = simplices[low].value;
                let death = s.value;
                if death > birth {
                    pairs[k - 1].push(PersistencePair::new(birth, death));
                }
                reduced[j] = col;
            }
        }
    }

    // Positive simplices that were never paired are essential.
    for (i, s) in simplices.iter().enumerate() {
        let d = s.dim as usize;
        if d > max_dim || pivot_col[i].is_some() {
            continue;
        }
        let is_negative = d >= 1 && !reduced[i].is_empty();
        if !is_negative {
            pairs[d].push(PersistencePair::new(s.value, f64::INFINITY));
        }
    }

    let by_dim = pairs
        .into_iter()
        .enumerate()
        .map(|(d, p)| PersistenceDiagram::new(d, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(Diagrams {
        by_dim,
        summary: FiltrationSummary {
            max_scale: scale,
            simplex_counts,
        },
    })
}

/// Convenience wrapper computing the distance matrix first.
pub fn cloud_diagrams(pc: &PointCloud, opts: &RipsOptions) -> Result<Diagrams> {
    rips_diagrams(&distance_matrix(pc)?, opts)
}

/// `(b0, b1)`: the sizes of the dimension-0 diagram (essential class
/// included) and the dimension-1 diagram.
pub fn diagram_cardinalities(diags: &Diagrams) -> Result<(usize, usize)> {
    match (diags.get(0), diags.get(1)) {
        (Some(d0), Some(d1)) => Ok((d0.len(), d1.len())),
        _ => Err(invalid_input("dimension 0 and 1 diagrams are required")),
    }
}
