//! Point clouds, synthetic cubic lattices and atomic neighborhoods.
//!
//! A sample is built from the ideal site set of a cubic supercell, perturbed
//! with i.i.d. Gaussian noise on every coordinate and then thinned by removing
//! a fixed fraction of atoms uniformly at random. Neighborhoods are the
//! closed Euclidean balls around each surviving atom.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid_input, invalid_param, Error, Result};

/// Cubic crystal structure; also used as the class label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Structure {
    Bcc,
    Fcc,
}

impl Structure {
    pub const ALL: [Structure; 2] = [Structure::Bcc, Structure::Fcc];

    /// Atoms per conventional unit cell after boundary sharing.
    pub fn atoms_per_cell(self) -> usize {
        match self {
            Structure::Bcc => 2,
            Structure::Fcc => 4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Structure::Bcc => "bcc",
            Structure::Fcc => "fcc",
        }
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Structure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bcc" => Ok(Structure::Bcc),
            "fcc" => Ok(Structure::Fcc),
            other => Err(invalid_input(format!("unknown structure label `{other}`"))),
        }
    }
}

/// A finite set of points in R^d, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    id: String,
    dim: usize,
    coords: Vec<f64>,
    label: Option<Structure>,
}

impl PointCloud {
    /// Builds a cloud from coordinate rows. All rows must share one
    /// dimension `d >= 1`. An empty row list is allowed; persistence
    /// computations reject it later.
    pub fn new(id: impl Into<String>, points: &[Vec<f64>], label: Option<Structure>) -> Result<Self> {
        let dim = points.first().map_or(3, Vec::len);
        if dim == 0 {
            return Err(invalid_input("points must have dimension >= 1"));
        }
        let mut coords = Vec::with_capacity(points.len() * dim);
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(invalid_input(format!(
                    "point {i} has dimension {}, expected {dim}",
                    p.len()
                )));
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(invalid_input(format!("point {i} has a non-finite coordinate")));
            }
            coords.extend_from_slice(p);
        }
        Ok(PointCloud {
            id: id.into(),
            dim,
            coords,
            label,
        })
    }

    pub(crate) fn from_flat(id: String, dim: usize, coords: Vec<f64>, label: Option<Structure>) -> Self {
        debug_assert!(dim > 0 && coords.len().is_multiple_of(dim));
        PointCloud {
            id,
            dim,
            coords,
            label,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn set_id(&mut self, id: impl Into<String>) {
        self.id = id.into();
    }

    pub fn label(&self) -> Option<Structure> {
        self.label
    }

    pub fn set_label(&mut self, label: Option<Structure>) {
        self.label = label;
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    /// Returns a cloud holding only the points at `indices`, in that order.
    pub fn subset(&self, id: impl Into<String>, indices: &[usize]) -> PointCloud {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            coords.extend_from_slice(self.point(i));
        }
        PointCloud::from_flat(id.into(), self.dim, coords, self.label)
    }

    /// Translates and scales every point: `p -> scale * p + shift`.
    pub fn transformed(&self, scale: f64, shift: &[f64]) -> PointCloud {
        assert_eq!(shift.len(), self.dim);
        let coords = self
            .coords
            .chunks_exact(self.dim)
            .flat_map(|p| p.iter().zip(shift).map(|(x, s)| scale * x + s))
            .collect();
        PointCloud::from_flat(self.id.clone(), self.dim, coords, self.label)
    }
}

pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Parameters of a synthetic lattice sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub structure: Structure,
    pub lattice_constant: f64,
    pub cells_per_axis: usize,
    /// Standard deviation of the per-coordinate Gaussian displacement, in
    /// the same length unit as `lattice_constant`.
    pub noise_sigma: f64,
    /// Fraction of atoms removed after the noise is applied, in `[0, 1)`.
    pub sparsity_fraction: f64,
    pub seed: u64,
}

impl LatticeSpec {
    /// Noise-free, complete sample of `cells_per_axis`³ unit cells with
    /// lattice constant 1.
    pub fn new(structure: Structure, cells_per_axis: usize) -> Self {
        LatticeSpec {
            structure,
            lattice_constant: 1.0,
            cells_per_axis,
            noise_sigma: 0.0,
            sparsity_fraction: 0.0,
            seed: 0,
        }
    }

    pub fn with_noise(mut self, sigma: f64) -> Self {
        self.noise_sigma = sigma;
        self
    }

    pub fn with_sparsity(mut self, fraction: f64) -> Self {
        self.sparsity_fraction = fraction;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_lattice_constant(mut self, a: f64) -> Self {
        self.lattice_constant = a;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.cells_per_axis == 0 {
            return Err(invalid_param("cells_per_axis must be positive"));
        }
        if !(self.lattice_constant > 0.0 && self.lattice_constant.is_finite()) {
            return Err(invalid_param("lattice_constant must be positive and finite"));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(invalid_param("noise sigma must be nonnegative and finite"));
        }
        if !(0.0..1.0).contains(&self.sparsity_fraction) {
            return Err(invalid_param("sparsity fraction must lie in [0, 1)"));
        }
        Ok(())
    }

    /// Edge length of the supercell.
    pub fn box_length(&self) -> f64 {
        self.cells_per_axis as f64 * self.lattice_constant
    }

    /// Number of distinct ideal sites in the supercell.
    pub fn site_count(&self) -> usize {
        let n = self.cells_per_axis;
        let corners = (n + 1).pow(3);
        match self.structure {
            Structure::Bcc => corners + n.pow(3),
            Structure::Fcc => corners + 3 * n * n * (n + 1),
        }
    }

    /// Number of atoms removed by the sparsity step: `floor(f * n)`.
    pub fn removed_count(&self) -> usize {
        (self.sparsity_fraction * self.site_count() as f64).floor() as usize
    }
}

/// Ideal crystallographic sites of the supercell in units of the lattice
/// constant, each shared boundary site listed once.
pub fn ideal_sites(structure: Structure, cells_per_axis: usize) -> Vec<[f64; 3]> {
    let n = cells_per_axis;
    let mut sites = Vec::new();
    // Corner sites of every cell form the (n+1)^3 simple-cubic grid.
    for i in 0..=n {
        for j in 0..=n {
            for k in 0..=n {
                sites.push([i as f64, j as f64, k as f64]);
            }
        }
    }
    match structure {
        Structure::Bcc => {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        sites.push([i as f64 + 0.5, j as f64 + 0.5, k as f64 + 0.5]);
                    }
                }
            }
        }
        Structure::Fcc => {
            // Face centers normal to each axis; a face at layer `l` along the
            // normal axis is shared by the two cells on either side.
            for axis in 0..3 {
                for a in 0..n {
                    for b in 0..n {
                        for l in 0..=n {
                            let mut p = [0.0; 3];
                            p[axis] = l as f64;
                            p[(axis + 1) % 3] = a as f64 + 0.5;
                            p[(axis + 2) % 3] = b as f64 + 0.5;
                            sites.push(p);
                        }
                    }
                }
            }
        }
    }
    sites
}

/// Generates a noisy, sparse lattice sample. The result is a pure function
/// of `spec`, seed included.
pub fn generate_lattice(spec: &LatticeSpec) -> Result<PointCloud> {
    spec.validate()?;
    let a = spec.lattice_constant;
    let sites = ideal_sites(spec.structure, spec.cells_per_axis);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let normal = Normal::new(0.0, spec.noise_sigma).map_err(|e| invalid_param(e.to_string()))?;

    // Noise is drawn even when sigma is zero so the removal step below sees
    // the same random stream for every noise level.
    let mut coords = Vec::with_capacity(sites.len() * 3);
    for s in &sites {
        for x in s {
            coords.push(a * x + normal.sample(&mut rng));
        }
    }

    let n = sites.len();
    let removed = spec.removed_count();
    let mut keep = vec![true; n];
    for i in rand::seq::index::sample(&mut rng, n, removed) {
        keep[i] = false;
    }
    let coords: Vec<f64> = coords
        .chunks_exact(3)
        .zip(&keep)
        .filter(|(_, &k)| k)
        .flat_map(|(p, _)| p.iter().copied())
        .collect();

    let id = format!("{}-s{}", spec.structure, spec.seed);
    Ok(PointCloud::from_flat(id, 3, coords, Some(spec.structure)))
}

/// Sorted-sweep range index over the first coordinate.
pub(crate) struct SweepIndex<'a> {
    cloud: &'a PointCloud,
    order: Vec<usize>,
    keys: Vec<f64>,
}

impl<'a> SweepIndex<'a> {
    pub(crate) fn new(cloud: &'a PointCloud) -> Self {
        let mut order: Vec<usize> = (0..cloud.len()).collect();
        order.sort_by(|&i, &j| cloud.point(i)[0].total_cmp(&cloud.point(j)[0]));
        let keys = order.iter().map(|&i| cloud.point(i)[0]).collect();
        SweepIndex { cloud, order, keys }
    }

    /// Indices of all points within distance `radius` of `center`, ascending.
    pub(crate) fn within(&self, center: &[f64], radius: f64) -> Vec<usize> {
        let lo = self.keys.partition_point(|&x| x < center[0] - radius);
        let hi = self.keys.partition_point(|&x| x <= center[0] + radius);
        let mut hits: Vec<usize> = self.order[lo..hi]
            .iter()
            .copied()
            .filter(|&j| euclidean(center, self.cloud.point(j)) <= radius)
            .collect();
        hits.sort_unstable();
        hits
    }
}

/// The neighborhood of atom `center` within `radius` (inclusive).
pub fn neighborhood(sample: &PointCloud, center: usize, radius: f64) -> Result<PointCloud> {
    if !(radius > 0.0) {
        return Err(invalid_param("neighborhood radius must be positive"));
    }
    let index = SweepIndex::new(sample);
    let hits = index.within(sample.point(center), radius);
    Ok(sample.subset(format!("{}-{center}", sample.id()), &hits))
}

/// One neighborhood per atom: every atom within `radius` of it, itself
/// included. Labels carry over from the sample.
pub fn extract_neighborhoods(sample: &PointCloud, radius: f64) -> Result<Vec<PointCloud>> {
    if !(radius > 0.0) {
        return Err(invalid_param("neighborhood radius must be positive"));
    }
    let index = SweepIndex::new(sample);
    Ok((0..sample.len())
        .map(|i| {
            let hits = index.within(sample.point(i), radius);
            sample.subset(format!("{}-{i}", sample.id()), &hits)
        })
        .collect())
}

/// Symmetric matrix of pairwise distances with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl DistanceMatrix {
    /// Wraps a row-major `n x n` array, checking symmetry, a zero diagonal
    /// and nonnegative finite entries.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(invalid_input(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            entries.extend_from_slice(row);
        }
        let dm = DistanceMatrix { n, entries };
        dm.validate()?;
        Ok(dm)
    }

    fn validate(&self) -> Result<()> {
        for i in 0..self.n {
            if self.get(i, i) != 0.0 {
                return Err(invalid_input(format!("diagonal entry {i} is not zero")));
            }
            for j in i + 1..self.n {
                let v = self.get(i, j);
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(invalid_input(format!("entry ({i}, {j}) is negative or not finite")));
                }
                if v != self.get(j, i) {
                    return Err(invalid_input(format!("matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.entries.chunks_exact(self.n.max(1)).take(self.n)
    }

    /// Sorted distinct strictly-upper-triangular entries.
    pub fn distinct_values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = (0..self.n)
            .flat_map(|i| (i + 1..self.n).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    /// Smallest gap between distinct off-diagonal entries (and between the
    /// smallest entry and zero). `None` for fewer than two points.
    pub fn min_gap(&self) -> Option<f64> {
        let mut vals = self.distinct_values();
        if vals.is_empty() {
            return None;
        }
        vals.insert(0, 0.0);
        vals.windows(2).map(|w| w[1] - w[0]).filter(|g| *g > 0.0).reduce(f64::min)
    }

    /// Largest absolute entry-wise difference to `other`.
    pub fn max_abs_diff(&self, other: &DistanceMatrix) -> f64 {
        assert_eq!(self.n, other.n);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Minimum over points of the maximum distance to any other point.
    pub fn enclosing_radius(&self) -> f64 {
        self.rows()
            .map(|r| r.iter().copied().fold(0.0, f64::max))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Euclidean pairwise distances of a nonempty cloud.
pub fn distance_matrix(pc: &PointCloud) -> Result<DistanceMatrix> {
    if pc.is_empty() {
        return Err(invalid_input(format!("point cloud `{}` is empty", pc.id())));
    }
    let n = pc.len();
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = euclidean(pc.point(i), pc.point(j));
            entries[i * n + j] = d;
            entries[j * n + i] = d;
        }
    }
    Ok(DistanceMatrix { n, entries })
}
