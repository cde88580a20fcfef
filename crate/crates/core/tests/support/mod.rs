//! Independent oracles and random generators shared by the integration tests.
//!
//! Nothing here calls into the library's reduction or assignment code: the
//! homology oracle works from persistent Betti numbers over GF(2), and the
//! distance oracle enumerates every injection.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use topoclass::pointcloud::{DistanceMatrix, PointCloud};
use topoclass::rips::{PersistenceDiagram, PersistencePair};

// ------------------------------------------------------------ generators

pub fn random_diagram(rng: &mut ChaCha8Rng, dim: usize, max_len: usize) -> PersistenceDiagram {
    let n = rng.random_range(0..=max_len);
    let pairs: Vec<(f64, f64)> = (0..n)
        .map(|_| {
            let b: f64 = rng.random_range(0.0..2.0);
            (b, b + rng.random_range(0.0..2.0))
        })
        .collect();
    PersistenceDiagram::from_pairs(dim, &pairs).unwrap()
}

pub fn random_cloud(rng: &mut ChaCha8Rng, n: usize, side: f64) -> PointCloud {
    let pts: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..3).map(|_| rng.random_range(0.0..side)).collect())
        .collect();
    PointCloud::new("random", &pts, None).unwrap()
}

pub fn unit_direction(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 0.1 && n <= 1.0 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

pub fn brute_distance_matrix(pc: &PointCloud) -> Vec<Vec<f64>> {
    let n = pc.len();
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (pc.point(i), pc.point(j));
            d[i][j] = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
        }
    }
    d
}

// ------------------------------------------------- exhaustive d_p^c oracle

fn injections(n: usize, m: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(k: usize, n: usize, used: &mut Vec<bool>, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if k == n {
            f(cur);
            return;
        }
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                cur.push(j);
                rec(k + 1, n, used, cur, f);
                cur.pop();
                used[j] = false;
            }
        }
    }
    rec(0, n, &mut vec![false; m], &mut Vec::with_capacity(n), f);
}

fn linf(a: &PersistencePair, b: &PersistencePair) -> f64 {
    (a.birth - b.birth).abs().max((a.death - b.death).abs())
}

/// `d_p^c` by minimizing over every injection of the smaller diagram into
/// the larger.
pub fn dpc_bruteforce(x: &PersistenceDiagram, y: &PersistenceDiagram, p: f64, c: f64) -> f64 {
    let (small, large) = if x.len() <= y.len() { (x, y) } else { (y, x) };
    let (n, m) = (small.len(), large.len());
    if m == 0 {
        return 0.0;
    }
    let mut best = f64::INFINITY;
    injections(n, m, &mut |inj| {
        let cost: f64 = inj
            .iter()
            .enumerate()
            .map(|(i, &j)| c.min(linf(&small.pairs()[i], &large.pairs()[j])).powf(p))
            .sum();
        best = best.min(cost);
    });
    ((best + c.powf(p) * (m - n) as f64) / m as f64).powf(1.0 / p)
}

/// p-Wasserstein distance by enumerating partial matchings with diagonal
/// projections for the unmatched points.
pub fn wasserstein_bruteforce(x: &PersistenceDiagram, y: &PersistenceDiagram, p: f64) -> f64 {
    let diag = |q: &PersistencePair| ((q.death - q.birth) / 2.0).powf(p);
    let (xs, ys) = (x.pairs(), y.pairs());
    let mut best = f64::INFINITY;
    // every x is matched to a y or to the diagonal (index ys.len())
    fn rec(
        i: usize,
        xs: &[PersistencePair],
        ys: &[PersistencePair],
        used: &mut Vec<bool>,
        acc: f64,
        p: f64,
        diag: &dyn Fn(&PersistencePair) -> f64,
        best: &mut f64,
    ) {
        if i == xs.len() {
            let rest: f64 = ys.iter().zip(used.iter()).filter(|(_, &u)| !u).map(|(q, _)| diag(q)).sum();
            *best = best.min(acc + rest);
            return;
        }
        rec(i + 1, xs, ys, used, acc + diag(&xs[i]), p, diag, best);
        for j in 0..ys.len() {
            if !used[j] {
                used[j] = true;
                rec(i + 1, xs, ys, used, acc + linf(&xs[i], &ys[j]).powf(p), p, diag, best);
                used[j] = false;
            }
        }
    }
    rec(0, xs, ys, &mut vec![false; ys.len()], 0.0, p, &diag, &mut best);
    best.powf(1.0 / p)
}

// ------------------------------------------------ clique homology oracle

/// Rank of a set of GF(2) vectors stored as bit masks.
fn rank(vectors: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for &v in vectors {
        let mut v = v;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// Kernel basis of the boundary map restricted to `cols` (each column a
/// boundary mask), returned as masks over the column index set `ids`.
fn kernel(cols: &[(usize, u64)]) -> Vec<u64> {
    // Gaussian elimination carrying the combination of columns used.
    let mut reduced: Vec<(u64, u64)> = Vec::new();
    let mut ker = Vec::new();
    for &(id, boundary) in cols {
        let mut v = boundary;
        let mut comb = 1u64 << id;
        loop {
            if v == 0 {
                ker.push(comb);
                break;
            }
            let top = 63 - v.leading_zeros();
            match reduced.iter().find(|(r, _)| 63 - r.leading_zeros() == top) {
                Some(&(r, c)) => {
                    v ^= r;
                    comb ^= c;
                }
                None => {
                    reduced.push((v, comb));
                    break;
                }
            }
        }
    }
    ker
}

struct Complex {
    values: [Vec<f64>; 3],
    /// Boundary masks of edges (over vertices) and triangles (over edges).
    boundary: [Vec<u64>; 3],
}

fn clique_complex(d: &[Vec<f64>]) -> Complex {
    let n = d.len();
    assert!(n <= 8, "oracle supports at most 8 points");
    let mut edges = Vec::new();
    let mut edge_index = vec![vec![usize::MAX; n]; n];
    let mut ev = Vec::new();
    let mut eb = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edge_index[i][j] = edges.len();
            edges.push((i, j));
            ev.push(d[i][j]);
            eb.push((1u64 << i) | (1u64 << j));
        }
    }
    let mut tv = Vec::new();
    let mut tb = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                tv.push(d[i][j].max(d[i][k]).max(d[j][k]));
                tb.push((1u64 << edge_index[i][j]) | (1u64 << edge_index[i][k]) | (1u64 << edge_index[j][k]));
            }
        }
    }
    Complex {
        values: [vec![0.0; n], ev, tv],
        boundary: [vec![0; n], eb, tb],
    }
}

/// Persistence diagram in dimension `dim` (0 or 1) from persistent Betti
/// numbers, without any boundary-matrix pairing.
pub fn oracle_diagram(d: &[Vec<f64>], dim: usize) -> Vec<(f64, f64)> {
    assert!(dim <= 1);
    let cx = clique_complex(d);
    let mut thresholds: Vec<f64> = cx.values.iter().flatten().copied().collect();
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup();
    let t = thresholds.len();

    let cycles_at = |s: f64| -> Vec<u64> {
        let cols: Vec<(usize, u64)> = cx.boundary[dim]
            .iter()
            .enumerate()
            .filter(|(i, _)| cx.values[dim][*i] <= s)
            .map(|(i, &b)| (i, if dim == 0 { 0 } else { b }))
            .collect();
        kernel(&cols)
    };
    let boundaries_at = |s: f64| -> Vec<u64> {
        cx.boundary[dim + 1]
            .iter()
            .enumerate()
            .filter(|(i, _)| cx.values[dim + 1][*i] <= s)
            .map(|(_, &b)| b)
            .collect()
    };
    // beta[i][j] = rank of H(K_i) -> H(K_j) for i <= j
    let mut beta = vec![vec![0i64; t]; t];
    for i in 0..t {
        let z = cycles_at(thresholds[i]);
        let rz = rank(&z) as i64;
        for j in i..t {
            let b = boundaries_at(thresholds[j]);
            let rb = rank(&b) as i64;
            let mut both = z.clone();
            both.extend(&b);
            let sum = rank(&both) as i64;
            // dim(Z_i ∩ B_j) = rz + rb - sum
            beta[i][j] = rz - (rz + rb - sum);
        }
    }
    let get = |i: isize, j: usize| -> i64 {
        if i < 0 {
            0
        } else {
            beta[i as usize][j]
        }
    };
    let mut out = Vec::new();
    for i in 0..t {
        for j in i + 1..t {
            let mu = get(i as isize, j - 1) - get(i as isize, j) - get(i as isize - 1, j - 1) + get(i as isize - 1, j);
            assert!(mu >= 0);
            for _ in 0..mu {
                out.push((thresholds[i], thresholds[j]));
            }
        }
        let mu = get(i as isize, t - 1) - get(i as isize - 1, t - 1);
        for _ in 0..mu {
            out.push((thresholds[i], f64::INFINITY));
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    out
}

pub fn as_tuples(d: &PersistenceDiagram) -> Vec<(f64, f64)> {
    let mut v: Vec<(f64, f64)> = d.pairs().iter().map(|p| (p.birth, p.death)).collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    v
}

pub fn matrix(rows: &[Vec<f64>]) -> DistanceMatrix {
    DistanceMatrix::from_rows(rows).unwrap()
}
