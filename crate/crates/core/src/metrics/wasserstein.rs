//! Wasserstein and bottleneck distances with diagonal augmentation.
//!
//! Each diagram is padded with one diagonal slot per point of the other
//! diagram. A point matched to a diagonal slot pays its ℓ∞ distance to the
//! diagonal, `(death - birth) / 2`; diagonal-to-diagonal pairs are free.

use crate::error::{invalid_param, Result};
use crate::metrics::assignment::{assignment_solve, CostMatrix};
use crate::metrics::dpc::lex_cmp;
use crate::metrics::{check_finite, linf};
use crate::rips::PersistenceDiagram;

fn to_diagonal(p: &crate::rips::PersistencePair) -> f64 {
    (p.death - p.birth) / 2.0
}

/// Ground distances of the augmented (n + m) x (n + m) problem.
fn augmented_ground(x: &PersistenceDiagram, y: &PersistenceDiagram) -> CostMatrix {
    let (n, m) = (x.len(), y.len());
    CostMatrix::from_fn(n + m, n + m, |i, j| match (i < n, j < m) {
        (true, true) => linf(&x.pairs()[i], &y.pairs()[j]),
        (true, false) => to_diagonal(&x.pairs()[i]),
        (false, true) => to_diagonal(&y.pairs()[j]),
        (false, false) => 0.0,
    })
}

/// `W_p(X, Y)` for `1 <= p < inf`.
pub fn wasserstein_distance(x: &PersistenceDiagram, y: &PersistenceDiagram, p: f64) -> Result<f64> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(invalid_param(format!("Wasserstein exponent must satisfy 1 <= p < inf, got {p}")));
    }
    check_finite(x)?;
    check_finite(y)?;
    if x.is_empty() && y.is_empty() {
        return Ok(0.0);
    }
    // a fixed argument order makes the result exactly symmetric
    let (x, y) = if x.len().cmp(&y.len()).then_with(|| lex_cmp(x, y)).is_gt() { (y, x) } else { (x, y) };
    let ground = augmented_ground(x, y);
    let size = ground.rows();
    let cost = CostMatrix::from_fn(size, size, |i, j| ground.get(i, j).powf(p));
    let m = assignment_solve(&cost)?;
    Ok(m.total_cost.powf(1.0 / p))
}

/// Is there a perfect matching using only edges with ground cost `<= t`?
fn perfect_matching_within(ground: &CostMatrix, t: f64) -> bool {
    let n = ground.rows();
    let mut match_of_col = vec![usize::MAX; n];

    fn augment(ground: &CostMatrix, t: f64, row: usize, seen: &mut [bool], match_of_col: &mut [usize]) -> bool {
        for col in 0..ground.cols() {
            if seen[col] || ground.get(row, col) > t {
                continue;
            }
            seen[col] = true;
            if match_of_col[col] == usize::MAX || augment(ground, t, match_of_col[col], seen, match_of_col) {
                match_of_col[col] = row;
                return true;
            }
        }
        false
    }

    let mut seen = vec![false; n];
    for row in 0..n {
        seen.fill(false);
        if !augment(ground, t, row, &mut seen, &mut match_of_col) {
            return false;
        }
    }
    true
}

/// Bottleneck distance: binary search over the finite set of candidate
/// ground costs with a bipartite feasibility check.
pub fn bottleneck_distance(x: &PersistenceDiagram, y: &PersistenceDiagram) -> Result<f64> {
    check_finite(x)?;
    check_finite(y)?;
    if x.is_empty() && y.is_empty() {
        return Ok(0.0);
    }
    let ground = augmented_ground(x, y);
    let size = ground.rows();
    let mut candidates: Vec<f64> = (0..size).flat_map(|i| (0..size).map(move |j| (i, j))).map(|(i, j)| ground.get(i, j)).collect();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    // The largest candidate is always feasible.
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if perfect_matching_within(&ground, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(candidates[lo])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pd(pairs: &[(f64, f64)]) -> PersistenceDiagram {
        PersistenceDiagram::from_pairs(1, pairs).unwrap()
    }

    #[test]
    fn identity_and_empty() {
        let x = pd(&[(0.0, 1.0), (0.2, 0.5)]);
        assert_eq!(wasserstein_distance(&x, &x, 2.0).unwrap(), 0.0);
        assert_eq!(bottleneck_distance(&x, &x).unwrap(), 0.0);
        assert_eq!(wasserstein_distance(&pd(&[]), &pd(&[]), 1.0).unwrap(), 0.0);
        assert_eq!(bottleneck_distance(&pd(&[]), &pd(&[])).unwrap(), 0.0);
    }

    #[test]
    fn single_point_to_diagonal() {
        let x = pd(&[(0.0, 1.0)]);
        for p in [1.0, 2.0, 3.5] {
            assert!((wasserstein_distance(&x, &pd(&[]), p).unwrap() - 0.5).abs() < 1e-15);
        }
        assert_eq!(bottleneck_distance(&x, &pd(&[])).unwrap(), 0.5);
    }

    #[test]
    fn direct_match_beats_diagonal() {
        let x = pd(&[(0.0, 1.0)]);
        let y = pd(&[(0.0, 1.2)]);
        assert!((bottleneck_distance(&x, &y).unwrap() - 0.2).abs() < 1e-12);
    }

    #[test]
    fn extra_point_costs_distance_to_diagonal() {
        let x = pd(&[(0.0, 1.0)]);
        let y = pd(&[(0.0, 1.0), (0.5, 0.9)]);
        assert!((wasserstein_distance(&x, &y, 1.0).unwrap() - 0.2).abs() < 1e-12);
    }

    #[test]
    fn zero_persistence_point_is_free() {
        let x = pd(&[(0.0, 1.0), (0.3, 0.7)]);
        let y = pd(&[(0.0, 1.1), (0.4, 0.4)]);
        let y_trim = pd(&[(0.0, 1.1)]);
        for p in [1.0, 2.0] {
            let a = wasserstein_distance(&x, &y, p).unwrap();
            let b = wasserstein_distance(&x, &y_trim, p).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_exponent() {
        assert!(wasserstein_distance(&pd(&[]), &pd(&[]), 0.5).is_err());
    }
}
