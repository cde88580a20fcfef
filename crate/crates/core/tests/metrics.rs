mod support;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use support::*;
use topoclass::metrics::{
    assignment_solve, bottleneck_distance, dpc_distance, pairwise_distances, wasserstein_distance, CostMatrix, DpcParams, Metric,
};
use topoclass::rips::PersistenceDiagram;

fn diagrams(seed: u64, k: usize, max_len: usize) -> Vec<PersistenceDiagram> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..k).map(|_| random_diagram(&mut rng, 1, max_len)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn dpc_matches_injection_enumeration(seed in any::<u64>(), p in 1.0f64..4.0, c in 0.01f64..3.0) {
        let d = diagrams(seed, 2, 6);
        let fast = dpc_distance(&d[0], &d[1], &DpcParams::new(p, c).unwrap()).unwrap();
        prop_assert!((fast - dpc_bruteforce(&d[0], &d[1], p, c)).abs() < 1e-12);
    }

    #[test]
    fn dpc_is_bounded_by_c(seed in any::<u64>(), c in 0.01f64..3.0) {
        let d = diagrams(seed, 2, 8);
        let v = dpc_distance(&d[0], &d[1], &DpcParams::new(2.0, c).unwrap()).unwrap();
        prop_assert!((0.0..=c * (1.0 + 1e-12)).contains(&v));
    }

    #[test]
    fn dpc_triangle_and_symmetry(seed in any::<u64>(), p in 1.0f64..3.0, c in 0.05f64..2.0) {
        let d = diagrams(seed, 3, 6);
        let params = DpcParams::new(p, c).unwrap();
        let dist = |a: usize, b: usize| dpc_distance(&d[a], &d[b], &params).unwrap();
        prop_assert_eq!(dist(0, 1), dist(1, 0));
        prop_assert!(dist(0, 2) <= dist(0, 1) + dist(1, 2) + 1e-9);
        prop_assert_eq!(dist(0, 0), 0.0);
    }

    #[test]
    fn wasserstein_matches_enumeration(seed in any::<u64>(), p in 1.0f64..3.0) {
        let d = diagrams(seed, 2, 4);
        let fast = wasserstein_distance(&d[0], &d[1], p).unwrap();
        let slow = wasserstein_bruteforce(&d[0], &d[1], p);
        prop_assert!((fast - slow).abs() < 1e-9 * (1.0 + slow));
    }

    #[test]
    fn bottleneck_is_the_large_p_limit(seed in any::<u64>()) {
        let d = diagrams(seed, 2, 4);
        let b = bottleneck_distance(&d[0], &d[1]).unwrap();
        let w = wasserstein_bruteforce(&d[0], &d[1], 60.0);
        // W_p decreases to the bottleneck distance, within a factor (n+m)^(1/p)
        prop_assert!(b <= w + 1e-9);
        prop_assert!(w <= b * 8f64.powf(1.0 / 60.0) + 1e-9);
    }

    #[test]
    fn assignment_beats_every_permutation(seed in any::<u64>(), n in 1usize..=5, extra in 0usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = n + extra;
        let costs: Vec<Vec<f64>> = (0..n).map(|_| (0..m).map(|_| rand::Rng::random_range(&mut rng, 0.0..10.0)).collect()).collect();
        let cm = CostMatrix::from_rows(&costs).unwrap();
        let sol = assignment_solve(&cm).unwrap();
        let mut cols: Vec<usize> = sol.assignment.clone();
        cols.sort_unstable();
        cols.dedup();
        prop_assert_eq!(cols.len(), n);
        let mut best = f64::INFINITY;
        fn rec(i: usize, rows: &[Vec<f64>], used: &mut Vec<bool>, acc: f64, best: &mut f64) {
            if i == rows.len() {
                *best = best.min(acc);
                return;
            }
            for j in 0..used.len() {
                if !used[j] {
                    used[j] = true;
                    rec(i + 1, rows, used, acc + rows[i][j], best);
                    used[j] = false;
                }
            }
        }
        rec(0, &costs, &mut vec![false; m], 0.0, &mut best);
        prop_assert!((sol.total_cost - best).abs() < 1e-9);
    }
}

#[test]
fn pairwise_matrix_is_symmetric_with_zero_diagonal() {
    let d = diagrams(9, 12, 6);
    for metric in [Metric::Dpc { p: 2.0, c: 0.4 }, Metric::Wasserstein { p: 2.0 }, Metric::Bottleneck] {
        let m = pairwise_distances(&d, &metric).unwrap();
        for i in 0..d.len() {
            assert_eq!(m.get(i, i), 0.0);
            for j in 0..d.len() {
                assert_eq!(m.get(i, j), m.get(j, i));
                assert_eq!(m.get(i, j), metric.distance(&d[i], &d[j]).unwrap());
            }
        }
    }
}

#[test]
fn saturation_with_growing_cardinality() {
    let x = PersistenceDiagram::from_pairs(1, &[(0.0, 1.0)]).unwrap();
    let params = DpcParams::new(2.0, 0.3).unwrap();
    let mut prev = 0.0;
    for m in [2usize, 10, 100, 1000] {
        let pairs: Vec<(f64, f64)> = (0..m).map(|k| (0.0, 1.0 + k as f64)).collect();
        let y = PersistenceDiagram::from_pairs(1, &pairs).unwrap();
        let d = dpc_distance(&x, &y, &params).unwrap();
        // the one exact match leaves (m - 1) unmatched points at full penalty
        assert!((d - 0.3 * ((m - 1) as f64 / m as f64).sqrt()).abs() < 1e-12);
        assert!(d > prev);
        prev = d;
    }
}
