//! Acceptance criteria, one check per criterion. Each prints a PASS/FAIL line
//! with the measured quantity; the test fails if any criterion fails.
//!
//! Run with `cargo test -p topoclass --test acceptance -- --nocapture`.

mod support;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use topoclass::classifier::{
    corpus_distances, counting_classifier, cross_validate_with_distances, default_c_grid, grid_search_c, CvConfig, DiagramRecord,
};
use topoclass::corpus::{diagram_corpus, generate_corpus, CorpusSpec};
use topoclass::metrics::{dpc_distance, DpcParams, Metric};
use topoclass::pointcloud::{distance_matrix, PointCloud, Structure};
use topoclass::rips::{cloud_diagrams, rips_diagrams, PersistenceDiagram, RipsOptions};
use topoclass::stats::bounds::constructive_max;
use topoclass::stats::{
    b1_upper_bound, breusch_pagan, construct_hole_config, dpc_probabilistic_bound, prediction_interval, wls_fit, wls_fit_xy, CardinalityRecord,
    KissingNumber, PredictorTransform, WeightRule,
};

use support::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn report(id: usize, name: &str, started: Instant, o: &Outcome) {
    println!(
        "[{}] criterion {id:>2} {name}: {} ({:.1}s)",
        if o.pass { "PASS" } else { "FAIL" },
        o.detail,
        started.elapsed().as_secs_f64()
    );
}

// --------------------------------------------------------------- 1

fn dpc_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let x = random_diagram(&mut rng, 1, 7);
        let y = random_diagram(&mut rng, 1, 7);
        let p = [1.0, 2.0, 3.0][rng.random_range(0..3)];
        let c = rng.random_range(0.05..2.5);
        let fast = dpc_distance(&x, &y, &DpcParams::new(p, c).unwrap()).unwrap();
        worst = worst.max((fast - dpc_bruteforce(&x, &y, p, c)).abs());
    }
    Outcome {
        pass: worst < 1e-12,
        detail: format!("max |difference| over 500 pairs = {worst:.2e}"),
    }
}

// --------------------------------------------------------------- 2

fn metric_axioms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut asym = 0usize;
    let mut worst_violation: f64 = 0.0;
    for _ in 0..1000 {
        let p = [1.0, 2.0, 3.0][rng.random_range(0..3)];
        let params = DpcParams::new(p, rng.random_range(0.05..2.5)).unwrap();
        let d: Vec<PersistenceDiagram> = (0..3).map(|_| random_diagram(&mut rng, 1, 6)).collect();
        let dist = |a: usize, b: usize| dpc_distance(&d[a], &d[b], &params).unwrap();
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            if dist(a, b) != dist(b, a) {
                asym += 1;
            }
        }
        for (a, b, m) in [(0, 2, 1), (0, 1, 2), (1, 2, 0)] {
            worst_violation = worst_violation.max(dist(a, b) - dist(a, m) - dist(m, b));
        }
    }
    Outcome {
        pass: asym == 0 && worst_violation <= 1e-9,
        detail: format!("asymmetric pairs = {asym}, worst triangle excess = {worst_violation:.2e}"),
    }
}

// --------------------------------------------------------------- 3

fn rips_correctness() -> Outcome {
    let square = PointCloud::new("square", &[vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]], None).unwrap();
    let d = cloud_diagrams(&square, &RipsOptions::default()).unwrap();
    let h1 = d.get(1).unwrap().pairs();
    let square_ok = h1.len() == 1 && (h1[0].birth - 1.0).abs() < 1e-9 && (h1[0].death - 2f64.sqrt()).abs() < 1e-9;

    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut mismatches = 0usize;
    for _ in 0..200 {
        let n = rng.random_range(1..=7);
        let pc = random_cloud(&mut rng, n, 1.0);
        let dm = brute_distance_matrix(&pc);
        let diags = rips_diagrams(&matrix(&dm), &RipsOptions::default()).unwrap();
        for dim in 0..=1 {
            if as_tuples(diags.get(dim).unwrap()) != oracle_diagram(&dm, dim) {
                mismatches += 1;
            }
        }
    }
    Outcome {
        pass: square_ok && mismatches == 0,
        detail: format!("unit square H1 = {h1:?}; oracle mismatches in 200 clouds = {mismatches}"),
    }
}

// --------------------------------------------------------------- 4

fn stability() -> Outcome {
    let deltas = [1e-1, 1e-2, 1e-3, 1e-4];
    let params = DpcParams::new(2.0, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut failures = Vec::new();
    let mut eligible_total = 0usize;
    for cloud in 0..20 {
        let a = random_cloud(&mut rng, 15, 100.0);
        let dirs: Vec<[f64; 3]> = (0..15).map(|_| unit_direction(&mut rng)).collect();
        let base = cloud_diagrams(&a, &RipsOptions::default()).unwrap();
        let half_gap = distance_matrix(&a).unwrap().min_gap().unwrap() / 2.0;
        let mut prev: Option<[f64; 2]> = None;
        let mut at_smallest = [f64::NAN; 2];
        for &delta in &deltas {
            let moved: Vec<Vec<f64>> = (0..15)
                .map(|i| (0..3).map(|k| a.point(i)[k] + delta * dirs[i][k]).collect())
                .collect();
            let b = cloud_diagrams(&PointCloud::new("moved", &moved, None).unwrap(), &RipsOptions::default()).unwrap();
            let dist = [0, 1].map(|dim| {
                dpc_distance(&base.get(dim).unwrap().finite(), &b.get(dim).unwrap().finite(), &params).unwrap()
            });
            at_smallest = dist;
            // monotonicity is only claimed below half the minimal gap
            if delta >= half_gap {
                continue;
            }
            eligible_total += 1;
            if let Some(p) = prev {
                if dist[0] > p[0] || dist[1] > p[1] {
                    failures.push(format!("cloud {cloud}: increase at delta {delta}"));
                }
            }
            prev = Some(dist);
        }
        let smallest = *deltas.last().unwrap();
        if at_smallest.iter().any(|&d| !(d < 10.0 * smallest)) {
            failures.push(format!("cloud {cloud}: {at_smallest:?} at delta {smallest}"));
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!("{eligible_total} eligible perturbations; failures: {failures:?}"),
    }
}

// --------------------------------------------------------------- 5

fn saturation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let (p, c) = (2.0, 0.5);
    let params = DpcParams::new(p, c).unwrap();
    let x = PersistenceDiagram::from_pairs(1, &[(0.1, 0.5), (0.2, 0.9), (0.4, 0.6), (0.3, 1.2), (0.5, 0.8)]).unwrap();
    let pool: Vec<(f64, f64)> = (0..1000)
        .map(|_| {
            let b: f64 = rng.random_range(0.0..1.0);
            (b, b + rng.random_range(0.0..1.0))
        })
        .collect();
    let dists: Vec<f64> = [10, 100, 1000]
        .iter()
        .map(|&m| {
            let y = PersistenceDiagram::from_pairs(1, &pool[..m]).unwrap();
            dpc_distance(&x, &y, &params).unwrap()
        })
        .collect();
    let gaps: Vec<f64> = dists.iter().map(|d| c - d).collect();
    let monotone = gaps.windows(2).all(|w| w[1] <= w[0]) && gaps.iter().all(|&g| g >= 0.0);
    let within = gaps[2] <= 0.1 * c;
    Outcome {
        pass: monotone && within,
        detail: format!("d at |Y| = 10, 100, 1000: {dists:.4?} (c = {c})"),
    }
}

// ------------------------------------------------------------ 6 and 7

const DESK_PER_CLASS: usize = 100;

fn desk_corpus(tau: f64, seed: u64) -> Vec<DiagramRecord> {
    let clouds = generate_corpus(&CorpusSpec::new(tau, DESK_PER_CLASS, seed)).unwrap();
    diagram_corpus(&clouds).unwrap()
}

struct DeskRun {
    tau: f64,
    c: f64,
    accuracy: f64,
    counting: f64,
    corpus: Vec<DiagramRecord>,
}

/// Tunes `c` on one corpus and cross-validates on another drawn with a
/// different seed.
fn desk_run(tau: f64, seed: u64) -> DeskRun {
    let tuning = desk_corpus(tau, seed.wrapping_mul(1_000_003).wrapping_add(17));
    let eval = desk_corpus(tau, seed);
    let cfg = CvConfig::with_seed(seed);
    let grid = grid_search_c(&tuning, &default_c_grid(), 2.0, &cfg).unwrap();
    let metric = Metric::Dpc { p: 2.0, c: grid.best_c };
    let distances = corpus_distances(&eval, &metric).unwrap();
    let report = cross_validate_with_distances(&eval, &distances, &metric, &cfg).unwrap();
    let counting = counting_classifier(&eval, &cfg).unwrap();
    DeskRun {
        tau,
        c: grid.best_c,
        accuracy: report.mean_accuracy,
        counting: counting.mean_accuracy,
        corpus: eval,
    }
}

fn accuracy(runs: &[DeskRun]) -> Outcome {
    let mut pass = true;
    let mut rows = Vec::new();
    for r in runs {
        let target = if r.tau < 0.5 { 0.93 } else { 0.88 };
        pass &= r.accuracy >= target;
        rows.push(format!("tau {} c {:.4} acc {:.3} (>= {target})", r.tau, r.c, r.accuracy));
    }
    Outcome {
        pass,
        detail: rows.join("; "),
    }
}

fn ordering(runs: &[DeskRun]) -> Outcome {
    let mut pass = true;
    let mut rows = Vec::new();
    for (k, r) in runs.iter().enumerate() {
        let gap = r.accuracy - r.counting;
        pass &= gap >= 0.03;
        rows.push(format!("seed {k}: d_p^c {:.3} vs counting {:.3}", r.accuracy, r.counting));
    }
    Outcome {
        pass,
        detail: rows.join("; "),
    }
}

// --------------------------------------------------------------- 8

fn cardinality_bound(corpora: &[&[DiagramRecord]]) -> Outcome {
    let k3 = KissingNumber::for_dimension(3).unwrap();
    let mut checked = 0usize;
    let mut violations = 0usize;
    for corpus in corpora {
        for r in corpus.iter() {
            checked += 1;
            if r.b1() as u64 > b1_upper_bound(r.b0 as u64, k3).unwrap() {
                violations += 1;
            }
        }
    }
    let mut config_failures = Vec::new();
    let mut configs = 0usize;
    for rho in 1..=12 {
        let Some(max_t) = constructive_max(rho) else { continue };
        for t in 0..=max_t {
            configs += 1;
            let pc = construct_hole_config(rho, t).unwrap();
            let d = cloud_diagrams(&pc, &RipsOptions::default()).unwrap();
            let got = d.get(1).unwrap().len();
            if pc.len() != rho || got != t {
                config_failures.push(format!("rho {rho} t {t}: {} points, {got} pairs", pc.len()));
            }
        }
    }
    Outcome {
        pass: violations == 0 && config_failures.is_empty() && checked > 0,
        detail: format!(
            "{checked} diagrams, {violations} bound violations; {configs} hole configurations, failures {config_failures:?}"
        ),
    }
}

// --------------------------------------------------------------- 9

fn heteroscedasticity() -> Outcome {
    let clouds = generate_corpus(&CorpusSpec::new(0.25, 300, 909)).unwrap();
    let records: Vec<CardinalityRecord> = diagram_corpus(&clouds)
        .unwrap()
        .iter()
        .map(DiagramRecord::cardinality_record)
        .collect();
    let mut pass = true;
    let mut rows = Vec::new();
    for class in Structure::ALL {
        let recs: Vec<CardinalityRecord> = records.iter().filter(|r| r.id.starts_with(class.as_str())).cloned().collect();
        let bp = breusch_pagan(&recs, PredictorTransform::Square).unwrap();
        pass &= recs.len() >= 300 && bp.p_value < 0.01;
        rows.push(format!("{class}: n {} LM {:.2} p {:.3e}", recs.len(), bp.statistic, bp.p_value));
    }
    Outcome {
        pass,
        detail: rows.join("; "),
    }
}

// -------------------------------------------------------------- 10

fn interval_coverage() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let gamma = [1.5, 0.02];
    let sigma = 0.3;
    let std_normal = Normal::new(0.0, 1.0).unwrap();
    let draws = 2000;
    let mut covered = 0usize;
    for _ in 0..draws {
        let draw = |b0: usize, rng: &mut ChaCha8Rng| {
            let t = (b0 * b0) as f64;
            gamma[0] + gamma[1] * t + sigma * t.sqrt() * std_normal.sample(rng)
        };
        let xs: Vec<usize> = (0..60).map(|_| rng.random_range(4..30)).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| draw(x, &mut rng)).collect();
        let fit = topoclass_fit(&xs, &ys);
        let mu = rng.random_range(4..30);
        let fresh = draw(mu, &mut rng);
        let pi = prediction_interval(&fit, mu as f64, 0.05).unwrap();
        if pi.contains(fresh) {
            covered += 1;
        }
    }
    let coverage = covered as f64 / draws as f64;
    Outcome {
        pass: (0.92..=0.98).contains(&coverage),
        detail: format!("coverage of 95% intervals over {draws} draws = {:.2}%", 100.0 * coverage),
    }
}

fn topoclass_fit(xs: &[usize], ys: &[f64]) -> topoclass::stats::WlsFit {
    let xs: Vec<f64> = xs.iter().map(|&x| x as f64).collect();
    wls_fit_xy(&xs, ys, PredictorTransform::Square, WeightRule::InversePredictor).unwrap()
}

// -------------------------------------------------------------- 11

fn probabilistic_bound(corpus: &[DiagramRecord]) -> Outcome {
    let params = DpcParams::new(2.0, 0.05).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1111);
    let mut holds = 0usize;
    let trials = 500;
    let by_class: Vec<Vec<&DiagramRecord>> = Structure::ALL
        .iter()
        .map(|&c| corpus.iter().filter(|r| r.label == Some(c)).collect())
        .collect();
    let fits: Vec<_> = by_class
        .iter()
        .map(|rs| {
            let recs: Vec<CardinalityRecord> = rs.iter().map(|r| r.cardinality_record()).collect();
            wls_fit(&recs, PredictorTransform::Square).unwrap()
        })
        .collect();
    for _ in 0..trials {
        let k = rng.random_range(0..2);
        let rs = &by_class[k];
        let i = rng.random_range(0..rs.len());
        let mut j = rng.random_range(0..rs.len() - 1);
        if j >= i {
            j += 1;
        }
        let b = dpc_probabilistic_bound(&rs[i].dim1, &rs[j].dim1, &fits[k], rs[i].b0 as f64, 0.05, &params).unwrap();
        if b.holds() {
            holds += 1;
        }
    }
    let rate = holds as f64 / trials as f64;
    Outcome {
        pass: rate >= 0.90,
        detail: format!("bound holds for {holds}/{trials} same-class pairs ({:.1}%)", 100.0 * rate),
    }
}

#[test]
fn acceptance() {
    let mut all = true;
    let run = |id: usize, name: &str, f: &mut dyn FnMut() -> Outcome| -> bool {
        let t = Instant::now();
        let o = f();
        report(id, name, t, &o);
        o.pass
    };
    all &= run(1, "d_p^c equals exhaustive injection search", &mut dpc_oracle);
    all &= run(2, "d_p^c metric axioms", &mut metric_axioms);
    all &= run(3, "Rips diagrams match the clique-homology oracle", &mut rips_correctness);
    all &= run(4, "stability under small perturbations", &mut stability);
    all &= run(5, "saturation towards c", &mut saturation);

    let started = Instant::now();
    let taus = [0.0, 0.25, 0.75, 1.0];
    let runs: Vec<DeskRun> = taus.iter().map(|&tau| desk_run(tau, 6)).collect();
    let o6 = accuracy(&runs);
    report(6, "desk-scale accuracy", started, &o6);
    all &= o6.pass;

    let t7 = Instant::now();
    let ordering_runs: Vec<DeskRun> = [71, 72, 73].iter().map(|&s| desk_run(0.75, s)).collect();
    let o7 = ordering(&ordering_runs);
    report(7, "d_p^c beats counting at tau 0.75", t7, &o7);
    all &= o7.pass;

    let corpora: Vec<&[DiagramRecord]> = runs.iter().chain(&ordering_runs).map(|r| r.corpus.as_slice()).collect();
    all &= run(8, "cardinality bound and hole configurations", &mut || cardinality_bound(&corpora));
    all &= run(9, "Breusch-Pagan detects heteroscedasticity", &mut heteroscedasticity);
    all &= run(10, "prediction-interval coverage", &mut interval_coverage);
    let tau025 = &runs[1].corpus;
    all &= run(11, "probabilistic d_p^c bound", &mut || probabilistic_bound(tau025));

    assert!(all, "at least one acceptance criterion failed");
}
