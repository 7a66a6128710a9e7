mod common;

use amls::combinatorics::floor_mul;
use amls::engine::{
    amls_deterministic, amls_run, brute_force_approx, sample_once, success_rate_experiment, worker_rng,
    ExtensionOracle, MonotoneInstance, RunConfig,
};
use amls::problems::{gen_gnp, vc_system, Graph, VcExactOracle, VcMatchingOracle};
use amls::Subset;
use common::{covers_graph, mask_of, min_vc_size};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn p3() -> Graph {
    Graph::new(3, [(0, 1), (1, 2)]).unwrap()
}

fn k3() -> Graph {
    Graph::new(3, [(0, 1), (0, 2), (1, 2)]).unwrap()
}

fn c5() -> Graph {
    Graph::new(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap()
}

fn random_graphs(count: u64, max_n: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = rng.random_range(1..=max_n);
            gen_gnp(n, rng.random_range(0.1..0.8), seed * 1000 + i).unwrap()
        })
        .collect()
}

#[test]
fn sample_once_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let g = p3();
    let sys = vc_system(&g);
    assert_eq!(
        sample_once(&sys, &VcExactOracle::new(&g), 1, 0, &mut rng),
        Subset::from_elements(3, [1])
    );
    let g = k3();
    let sys = vc_system(&g);
    for _ in 0..20 {
        assert_eq!(
            sample_once(&sys, &VcExactOracle::new(&g), 1, 1, &mut rng),
            Subset::full(3)
        );
    }
}

#[test]
fn run_examples() {
    let cfg = RunConfig {
        seed: 9,
        ..RunConfig::default()
    };
    let g = Graph::empty(4);
    let r = amls_run(&vc_system(&g), &VcExactOracle::new(&g), &cfg).unwrap();
    assert_eq!((r.size, r.k_found), (0, Some(0)));

    let g = p3();
    let r = amls_run(&vc_system(&g), &VcExactOracle::new(&g), &cfg).unwrap();
    assert_eq!(r.solution, Subset::from_elements(3, [1]));

    let g = k3();
    let r = amls_run(&vc_system(&g), &VcMatchingOracle::new(&g), &cfg).unwrap();
    assert_eq!(r.size, 2);

    let g = c5();
    let r = amls_deterministic(&vc_system(&g), &VcExactOracle::new(&g), &cfg).unwrap();
    assert_eq!(r.size, 3);
    let g = k3();
    let r = amls_deterministic(&vc_system(&g), &VcMatchingOracle::new(&g), &cfg).unwrap();
    assert!(r.size <= 3);
}

#[test]
fn deterministic_mode_is_exact_with_exact_oracle() {
    for (i, g) in random_graphs(200, 10, 1).iter().enumerate() {
        let sys = vc_system(g);
        let opt = min_vc_size(g, 0);
        let cfg = RunConfig::default();
        let r = amls_deterministic(&sys, &VcExactOracle::new(g), &cfg).unwrap();
        assert_eq!(r.size, opt, "graph {i}");
        assert!(covers_graph(g, mask_of(&r.solution)));
        let r = amls_deterministic(&sys, &VcMatchingOracle::new(g), &cfg).unwrap();
        assert!(r.size <= 2 * opt, "graph {i}");
        assert!(covers_graph(g, mask_of(&r.solution)));
    }
}

#[test]
fn brute_force_within_alpha_opt() {
    for (i, g) in random_graphs(120, 10, 2).iter().enumerate() {
        let sys = vc_system(g);
        let opt = min_vc_size(g, 0) as u64;
        for (tenths, alpha) in [(10, 1.0), (15, 1.5), (20, 2.0)] {
            let r = brute_force_approx(&sys, alpha, 14).unwrap();
            assert!(
                r.size as u64 <= common::floor_tenths(tenths, opt),
                "graph {i} alpha {alpha}"
            );
            assert!(covers_graph(g, mask_of(&r.solution)));
        }
    }
    let g = k3();
    let r = brute_force_approx(&vc_system(&g), 2.0, 14).unwrap();
    assert_eq!(r.size, 2);
    assert!(brute_force_approx(&vc_system(&Graph::empty(20)), 1.0, 14).is_err());
}

#[test]
fn randomized_success_rate() {
    let trials = 300;
    let mut ok = 0;
    for i in 0..trials {
        let n = 8 + (i % 9) as usize;
        let g = gen_gnp(n, 0.3, 70_000 + i).unwrap();
        let cfg = RunConfig {
            seed: i,
            ..RunConfig::default()
        };
        let r = amls_run(&vc_system(&g), &VcExactOracle::new(&g), &cfg).unwrap();
        assert!(covers_graph(&g, mask_of(&r.solution)));
        if r.size <= min_vc_size(&g, 0) {
            ok += 1;
        }
    }
    assert!(ok as f64 / trials as f64 >= 0.9, "{ok}/{trials}");
}

#[test]
fn success_rate_harness() {
    let g = gen_gnp(10, 0.3, 5).unwrap();
    let sys = vc_system(&g);
    let cfg = RunConfig {
        boost: 1.0,
        ..RunConfig::default()
    };
    assert!(success_rate_experiment(&sys, &VcExactOracle::new(&g), 100, &cfg, None).unwrap() >= 0.5);
    let cfg = RunConfig {
        deterministic: true,
        ..RunConfig::default()
    };
    assert_eq!(
        success_rate_experiment(&sys, &VcExactOracle::new(&g), 5, &cfg, None).unwrap(),
        1.0
    );
}

#[test]
fn reports_are_reproducible() {
    let g = gen_gnp(13, 0.35, 99).unwrap();
    let sys = vc_system(&g);
    for workers in [1, 4] {
        let cfg = RunConfig {
            seed: 1234,
            parallel_workers: workers,
            ..RunConfig::default()
        };
        let a = amls_run(&sys, &VcExactOracle::new(&g), &cfg).unwrap();
        let b = amls_run(&sys, &VcExactOracle::new(&g), &cfg).unwrap();
        assert_eq!(a.solution, b.solution);
        assert_eq!(a.to_json(), b.to_json());
    }
    let cfg = RunConfig::default();
    let a = amls_deterministic(&sys, &VcExactOracle::new(&g), &cfg).unwrap();
    let b = amls_deterministic(&sys, &VcExactOracle::new(&g), &cfg).unwrap();
    assert_eq!(a.to_json(), b.to_json());
}

#[test]
fn subset_sampler_is_uniform() {
    // Chi-square over the 20 three-subsets of [6]; 19 degrees of freedom,
    // critical value 43.82 at significance 0.001.
    let mut rng = worker_rng(77, 3, 0);
    let mut counts = [0u64; 64];
    let draws = 100_000;
    for _ in 0..draws {
        counts[mask_of(&Subset::random(6, 3, &mut rng)) as usize] += 1;
    }
    let expected = draws as f64 / 20.0;
    let cells: Vec<u64> = (0..64)
        .filter(|m: &u64| m.count_ones() == 3)
        .map(|m| counts[m as usize])
        .collect();
    assert_eq!(cells.len(), 20);
    assert_eq!(cells.iter().sum::<u64>(), draws);
    let chi2: f64 = cells.iter().map(|&o| (o as f64 - expected).powi(2) / expected).sum();
    assert!(chi2 < 43.82, "chi-square {chi2}");
}

/// Exact VC extension that gives up with probability `1 - γ`.
struct Flaky {
    inner: VcExactOracle,
    gamma: f64,
}

impl ExtensionOracle for Flaky {
    fn alpha(&self) -> f64 {
        1.0
    }

    fn c(&self) -> f64 {
        2.0
    }

    fn success_prob(&self) -> f64 {
        self.gamma
    }

    fn extend(&self, x: &Subset, budget: usize, rng: &mut dyn RngCore) -> Option<Subset> {
        if rng.random::<f64>() < self.gamma {
            self.inner.extend(x, budget, rng)
        } else {
            None
        }
    }
}

#[test]
fn randomized_oracle_path() {
    let mut ok = 0;
    let trials = 200;
    for i in 0..trials {
        let g = gen_gnp(10, 0.3, 500 + i).unwrap();
        let oracle = Flaky {
            inner: VcExactOracle::new(&g),
            gamma: 0.5,
        };
        let cfg = RunConfig {
            seed: i,
            boost: 6.0,
            ..RunConfig::default()
        };
        let r = amls_run(&vc_system(&g), &oracle, &cfg).unwrap();
        assert!(covers_graph(&g, mask_of(&r.solution)));
        if r.size <= min_vc_size(&g, 0) {
            ok += 1;
        }
        assert!(amls_deterministic(&vc_system(&g), &oracle, &cfg).is_err());
    }
    // boost · γ = 3 gives at least 1 - e^{-3} per run.
    assert!(ok as f64 / trials as f64 >= 0.9, "{ok}/{trials}");
}

/// Records the smallest budget it was ever called with.
struct BudgetProbe<'g> {
    inner: VcExactOracle,
    graph: &'g Graph,
    alpha: f64,
}

impl ExtensionOracle for BudgetProbe<'_> {
    fn alpha(&self) -> f64 {
        self.alpha
    }

    fn c(&self) -> f64 {
        2.0
    }

    fn extend(&self, x: &Subset, budget: usize, rng: &mut dyn RngCore) -> Option<Subset> {
        // A budget `k - ⌈t/α⌉` can never exceed the graph size.
        assert!(budget <= self.graph.n());
        self.inner.extend(x, budget, rng)
    }
}

#[test]
fn budgets_and_outputs_stay_valid() {
    for (i, g) in random_graphs(40, 12, 3).iter().enumerate() {
        for alpha in [1.0, 1.3, 2.0] {
            let oracle = BudgetProbe {
                inner: VcExactOracle::new(g),
                graph: g,
                alpha,
            };
            let cfg = RunConfig {
                seed: i as u64,
                ..RunConfig::default()
            };
            for r in [
                amls_run(&vc_system(g), &oracle, &cfg).unwrap(),
                amls_deterministic(&vc_system(g), &oracle, &cfg).unwrap(),
            ] {
                assert!(vc_system(g).contains(&r.solution));
                assert!(r.size <= g.n());
                let opt = min_vc_size(g, 0) as u64;
                if r.mode == amls::engine::Mode::Deterministic {
                    assert!(r.size as u64 <= floor_mul(alpha, opt));
                }
            }
        }
    }
}

#[test]
fn repetition_cap_records_warning() {
    let g = gen_gnp(12, 0.5, 8).unwrap();
    let cfg = RunConfig {
        max_repetitions: Some(1),
        ..RunConfig::default()
    };
    let r = amls_run(&vc_system(&g), &VcExactOracle::new(&g), &cfg).unwrap();
    assert!(!r.warnings.is_empty());
    assert!(vc_system(&g).contains(&r.solution));
}

#[test]
fn invalid_configs_are_rejected() {
    let g = p3();
    let bad = [
        RunConfig {
            boost: 0.5,
            ..RunConfig::default()
        },
        RunConfig {
            parallel_workers: 0,
            ..RunConfig::default()
        },
        RunConfig {
            deterministic: true,
            ..RunConfig::default()
        },
    ];
    for cfg in bad {
        assert!(amls_run(&vc_system(&g), &VcExactOracle::new(&g), &cfg).is_err());
    }
    let big = Graph::empty(15);
    assert!(amls_deterministic(&vc_system(&big), &VcExactOracle::new(&big), &RunConfig::default()).is_err());
}

#[test]
fn stop_at_first_returns_smallest_k() {
    let g = c5();
    let cfg = RunConfig {
        stop_at_first: true,
        ..RunConfig::default()
    };
    let r = amls_deterministic(&vc_system(&g), &VcExactOracle::new(&g), &cfg).unwrap();
    assert_eq!((r.size, r.k_found), (3, Some(3)));
}
