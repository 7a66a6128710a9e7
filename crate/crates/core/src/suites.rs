//! Self-checking invariant suites, run by `amls verify`.
//!
//! Each check compares the library against an independent route (subset
//! enumeration, Pascal's rule, exhaustive search, the defining equation)
//! on small, deterministically seeded inputs.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{
    binomial, brute_exponent_empirical, floor_div, floor_mul, g_value, hyper_symmetry_check, hyper_tail, iter_cost,
    kappa, select_t, GForm, Rational,
};
use crate::engine::{
    amls_deterministic, amls_run, brute_force_approx, exhaustive_minimum, MonotoneInstance, RunConfig,
};
use crate::exponents::{amlsbound, brute_bound, emls_bound, kl_divergence, naive_bound, BoundQuery};
use crate::families::{build_covering, build_intersection_family, family_size_bound, verify_family};
use crate::problems::{
    gen_gnp, hs3_extend_exact, hs3_system, vc_extend_exact, vc_extend_matching, vc_system, Hypergraph3, VcExactOracle,
    VcMatchingOracle,
};
use crate::subset::{combination_masks, Combinations, Subset};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Exponents,
    Combinatorics,
    Engine,
    Families,
    Problems,
    All,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "exponents" => Suite::Exponents,
            "combinatorics" => Suite::Combinatorics,
            "engine" => Suite::Engine,
            "families" => Suite::Families,
            "problems" => Suite::Problems,
            "all" => Suite::All,
            other => return Err(format!("unknown suite `{other}`")),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{status}] {}::{}", self.suite, self.name)?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

struct Recorder {
    suite: &'static str,
    results: Vec<CheckResult>,
}

impl Recorder {
    fn new(suite: &'static str) -> Self {
        Self {
            suite,
            results: Vec::new(),
        }
    }

    fn check(&mut self, name: &'static str, outcome: Result<String, String>) {
        let (passed, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        self.results.push(CheckResult {
            suite: self.suite,
            name,
            passed,
            detail,
        });
    }
}

pub fn run_suite(suite: Suite) -> Vec<CheckResult> {
    match suite {
        Suite::Exponents => exponents_suite(),
        Suite::Combinatorics => combinatorics_suite(),
        Suite::Engine => engine_suite(),
        Suite::Families => families_suite(),
        Suite::Problems => problems_suite(),
        Suite::All => [
            exponents_suite(),
            combinatorics_suite(),
            engine_suite(),
            families_suite(),
            problems_suite(),
        ]
        .concat(),
    }
}

/// α grid `1, 1.1, .., 3` and the `c` grid used by the exponent properties.
pub fn alpha_grid() -> Vec<f64> {
    (0..=20).map(|i| 1.0 + i as f64 / 10.0).collect()
}

pub const C_GRID: [f64; 5] = [1.01, 1.1, 2.0, 10.0, 1024.0];

fn gamma(alpha: f64, c: f64) -> f64 {
    amlsbound(&BoundQuery::new(alpha, c)).expect("valid grid point")
}

fn within(name: &str, got: f64, want: f64, tol: f64) -> Result<(), String> {
    if (got - want).abs() <= tol {
        Ok(())
    } else {
        Err(format!("{name} = {got}, expected {want} ± {tol}"))
    }
}

fn ok_if(cond: bool, fail: impl FnOnce() -> String) -> Result<String, String> {
    if cond {
        Ok(String::new())
    } else {
        Err(fail())
    }
}

fn exponents_suite() -> Vec<CheckResult> {
    let mut r = Recorder::new("exponents");

    r.check(
        "reported_values",
        (|| {
            for c in [1.1, 2.0, 10.0, 1024.0] {
                within("amlsbound(1, c)", gamma(1.0, c), 2.0 - 1.0 / c, 1e-9)?;
            }
            within("amlsbound(2, 1024)", gamma(2.0, 1024.0), 1.2498, 1e-3)?;
            within("amlsbound(1.1, 1.1652)", gamma(1.1, 1.1652), 1.114, 1e-3)?;
            within("brute(2)", brute_bound(2.0).unwrap(), 1.25, 1e-15)?;
            within("brute(1.1)", brute_bound(1.1).unwrap(), 1.716, 1e-3)?;
            within("naive(1.1, 1.1652)", naive_bound(1.1, 1.1652).unwrap(), 1.149, 1e-3)?;
            within("emls(1.1652)", emls_bound(1.1652).unwrap(), 1.1417, 1e-3)?;
            within("emls(1024)", emls_bound(1024.0).unwrap(), 1.9990, 2e-4)?;
            Ok(String::new())
        })(),
    );

    let mut worst = 0f64;
    for a in alpha_grid() {
        for c in C_GRID {
            let g = gamma(a, c);
            let d = kl_divergence(1.0 / a, (g - 1.0) / (c - 1.0)).unwrap();
            worst = worst.max((d - c.ln() / a).abs());
        }
    }
    r.check(
        "root_satisfies_equation",
        ok_if(worst <= 1e-9, || format!("max residual {worst:e}")),
    );

    let mut bad = Vec::new();
    for a in alpha_grid() {
        for c in C_GRID {
            let g = gamma(a, c);
            let ub = a * c / (1.0 + (a - 1.0) * c);
            if !(g < brute_bound(a).unwrap() && g < naive_bound(a, c).unwrap()) {
                bad.push(format!("dominance at ({a}, {c})"));
            }
            if a > 1.0 && g >= emls_bound(c).unwrap() {
                bad.push(format!("emls dominance at ({a}, {c})"));
            }
            if a > 1.0 && g >= ub {
                bad.push(format!("upper bound at ({a}, {c})"));
            }
            if !(g > 1.0 && g <= 1.0 + (c - 1.0) / a) {
                bad.push(format!("range at ({a}, {c})"));
            }
        }
    }
    r.check("dominance_and_upper_bound", ok_if(bad.is_empty(), || bad.join("; ")));

    let mut bad = Vec::new();
    let alphas = alpha_grid();
    for &c in &C_GRID {
        for w in alphas.windows(2) {
            if gamma(w[1], c) >= gamma(w[0], c) {
                bad.push(format!("not decreasing in alpha at c={c}, alpha={}", w[1]));
            }
        }
    }
    for &a in &alphas {
        for w in C_GRID.windows(2) {
            if gamma(a, w[1]) <= gamma(a, w[0]) {
                bad.push(format!("not increasing in c at alpha={a}, c={}", w[1]));
            }
        }
    }
    r.check("monotonicity", ok_if(bad.is_empty(), || bad.join("; ")));

    r.check(
        "convergence_to_brute",
        (|| {
            for a in [1.1, 1.5, 2.0, 3.0] {
                within("amlsbound(alpha, 1e9)", gamma(a, 1e9), brute_bound(a).unwrap(), 1e-3)?;
            }
            Ok(String::new())
        })(),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut bad = None;
    for _ in 0..2000 {
        let a: f64 = rng.random();
        let b: f64 = rng.random_range(1e-6..1.0 - 1e-6);
        let d = kl_divergence(a, b).unwrap();
        if d < -1e-15 {
            bad = Some(format!("D({a}||{b}) = {d}"));
        }
    }
    for a in [0.1, 0.5, 0.9] {
        if kl_divergence(a, a).unwrap() != 0.0 {
            bad = Some(format!("D({a}||{a}) != 0"));
        }
    }
    r.check("gibbs_inequality", bad.map_or(Ok(String::new()), Err));

    let q = BoundQuery::new(1.7, 13.0);
    let first = amlsbound(&q).unwrap().to_bits();
    r.check(
        "bisection_determinism",
        ok_if((0..5).all(|_| amlsbound(&q).unwrap().to_bits() == first), || {
            "results differ".into()
        }),
    );
    r.results
}

/// Tail of the intersection size, counted over every `t`-subset of `[n]`.
pub fn enumerated_tail(n: usize, k: usize, t: usize, x: usize) -> Rational {
    let hit_mask: u64 = (1u64 << k) - 1;
    let subsets = combination_masks(n, t);
    let good = subsets
        .iter()
        .filter(|&&m| (m & hit_mask).count_ones() as usize >= x)
        .count();
    Rational::new(BigUint::from(good), BigUint::from(subsets.len()))
}

/// `C(n, k)` by Pascal's rule, rows `0..=max_n`.
pub fn pascal_rows(max_n: usize) -> Vec<Vec<BigUint>> {
    let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
    for n in 1..=max_n {
        let prev = &rows[n - 1];
        let row = (0..=n)
            .map(|k| {
                let left = if k > 0 { prev[k - 1].clone() } else { BigUint::zero() };
                let right = prev.get(k).cloned().unwrap_or_default();
                left + right
            })
            .collect();
        rows.push(row);
    }
    rows
}

fn combinatorics_suite() -> Vec<CheckResult> {
    let mut r = Recorder::new("combinatorics");

    let rows = pascal_rows(64);
    let mismatch = (0..=64u64)
        .flat_map(|n| (0..=n).map(move |k| (n, k)))
        .find(|&(n, k)| binomial(n, k as i64) != rows[n as usize][k as usize]);
    r.check(
        "binomial_vs_pascal",
        mismatch.map_or(Ok(String::new()), |(n, k)| Err(format!("C({n},{k})"))),
    );

    let mut bad = None;
    'outer: for n in 0..=9usize {
        for k in 0..=n {
            for t in 0..=n {
                for x in 0..=n + 1 {
                    let got = hyper_tail(n as u64, k as u64, t as u64, x as u64).unwrap();
                    if got.as_rational() != &enumerated_tail(n, k, t, x) {
                        bad = Some(format!("p({n},{k},{t},{x})"));
                        break 'outer;
                    }
                }
            }
        }
    }
    r.check("hyper_tail_vs_enumeration", bad.map_or(Ok(String::new()), Err));

    let mut bad = None;
    for n in 0..=12u64 {
        for k in 0..=n {
            for t in 0..=n {
                for x in 0..=k.min(t) {
                    if !hyper_symmetry_check(n, k, t, x) {
                        bad = Some(format!("({n},{k},{t},{x})"));
                    }
                }
            }
        }
    }
    r.check("tail_symmetry", bad.map_or(Ok(String::new()), Err));

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0f64;
    for _ in 0..1000 {
        let (n, k, t, a, c) = random_g_tuple(&mut rng);
        let e = g_value(n, k, t, a, c, GForm::Entropy).unwrap();
        let d = g_value(n, k, t, a, c, GForm::Kl).unwrap();
        worst = worst.max((e - d).abs());
    }
    r.check(
        "g_two_forms",
        ok_if(worst <= 1e-9, || format!("max difference {worst:e}")),
    );

    let mut bad = None;
    for n in 1..=20u64 {
        for (alpha, c) in [(1.0, 2.0), (1.5, 3.0), (2.0, 1.5), (1.3, 10.0)] {
            for k in 0..=floor_div(n, alpha) {
                let best = select_t(n, k, alpha, c).unwrap();
                for t in 0..=floor_mul(alpha, k).min(n) {
                    let other = iter_cost(n, k, t, alpha, c).unwrap();
                    if other.log_cost < best.log_cost - 1e-12 {
                        bad = Some(format!("n={n} k={k} alpha={alpha} c={c} t={t}"));
                    }
                }
            }
        }
    }
    r.check("select_t_is_argmin", bad.map_or(Ok(String::new()), Err));

    r.check(
        "brute_exponent_empirical",
        (|| {
            for a in [1.0, 1.5, 2.0] {
                let v = brute_exponent_empirical(400, a).unwrap();
                within("brute_exponent_empirical(400)", v, brute_bound(a).unwrap().ln(), 0.02)?;
            }
            Ok(String::new())
        })(),
    );

    let mut bad = None;
    for n in 1..=10u64 {
        for p in 1..=n {
            for r_ in 1..=p {
                for q in r_..=(n - p + r_) {
                    let point = Rational::new(
                        binomial(p, r_ as i64) * binomial(n - p, (q - r_) as i64),
                        binomial(n, q as i64),
                    );
                    if kappa(n, p, q, r_).unwrap() != point.recip() {
                        bad = Some(format!("kappa({n},{p},{q},{r_})"));
                    }
                }
            }
        }
    }
    r.check(
        "kappa_is_reciprocal_point_probability",
        bad.map_or(Ok(String::new()), Err),
    );
    r.results
}

/// A random valid `(n, k, t, α, c)` for the two forms of `g`.
pub fn random_g_tuple<R: Rng>(rng: &mut R) -> (f64, f64, f64, f64, f64) {
    loop {
        let n = rng.random_range(2..=400) as f64;
        let alpha = rng.random_range(1.0..3.0);
        let c = rng.random_range(1.01..50.0);
        let k = rng.random_range(0.0..=n / alpha);
        let t = rng.random_range(0.0..(alpha * k).min(n - 1.0));
        let rho = (k - t / alpha) / (n - t);
        if rho > 1e-9 && rho < 1.0 - 1e-9 {
            return (n, k, t, alpha, c);
        }
    }
}

fn engine_suite() -> Vec<CheckResult> {
    let mut r = Recorder::new("engine");
    let graphs: Vec<_> = (0..30u64)
        .map(|i| gen_gnp(4 + (i % 7) as usize, 0.35, 1000 + i).unwrap())
        .collect();

    let mut bad = None;
    for (i, g) in graphs.iter().enumerate() {
        let sys = vc_system(g);
        let opt = exhaustive_minimum(&sys).len();
        let cfg = RunConfig::default();
        let exact = amls_deterministic(&sys, &VcExactOracle::new(g), &cfg).unwrap();
        let matching = amls_deterministic(&sys, &VcMatchingOracle::new(g), &cfg).unwrap();
        if exact.size != opt || !sys.contains(&exact.solution) {
            bad = Some(format!(
                "graph {i}: exact deterministic size {} vs OPT {opt}",
                exact.size
            ));
        }
        if matching.size > 2 * opt || !sys.contains(&matching.solution) {
            bad = Some(format!("graph {i}: matching size {} vs OPT {opt}", matching.size));
        }
    }
    r.check("deterministic_guarantee", bad.map_or(Ok(String::new()), Err));

    let mut bad = None;
    for (i, g) in graphs.iter().enumerate() {
        let sys = vc_system(g);
        let opt = exhaustive_minimum(&sys).len();
        for a in [1.0, 1.5, 2.0] {
            let rep = brute_force_approx(&sys, a, 14).unwrap();
            if rep.size as u64 > floor_mul(a, opt as u64) || !sys.contains(&rep.solution) {
                bad = Some(format!("graph {i}, alpha {a}: size {} vs OPT {opt}", rep.size));
            }
        }
    }
    r.check("brute_force_guarantee", bad.map_or(Ok(String::new()), Err));

    let mut successes = 0;
    let trials = 60;
    for i in 0..trials {
        let g = gen_gnp(12, 0.3, 2000 + i).unwrap();
        let sys = vc_system(&g);
        let opt = exhaustive_minimum(&sys).len();
        let cfg = RunConfig {
            seed: i,
            ..RunConfig::default()
        };
        let rep = amls_run(&sys, &VcExactOracle::new(&g), &cfg).unwrap();
        if rep.size <= opt && sys.contains(&rep.solution) {
            successes += 1;
        }
    }
    let frac = successes as f64 / trials as f64;
    r.check(
        "randomized_success_rate",
        ok_if(frac >= 0.9, || format!("fraction {frac}")),
    );

    let g = gen_gnp(11, 0.4, 77).unwrap();
    let sys = vc_system(&g);
    let cfg = RunConfig {
        seed: 42,
        parallel_workers: 3,
        ..RunConfig::default()
    };
    let a = amls_run(&sys, &VcExactOracle::new(&g), &cfg).unwrap();
    let b = amls_run(&sys, &VcExactOracle::new(&g), &cfg).unwrap();
    r.check(
        "reproducibility",
        ok_if(a.to_json() == b.to_json(), || "reports differ".into()),
    );
    r.results
}

fn families_suite() -> Vec<CheckResult> {
    let mut r = Recorder::new("families");
    let mut bad = Vec::new();
    for n in 2..=7usize {
        for p in 1..=n {
            for rr in 1..=p {
                for q in rr..=(n - p + rr) {
                    for strong in [false, true] {
                        let mut f = build_intersection_family(n, p, q, rr, strong, 14).unwrap();
                        if !verify_family(&mut f) {
                            bad.push(format!("({n},{p},{q},{rr}, strong={strong}) invalid"));
                        }
                        let bound = family_size_bound(n, p, q, rr).unwrap();
                        if f.len() as f64 > bound {
                            bad.push(format!("({n},{p},{q},{rr}) size {} > {bound}", f.len()));
                        }
                    }
                }
            }
        }
        for t in 0..=n {
            for k in 0..=t {
                let mut f = build_covering(n, t, k, 14).unwrap();
                if !verify_family(&mut f) {
                    bad.push(format!("covering ({n},{t},{k}) invalid"));
                }
            }
        }
    }
    r.check("constructions_verify", ok_if(bad.is_empty(), || bad.join("; ")));

    r.check(
        "reference_sizes",
        (|| {
            let c = build_covering(4, 3, 2, 14).unwrap();
            let w = build_intersection_family(4, 2, 2, 1, false, 14).unwrap();
            if c.len() != 3 || w.len() > 3 {
                return Err(format!(
                    "covering(4,3,2) has {}, weak(4,2,2,1) has {}",
                    c.len(),
                    w.len()
                ));
            }
            Ok(String::new())
        })(),
    );
    r.results
}

fn problems_suite() -> Vec<CheckResult> {
    let mut r = Recorder::new("problems");
    let mut rng = ChaCha8Rng::seed_from_u64(3);

    let mut bad = None;
    for i in 0..60u64 {
        let n = rng.random_range(1..=9usize);
        let g = gen_gnp(n, rng.random_range(0.1..0.7), 500 + i).unwrap();
        let x = Subset::from_elements(n, (0..n).filter(|_| rng.random_bool(0.2)));
        let residual = residual_vc_opt(&g, &x);
        for k in 0..=n {
            let exact = vc_extend_exact(&g, &x, k);
            let covers = |y: &Subset| vc_system(&g).contains(&x.union(y));
            match &exact {
                Some(y) if !covers(y) || y.len() > k => bad = Some(format!("graph {i}: bad exact output")),
                None if residual <= k => bad = Some(format!("graph {i}: exact missed k={k}")),
                Some(_) if residual > k => bad = Some(format!("graph {i}: exact beat OPT")),
                _ => {}
            }
            match vc_extend_matching(&g, &x, k) {
                Some(y) if !covers(&y) || y.len() > 2 * k => bad = Some(format!("graph {i}: bad matching output")),
                None if residual <= k => bad = Some(format!("graph {i}: matching refused k={k}")),
                _ => {}
            }
        }
    }
    r.check("vc_oracles_vs_exhaustive", bad.map_or(Ok(String::new()), Err));

    let mut bad = None;
    for i in 0..60 {
        let n = rng.random_range(1..=8usize);
        let m = rng.random_range(0..=12);
        let sets: Vec<Vec<usize>> = (0..m)
            .map(|_| {
                let size = rng.random_range(1..=3.min(n));
                let mut s: Vec<usize> = rand::seq::index::sample(&mut rng, n, size).into_vec();
                s.sort_unstable();
                s
            })
            .collect();
        let h = Hypergraph3::new(n, sets).unwrap();
        let sys = hs3_system(&h);
        let opt = exhaustive_minimum(&sys).len();
        for k in 0..=n {
            match hs3_extend_exact(&h, &Subset::empty(n), k) {
                Some(y) if y.len() > k || !sys.contains(&y) => bad = Some(format!("instance {i}: bad output")),
                Some(_) if opt > k => bad = Some(format!("instance {i}: beat OPT")),
                None if opt <= k => bad = Some(format!("instance {i}: missed k={k}")),
                _ => {}
            }
        }
    }
    r.check("hs3_oracle_vs_exhaustive", bad.map_or(Ok(String::new()), Err));

    let mut bad = None;
    for i in 0..100u64 {
        let n = rng.random_range(2..=12usize);
        let g = gen_gnp(n, 0.3, 900 + i).unwrap();
        let sys = vc_system(&g);
        let s = Subset::from_elements(n, (0..n).filter(|_| rng.random_bool(0.5)));
        let t = s.union(&Subset::from_elements(n, (0..n).filter(|_| rng.random_bool(0.5))));
        if sys.contains(&s) && !sys.contains(&t) {
            bad = Some(format!("sample {i}"));
        }
    }
    r.check("monotonicity_spot_check", bad.map_or(Ok(String::new()), Err));
    r.results
}

/// Minimum vertex cover of `G - X` by enumeration.
fn residual_vc_opt(g: &crate::problems::Graph, x: &Subset) -> usize {
    let n = g.n();
    for size in 0..=n {
        for c in Combinations::new(n, size) {
            let y = Subset::from_elements(n, c);
            if vc_system(g).contains(&x.union(&y)) {
                return size;
            }
        }
    }
    n
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchResult {
    pub trials: usize,
    pub successes: usize,
    pub fraction: f64,
    pub boost: f64,
    pub total_samples: BigUint,
}

/// Success rate of the randomized search with the exact Vertex Cover oracle
/// on one seeded `G(12, 0.3)` graph per trial.
pub fn bench_small_vc(trials: usize, seed: u64, boost: f64) -> crate::Result<BenchResult> {
    let mut successes = 0;
    let mut total_samples = BigUint::zero();
    for i in 0..trials {
        let s = seed.wrapping_add(i as u64);
        let g = gen_gnp(12, 0.3, s)?;
        let sys = vc_system(&g);
        let opt = exhaustive_minimum(&sys).len();
        let cfg = RunConfig {
            seed: s,
            boost,
            ..RunConfig::default()
        };
        let rep = amls_run(&sys, &VcExactOracle::new(&g), &cfg)?;
        total_samples += rep.total_samples;
        if rep.size <= opt {
            successes += 1;
        }
    }
    Ok(BenchResult {
        trials,
        successes,
        fraction: if trials == 0 {
            1.0
        } else {
            successes as f64 / trials as f64
        },
        boost,
        total_samples,
    })
}
