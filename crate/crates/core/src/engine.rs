//! Sampling-and-extension search over monotone set systems.
//!
//! [`amls_run`] is the randomized loop: for every candidate optimum size `k`
//! it picks the sample size `t` with the cheapest expected cost, then samples
//! `t` elements and asks the extension oracle to complete them, repeating
//! `⌈boost/p⌉` times. [`amls_deterministic`] replaces the random samples by
//! the members of a set-intersection family, and [`brute_force_approx`]
//! checks the members of a covering directly.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::combinatorics::{ceil_div, floor_div, floor_mul, select_t, select_t_derandomized};
use crate::error::{Error, Result};
use crate::families::{build_covering, build_intersection_family, DEFAULT_FAMILY_LIMIT};
use crate::subset::{Combinations, Subset};

/// A monotone family of subsets of `{0, .., n-1}`: the full universe is a
/// member and supersets of members are members.
pub trait MonotoneInstance: Sync {
    fn universe_size(&self) -> usize;

    fn contains(&self, s: &Subset) -> bool;

    fn label(&self) -> String {
        format!("instance(n={})", self.universe_size())
    }
}

/// A parameterized α-approximate extension algorithm running in `O*(c^k)`.
///
/// Given `X` and a budget `k`, if some `S` with `|S| <= k` makes `S ∪ X` a
/// member, then with probability at least `success_prob` the oracle returns
/// `Y` with `Y ∪ X` a member and `|Y| <= α k`. `None` signals failure.
pub trait ExtensionOracle: Sync {
    fn alpha(&self) -> f64;

    fn c(&self) -> f64;

    fn success_prob(&self) -> f64 {
        1.0
    }

    fn extend(&self, x: &Subset, budget: usize, rng: &mut dyn RngCore) -> Option<Subset>;
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    /// Repetition multiplier, at least 1.
    pub boost: f64,
    /// Cap on samples per `k`; exceeding it is recorded as a warning.
    pub max_repetitions: Option<u64>,
    pub parallel_workers: usize,
    pub deterministic: bool,
    /// Return at the first `k` that yields a solution instead of scanning
    /// every `k <= n/α`.
    pub stop_at_first: bool,
    /// Largest universe for which families are constructed.
    pub family_limit: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            boost: 3.0,
            max_repetitions: None,
            parallel_workers: 1,
            deterministic: false,
            stop_at_first: false,
            family_limit: DEFAULT_FAMILY_LIMIT,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.boost.is_finite() && self.boost >= 1.0) {
            return Err(Error::Config(format!("boost {} must be >= 1", self.boost)));
        }
        if self.parallel_workers == 0 {
            return Err(Error::Config("parallel_workers must be >= 1".into()));
        }
        if self.max_repetitions == Some(0) {
            return Err(Error::Config("max_repetitions must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Randomized,
    Deterministic,
    Brute,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub instance: String,
    pub n: usize,
    pub alpha: f64,
    /// `None` for brute force, which uses no extension oracle.
    pub c: Option<f64>,
    pub mode: Mode,
    pub solution: Subset,
    pub size: usize,
    /// The `k` iteration that produced the solution; `None` when nothing
    /// better than the full universe was found.
    pub k_found: Option<usize>,
    pub total_samples: BigUint,
    pub elapsed: Duration,
    pub seed: u64,
    pub warnings: Vec<String>,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    instance: &'a str,
    n: usize,
    alpha: f64,
    c: Option<f64>,
    mode: Mode,
    size: usize,
    solution: Vec<usize>,
    k_found: Option<usize>,
    total_samples: serde_json::Value,
    seed: u64,
    warnings: &'a [String],
}

impl RunReport {
    /// JSON form of the report. Solution elements are 1-based, matching the
    /// instance file formats. Elapsed time is left out so that identical runs
    /// serialize identically.
    pub fn to_json(&self) -> String {
        let total_samples = match self.total_samples.to_u64() {
            Some(v) => serde_json::Value::from(v),
            None => serde_json::Value::from(self.total_samples.to_string()),
        };
        let json = ReportJson {
            instance: &self.instance,
            n: self.n,
            alpha: self.alpha,
            c: self.c,
            mode: self.mode,
            size: self.size,
            solution: self.solution.iter().map(|e| e + 1).collect(),
            k_found: self.k_found,
            total_samples,
            seed: self.seed,
            warnings: &self.warnings,
        };
        serde_json::to_string_pretty(&json).expect("report serializes")
    }
}

fn check_oracle<O: ExtensionOracle + ?Sized>(ext: &O) -> Result<()> {
    let (alpha, c, sp) = (ext.alpha(), ext.c(), ext.success_prob());
    if !(alpha.is_finite() && alpha >= 1.0) {
        return Err(Error::Config(format!("oracle alpha {alpha} must be >= 1")));
    }
    if !(c.is_finite() && c >= 1.0) {
        return Err(Error::Config(format!("oracle c {c} must be >= 1")));
    }
    if !(sp > 0.0 && sp <= 1.0) {
        return Err(Error::Config(format!(
            "oracle success probability {sp} must lie in (0, 1]"
        )));
    }
    Ok(())
}

/// One sample-and-extend attempt. Returns `Some(X ∪ Y)` if it is a member of
/// size at most `⌊αk⌋`, `None` otherwise.
fn attempt<I, O>(inst: &I, ext: &O, x: &Subset, k: usize, t: usize, rng: &mut dyn RngCore) -> Option<Subset>
where
    I: MonotoneInstance + ?Sized,
    O: ExtensionOracle + ?Sized,
{
    let alpha = ext.alpha();
    let budget = k
        .checked_sub(ceil_div(t as u64, alpha) as usize)
        .expect("t <= alpha*k keeps the budget non-negative");
    let y = ext.extend(x, budget, rng)?;
    let z = x.union(&y);
    (z.len() as u64 <= floor_mul(alpha, k as u64) && inst.contains(&z)).then_some(z)
}

/// Draws a uniform `t`-subset, extends it with budget `k - ⌈t/α⌉`, and
/// returns the result if it is a member of size at most `αk`; otherwise the
/// full universe.
pub fn sample_once<I, O, R>(inst: &I, ext: &O, k: usize, t: usize, rng: &mut R) -> Subset
where
    I: MonotoneInstance + ?Sized,
    O: ExtensionOracle + ?Sized,
    R: RngCore,
{
    let n = inst.universe_size();
    assert!(
        t <= n && t as u64 <= floor_mul(ext.alpha(), k as u64),
        "t must be at most min(alpha*k, n)"
    );
    let x = Subset::random(n, t, rng);
    attempt(inst, ext, &x, k, t, rng).unwrap_or_else(|| Subset::full(n))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent generator for `(seed, k, worker)`.
pub fn worker_rng(seed: u64, k: usize, worker: usize) -> ChaCha8Rng {
    let s = splitmix64(splitmix64(splitmix64(seed) ^ k as u64) ^ worker as u64);
    ChaCha8Rng::seed_from_u64(s)
}

fn better(cand: &Subset, best: &Option<(Subset, usize)>) -> bool {
    match best {
        None => true,
        Some((b, _)) => (cand.len(), cand) < (b.len(), b),
    }
}

struct Search {
    best: Option<(Subset, usize)>,
    total_samples: BigUint,
    warnings: Vec<String>,
}

impl Search {
    fn new() -> Self {
        Self {
            best: None,
            total_samples: BigUint::zero(),
            warnings: Vec::new(),
        }
    }

    fn offer(&mut self, z: Subset, k: usize) {
        if better(&z, &self.best) {
            self.best = Some((z, k));
        }
    }

    fn finish<I: MonotoneInstance + ?Sized>(
        self,
        inst: &I,
        alpha: f64,
        c: Option<f64>,
        mode: Mode,
        seed: u64,
        started: Instant,
    ) -> RunReport {
        let n = inst.universe_size();
        let (solution, k_found) = match self.best {
            Some((s, k)) => (s, Some(k)),
            None => (Subset::full(n), None),
        };
        RunReport {
            instance: inst.label(),
            n,
            alpha,
            c,
            mode,
            size: solution.len(),
            solution,
            k_found,
            total_samples: self.total_samples,
            elapsed: started.elapsed(),
            seed,
            warnings: self.warnings,
        }
    }
}

/// Runs `reps` attempts for one worker; stops at the worker's first success.
fn worker_pass<I, O>(inst: &I, ext: &O, k: usize, t: usize, reps: u64, rng: &mut ChaCha8Rng) -> (Option<Subset>, u64)
where
    I: MonotoneInstance + ?Sized,
    O: ExtensionOracle + ?Sized,
{
    let n = inst.universe_size();
    for i in 0..reps {
        let x = Subset::random(n, t, rng);
        if let Some(z) = attempt(inst, ext, &x, k, t, rng) {
            return (Some(z), i + 1);
        }
    }
    (None, reps)
}

/// The randomized search. Returns the smallest member found over all `k`
/// (or the full universe).
pub fn amls_run<I, O>(inst: &I, ext: &O, cfg: &RunConfig) -> Result<RunReport>
where
    I: MonotoneInstance + ?Sized,
    O: ExtensionOracle + ?Sized,
{
    cfg.validate()?;
    if cfg.deterministic {
        return Err(Error::Config(
            "amls_run is the randomized mode; use amls_deterministic".into(),
        ));
    }
    check_oracle(ext)?;
    let started = Instant::now();
    let n = inst.universe_size();
    let (alpha, c) = (ext.alpha(), ext.c());
    let mut search = Search::new();

    for k in 0..=floor_div(n as u64, alpha) as usize {
        let cost = select_t(n as u64, k as u64, alpha, c)?;
        let t = cost.t as usize;
        let wanted = cost.p.boosted_repetitions(cfg.boost);
        let mut reps = wanted.to_u64().unwrap_or(u64::MAX);
        if let Some(cap) = cfg.max_repetitions {
            if reps > cap {
                search.warnings.push(format!(
                    "k={k}: {wanted} repetitions capped at {cap}; success guarantee no longer holds"
                ));
                reps = cap;
            }
        } else if wanted.bits() > 64 {
            search
                .warnings
                .push(format!("k={k}: {wanted} repetitions truncated to {reps}"));
        }

        let workers = cfg.parallel_workers.min(reps.max(1) as usize).max(1);
        let share = |w: usize| reps / workers as u64 + u64::from((w as u64) < reps % workers as u64);
        let results: Vec<(Option<Subset>, u64)> = if workers == 1 {
            vec![worker_pass(inst, ext, k, t, reps, &mut worker_rng(cfg.seed, k, 0))]
        } else {
            std::thread::scope(|scope| {
                let handles: Vec<_> = (0..workers)
                    .map(|w| {
                        let mut rng = worker_rng(cfg.seed, k, w);
                        let reps = share(w);
                        scope.spawn(move || worker_pass(inst, ext, k, t, reps, &mut rng))
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("worker panicked"))
                    .collect()
            })
        };

        let mut found_here = false;
        for (z, used) in results {
            search.total_samples += used;
            if let Some(z) = z {
                found_here = true;
                search.offer(z, k);
            }
        }
        if found_here && cfg.stop_at_first {
            break;
        }
    }
    Ok(search.finish(inst, alpha, Some(c), Mode::Randomized, cfg.seed, started))
}

/// Derandomized search: for each `k`, every member of a weak
/// `(n, k, t, ⌈t/α⌉)`-set-intersection family is extended once. With a
/// deterministic oracle the result is always within `α · OPT`.
pub fn amls_deterministic<I, O>(inst: &I, ext: &O, cfg: &RunConfig) -> Result<RunReport>
where
    I: MonotoneInstance + ?Sized,
    O: ExtensionOracle + ?Sized,
{
    cfg.validate()?;
    check_oracle(ext)?;
    if ext.success_prob() != 1.0 {
        return Err(Error::Config(
            "deterministic mode needs an oracle with success probability 1".into(),
        ));
    }
    let n = inst.universe_size();
    if n > cfg.family_limit {
        return Err(Error::LimitExceeded {
            n,
            limit: cfg.family_limit,
        });
    }
    let started = Instant::now();
    let (alpha, c) = (ext.alpha(), ext.c());
    let mut search = Search::new();
    let mut rng = worker_rng(cfg.seed, 0, 0);
    let mut cache: HashMap<(usize, usize, usize), Vec<Subset>> = HashMap::new();

    for k in 0..=floor_div(n as u64, alpha) as usize {
        let choice = select_t_derandomized(n as u64, k as u64, alpha, c)?;
        let (t, r) = (choice.t as usize, choice.r as usize);
        let members = match cache.get(&(k, t, r)) {
            Some(m) => m,
            None => {
                let m = if t == 0 {
                    vec![Subset::empty(n)]
                } else {
                    build_intersection_family(n, k, t, r, false, cfg.family_limit)?
                        .subsets()
                        .collect()
                };
                cache.entry((k, t, r)).or_insert(m)
            }
        };
        let mut found_here = false;
        for x in members {
            search.total_samples += 1u32;
            if let Some(z) = attempt(inst, ext, x, k, t, &mut rng) {
                search.offer(z, k);
                found_here = true;
                break;
            }
        }
        if found_here && cfg.stop_at_first {
            break;
        }
    }
    Ok(search.finish(inst, alpha, Some(c), Mode::Deterministic, cfg.seed, started))
}

/// α-approximate exhaustive search through `(n, ⌊αk⌋, k)`-coverings.
///
/// Every member of the covering for `k` has size `⌊αk⌋`, which does not
/// decrease with `k`, so the scan stops at the first `k` that yields a member.
pub fn brute_force_approx<I>(inst: &I, alpha: f64, limit: usize) -> Result<RunReport>
where
    I: MonotoneInstance + ?Sized,
{
    if !(alpha.is_finite() && alpha >= 1.0) {
        return Err(Error::Domain(format!("alpha = {alpha} must be >= 1")));
    }
    let n = inst.universe_size();
    if n > limit {
        return Err(Error::LimitExceeded { n, limit });
    }
    let started = Instant::now();
    let mut search = Search::new();
    for k in 0..=floor_div(n as u64, alpha) as usize {
        let t = (floor_mul(alpha, k as u64) as usize).min(n);
        let covering = build_covering(n, t, k, limit)?;
        for x in covering.subsets() {
            search.total_samples += 1u32;
            if inst.contains(&x) {
                search.offer(x, k);
            }
        }
        if search.best.is_some() {
            break;
        }
    }
    Ok(search.finish(inst, alpha, None, Mode::Brute, 0, started))
}

/// Smallest member by exhaustive enumeration (lexicographically first among
/// the minimum ones). Exponential in `n`.
pub fn exhaustive_minimum<I: MonotoneInstance + ?Sized>(inst: &I) -> Subset {
    let n = inst.universe_size();
    for size in 0..=n {
        for c in Combinations::new(n, size) {
            let s = Subset::from_elements(n, c);
            if inst.contains(&s) {
                return s;
            }
        }
    }
    Subset::full(n)
}

/// Fraction of `trials` independently seeded runs whose solution size is at
/// most `⌊α · OPT⌋`. `opt` defaults to an exhaustive computation.
pub fn success_rate_experiment<I, O>(
    inst: &I,
    ext: &O,
    trials: usize,
    cfg: &RunConfig,
    opt: Option<usize>,
) -> Result<f64>
where
    I: MonotoneInstance + ?Sized,
    O: ExtensionOracle + ?Sized,
{
    if trials == 0 {
        return Ok(1.0);
    }
    let opt = opt.unwrap_or_else(|| exhaustive_minimum(inst).len());
    let allowed = floor_mul(ext.alpha(), opt as u64) as usize;
    let mut ok = 0usize;
    for i in 0..trials {
        let mut run_cfg = cfg.clone();
        run_cfg.seed = splitmix64(cfg.seed ^ splitmix64(i as u64));
        let report = if cfg.deterministic {
            amls_deterministic(inst, ext, &run_cfg)?
        } else {
            amls_run(inst, ext, &run_cfg)?
        };
        if report.size <= allowed {
            ok += 1;
        }
    }
    Ok(ok as f64 / trials as f64)
}
