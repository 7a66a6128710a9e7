use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use amls::engine::{
    amls_deterministic, amls_run, brute_force_approx, ExtensionOracle, MonotoneInstance, RunConfig, RunReport,
};
use amls::exponents::{self, BoundReport, DEFAULT_TOL};
use amls::families::{self, SetFamily, DEFAULT_FAMILY_LIMIT};
use amls::problems::{self, Graph, Hypergraph3};
use amls::suites::{self, Suite};
use amls::Subset;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::RngCore;

#[derive(Parser)]
#[command(name = "amls", version, about = "Approximate monotone local search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Running-time exponent bases for (alpha, c) pairs.
    Bounds(BoundsArgs),
    /// Approximate a minimum solution with the sampling search.
    Solve(SolveArgs),
    /// Deterministic alpha-approximate brute force through coverings.
    Brute(BruteArgs),
    /// Build and verify a set-intersection family or covering.
    Families(FamiliesArgs),
    /// Run the built-in invariant suites.
    Verify(VerifyArgs),
    /// Empirical success rate of the randomized search.
    Bench(BenchArgs),
}

#[derive(Args)]
struct BoundsArgs {
    /// Approximation ratios, comma separated.
    #[arg(long, value_delimiter = ',')]
    alpha: Vec<f64>,
    /// Extension bases, comma separated.
    #[arg(long, value_delimiter = ',')]
    c: Vec<f64>,
    /// Use a stored (alpha, c) selection instead of --alpha/--c.
    #[arg(long, value_enum, conflicts_with_all = ["alpha", "c"])]
    preset: Option<BoundsPreset>,
    /// Write the table as CSV to this file instead of stdout.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Absolute tolerance of the root search.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundsPreset {
    /// Vertex Cover, ratio 1.1 with a 1.1652^k extension.
    VcPaper,
    /// Directed feedback vertex set, ratio 2 with a 1024^k extension.
    DfvsPaper,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Problem {
    Vc,
    Hs3,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleKind {
    /// Exact branching (vc: c = 2, hs3: c = 3).
    Exact,
    /// Greedy maximal matching, vc only (alpha = 2, c = 1).
    Matching,
}

#[derive(Args)]
struct InstanceArgs {
    #[arg(long, value_enum)]
    problem: Problem,
    /// Instance file (DIMACS edge format for vc, `p hs3` format for hs3).
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, value_enum, default_value = "exact")]
    oracle: OracleKind,
    /// Target ratio; must be at least the oracle's own ratio.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Repetition multiplier, at least 1.
    #[arg(long, default_value_t = 3.0)]
    boost: f64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Cap on samples per k.
    #[arg(long)]
    max_repetitions: Option<u64>,
    /// Use set-intersection families instead of random samples.
    #[arg(long)]
    deterministic: bool,
    /// Stop at the first k that yields a solution.
    #[arg(long)]
    stop_at_first: bool,
    /// Largest universe for which families are built.
    #[arg(long, default_value_t = DEFAULT_FAMILY_LIMIT)]
    limit: usize,
    /// Write the JSON report to this file.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct BruteArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Largest universe for which coverings are built.
    #[arg(long, default_value_t = DEFAULT_FAMILY_LIMIT)]
    limit: usize,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyKindArg {
    Intersection,
    Covering,
}

#[derive(Args)]
struct FamiliesArgs {
    #[arg(long, value_enum)]
    kind: FamilyKindArg,
    #[arg(long)]
    n: usize,
    /// Target size (intersection).
    #[arg(long)]
    p: Option<usize>,
    /// Member size (intersection).
    #[arg(long)]
    q: Option<usize>,
    /// Required intersection (intersection).
    #[arg(long)]
    r: Option<usize>,
    /// Require intersections of exactly r.
    #[arg(long)]
    strong: bool,
    /// Member size (covering).
    #[arg(long)]
    t: Option<usize>,
    /// Covered subset size (covering).
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_FAMILY_LIMIT)]
    limit: usize,
    /// Write the family to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    suite: SuiteArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Exponents,
    Combinatorics,
    Engine,
    Families,
    Problems,
    All,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum, default_value = "small-vc")]
    preset: BenchPreset,
    #[arg(long, default_value_t = 300)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3.0)]
    boost: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchPreset {
    /// One G(12, 0.3) graph per trial, exact vertex cover oracle.
    SmallVc,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<amls::Error> for Failure {
    fn from(e: amls::Error) -> Self {
        match e {
            amls::Error::Config(m) => Failure::Usage(m),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> Failure + '_ {
    move |e| Failure::Runtime(format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Bounds(a) => bounds(a),
        Command::Solve(a) => solve(a),
        Command::Brute(a) => brute(a),
        Command::Families(a) => families_cmd(a),
        Command::Verify(a) => verify(a),
        Command::Bench(a) => bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

fn bounds(a: BoundsArgs) -> Result<(), Failure> {
    let (alphas, cs) = match a.preset {
        Some(BoundsPreset::VcPaper) => (vec![1.1], vec![1.1652]),
        Some(BoundsPreset::DfvsPaper) => (vec![2.0], vec![1024.0]),
        None => (a.alpha, a.c),
    };
    if alphas.is_empty() || cs.is_empty() {
        return Err(Failure::Usage("bounds needs --alpha and --c, or --preset".into()));
    }
    let rows = exponents::table(&alphas, &cs, a.tol).map_err(|e| Failure::Usage(e.to_string()))?;
    match a.csv {
        Some(path) => {
            let file = fs::File::create(&path).map_err(io_err(&path))?;
            exponents::write_csv(&rows, io::BufWriter::new(file)).map_err(io_err(&path))?;
            eprintln!("wrote {} rows to {}", rows.len(), path.display());
        }
        None => print_bounds(&rows),
    }
    Ok(())
}

fn print_bounds(rows: &[BoundReport]) {
    let fmt = |x: f64| exponents::format_sig(x, 6);
    println!(
        "{:>8} {:>10} {:>10} {:>10} {:>10} {:>10}  dominant",
        "alpha", "c", "amls", "brute", "naive", "emls"
    );
    for r in rows {
        println!(
            "{:>8} {:>10} {:>10} {:>10} {:>10} {:>10}  {}",
            fmt(r.alpha),
            fmt(r.c),
            fmt(r.gamma),
            fmt(r.brute),
            fmt(r.naive),
            fmt(r.emls),
            r.dominant_benchmark
        );
    }
}

enum Loaded {
    Vc(Graph),
    Hs3(Hypergraph3),
}

fn load(args: &InstanceArgs) -> Result<(Loaded, String), Failure> {
    let text = fs::read_to_string(&args.input).map_err(io_err(&args.input))?;
    let name = args.input.file_name().map_or_else(
        || args.input.display().to_string(),
        |s| s.to_string_lossy().into_owned(),
    );
    let ctx = |e: amls::Error| Failure::Runtime(format!("{}: {e}", args.input.display()));
    let loaded = match args.problem {
        Problem::Vc => Loaded::Vc(problems::parse_graph(&text).map_err(ctx)?),
        Problem::Hs3 => Loaded::Hs3(problems::parse_hypergraph(&text).map_err(ctx)?),
    };
    Ok((loaded, name))
}

/// An oracle re-declared with a larger ratio. Any α-approximate extension is
/// also α'-approximate for α' >= α.
struct Relaxed<'a> {
    inner: &'a dyn ExtensionOracle,
    alpha: f64,
}

impl ExtensionOracle for Relaxed<'_> {
    fn alpha(&self) -> f64 {
        self.alpha
    }

    fn c(&self) -> f64 {
        self.inner.c()
    }

    fn success_prob(&self) -> f64 {
        self.inner.success_prob()
    }

    fn extend(&self, x: &Subset, budget: usize, rng: &mut dyn RngCore) -> Option<Subset> {
        self.inner.extend(x, budget, rng)
    }
}

fn solve(a: SolveArgs) -> Result<(), Failure> {
    let (loaded, name) = load(&a.instance)?;
    let cfg = RunConfig {
        seed: a.seed,
        boost: a.boost,
        max_repetitions: a.max_repetitions,
        parallel_workers: a.workers,
        deterministic: a.deterministic,
        stop_at_first: a.stop_at_first,
        family_limit: a.limit,
    };
    cfg.validate()?;
    let report = match (&loaded, a.oracle) {
        (Loaded::Vc(g), OracleKind::Exact) => {
            let sys = problems::vc_system(g).with_label(name);
            run_with(&sys, &problems::VcExactOracle::new(g), a.alpha, &cfg)?
        }
        (Loaded::Vc(g), OracleKind::Matching) => {
            let sys = problems::vc_system(g).with_label(name);
            run_with(&sys, &problems::VcMatchingOracle::new(g), a.alpha, &cfg)?
        }
        (Loaded::Hs3(h), OracleKind::Exact) => {
            let sys = problems::hs3_system(h).with_label(name);
            run_with(&sys, &problems::Hs3ExactOracle::new(h), a.alpha, &cfg)?
        }
        (Loaded::Hs3(_), OracleKind::Matching) => {
            return Err(Failure::Usage(
                "the matching oracle only applies to --problem vc".into(),
            ));
        }
    };
    emit(&report, a.json.as_deref())
}

fn run_with(
    inst: &dyn MonotoneInstance,
    oracle: &dyn ExtensionOracle,
    alpha: Option<f64>,
    cfg: &RunConfig,
) -> Result<RunReport, Failure> {
    let own = oracle.alpha();
    let alpha = alpha.unwrap_or(own);
    if !(alpha.is_finite() && alpha >= own) {
        return Err(Failure::Usage(format!(
            "--alpha {alpha} is below the oracle's ratio {own}"
        )));
    }
    let relaxed = Relaxed { inner: oracle, alpha };
    let report = if cfg.deterministic {
        amls_deterministic(inst, &relaxed, cfg)?
    } else {
        amls_run(inst, &relaxed, cfg)?
    };
    Ok(report)
}

fn brute(a: BruteArgs) -> Result<(), Failure> {
    let (loaded, name) = load(&a.instance)?;
    let report = match &loaded {
        Loaded::Vc(g) => brute_force_approx(&problems::vc_system(g).with_label(name), a.alpha, a.limit)?,
        Loaded::Hs3(h) => brute_force_approx(&problems::hs3_system(h).with_label(name), a.alpha, a.limit)?,
    };
    emit(&report, a.json.as_deref())
}

fn emit(report: &RunReport, json: Option<&Path>) -> Result<(), Failure> {
    let elements: Vec<String> = report.solution.iter().map(|e| (e + 1).to_string()).collect();
    println!("size {}", report.size);
    println!("solution {}", elements.join(" "));
    match report.k_found {
        Some(k) => println!("k_found {k}"),
        None => println!("k_found none"),
    }
    println!("samples {}", report.total_samples);
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    eprintln!("elapsed {:.3}s", report.elapsed.as_secs_f64());
    if let Some(path) = json {
        fs::write(path, report.to_json() + "\n").map_err(io_err(path))?;
    }
    Ok(())
}

fn families_cmd(a: FamiliesArgs) -> Result<(), Failure> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| Failure::Usage(format!("--kind needs --{flag}")));
    let mut family: SetFamily = match a.kind {
        FamilyKindArg::Intersection => families::build_intersection_family(
            a.n,
            need(a.p, "p")?,
            need(a.q, "q")?,
            need(a.r, "r")?,
            a.strong,
            a.limit,
        )?,
        FamilyKindArg::Covering => families::build_covering(a.n, need(a.t, "t")?, need(a.k, "k")?, a.limit)?,
    };
    let ok = families::verify_family(&mut family);
    let text = family.to_text();
    match &a.output {
        Some(path) => fs::write(path, &text).map_err(io_err(path))?,
        None => print!("{text}"),
    }
    eprintln!("{} members, verified: {ok}", family.len());
    if ok {
        Ok(())
    } else {
        Err(Failure::Runtime("family failed verification".into()))
    }
}

fn verify(a: VerifyArgs) -> Result<(), Failure> {
    let suite = match a.suite {
        SuiteArg::Exponents => Suite::Exponents,
        SuiteArg::Combinatorics => Suite::Combinatorics,
        SuiteArg::Engine => Suite::Engine,
        SuiteArg::Families => Suite::Families,
        SuiteArg::Problems => Suite::Problems,
        SuiteArg::All => Suite::All,
    };
    let results = suites::run_suite(suite);
    let mut out = io::stdout().lock();
    for r in &results {
        let _ = writeln!(out, "{r}");
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    let _ = writeln!(out, "{} checks, {failed} failed", results.len());
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Runtime(format!("{failed} invariant checks failed")))
    }
}

fn bench(a: BenchArgs) -> Result<(), Failure> {
    let BenchPreset::SmallVc = a.preset;
    let r = suites::bench_small_vc(a.trials, a.seed, a.boost)?;
    println!("preset small-vc");
    println!("trials {}", r.trials);
    println!("successes {}", r.successes);
    println!("fraction {}", exponents::format_sig(r.fraction, 6));
    println!("boost {}", exponents::format_sig(r.boost, 6));
    println!("samples {}", r.total_samples);
    Ok(())
}
