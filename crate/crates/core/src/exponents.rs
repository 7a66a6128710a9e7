//! Running-time exponent bases.
//!
//! All functions here are pure. Logarithms are natural; every "bound" is the
//! base `b` of a running time `O*(b^n)`.

use std::fmt;
use std::io::{self, Write};

use serde::Serialize;

use crate::error::{domain, Result};

/// Default absolute tolerance on the root returned by [`amlsbound`].
pub const DEFAULT_TOL: f64 = 1e-12;

/// `x ln x` with `0 ln 0 = 0`.
fn xlnx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Binary entropy in nats.
pub fn entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return domain(format!("entropy: p = {p} outside [0, 1]"));
    }
    Ok(-xlnx(p) - xlnx(1.0 - p))
}

/// Kullback-Leibler divergence `D(a || b)` between Bernoulli distributions.
pub fn kl_divergence(a: f64, b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&a) {
        return domain(format!("kl_divergence: a = {a} outside [0, 1]"));
    }
    if !(b > 0.0 && b < 1.0) {
        return domain(format!("kl_divergence: b = {b} outside (0, 1)"));
    }
    let first = if a == 0.0 { 0.0 } else { a * (a / b).ln() };
    let second = if a == 1.0 {
        0.0
    } else {
        (1.0 - a) * ((1.0 - a) / (1.0 - b)).ln()
    };
    Ok(first + second)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundQuery {
    pub alpha: f64,
    pub c: f64,
    pub tol: f64,
}

impl BoundQuery {
    pub fn new(alpha: f64, c: f64) -> Self {
        Self {
            alpha,
            c,
            tol: DEFAULT_TOL,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        check_c(self.c)?;
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return domain(format!("tolerance {} must be positive", self.tol));
        }
        Ok(())
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha >= 1.0 {
        Ok(())
    } else {
        domain(format!("alpha = {alpha} must be a finite value >= 1"))
    }
}

fn check_c(c: f64) -> Result<()> {
    if c.is_finite() && c >= 1.0 {
        Ok(())
    } else {
        domain(format!("c = {c} must be a finite value >= 1"))
    }
}

/// The base `γ` of the approximate monotone local search running time.
///
/// `γ` is the unique value in `(1, 1 + (c-1)/α)` with
/// `D(1/α || (γ-1)/(c-1)) = ln(c)/α`. The left side is strictly decreasing in
/// `γ` on that interval, so plain bisection finds it. Only interior midpoints
/// are evaluated, which keeps the divergence finite. Returns exactly 1 for
/// `c = 1`.
pub fn amlsbound(q: &BoundQuery) -> Result<f64> {
    q.validate()?;
    let BoundQuery { alpha, c, tol } = *q;
    if c == 1.0 {
        return Ok(1.0);
    }
    let a = 1.0 / alpha;
    let target = c.ln() / alpha;
    let span = c - 1.0;
    // f(γ) = D(a || (γ-1)/(c-1)) - target, positive near 1, negative near hi.
    let f = |gamma: f64| -> f64 {
        let delta = (gamma - 1.0) / span;
        let b = delta.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON / 2.0);
        kl_divergence(a, b).map(|d| d - target).unwrap_or(f64::NAN)
    };
    let mut lo = 1.0;
    let mut hi = 1.0 + span / alpha;
    while hi - lo > tol {
        let mid = lo + (hi - lo) / 2.0;
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        if v > 0.0 {
            lo = mid;
        } else if v < 0.0 {
            hi = mid;
        } else {
            return Ok(mid);
        }
    }
    Ok(lo + (hi - lo) / 2.0)
}

/// Base of α-approximate exhaustive search, `1 + exp(-α H(1/α))`.
pub fn brute_bound(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(1.0 + (-alpha * entropy(1.0 / alpha)?).exp())
}

/// Base of running the parameterized algorithm for every `k <= n/α`: `c^(1/α)`.
pub fn naive_bound(alpha: f64, c: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_c(c)?;
    Ok(c.powf(1.0 / alpha))
}

/// Base of exact monotone local search, `2 - 1/c`.
pub fn emls_bound(c: f64) -> Result<f64> {
    check_c(c)?;
    Ok(2.0 - 1.0 / c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Benchmark {
    Brute,
    Naive,
    Emls,
}

impl fmt::Display for Benchmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Benchmark::Brute => "brute",
            Benchmark::Naive => "naive",
            Benchmark::Emls => "emls",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    pub alpha: f64,
    pub c: f64,
    pub gamma: f64,
    /// `(γ-1)/(c-1)`, or `1/α` when `c = 1`.
    pub delta_star: f64,
    pub brute: f64,
    pub naive: f64,
    pub emls: f64,
    /// The smallest benchmark; ties go to brute, then naive.
    pub dominant_benchmark: Benchmark,
}

pub fn delta_star(q: &BoundQuery) -> Result<f64> {
    let gamma = amlsbound(q)?;
    Ok(delta_from_gamma(q.alpha, q.c, gamma))
}

fn delta_from_gamma(alpha: f64, c: f64, gamma: f64) -> f64 {
    if c == 1.0 {
        1.0 / alpha
    } else {
        (gamma - 1.0) / (c - 1.0)
    }
}

pub fn bound_report(q: &BoundQuery) -> Result<BoundReport> {
    let gamma = amlsbound(q)?;
    let brute = brute_bound(q.alpha)?;
    let naive = naive_bound(q.alpha, q.c)?;
    let emls = emls_bound(q.c)?;
    let mut dominant = (Benchmark::Brute, brute);
    for cand in [(Benchmark::Naive, naive), (Benchmark::Emls, emls)] {
        if cand.1 < dominant.1 {
            dominant = cand;
        }
    }
    Ok(BoundReport {
        alpha: q.alpha,
        c: q.c,
        gamma,
        delta_star: delta_from_gamma(q.alpha, q.c, gamma),
        brute,
        naive,
        emls,
        dominant_benchmark: dominant.0,
    })
}

/// One row per `(alpha, c)` pair, alphas outermost.
pub fn table(alphas: &[f64], cs: &[f64], tol: f64) -> Result<Vec<BoundReport>> {
    let mut rows = Vec::with_capacity(alphas.len() * cs.len());
    for &alpha in alphas {
        for &c in cs {
            rows.push(bound_report(&BoundQuery::new(alpha, c).with_tol(tol))?);
        }
    }
    Ok(rows)
}

pub const CSV_HEADER: &str = "alpha,c,amls,brute,naive,emls,dominant";

/// Formats `x` with `sig` significant digits in the style of C's `%g`.
pub fn format_sig(x: f64, sig: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sig = sig.max(1);
    // Round first so that e.g. 9.9999999 is classified by its printed exponent.
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        let mantissa = trim_zeros(mantissa);
        format!("{mantissa}e{exp}")
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn csv_row(r: &BoundReport) -> String {
    format!(
        "{},{},{},{},{},{},{}",
        format_sig(r.alpha, 6),
        format_sig(r.c, 6),
        format_sig(r.gamma, 6),
        format_sig(r.brute, 6),
        format_sig(r.naive, 6),
        format_sig(r.emls, 6),
        r.dominant_benchmark
    )
}

pub fn write_csv<W: Write>(rows: &[BoundReport], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(out, "{}", csv_row(r))?;
    }
    Ok(())
}
