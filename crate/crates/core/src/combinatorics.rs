//! Exact combinatorial quantities behind the sampling step.
//!
//! Probabilities are exact rationals over arbitrary-precision integers so
//! that tiny hypergeometric tails never underflow. Logarithms appear only
//! where costs are compared.

use std::fmt;
use std::sync::RwLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{domain, Result};
use crate::exponents::{self, BoundQuery};

/// Non-negative exact rational.
pub type Rational = Ratio<BigUint>;

/// Slack used when turning `α·k` and `t/α` into integers, so that decimal
/// inputs such as `1.1 * 30` land on the intended side of the boundary.
pub const INTEGRALITY_EPS: f64 = 1e-9;

/// `⌊α k⌋`.
pub fn floor_mul(alpha: f64, k: u64) -> u64 {
    (alpha * k as f64 + INTEGRALITY_EPS).floor() as u64
}

/// `⌈t / α⌉`.
pub fn ceil_div(t: u64, alpha: f64) -> u64 {
    let v = t as f64 / alpha - INTEGRALITY_EPS;
    if v <= 0.0 {
        0
    } else {
        v.ceil() as u64
    }
}

/// `⌊n / α⌋`.
pub fn floor_div(n: u64, alpha: f64) -> u64 {
    (n as f64 / alpha + INTEGRALITY_EPS).floor() as u64
}

static FACTORIALS: RwLock<Vec<BigUint>> = RwLock::new(Vec::new());

/// `n!`, memoized. The table grows under the write lock, so readers never
/// observe a partially extended table.
pub fn factorial(n: u64) -> BigUint {
    let n = n as usize;
    {
        let table = FACTORIALS.read().expect("factorial cache poisoned");
        if let Some(v) = table.get(n) {
            return v.clone();
        }
    }
    let mut table = FACTORIALS.write().expect("factorial cache poisoned");
    if table.is_empty() {
        table.push(BigUint::one());
    }
    while table.len() <= n {
        let i = table.len();
        let next = &table[i - 1] * BigUint::from(i);
        table.push(next);
    }
    table[n].clone()
}

/// `C(n, k)`; zero when `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = k as u64;
    factorial(n) / (factorial(k) * factorial(n - k))
}

fn binom(n: u64, k: u64) -> BigUint {
    binomial(n, k as i64)
}

/// Natural logarithm of a big integer without overflowing `f64`.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().expect("fits in f64").ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn ln_rational(x: &Rational) -> f64 {
    ln_big(x.numer()) - ln_big(x.denom())
}

/// An exact probability in `[0, 1]`, kept in lowest terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactProb(Rational);

impl ExactProb {
    pub fn new(value: Rational) -> Result<Self> {
        if value > Rational::one() {
            return domain(format!("probability {value} exceeds 1"));
        }
        Ok(Self(value))
    }

    pub fn zero() -> Self {
        Self(Rational::zero())
    }

    pub fn one() -> Self {
        Self(Rational::one())
    }

    pub fn numerator(&self) -> &BigUint {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigUint {
        self.0.denom()
    }

    pub fn as_rational(&self) -> &Rational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.ln().exp()
    }

    /// `ln p`, `-inf` for zero.
    pub fn ln(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            ln_rational(&self.0)
        }
    }

    /// `⌈1/p⌉`; panics on zero.
    pub fn reciprocal_ceil(&self) -> BigUint {
        assert!(!self.is_zero(), "reciprocal of a zero probability");
        Integer::div_ceil(self.denominator(), self.numerator())
    }

    /// `⌈boost / p⌉` with `boost` taken as an exact binary fraction.
    pub fn boosted_repetitions(&self, boost: f64) -> BigUint {
        assert!(!self.is_zero(), "reciprocal of a zero probability");
        let b = Ratio::<num_bigint::BigInt>::from_float(boost).expect("finite boost");
        let (bn, bd) = (
            b.numer().to_biguint().expect("non-negative boost"),
            b.denom().to_biguint().expect("positive"),
        );
        let num = bn * self.denominator();
        let den = bd * self.numerator();
        Integer::div_ceil(&num, &den)
    }
}

impl fmt::Debug for ExactProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for ExactProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn check_hyper(n: u64, k: u64, t: u64) -> Result<()> {
    if k > n || t > n {
        return domain(format!(
            "hypergeometric parameters need k, t <= n (n={n}, k={k}, t={t})"
        ));
    }
    Ok(())
}

/// `C(k, y) C(n-k, t-y)`, the number of `t`-subsets of `[n]` meeting `[k]` in
/// exactly `y` elements.
fn hyper_count(n: u64, k: u64, t: u64, y: u64) -> BigUint {
    if y > t {
        return BigUint::zero();
    }
    binom(k, y) * binom(n - k, t - y)
}

/// Probability that a uniform `t`-subset of `[n]` meets `[k]` in exactly `y` elements.
pub fn hyper_point(n: u64, k: u64, t: u64, y: u64) -> Result<ExactProb> {
    check_hyper(n, k, t)?;
    ExactProb::new(Rational::new(hyper_count(n, k, t, y), binom(n, t)))
}

/// Probability that a uniform `t`-subset of `[n]` meets `[k]` in at least
/// `x` elements.
pub fn hyper_tail(n: u64, k: u64, t: u64, x: u64) -> Result<ExactProb> {
    check_hyper(n, k, t)?;
    let top = k.min(t);
    if x > top {
        return Ok(ExactProb::zero());
    }
    let lowest = t.saturating_sub(n - k);
    if x <= lowest {
        return Ok(ExactProb::one());
    }
    let mut sum = BigUint::zero();
    for y in x..=top {
        sum += hyper_count(n, k, t, y);
    }
    ExactProb::new(Rational::new(sum, binom(n, t)))
}

/// Checks that the tail is symmetric in the roles of `k` and `t`, exactly.
pub fn hyper_symmetry_check(n: u64, k: u64, t: u64, x: u64) -> bool {
    if k > n || t > n || x > k.min(t) {
        return false;
    }
    match (hyper_tail(n, k, t, x), hyper_tail(n, t, k, x)) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    }
}

/// Cost of one `k`-iteration when sampling `t` elements: one extension call of
/// cost `c^(k - t/α)` repeated `1/p` times.
#[derive(Debug, Clone, PartialEq)]
pub struct IterCost {
    pub t: u64,
    /// `(k - t/α) ln c - ln p`.
    pub log_cost: f64,
    pub p: ExactProb,
    /// `⌈1/p⌉`.
    pub repetitions: BigUint,
}

fn check_params(n: u64, k: u64, alpha: f64, c: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha >= 1.0) {
        return domain(format!("alpha = {alpha} must be >= 1"));
    }
    if !(c.is_finite() && c >= 1.0) {
        return domain(format!("c = {c} must be >= 1"));
    }
    if k > floor_div(n, alpha) {
        return domain(format!("k = {k} exceeds n/alpha = {}", n as f64 / alpha));
    }
    Ok(())
}

pub fn iter_cost(n: u64, k: u64, t: u64, alpha: f64, c: f64) -> Result<IterCost> {
    check_params(n, k, alpha, c)?;
    let t_max = floor_mul(alpha, k).min(n);
    if t > t_max {
        return domain(format!("t = {t} exceeds min(alpha*k, n) = {t_max}"));
    }
    Ok(iter_cost_unchecked(n, k, t, alpha, c))
}

fn iter_cost_unchecked(n: u64, k: u64, t: u64, alpha: f64, c: f64) -> IterCost {
    let p = hyper_tail(n, k, t, ceil_div(t, alpha)).expect("validated parameters");
    debug_assert!(!p.is_zero());
    let log_cost = (k as f64 - t as f64 / alpha) * c.ln() - p.ln();
    let repetitions = p.reciprocal_ceil();
    IterCost {
        t,
        log_cost,
        p,
        repetitions,
    }
}

/// Log-costs closer than this are treated as ties.
const TIE_EPS: f64 = 1e-12;

/// The sample size `t ∈ [0, ⌊αk⌋]` minimizing the iteration cost. Ties go to
/// the smaller `t`.
pub fn select_t(n: u64, k: u64, alpha: f64, c: f64) -> Result<IterCost> {
    check_params(n, k, alpha, c)?;
    let t_max = floor_mul(alpha, k).min(n);
    let mut best = iter_cost_unchecked(n, k, 0, alpha, c);
    for t in 1..=t_max {
        let cand = iter_cost_unchecked(n, k, t, alpha, c);
        if cand.log_cost < best.log_cost - TIE_EPS {
            best = cand;
        }
    }
    Ok(best)
}

/// `κ(n, p, q, r) = C(n, q) / (C(p, r) C(n-p, q-r))`.
pub fn kappa(n: u64, p: u64, q: u64, r: u64) -> Result<Rational> {
    if !(r >= 1 && p >= r && n >= p && q >= r && n - p + r >= q) {
        return domain(format!(
            "kappa needs n >= p >= r >= 1 and n-p+r >= q >= r (n={n}, p={p}, q={q}, r={r})"
        ));
    }
    Ok(kappa_unchecked(n, p, q, r))
}

fn kappa_unchecked(n: u64, p: u64, q: u64, r: u64) -> Rational {
    Rational::new(binom(n, q), binom(p, r) * binom(n - p, q - r))
}

/// Sample size chosen by the derandomized search for a given `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyCost {
    pub t: u64,
    /// `⌈t/α⌉`.
    pub r: u64,
    /// `ln κ(n, k, t, r) + (k - t/α) ln c`.
    pub log_cost: f64,
    pub kappa: Rational,
}

/// The `t` minimizing `κ(n, k, t, ⌈t/α⌉) c^(k - t/α)`. For `t = 0` the family
/// is `{∅}` and `κ` is taken as 1.
pub fn select_t_derandomized(n: u64, k: u64, alpha: f64, c: f64) -> Result<FamilyCost> {
    check_params(n, k, alpha, c)?;
    let t_max = floor_mul(alpha, k).min(n);
    let cost = |t: u64| {
        let r = ceil_div(t, alpha);
        let kappa = if t == 0 {
            Rational::one()
        } else {
            kappa_unchecked(n, k, t, r)
        };
        let log_cost = ln_rational(&kappa) + (k as f64 - t as f64 / alpha) * c.ln();
        FamilyCost { t, r, log_cost, kappa }
    };
    let mut best = cost(0);
    for t in 1..=t_max {
        let cand = cost(t);
        if cand.log_cost < best.log_cost - TIE_EPS {
            best = cand;
        }
    }
    Ok(best)
}

/// Continuous minimizer `(k - n δ*) / (1/α - δ*)` of the analytic cost
/// exponent. May be negative.
pub fn t_star(n: f64, k: f64, alpha: f64, c: f64) -> Result<f64> {
    if c.is_nan() || c <= 1.0 {
        return domain(format!("t_star needs c > 1, got {c}"));
    }
    if !(n >= 0.0 && k >= 0.0 && k <= n / alpha + INTEGRALITY_EPS) {
        return domain(format!("t_star needs 0 <= k <= n/alpha (n={n}, k={k})"));
    }
    let delta = exponents::delta_star(&BoundQuery::new(alpha, c))?;
    Ok((k - n * delta) / (1.0 / alpha - delta))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GForm {
    /// `(k - t/α) ln c - t H(1/α) - (n-t) H(ρ)`.
    Entropy,
    /// `(k - t/α) ln c + t D(1/α || ρ) + k ln ρ + (n-k) ln(1-ρ)`.
    Kl,
}

/// `x ln y` with `0 ln 0 = 0`; `None` when the term is infinite.
fn xlny(x: f64, y: f64) -> Option<f64> {
    if x == 0.0 {
        Some(0.0)
    } else if y <= 0.0 {
        None
    } else {
        Some(x * y.ln())
    }
}

/// The analytic exponent of `C(n,k) / iter(t)` in either of its two
/// algebraically equal forms, where `ρ = (k - t/α)/(n - t)`.
pub fn g_value(n: f64, k: f64, t: f64, alpha: f64, c: f64, form: GForm) -> Result<f64> {
    if !(alpha >= 1.0 && c >= 1.0) {
        return domain(format!("g needs alpha >= 1 and c >= 1 (alpha={alpha}, c={c})"));
    }
    if !(t >= 0.0 && t < n) {
        return domain(format!("g needs 0 <= t < n (t={t}, n={n})"));
    }
    let remaining = k - t / alpha;
    let rho = remaining / (n - t);
    if !(-1e-15..=1.0 + 1e-15).contains(&rho) {
        return domain(format!("g needs 0 <= (k - t/alpha)/(n - t) <= 1, got {rho}"));
    }
    let rho = rho.clamp(0.0, 1.0);
    let ext = remaining * c.ln();
    match form {
        GForm::Entropy => Ok(ext - t * exponents::entropy(1.0 / alpha)? - (n - t) * exponents::entropy(rho)?),
        GForm::Kl if t == 0.0 || (rho > 0.0 && rho < 1.0) => {
            let div = if t == 0.0 {
                0.0
            } else {
                t * exponents::kl_divergence(1.0 / alpha, rho)?
            };
            let logs = xlny(k, rho).zip(xlny(n - k, 1.0 - rho));
            match logs {
                Some((a, b)) => Ok(ext + div + a + b),
                None => domain("g (divergence form) is undefined at this boundary"),
            }
        }
        GForm::Kl => {
            // ρ ∈ {0, 1}: the infinite ln ρ (or ln(1-ρ)) terms of t·D and of
            // k ln ρ cancel; collect their coefficients first.
            let a = 1.0 / alpha;
            let self_info = xlny(a, a).unwrap_or(0.0) + xlny(1.0 - a, 1.0 - a).unwrap_or(0.0);
            let lo = xlny(remaining.max(0.0), rho);
            let hi = xlny((n - t - remaining).max(0.0), 1.0 - rho);
            match lo.zip(hi) {
                Some((l, h)) => Ok(ext + t * self_info + l + h),
                None => domain("g (divergence form) is undefined at this boundary"),
            }
        }
    }
}

/// `(1/n) ln max_{0 <= k < n/α} C(n,k) / C(⌊αk⌋, k)`, maximized exactly.
pub fn brute_exponent_empirical(n: u64, alpha: f64) -> Result<f64> {
    if n < 2 {
        return domain(format!("n = {n} must be at least 2"));
    }
    if !(alpha.is_finite() && alpha >= 1.0) {
        return domain(format!("alpha = {alpha} must be >= 1"));
    }
    let mut best = Rational::one();
    let mut k = 0u64;
    while (k as f64) < n as f64 / alpha - INTEGRALITY_EPS {
        let ratio = Rational::new(binom(n, k), binom(floor_mul(alpha, k), k));
        if ratio > best {
            best = ratio;
        }
        k += 1;
    }
    Ok(ln_rational(&best) / n as f64)
}
