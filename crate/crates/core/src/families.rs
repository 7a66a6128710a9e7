//! Set-intersection families and coverings, built by greedy set cover.
//!
//! Members are stored as bitmasks over `{0, .., n-1}`. The constructions
//! enumerate every target and every candidate subset, so they are meant for
//! small universes (`n <= DEFAULT_FAMILY_LIMIT` by default).

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt::{self, Write as _};

use crate::combinatorics::{binomial, kappa, ln_big};
use crate::error::{domain, Error, Result};
use crate::subset::{combination_masks, Subset};

pub const DEFAULT_FAMILY_LIMIT: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    /// Every `p`-subset meets some member in at least `r` elements.
    IntersectionWeak,
    /// Every `p`-subset meets some member in exactly `r` elements.
    IntersectionStrong,
    /// Every `k`-subset is contained in some member.
    Covering,
}

impl FamilyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FamilyKind::IntersectionWeak => "intersection_weak",
            FamilyKind::IntersectionStrong => "intersection_strong",
            FamilyKind::Covering => "covering",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "intersection_weak" => Some(FamilyKind::IntersectionWeak),
            "intersection_strong" => Some(FamilyKind::IntersectionStrong),
            "covering" => Some(FamilyKind::Covering),
            _ => None,
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyParams {
    Intersection { p: usize, q: usize, r: usize },
    Covering { t: usize, k: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFamily {
    pub n: usize,
    pub member_size: usize,
    pub members: Vec<u64>,
    pub kind: FamilyKind,
    pub params: FamilyParams,
    /// Set by [`verify_family`] once the defining property has been checked
    /// against every target.
    pub verified: bool,
}

impl SetFamily {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn subsets(&self) -> impl Iterator<Item = Subset> + '_ {
        self.members.iter().map(|&m| Subset::from_mask(self.n, m))
    }

    /// Line-based text form: a header, then one member per line as sorted
    /// space-separated integers.
    pub fn to_text(&self) -> String {
        let params = match self.params {
            FamilyParams::Intersection { p, q, r } => format!("{p},{q},{r}"),
            FamilyParams::Covering { t, k } => format!("{t},{k}"),
        };
        let mut out = format!(
            "family {} n={} q={} params={}\n",
            self.kind, self.n, self.member_size, params
        );
        for &m in &self.members {
            let line: Vec<String> = (0..self.n)
                .filter(|&i| m >> i & 1 == 1)
                .map(|i| i.to_string())
                .collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<SetFamily> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
        let fields: Vec<&str> = header.split(' ').collect();
        if fields.len() != 5 || fields[0] != "family" {
            return Err(parse_err(1, "expected `family <kind> n=<n> q=<q> params=<...>`"));
        }
        let kind =
            FamilyKind::parse(fields[1]).ok_or_else(|| parse_err(1, format!("unknown family kind `{}`", fields[1])))?;
        let key = |field: &str, name: &str| -> Result<String> {
            field
                .strip_prefix(name)
                .and_then(|v| v.strip_prefix('='))
                .map(str::to_string)
                .ok_or_else(|| parse_err(1, format!("expected `{name}=...`, found `{field}`")))
        };
        let num = |s: &str| -> Result<usize> {
            s.parse::<usize>()
                .map_err(|_| parse_err(1, format!("invalid number `{s}`")))
        };
        let n = num(&key(fields[2], "n")?)?;
        let q = num(&key(fields[3], "q")?)?;
        if n > 64 {
            return Err(parse_err(1, "universe larger than 64 is not supported"));
        }
        let raw = key(fields[4], "params")?;
        let vals = raw.split(',').map(num).collect::<Result<Vec<_>>>()?;
        let params = match (kind, vals.as_slice()) {
            (FamilyKind::Covering, &[t, k]) => FamilyParams::Covering { t, k },
            (FamilyKind::IntersectionWeak | FamilyKind::IntersectionStrong, &[p, q, r]) => {
                FamilyParams::Intersection { p, q, r }
            }
            _ => return Err(parse_err(1, format!("params `{raw}` do not match kind {kind}"))),
        };
        let mut members = Vec::new();
        for (i, line) in lines.enumerate() {
            let lineno = i + 2;
            let mut mask = 0u64;
            for tok in line.split(' ').filter(|s| !s.is_empty()) {
                let e: usize = tok
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("invalid element `{tok}`")))?;
                if e >= n {
                    return Err(parse_err(lineno, format!("element {e} outside universe of size {n}")));
                }
                mask |= 1 << e;
            }
            if mask.count_ones() as usize != q {
                return Err(parse_err(lineno, format!("member does not have {q} distinct elements")));
            }
            members.push(mask);
        }
        Ok(SetFamily {
            n,
            member_size: q,
            members,
            kind,
            params,
            verified: false,
        })
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn check_limit(n: usize, limit: usize) -> Result<()> {
    if n > limit || n > 64 {
        Err(Error::LimitExceeded {
            n,
            limit: limit.min(64),
        })
    } else {
        Ok(())
    }
}

fn check_intersection_params(n: usize, p: usize, q: usize, r: usize) -> Result<()> {
    if r >= 1 && p >= r && n >= p && q >= r && n - p + r >= q {
        Ok(())
    } else {
        domain(format!(
            "set-intersection family needs n >= p >= r >= 1 and n-p+r >= q >= r (n={n}, p={p}, q={q}, r={r})"
        ))
    }
}

/// Greedy set cover: repeatedly pick the candidate covering the most
/// uncovered targets, ties by candidate index. Lazy evaluation: stale heap
/// keys only ever overestimate, so a popped key that is still exact is a
/// true maximum.
fn greedy_cover(targets: &[u64], candidates: &[u64], covers: impl Fn(u64, u64) -> bool) -> Vec<u64> {
    let coverage: Vec<Vec<u32>> = candidates
        .iter()
        .map(|&x| {
            targets
                .iter()
                .enumerate()
                .filter(|&(_, &t)| covers(t, x))
                .map(|(i, _)| i as u32)
                .collect()
        })
        .collect();
    let mut covered = vec![false; targets.len()];
    let mut remaining = targets.len();
    let mut heap: BinaryHeap<(usize, Reverse<usize>)> = coverage
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_empty())
        .map(|(i, c)| (c.len(), Reverse(i)))
        .collect();
    let mut chosen = Vec::new();
    while remaining > 0 {
        let Some((stale, Reverse(idx))) = heap.pop() else {
            break;
        };
        let fresh = coverage[idx].iter().filter(|&&t| !covered[t as usize]).count();
        if fresh == 0 {
            continue;
        }
        if fresh < stale {
            heap.push((fresh, Reverse(idx)));
            continue;
        }
        for &t in &coverage[idx] {
            if !covered[t as usize] {
                covered[t as usize] = true;
                remaining -= 1;
            }
        }
        chosen.push(candidates[idx]);
    }
    chosen
}

pub fn build_intersection_family(
    n: usize,
    p: usize,
    q: usize,
    r: usize,
    strong: bool,
    limit: usize,
) -> Result<SetFamily> {
    check_intersection_params(n, p, q, r)?;
    check_limit(n, limit)?;
    let targets = combination_masks(n, p);
    let candidates = combination_masks(n, q);
    let members = if strong {
        greedy_cover(&targets, &candidates, |t, x| (t & x).count_ones() as usize == r)
    } else {
        greedy_cover(&targets, &candidates, |t, x| (t & x).count_ones() as usize >= r)
    };
    Ok(SetFamily {
        n,
        member_size: q,
        members,
        kind: if strong {
            FamilyKind::IntersectionStrong
        } else {
            FamilyKind::IntersectionWeak
        },
        params: FamilyParams::Intersection { p, q, r },
        verified: false,
    })
}

/// An `(n, t, k)`-covering: `t`-subsets such that every `k`-subset lies in one of them.
pub fn build_covering(n: usize, t: usize, k: usize, limit: usize) -> Result<SetFamily> {
    if k > t || t > n {
        return domain(format!("covering needs k <= t <= n (n={n}, t={t}, k={k})"));
    }
    check_limit(n, limit)?;
    let targets = combination_masks(n, k);
    let candidates = combination_masks(n, t);
    let members = greedy_cover(&targets, &candidates, |s, x| s & !x == 0);
    Ok(SetFamily {
        n,
        member_size: t,
        members,
        kind: FamilyKind::Covering,
        params: FamilyParams::Covering { t, k },
        verified: false,
    })
}

/// Exhaustively checks the defining property against every target subset and
/// records the outcome in `f.verified`.
pub fn verify_family(f: &mut SetFamily) -> bool {
    f.verified = check_family(f);
    f.verified
}

fn check_family(f: &SetFamily) -> bool {
    if f.n > 64 {
        return false;
    }
    let in_universe = |m: u64| f.n == 64 || m >> f.n == 0;
    if !f
        .members
        .iter()
        .all(|&m| in_universe(m) && m.count_ones() as usize == f.member_size)
    {
        return false;
    }
    match (f.kind, f.params) {
        (FamilyKind::Covering, FamilyParams::Covering { t, k }) => {
            t == f.member_size
                && k <= t
                && t <= f.n
                && combination_masks(f.n, k)
                    .iter()
                    .all(|&s| f.members.iter().any(|&x| s & !x == 0))
        }
        (FamilyKind::IntersectionWeak, FamilyParams::Intersection { p, q, r })
        | (FamilyKind::IntersectionStrong, FamilyParams::Intersection { p, q, r }) => {
            if q != f.member_size || check_intersection_params(f.n, p, q, r).is_err() {
                return false;
            }
            let strong = f.kind == FamilyKind::IntersectionStrong;
            combination_masks(f.n, p).iter().all(|&t| {
                f.members.iter().any(|&x| {
                    let hit = (t & x).count_ones() as usize;
                    if strong {
                        hit == r
                    } else {
                        hit >= r
                    }
                })
            })
        }
        _ => false,
    }
}

/// Size guarantee of the greedy construction:
/// `κ(n,p,q,r) (p+1) ln(n) (1 + ln C(n,p))`.
pub fn family_size_bound(n: usize, p: usize, q: usize, r: usize) -> Result<f64> {
    if n < 2 {
        return domain(format!("family size bound needs n >= 2, got {n}"));
    }
    let k = kappa(n as u64, p as u64, q as u64, r as u64)?;
    let kappa = (ln_big(k.numer()) - ln_big(k.denom())).exp();
    let targets = binomial(n as u64, p as i64);
    Ok(kappa * (p as f64 + 1.0) * (n as f64).ln() * (1.0 + ln_big(&targets)))
}
