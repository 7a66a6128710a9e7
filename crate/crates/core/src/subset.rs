//! Subsets of a universe `{0, .., n-1}`.

use std::cmp::Ordering;
use std::fmt;

use fixedbitset::FixedBitSet;
use rand::seq::index;
use rand::Rng;

/// A subset of `{0, .., n-1}`.
///
/// Ordering is by the sorted element sequence (lexicographic), so `{0, 2}`
/// sorts before `{1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    bits: FixedBitSet,
}

impl Subset {
    pub fn empty(n: usize) -> Self {
        Self {
            bits: FixedBitSet::with_capacity(n),
        }
    }

    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        Self { bits }
    }

    /// Panics if an element is `>= n`.
    pub fn from_elements<I: IntoIterator<Item = usize>>(n: usize, elements: I) -> Self {
        let mut s = Self::empty(n);
        for e in elements {
            s.insert(e);
        }
        s
    }

    /// Builds a subset from the low `n` bits of `mask`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        Self::from_elements(n, (0..n).filter(|&i| mask >> i & 1 == 1))
    }

    pub fn universe_size(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.bits.contains(e)
    }

    pub fn insert(&mut self, e: usize) {
        assert!(
            e < self.bits.len(),
            "element {e} outside universe of size {}",
            self.bits.len()
        );
        self.bits.insert(e);
    }

    pub fn remove(&mut self, e: usize) {
        self.bits.set(e, false);
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn elements(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn union_with(&mut self, other: &Subset) {
        self.bits.union_with(&other.bits);
    }

    pub fn union(&self, other: &Subset) -> Subset {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn is_subset(&self, other: &Subset) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn intersection_len(&self, other: &Subset) -> usize {
        self.bits.intersection_count(&other.bits)
    }

    /// Draws a uniformly random `t`-subset of `{0, .., n-1}`.
    pub fn random<R: Rng + ?Sized>(n: usize, t: usize, rng: &mut R) -> Self {
        assert!(t <= n, "cannot sample {t} elements out of {n}");
        Self::from_elements(n, index::sample(rng, n, t))
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Lexicographic iterator over the `k`-subsets of `{0, .., n-1}`, as sorted
/// element vectors.
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        let current = if k <= n { Some((0..k).collect()) } else { None };
        Self { n, current }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let k = out.len();
        let mut next = out.clone();
        // rightmost position that can still move up
        let mut i = k;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                return Some(out);
            }
        }
        Some(out)
    }
}

/// All `k`-subsets of `{0, .., n-1}` as bitmasks, in lexicographic order of
/// their element lists. Requires `n <= 64`.
pub fn combination_masks(n: usize, k: usize) -> Vec<u64> {
    assert!(n <= 64, "bitmask enumeration supports n <= 64");
    Combinations::new(n, k)
        .map(|c| c.iter().fold(0u64, |m, &e| m | 1 << e))
        .collect()
}
