//! Permutations in one-line notation: construction, text format, occurrence
//! counting, avoidance, the symmetry group of order 8, and block
//! (de)composition under the direct sum.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Errors from permutation construction and parsing.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("permutation must be nonempty")]
    Empty,
    #[error("value {0} out of range 1..={1}")]
    OutOfRange(u32, usize),
    #[error("duplicate value {0}")]
    Duplicate(u32),
    #[error("cannot parse {0:?} as a permutation")]
    Parse(String),
}

/// A permutation of `{1, …, n}` in one-line notation.
///
/// Patterns are permutations in the role of the searched-for shape; the
/// alias [`Pattern`] marks that role in signatures.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    values: Vec<u32>,
}

/// A pattern is a permutation used as the shape to count or avoid.
pub type Pattern = Perm;

impl Perm {
    /// Validates and wraps one-line notation values.
    pub fn new(values: Vec<u32>) -> Result<Self, PermError> {
        if values.is_empty() {
            return Err(PermError::Empty);
        }
        let n = values.len();
        let mut seen = vec![false; n];
        for &v in &values {
            if v < 1 || v as usize > n {
                return Err(PermError::OutOfRange(v, n));
            }
            if seen[v as usize - 1] {
                return Err(PermError::Duplicate(v));
            }
            seen[v as usize - 1] = true;
        }
        Ok(Perm { values })
    }

    /// Validates a slice of values.
    pub fn from_slice(values: &[u32]) -> Result<Self, PermError> {
        Perm::new(values.to_vec())
    }

    pub(crate) fn from_vec_unchecked(values: Vec<u32>) -> Self {
        debug_assert!(Perm::new(values.clone()).is_ok());
        Perm { values }
    }

    /// The increasing permutation `1 2 … n`.
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "permutation length must be at least 1");
        Perm {
            values: (1..=n as u32).collect(),
        }
    }

    /// The decreasing permutation `n … 2 1`.
    pub fn decreasing(n: usize) -> Self {
        assert!(n >= 1, "permutation length must be at least 1");
        Perm {
            values: (1..=n as u32).rev().collect(),
        }
    }

    /// The pattern of a sequence of distinct values: each value replaced by
    /// its rank (1 = smallest).
    pub fn pattern_of(values: &[u32]) -> Self {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by_key(|&i| values[i]);
        let mut out = vec![0u32; values.len()];
        for (rank, &i) in order.iter().enumerate() {
            out[i] = rank as u32 + 1;
        }
        Perm::from_vec_unchecked(out)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn is_identity(&self) -> bool {
        self.values.iter().enumerate().all(|(i, &v)| v == i as u32 + 1)
    }

    pub fn is_decreasing(&self) -> bool {
        let n = self.len() as u32;
        self.values.iter().enumerate().all(|(i, &v)| v == n - i as u32)
    }

    /// The functional inverse: position of each value.
    pub fn inverse(&self) -> Perm {
        let mut out = vec![0u32; self.len()];
        for (i, &v) in self.values.iter().enumerate() {
            out[v as usize - 1] = i as u32 + 1;
        }
        Perm::from_vec_unchecked(out)
    }

    /// The reversal `pi_n … pi_1`.
    pub fn reverse(&self) -> Perm {
        let mut out = self.values.clone();
        out.reverse();
        Perm::from_vec_unchecked(out)
    }

    /// The complement `n+1-pi_1, …, n+1-pi_n`.
    pub fn complement(&self) -> Perm {
        let n = self.len() as u32;
        Perm::from_vec_unchecked(self.values.iter().map(|&v| n + 1 - v).collect())
    }

    /// Number of inversions, i.e. pairs `i < j` with `pi_i > pi_j`.
    pub fn inversions(&self) -> u64 {
        let n = self.len();
        let mut tree = vec![0u64; n + 1];
        let mut total = 0u64;
        for (i, &v) in self.values.iter().enumerate() {
            let mut k = v as usize;
            let mut smaller_or_equal = 0u64;
            while k > 0 {
                smaller_or_equal += tree[k];
                k -= k & k.wrapping_neg();
            }
            total += i as u64 - smaller_or_equal;
            let mut k = v as usize;
            while k <= n {
                tree[k] += 1;
                k += k & k.wrapping_neg();
            }
        }
        total
    }

    /// Number of descents, with the final position always counted.
    ///
    /// This is the convention `D(sigma) >= 1` used by the scaling exponent of
    /// the 132-avoiding class.
    pub fn descents_with_final(&self) -> usize {
        let interior = self
            .values
            .windows(2)
            .filter(|w| w[0] > w[1])
            .count();
        interior + 1
    }

    /// Direct sum: `self` followed by `other` shifted up by `|self|`.
    pub fn compose(&self, other: &Perm) -> Perm {
        let shift = self.len() as u32;
        let mut out = self.values.clone();
        out.extend(other.values.iter().map(|&v| v + shift));
        Perm::from_vec_unchecked(out)
    }

    /// Direct sum of a nonempty sequence of permutations.
    pub fn direct_sum(parts: &[Perm]) -> Perm {
        assert!(!parts.is_empty(), "direct sum of no permutations");
        let mut iter = parts.iter();
        let mut acc = iter.next().unwrap().clone();
        for p in iter {
            acc = acc.compose(p);
        }
        acc
    }

    /// The finest decomposition into indecomposable blocks whose direct sum
    /// reproduces `self`.
    pub fn blocks(&self) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut start = 0usize;
        let mut max = 0u32;
        for (i, &v) in self.values.iter().enumerate() {
            max = max.max(v);
            if max as usize == i + 1 {
                let shift = start as u32;
                let block: Vec<u32> =
                    self.values[start..=i].iter().map(|&v| v - shift).collect();
                out.push(Perm::from_vec_unchecked(block));
                start = i + 1;
            }
        }
        out
    }

    /// Lengths of the blocks of the finest decomposition.
    pub fn block_lengths(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut start = 0usize;
        let mut max = 0u32;
        for (i, &v) in self.values.iter().enumerate() {
            max = max.max(v);
            if max as usize == i + 1 {
                out.push(i + 1 - start);
                start = i + 1;
            }
        }
        out
    }

    /// Compact digit form like `"231"`, available for `n <= 9`.
    pub fn compact(&self) -> Option<String> {
        if self.len() > 9 {
            return None;
        }
        Some(
            self.values
                .iter()
                .map(|v| char::from_digit(*v, 10).unwrap())
                .collect(),
        )
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.compact() {
            Some(s) => write!(f, "Perm({s})"),
            None => write!(f, "Perm({self})"),
        }
    }
}

impl FromStr for Perm {
    type Err = PermError;

    /// Parses space- or comma-separated one-line notation like `"2 3 1"`;
    /// a compact digit form like `"231"` is accepted for `n <= 9`.
    fn from_str(s: &str) -> Result<Self, PermError> {
        let t = s.trim();
        if t.is_empty() {
            return Err(PermError::Empty);
        }
        if t.contains(|c: char| c.is_whitespace() || c == ',') {
            let values = t
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|p| !p.is_empty())
                .map(|p| p.parse::<u32>().map_err(|_| PermError::Parse(s.to_owned())))
                .collect::<Result<Vec<u32>, PermError>>()?;
            Perm::new(values)
        } else if t.chars().all(|c| c.is_ascii_digit()) && t.len() <= 9 {
            let values = t
                .chars()
                .map(|c| c.to_digit(10).unwrap())
                .collect::<Vec<u32>>();
            Perm::new(values)
        } else if t.chars().all(|c| c.is_ascii_digit()) {
            // A run of more than 9 digits is a single (invalid) number, not a
            // compact form.
            Err(PermError::Parse(s.to_owned()))
        } else {
            Err(PermError::Parse(s.to_owned()))
        }
    }
}

impl Serialize for Perm {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An element of the order-8 group generated by inverse, reversal, and
/// complement, acting as inverse first, then reversal, then complement.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Symmetry {
    pub inverse: bool,
    pub reverse: bool,
    pub complement: bool,
}

impl Symmetry {
    pub const IDENTITY: Symmetry = Symmetry {
        inverse: false,
        reverse: false,
        complement: false,
    };

    /// All 8 group elements, identity first.
    pub fn all() -> [Symmetry; 8] {
        let mut out = [Symmetry::IDENTITY; 8];
        for (idx, slot) in out.iter_mut().enumerate() {
            *slot = Symmetry {
                inverse: idx & 1 != 0,
                reverse: idx & 2 != 0,
                complement: idx & 4 != 0,
            };
        }
        out
    }

    /// Applies the symmetry: inverse, then reversal, then complement.
    pub fn apply(&self, p: &Perm) -> Perm {
        let mut q = p.clone();
        if self.inverse {
            q = q.inverse();
        }
        if self.reverse {
            q = q.reverse();
        }
        if self.complement {
            q = q.complement();
        }
        q
    }

    /// Applies the group inverse of this symmetry.
    ///
    /// Each generator is an involution, so undoing means applying the same
    /// steps in the opposite order.
    pub fn apply_inverse(&self, p: &Perm) -> Perm {
        let mut q = p.clone();
        if self.complement {
            q = q.complement();
        }
        if self.reverse {
            q = q.reverse();
        }
        if self.inverse {
            q = q.inverse();
        }
        q
    }

    pub fn is_identity(&self) -> bool {
        !(self.inverse || self.reverse || self.complement)
    }

    /// A label like `"identity"` or `"inverse+reverse"`.
    pub fn label(&self) -> String {
        if self.is_identity() {
            return "identity".to_owned();
        }
        let mut parts = Vec::new();
        if self.inverse {
            parts.push("inverse");
        }
        if self.reverse {
            parts.push("reverse");
        }
        if self.complement {
            parts.push("complement");
        }
        parts.join("+")
    }
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for Symmetry {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, PermError> {
        if s == "identity" {
            return Ok(Symmetry::IDENTITY);
        }
        let mut sym = Symmetry::IDENTITY;
        for part in s.split('+') {
            match part {
                "inverse" => sym.inverse = true,
                "reverse" => sym.reverse = true,
                "complement" => sym.complement = true,
                _ => return Err(PermError::Parse(s.to_owned())),
            }
        }
        Ok(sym)
    }
}

impl Serialize for Symmetry {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(&self.label())
    }
}

impl<'de> Deserialize<'de> for Symmetry {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// For each pattern index `j`, the index of the closest smaller value and of
/// the closest larger value among earlier pattern entries.
fn embedding_bounds(sigma: &[u32]) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
    let m = sigma.len();
    let mut below = vec![None; m];
    let mut above = vec![None; m];
    for j in 0..m {
        for i in 0..j {
            if sigma[i] < sigma[j] {
                if below[j].map_or(true, |b: usize| sigma[i] > sigma[b]) {
                    below[j] = Some(i);
                }
            } else if above[j].map_or(true, |a: usize| sigma[i] < sigma[a]) {
                above[j] = Some(i);
            }
        }
    }
    (below, above)
}

struct EmbedSearch<'a> {
    pi: &'a [u32],
    below: &'a [Option<usize>],
    above: &'a [Option<usize>],
    chosen: Vec<usize>,
}

impl EmbedSearch<'_> {
    /// Counts completions from level `j`; `None` signals u128 overflow.
    fn count(&mut self, j: usize, m: usize) -> Option<u128> {
        if j == m {
            return Some(1);
        }
        let start = if j == 0 { 0 } else { self.chosen[j - 1] + 1 };
        let mut total: u128 = 0;
        for q in start..=self.pi.len() - (m - j) {
            let v = self.pi[q];
            if let Some(b) = self.below[j] {
                if v <= self.pi[self.chosen[b]] {
                    continue;
                }
            }
            if let Some(a) = self.above[j] {
                if v >= self.pi[self.chosen[a]] {
                    continue;
                }
            }
            self.chosen.push(q);
            let sub = self.count(j + 1, m)?;
            self.chosen.pop();
            total = total.checked_add(sub)?;
        }
        Some(total)
    }

    fn exists(&mut self, j: usize, m: usize) -> bool {
        if j == m {
            return true;
        }
        let start = if j == 0 { 0 } else { self.chosen[j - 1] + 1 };
        for q in start..=self.pi.len() - (m - j) {
            let v = self.pi[q];
            if let Some(b) = self.below[j] {
                if v <= self.pi[self.chosen[b]] {
                    continue;
                }
            }
            if let Some(a) = self.above[j] {
                if v >= self.pi[self.chosen[a]] {
                    continue;
                }
            }
            self.chosen.push(q);
            if self.exists(j + 1, m) {
                return true;
            }
            self.chosen.pop();
        }
        false
    }
}

/// Counts occurrences of `sigma` in `pi`: index tuples `i_1 < … < i_m` whose
/// values are order-isomorphic to `sigma`. Returns 0 when `|sigma| > |pi|`.
pub fn occurrences(sigma: &Pattern, pi: &Perm) -> BigUint {
    match occurrences_u128(sigma, pi) {
        Some(c) => BigUint::from(c),
        None => occurrences_big(sigma, pi),
    }
}

/// Occurrence count within u128 range, or `None` on overflow.
pub fn occurrences_u128(sigma: &Pattern, pi: &Perm) -> Option<u128> {
    let m = sigma.len();
    if m > pi.len() {
        return Some(0);
    }
    let (below, above) = embedding_bounds(sigma.values());
    let mut search = EmbedSearch {
        pi: pi.values(),
        below: &below,
        above: &above,
        chosen: Vec::with_capacity(m),
    };
    search.count(0, m)
}

fn occurrences_big(sigma: &Pattern, pi: &Perm) -> BigUint {
    // Fallback past u128: accumulate per-first-position subtotals.
    let m = sigma.len();
    let (below, above) = embedding_bounds(sigma.values());
    let mut total = BigUint::ZERO;
    for q in 0..=pi.len() - m {
        let mut search = EmbedSearch {
            pi: pi.values(),
            below: &below,
            above: &above,
            chosen: vec![q],
        };
        match search.count(1, m) {
            Some(c) => total += c,
            None => {
                // Split further by second position.
                for q2 in q + 1..=pi.len() - m + 1 {
                    let mut inner = EmbedSearch {
                        pi: pi.values(),
                        below: &below,
                        above: &above,
                        chosen: vec![q, q2],
                    };
                    total += inner
                        .count(2, m)
                        .expect("occurrence subtotal exceeds u128 twice over");
                }
            }
        }
    }
    total
}

/// Whether `pi` contains at least one occurrence of `sigma`.
pub fn contains(pi: &Perm, sigma: &Pattern) -> bool {
    let m = sigma.len();
    if m > pi.len() {
        return false;
    }
    let (below, above) = embedding_bounds(sigma.values());
    let mut search = EmbedSearch {
        pi: pi.values(),
        below: &below,
        above: &above,
        chosen: Vec::with_capacity(m),
    };
    search.exists(0, m)
}

/// Whether `pi` avoids every pattern in `forbidden`.
pub fn avoids(pi: &Perm, forbidden: &[Pattern]) -> bool {
    forbidden.iter().all(|t| !contains(pi, t))
}

/// Occurrence counts of every length-`m` pattern in `pi`, tallied in one
/// sweep over all `C(n, m)` windows.
pub fn pattern_counts(pi: &Perm, m: usize) -> HashMap<Perm, u64> {
    let n = pi.len();
    let mut out = HashMap::new();
    if m == 0 || m > n {
        return out;
    }
    let mut window = vec![0u32; m];
    let mut idx = vec![0usize; m];
    fn rec(
        pi: &[u32],
        m: usize,
        level: usize,
        idx: &mut [usize],
        window: &mut [u32],
        out: &mut HashMap<Perm, u64>,
    ) {
        if level == m {
            *out.entry(Perm::pattern_of(window)).or_insert(0) += 1;
            return;
        }
        let start = if level == 0 { 0 } else { idx[level - 1] + 1 };
        for q in start..=pi.len() - (m - level) {
            idx[level] = q;
            window[level] = pi[q];
            rec(pi, m, level + 1, idx, window, out);
        }
    }
    rec(pi.values(), m, 0, &mut idx, &mut window, &mut out);
    out
}
