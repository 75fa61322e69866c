//! Ordered multi-indices `I = (i_1 < ... < i_k)` over `1..=n` and the signs of
//! order-restoring merges.
//!
//! A [`MultiIndex`] is stored as a bit set (bit `i - 1` marks index `i`), so the
//! ambient dimension is limited to [`MAX_DIMENSION`]. Ordering is lexicographic
//! on the increasing tuple, which is the enumeration order used everywhere.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported ambient dimension.
pub const MAX_DIMENSION: usize = 64;

/// A strictly increasing tuple of indices in `1..=MAX_DIMENSION`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex(u64);

impl MultiIndex {
    /// The empty index of grade 0.
    pub const EMPTY: MultiIndex = MultiIndex(0);

    /// Builds a multi-index from a strictly increasing list of positive indices.
    pub fn new(indices: &[usize]) -> Result<Self> {
        let mut bits = 0u64;
        let mut last = 0usize;
        for &i in indices {
            if i == 0 || i > MAX_DIMENSION {
                return Err(Error::Validation(format!(
                    "index {i} outside 1..={MAX_DIMENSION} in {indices:?}"
                )));
            }
            if i <= last {
                return Err(Error::Validation(format!(
                    "multi-index {indices:?} is not strictly increasing"
                )));
            }
            last = i;
            bits |= 1 << (i - 1);
        }
        Ok(MultiIndex(bits))
    }

    pub fn single(i: usize) -> Self {
        assert!((1..=MAX_DIMENSION).contains(&i), "index {i} out of range");
        MultiIndex(1 << (i - 1))
    }

    /// The full index `(1, ..., n)`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_DIMENSION);
        if n == MAX_DIMENSION {
            MultiIndex(u64::MAX)
        } else {
            MultiIndex((1u64 << n) - 1)
        }
    }

    pub fn from_bits(bits: u64) -> Self {
        MultiIndex(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// Grade of the index.
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=MAX_DIMENSION).contains(&i) && self.0 & (1 << (i - 1)) != 0
    }

    /// Largest index, 0 for the empty index.
    pub fn max_index(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    /// True when every index is at most `n`.
    pub fn fits(self, n: usize) -> bool {
        self.max_index() <= n
    }

    pub fn is_disjoint(self, other: MultiIndex) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: MultiIndex) -> bool {
        self.0 & !other.0 == 0
    }

    /// Plain set union, with no sign bookkeeping.
    pub fn union(self, other: MultiIndex) -> MultiIndex {
        MultiIndex(self.0 | other.0)
    }

    /// Plain set difference.
    pub fn without(self, other: MultiIndex) -> MultiIndex {
        MultiIndex(self.0 & !other.0)
    }

    pub fn intersection(self, other: MultiIndex) -> MultiIndex {
        MultiIndex(self.0 & other.0)
    }

    /// Indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i + 1)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// The index at 1-based position `p`.
    pub fn at(self, p: usize) -> Option<usize> {
        if p == 0 {
            return None;
        }
        self.iter().nth(p - 1)
    }

    /// All sub-indices of the given grade, lexicographically.
    pub fn subsets(self, grade: usize) -> Vec<MultiIndex> {
        let elems = self.to_vec();
        combinations(elems.len(), grade)
            .into_iter()
            .map(|pos| MultiIndex(pos.iter().fold(0u64, |b, &p| b | 1 << (elems[p] - 1))))
            .collect()
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.0 == other.0 {
            return Ordering::Equal;
        }
        let diff = self.0 ^ other.0;
        let low = diff.trailing_zeros();
        // bits strictly above the first differing index
        let above = if low == 63 { 0 } else { u64::MAX << (low + 1) };
        if self.0 & (1 << low) != 0 {
            if other.0 & above != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        } else if self.0 & above != 0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (p, i) in self.iter().enumerate() {
            if p > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for MultiIndex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for MultiIndex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<usize>::deserialize(deserializer)?;
        MultiIndex::new(&raw).map_err(serde::de::Error::custom)
    }
}

/// Result of sorting a disjoint concatenation `I_1, ..., I_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignedMerge {
    pub merged: MultiIndex,
    /// Parity of the sorting permutation, `+1` or `-1`.
    pub sign: i32,
}

/// Position lists of all `k`-subsets of `0..len`, lexicographic.
fn combinations(len: usize, k: usize) -> Vec<Vec<usize>> {
    if k > len {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        out.push(current.clone());
        // rightmost position that can still advance
        let mut pos = k;
        while pos > 0 && current[pos - 1] == len - k + pos - 1 {
            pos -= 1;
        }
        if pos == 0 {
            return out;
        }
        current[pos - 1] += 1;
        for q in pos..k {
            current[q] = current[q - 1] + 1;
        }
    }
}

/// All of `T_k` in `1..=n`, lexicographically. Empty when `k > n`.
pub fn enumerate(n: usize, k: usize) -> Vec<MultiIndex> {
    assert!(n <= MAX_DIMENSION, "dimension {n} exceeds {MAX_DIMENSION}");
    MultiIndex::full(n).subsets(k)
}

/// The indices of `T_k` not containing `r`.
pub fn enumerate_excluding(n: usize, k: usize, r: usize) -> Vec<MultiIndex> {
    assert!(n <= MAX_DIMENSION, "dimension {n} exceeds {MAX_DIMENSION}");
    let pool = if (1..=n).contains(&r) {
        MultiIndex::full(n).without(MultiIndex::single(r))
    } else {
        MultiIndex::full(n)
    };
    pool.subsets(k)
}

/// Sign of the permutation sorting the concatenation `(a, b)`.
///
/// The inputs must be disjoint; overlapping inputs give a meaningless value.
pub fn sign(a: MultiIndex, b: MultiIndex) -> i32 {
    let mut inversions = 0u32;
    for j in b.iter() {
        // indices of `a` strictly greater than j sit at bit positions >= j
        let above = if j >= 64 { 0 } else { u64::MAX << j };
        inversions += (a.0 & above).count_ones();
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Sorted union of pairwise disjoint parts together with its sign.
pub fn merge_sign(parts: &[MultiIndex]) -> Result<SignedMerge> {
    let mut merged = MultiIndex::EMPTY;
    let mut sgn = 1;
    for &part in parts {
        if !merged.is_disjoint(part) {
            return Err(Error::Overlap(format!(
                "index {} repeated in {:?}",
                merged.intersection(part),
                parts
            )));
        }
        // inversions between part and everything before it
        sgn *= sign(merged, part);
        merged = merged.union(part);
    }
    Ok(SignedMerge { merged, sign: sgn })
}

/// `I(i_p)`: drop the entry at 1-based position `p`.
pub fn remove_at(index: MultiIndex, p: usize) -> Result<MultiIndex> {
    match index.at(p) {
        Some(i) => Ok(index.without(MultiIndex::single(i))),
        None => Err(Error::Position { position: p, len: index.len() }),
    }
}

/// Sorted complement of `index` in `(1, ..., n)`.
pub fn complement(index: MultiIndex, n: usize) -> MultiIndex {
    MultiIndex::full(n).without(index)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[usize]) -> MultiIndex {
        MultiIndex::new(v).unwrap()
    }

    /// Parity by explicit bubble sort of the concatenated tuple.
    fn bubble_parity(parts: &[MultiIndex]) -> i32 {
        let mut seq: Vec<usize> = parts.iter().flat_map(|p| p.iter()).collect();
        let mut swaps = 0;
        for i in 0..seq.len() {
            for j in 0..seq.len() - 1 - i {
                if seq[j] > seq[j + 1] {
                    seq.swap(j, j + 1);
                    swaps += 1;
                }
            }
        }
        if swaps % 2 == 0 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate(3, 2), vec![mi(&[1, 2]), mi(&[1, 3]), mi(&[2, 3])]);
        assert_eq!(enumerate(4, 0), vec![MultiIndex::EMPTY]);
        assert!(enumerate(2, 3).is_empty());
        for n in 1..=8 {
            for k in 0..=n + 1 {
                let all = enumerate(n, k);
                assert_eq!(all.len(), binomial(n, k));
                assert!(all.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn enumerate_excluding_examples() {
        assert_eq!(enumerate_excluding(3, 1, 1), vec![mi(&[2]), mi(&[3])]);
        assert_eq!(enumerate_excluding(4, 1, 1), vec![mi(&[2]), mi(&[3]), mi(&[4])]);
        assert!(enumerate_excluding(2, 2, 1).is_empty());
        assert_eq!(enumerate_excluding(6, 3, 2).len(), binomial(5, 3));
    }

    #[test]
    fn merge_sign_examples() {
        let m = merge_sign(&[mi(&[1, 2]), mi(&[3, 4])]).unwrap();
        assert_eq!((m.merged, m.sign), (mi(&[1, 2, 3, 4]), 1));
        let m = merge_sign(&[mi(&[2]), mi(&[1, 3])]).unwrap();
        assert_eq!(m.sign, bubble_parity(&[mi(&[2]), mi(&[1, 3])]));
        assert_eq!((m.merged, m.sign), (mi(&[1, 2, 3]), -1));
        assert!(matches!(merge_sign(&[mi(&[1, 2]), mi(&[2, 3])]), Err(Error::Overlap(_))));
    }

    #[test]
    fn remove_at_examples() {
        assert_eq!(remove_at(mi(&[1, 2, 3]), 2).unwrap(), mi(&[1, 3]));
        assert_eq!(remove_at(mi(&[5]), 1).unwrap(), MultiIndex::EMPTY);
        assert!(matches!(remove_at(mi(&[1, 2]), 3), Err(Error::Position { .. })));
        assert!(matches!(remove_at(mi(&[1, 2]), 0), Err(Error::Position { .. })));
        let rest = remove_at(mi(&[1, 2, 3]), 1).unwrap();
        assert_eq!(merge_sign(&[rest, mi(&[1])]).unwrap().sign, 1);
    }

    #[test]
    fn complement_examples() {
        assert_eq!(complement(mi(&[1, 2]), 4), mi(&[3, 4]));
        assert_eq!(complement(MultiIndex::EMPTY, 2), mi(&[1, 2]));
        assert_eq!(complement(mi(&[1, 2, 3]), 3), MultiIndex::EMPTY);
    }

    #[test]
    fn ordering_is_lexicographic_on_tuples() {
        let all: Vec<MultiIndex> = (0..=5).flat_map(|k| enumerate(5, k)).collect();
        for &a in &all {
            for &b in &all {
                assert_eq!(a.cmp(&b), a.to_vec().cmp(&b.to_vec()), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn merge_sign_matches_bubble_oracle_exhaustively() {
        // every ordered pair and triple of disjoint indices for n <= 5, pairs for n <= 7
        for n in 1..=7usize {
            let all: Vec<MultiIndex> = (0..=n).flat_map(|k| enumerate(n, k)).collect();
            for &a in &all {
                for &b in all.iter().filter(|b| b.is_disjoint(a)) {
                    let m = merge_sign(&[a, b]).unwrap();
                    assert_eq!(m.sign, bubble_parity(&[a, b]));
                    if n <= 5 {
                        for &c in all.iter().filter(|c| c.is_disjoint(a.union(b))) {
                            let m = merge_sign(&[a, b, c]).unwrap();
                            assert_eq!(m.sign, bubble_parity(&[a, b, c]));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn json_form_is_plain_array() {
        assert_eq!(serde_json::to_string(&mi(&[1, 2, 3])).unwrap(), "[1,2,3]");
        assert_eq!(serde_json::to_string(&MultiIndex::EMPTY).unwrap(), "[]");
        let back: MultiIndex = serde_json::from_str("[2,5]").unwrap();
        assert_eq!(back, mi(&[2, 5]));
        assert!(serde_json::from_str::<MultiIndex>("[2,1]").is_err());
    }
}
