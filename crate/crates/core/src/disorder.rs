//! Step-down-runs disorder: the number of adjacent descents in a sequence.
//!
//! A sequence `X` with `n` distinct keys has `M(X) = |{ i : X[i] > X[i+1] }|`,
//! which ranges from 0 (ascending) to `n - 1` (descending). Everything here
//! works on plain slices so that the same routines measure whole sequences and
//! contiguous parts of them.

use std::collections::HashSet;
use std::ops::Range;

use crate::error::{Error, Result};

/// An owned sequence of mutually distinct integer keys.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KeySequence {
    keys: Vec<i64>,
}

impl KeySequence {
    /// Wraps `keys`, rejecting any repeated value.
    pub fn new(keys: Vec<i64>) -> Result<Self> {
        if let Some(key) = first_duplicate(&keys) {
            return Err(Error::DuplicateKey(key));
        }
        Ok(Self { keys })
    }

    /// Wraps `keys` without the distinctness check. The caller vouches for it
    /// (e.g. the keys came from a permutation generator).
    pub fn from_distinct_unchecked(keys: Vec<i64>) -> Self {
        Self { keys }
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.keys
    }

    /// Mutable access to the keys. Only reordering keeps the distinctness
    /// invariant; overwriting values is the caller's responsibility.
    pub fn as_mut_slice(&mut self) -> &mut [i64] {
        &mut self.keys
    }

    pub fn into_vec(self) -> Vec<i64> {
        self.keys
    }

    pub fn step_down_runs(&self) -> usize {
        step_down_runs(&self.keys)
    }

    pub fn swap(&mut self, i: usize, j: usize) {
        self.keys.swap(i, j);
    }
}

impl AsRef<[i64]> for KeySequence {
    fn as_ref(&self) -> &[i64] {
        &self.keys
    }
}

impl TryFrom<Vec<i64>> for KeySequence {
    type Error = Error;

    fn try_from(keys: Vec<i64>) -> Result<Self> {
        Self::new(keys)
    }
}

/// Returns the first key (in sequence order) that occurs earlier as well.
pub fn first_duplicate(keys: &[i64]) -> Option<i64> {
    let mut seen = HashSet::with_capacity(keys.len());
    keys.iter().copied().find(|k| !seen.insert(*k))
}

/// Counts adjacent descents `keys[i] > keys[i + 1]`.
pub fn step_down_runs(keys: &[i64]) -> usize {
    keys.windows(2).filter(|w| w[0] > w[1]).count()
}

#[inline]
fn descent_at(keys: &[i64], left: usize) -> i64 {
    (keys[left] > keys[left + 1]) as i64
}

/// Change in [`step_down_runs`] that swapping positions `i` and `j` would
/// cause, without touching `keys`.
///
/// Only the adjacencies `(i-1, i)`, `(i, i+1)`, `(j-1, j)` and `(j, j+1)` can
/// change, so the result lies in `[-4, 4]` (`[-3, 3]` when `j = i + 1`).
pub fn swap_disorder_delta(keys: &[i64], i: usize, j: usize) -> Result<i64> {
    let n = keys.len();
    if !(i < j && j < n) {
        return Err(Error::SwapIndex { i, j, len: n });
    }
    Ok(swap_delta_unchecked(keys, i, j))
}

/// [`swap_disorder_delta`] for callers that already guarantee `i < j < len`.
pub(crate) fn swap_delta_unchecked(keys: &[i64], i: usize, j: usize) -> i64 {
    debug_assert!(i < j && j < keys.len());
    let n = keys.len();
    // Left endpoints of the affected adjacencies, deduplicated when j == i + 1.
    let mut lefts = [usize::MAX; 4];
    let mut count = 0;
    for left in [i.wrapping_sub(1), i, j - 1, j] {
        if left < n - 1 && !lefts[..count].contains(&left) {
            lefts[count] = left;
            count += 1;
        }
    }
    let value_at = |p: usize| {
        if p == i {
            keys[j]
        } else if p == j {
            keys[i]
        } else {
            keys[p]
        }
    };
    lefts[..count]
        .iter()
        .map(|&left| {
            let after = (value_at(left) > value_at(left + 1)) as i64;
            after - descent_at(keys, left)
        })
        .sum()
}

/// Contiguous, balanced split of `0..n` into parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionView {
    bounds: Vec<Range<usize>>,
    len: usize,
}

impl PartitionView {
    pub fn part_count(&self) -> usize {
        self.bounds.len()
    }

    pub fn parts(&self) -> &[Range<usize>] {
        &self.bounds
    }

    /// Length of the sequence the partition covers.
    pub fn covered_len(&self) -> usize {
        self.len
    }

    pub fn iter(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        self.bounds.iter().cloned()
    }
}

/// Splits `0..n` into `k` contiguous parts whose lengths differ by at most one.
/// The first `n mod k` parts get the extra element. When `k > n` the result has
/// exactly `n` singleton parts.
pub fn partition_bounds(n: usize, k: usize) -> Result<PartitionView> {
    if k == 0 {
        return Err(Error::ZeroParts);
    }
    let k = k.min(n);
    let mut bounds = Vec::with_capacity(k);
    if let Some(base) = n.checked_div(k) {
        let extra = n % k;
        let mut start = 0;
        for p in 0..k {
            let end = start + base + usize::from(p < extra);
            bounds.push(start..end);
            start = end;
        }
    }
    Ok(PartitionView { bounds, len: n })
}

/// Whole-sequence disorder, optionally broken down by part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisorderReport {
    pub total: usize,
    pub per_part: Option<Vec<usize>>,
}

impl DisorderReport {
    pub fn unpartitioned(keys: &[i64]) -> Self {
        Self {
            total: step_down_runs(keys),
            per_part: None,
        }
    }

    /// Descents that straddle a part boundary and are not in any part's count.
    pub fn boundary_descents(&self) -> usize {
        let parts: usize = self.per_part.iter().flatten().sum();
        self.total - parts
    }
}

/// Measures each part of `parts` separately along with the whole sequence.
pub fn part_disorders(keys: &[i64], parts: &PartitionView) -> Result<DisorderReport> {
    if parts.covered_len() != keys.len() {
        return Err(Error::PartitionMismatch {
            expected: parts.covered_len(),
            actual: keys.len(),
        });
    }
    let per_part = parts.iter().map(|r| step_down_runs(&keys[r])).collect();
    Ok(DisorderReport {
        total: step_down_runs(keys),
        per_part: Some(per_part),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_delta(keys: &[i64], i: usize, j: usize) -> i64 {
        let mut after = keys.to_vec();
        after.swap(i, j);
        step_down_runs(&after) as i64 - step_down_runs(keys) as i64
    }

    #[test]
    fn step_down_runs_examples() {
        assert_eq!(step_down_runs(&[1, 2, 3, 4]), 0);
        assert_eq!(step_down_runs(&[4, 3, 2, 1]), 3);
        assert_eq!(step_down_runs(&[5, 1, 4, 2, 3]), 2);
        assert_eq!(step_down_runs(&[]), 0);
        assert_eq!(step_down_runs(&[7]), 0);
    }

    #[test]
    fn swap_delta_examples() {
        assert_eq!(swap_disorder_delta(&[1, 2, 3], 0, 2).unwrap(), 2);
        assert_eq!(swap_disorder_delta(&[2, 1], 0, 1).unwrap(), -1);
        assert_eq!(swap_disorder_delta(&[1, 3, 2, 4], 1, 2).unwrap(), -1);
    }

    #[test]
    fn swap_delta_rejects_bad_indices() {
        assert!(swap_disorder_delta(&[1, 2, 3], 2, 1).is_err());
        assert!(swap_disorder_delta(&[1, 2, 3], 1, 1).is_err());
        assert!(swap_disorder_delta(&[1, 2, 3], 0, 3).is_err());
        assert!(swap_disorder_delta(&[], 0, 1).is_err());
    }

    #[test]
    fn partition_examples() {
        assert_eq!(partition_bounds(10, 2).unwrap().parts(), &[0..5, 5..10]);
        let p = partition_bounds(5000, 16).unwrap();
        assert_eq!(p.part_count(), 16);
        let lens: Vec<usize> = p.iter().map(|r| r.len()).collect();
        assert_eq!(lens.iter().filter(|&&l| l == 313).count(), 8);
        assert_eq!(lens.iter().filter(|&&l| l == 312).count(), 8);
        assert_eq!(partition_bounds(3, 5).unwrap().parts(), &[0..1, 1..2, 2..3]);
        assert!(matches!(partition_bounds(3, 0), Err(Error::ZeroParts)));
        assert_eq!(partition_bounds(0, 4).unwrap().part_count(), 0);
    }

    #[test]
    fn part_disorder_examples() {
        let two = |keys: &[i64]| part_disorders(keys, &partition_bounds(keys.len(), 2).unwrap()).unwrap();
        let r = two(&[1, 2, 4, 3]);
        assert_eq!((r.per_part.unwrap(), r.total), (vec![0, 1], 1));
        let r = two(&[3, 1, 4, 2]);
        assert_eq!((r.per_part.unwrap(), r.total), (vec![1, 1], 2));
        let r = two(&[1, 3, 2, 4]);
        assert_eq!(r.boundary_descents(), 1);
        assert_eq!((r.per_part.unwrap(), r.total), (vec![0, 0], 1));
    }

    #[test]
    fn part_disorders_rejects_mismatch() {
        let p = partition_bounds(5, 2).unwrap();
        assert!(matches!(
            part_disorders(&[1, 2, 3], &p),
            Err(Error::PartitionMismatch { expected: 5, actual: 3 })
        ));
    }

    #[test]
    fn duplicates_rejected() {
        assert!(matches!(KeySequence::new(vec![3, 1, 3]), Err(Error::DuplicateKey(3))));
        assert_eq!(KeySequence::new(vec![3, 1, 2]).unwrap().step_down_runs(), 1);
    }

    fn distinct_keys(max_len: usize) -> impl Strategy<Value = Vec<i64>> {
        proptest::collection::hash_set(-1000i64..1000, 0..max_len)
            .prop_map(|s| s.into_iter().collect::<Vec<_>>())
            .prop_shuffle()
    }

    proptest! {
        #[test]
        fn disorder_in_range(keys in distinct_keys(60)) {
            let m = step_down_runs(&keys);
            prop_assert!(m <= keys.len().saturating_sub(1));
        }

        #[test]
        fn reversal_duality(keys in distinct_keys(60)) {
            prop_assume!(!keys.is_empty());
            let mut rev = keys.clone();
            rev.reverse();
            prop_assert_eq!(step_down_runs(&keys) + step_down_runs(&rev), keys.len() - 1);
        }

        #[test]
        fn swap_delta_matches_recount(keys in distinct_keys(40), a in any::<usize>(), b in any::<usize>()) {
            prop_assume!(keys.len() >= 2);
            let (mut i, mut j) = (a % keys.len(), b % keys.len());
            prop_assume!(i != j);
            if i > j { std::mem::swap(&mut i, &mut j); }
            let delta = swap_disorder_delta(&keys, i, j).unwrap();
            prop_assert_eq!(delta, brute_delta(&keys, i, j));
            let limit = if j == i + 1 { 3 } else { 4 };
            prop_assert!(delta.abs() <= limit);
        }

        #[test]
        fn partition_covers_and_bounds_sum(keys in distinct_keys(80), k in 1usize..20) {
            let parts = partition_bounds(keys.len(), k).unwrap();
            let mut next = 0;
            for r in parts.iter() {
                prop_assert_eq!(r.start, next);
                prop_assert!(!r.is_empty());
                next = r.end;
            }
            prop_assert_eq!(next, keys.len());
            let lens: Vec<usize> = parts.iter().map(|r| r.len()).collect();
            if let (Some(lo), Some(hi)) = (lens.iter().min(), lens.iter().max()) {
                prop_assert!(hi - lo <= 1);
            }
            let report = part_disorders(&keys, &parts).unwrap();
            let sum: usize = report.per_part.as_ref().unwrap().iter().sum();
            prop_assert!(sum <= report.total);
            prop_assert!(report.total <= sum + parts.part_count().saturating_sub(1));
        }
    }
}
